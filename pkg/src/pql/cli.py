"""``pql`` command line: single checks, suites, calibration.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .checks import CATALOGUE, CheckRequest, exit_code, run_check, run_suite
from .geometry.calibration import DEFAULT_PATH, CalibrationMissing, calibrate, load_calibration, write_calibration


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pql", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="run one named check")
    check.add_argument("check_id", help="one of: " + ", ".join(sorted(CATALOGUE)))
    check.add_argument("--n", type=int)
    check.add_argument("--genus", type=int, dest="g")
    check.add_argument("--spec")
    check.add_argument("--witness", choices=["qn", "h1"])
    check.add_argument("--samples", type=int)
    check.add_argument("--trials", type=int)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--calibration", default=str(DEFAULT_PATH))
    check.add_argument("--out")
    check.add_argument("--timings", action="store_true", help="record duration_ms in the JSON report")

    suite = sub.add_parser("suite", help="run a suite of checks")
    suite.add_argument("name", choices=["algebra", "geometry", "all"])
    suite.add_argument("--seed", type=int, default=0)
    suite.add_argument("--report-dir")
    suite.add_argument("--calibration", default=str(DEFAULT_PATH))
    suite.add_argument("--timings", action="store_true")
    suite.add_argument("--inject-fault", choices=["twist"], help=argparse.SUPPRESS)

    cal = sub.add_parser("calibrate", help="estimate delta-hat and write the calibration file")
    cal.add_argument("--samples", type=int, default=1_000_000)
    cal.add_argument("--seed", type=int, default=0)
    cal.add_argument("--out", default=str(DEFAULT_PATH))
    return parser


def _cmd_check(args) -> int:
    params = {k: v for k, v in {"n": args.n, "g": args.g, "spec": args.spec, "witness": args.witness,
                                "samples": args.samples, "trials": args.trials}.items() if v is not None}
    params["seed"] = args.seed
    calibration = None
    cdef = CATALOGUE.get(args.check_id)
    if cdef is not None and cdef.needs_calibration:
        try:
            calibration = load_calibration(None if args.calibration == "packaged" else args.calibration)
        except CalibrationMissing as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    report = run_check(CheckRequest(args.check_id, params, args.out), calibration, args.timings)
    sys.stdout.write(report.to_json(args.timings))
    if report.message:
        print(f"error: {report.message}", file=sys.stderr)
    return exit_code([report])


def _cmd_suite(args) -> int:
    reports, code = run_suite(args.name, seed=args.seed, report_dir=args.report_dir,
                              calibration_path=args.calibration, fault=args.inject_fault,
                              include_timing=args.timings, log=print)
    if code == 2 and reports and reports[0].message:
        print(f"error: {reports[0].message}", file=sys.stderr)
    failed = [r for r in reports if r.status != "pass"]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    for r in failed:
        if r.counterexample is not None:
            print(f"counterexample for {r.check_id}: {r.to_dict()['counterexample']}")
    return code


def _cmd_calibrate(args) -> int:
    if args.samples < 1:
        print("error: --samples must be positive", file=sys.stderr)
        return 2
    data = calibrate(args.samples, args.seed)
    path = write_calibration(data, args.out)
    print(f"delta_hat = {data['delta_hat']:.12f} ({args.samples} samples) -> {path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": _cmd_check, "suite": _cmd_suite, "calibrate": _cmd_calibrate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
