"""Catalogue of named checks and the suite runner behind the CLI."""
from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import cyclo, surface, twists
from . import words as W
from .geometry import cone as C
from .geometry import hyperbolic as H
from .geometry.calibration import CalibrationMissing, load_calibration
from .geometry.energy import EnergyConfig, energy, restricted_energy
from .geometry.fuchsian import genus2_fuchsian, genus2_generators, relator_error
from .qn import qn_commutator, qn_generators, verify_metabelian_periodic
from .report import CheckReport


class UsageError(ValueError):
    """Bad check id or parameters; maps to exit code 2."""


@dataclass
class CheckRequest:
    check_id: str
    params: dict = field(default_factory=dict)
    output_path: str | None = None


@dataclass(frozen=True)
class CheckDef:
    func: Callable
    defaults: dict
    needs_calibration: bool = False
    description: str = ""


CATALOGUE: dict[str, CheckDef] = {}


def register(check_id: str, defaults: dict | None = None, needs_calibration: bool = False):
    def deco(func):
        CATALOGUE[check_id] = CheckDef(func, dict(defaults or {}), needs_calibration,
                                       (func.__doc__ or "").strip().splitlines()[0] if func.__doc__ else "")
        return func
    return deco


def derive_rng(seed: int, check_id: str, params: dict) -> np.random.Generator:
    """Independent stream per (seed, check_id, params)."""
    blob = json.dumps({"id": check_id, "params": params}, sort_keys=True, default=str)
    digest = int.from_bytes(hashlib.sha256(blob.encode()).digest()[:8], "big")
    return np.random.default_rng([seed, digest])


def _int(params: dict, key: str, minimum: int | None = None) -> int:
    try:
        value = int(params[key])
    except (KeyError, TypeError, ValueError):
        raise UsageError(f"parameter {key!r} must be an integer") from None
    if minimum is not None and value < minimum:
        raise UsageError(f"parameter {key!r} must be >= {minimum}, got {value}")
    return value


def _needs_qn(n: int) -> None:
    if n <= 2:
        raise UsageError(f"Q_n checks need n > 2, got n={n}")


# --- algebra -------------------------------------------------------------------------

@register("cyclotomic", {"n_max": 200, "chi_max": 32, "xi_max": 64})
def check_cyclotomic(report: CheckReport, params: dict, rng, calib):
    """Divisor-product identity, chi vanishing, order of xi."""
    n_max = _int(params, "n_max", 1)
    bad = []
    for n in range(1, n_max + 1):
        prod: tuple[int, ...] = (1,)
        for d in cyclo.divisors(n):
            prod = cyclo.poly_mul(prod, cyclo.cyclotomic_polynomial(d))
        if prod != (-1,) + (0,) * (n - 1) + (1,):
            bad.append(n)
    report.add(f"prod_(d|n) Phi_d = X^n - 1 for n <= {n_max}", [], bad, witness={"n": bad[:1]})
    chi_max = _int(params, "chi_max", 2)
    bad = [(n, k) for n in range(2, chi_max + 1) for k in range(n)
           if not cyclo.chi_value(cyclo.ring_context(n), k).is_zero()]
    report.add(f"chi_n(xi^k) = 0 for 2 <= n <= {chi_max}", [], bad)
    xi_max = _int(params, "xi_max", 2)
    bad = [n for n in range(3, xi_max + 1) if cyclo.xi_order(cyclo.ring_context(n)) != n]
    report.add(f"ord(xi) = n for 3 <= n <= {xi_max}", [], bad)
    report.add("ord(xi) = 1 for n = 2", 1, cyclo.xi_order(cyclo.ring_context(2)))


@register("metabelian", {"n": 7, "trials": 1000})
def check_metabelian(report: CheckReport, params: dict, rng, calib):
    """Q_n is metabelian, n-periodic, and A, [A,B] have order n."""
    n = _int(params, "n")
    _needs_qn(n)
    trials = _int(params, "trials", 1)
    sub = verify_metabelian_periodic(n, trials, report.seed, rng=rng)
    report.items.extend(sub.items)
    report.status, report.counterexample = sub.status, sub.counterexample
    A, B = qn_generators(n)
    comm = qn_commutator(A, B).to_json()
    expected = {"k": 0, "z": [n - 1, 1] + [0] * (A.context.degree - 2), "n": n}
    report.add("[A,B] = (0, xi - 1)", expected, comm)


@register("scc-order", {"g": 2, "n": 5, "spec": "nonsep"})
def check_scc_order(report: CheckReport, params: dict, rng, calib):
    """rho(f(gamma)) has order exactly n in Q_n."""
    g, n = _int(params, "g", 2), _int(params, "n")
    _needs_qn(n)
    try:
        spec = surface.parse_scc_spec(str(params["spec"]))
        gamma = surface.scc_word(g, spec)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    p = surface.standard_presentation(g)
    report.add("f validates", True, surface.hom_validate(p, surface.f_hom(g)),
               witness=surface.f_hom(g).table(p.names))
    img = surface.hom_apply(surface.f_hom(g), gamma)
    expected_f = "a" if isinstance(spec, surface.NonSeparating) else "a b A B"
    report.add("f(gamma)", expected_f, W.format_word(img, W.FREE2_NAMES))
    order = surface.scc_witness_order(g, n, spec)
    report.add("order of rho(f(gamma))", n, order,
               witness={"gamma": W.format_word(gamma, p.names), "order": order})
    trivial = surface.scc_trivial_powers(g, n, spec)
    report.add("rho(f(gamma))^k != 1 for 0 < k < n", [], trivial)


@register("h1-surjection", {"g": 2, "n": 2})
def check_h1(report: CheckReport, params: dict, rng, calib):
    """Gamma -> H1(S; Z/n) is a homomorphism onto (Z/n)^2g killing n-th powers of sccs."""
    g, n = _int(params, "g", 2), _int(params, "n", 2)
    p = surface.standard_presentation(g)
    h = surface.h1_hom(g, n)
    report.add("relator -> 0", True, surface.hom_validate(p, h))
    images = [surface.h1_image(g, n, x).entries for x in p.generators()]
    report.add("generator images form the standard basis", True,
               images == [tuple(int(i == k) for i in range(2 * g)) for k in range(2 * g)])
    for spec in surface.all_scc_specs(g):
        gamma = surface.scc_word(g, spec)
        report.add(f"{spec}: gamma^n -> 0", True, surface.h1_image(g, n, gamma ** n).is_zero())


def _twist_spec(params: dict, key: str = "spec"):
    try:
        return twists.parse_twist_spec(str(params[key]))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


@register("twist-valid", {"g": 2, "spec": "twist:a1"})
def check_twist_valid(report: CheckReport, params: dict, rng, calib):
    """Twist sends the relator to a conjugate of itself; abelianization det is +-1."""
    g = _int(params, "g", 2)
    spec = _twist_spec(params)
    p = surface.standard_presentation(g)
    try:
        T = twists.twist(g, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if params.get("fault") == "twist":
        T = twists.corrupted_twist(g)
    report.add("relator image conjugate to relator", True, twists.endo_validate(p, T),
               witness={"endomorphism": T.table(),
                        "relator image": W.format_word(T(p.relator), p.names)})
    report.add("abelianization determinant", 1, abs(twists.abelianization_det(T)))


@register("twist-trivial", {"g": 2, "n": 3, "spec": "twist:a1", "witness": "qn"})
def check_twist_trivial(report: CheckReport, params: dict, rng, calib):
    """witness(T^n(x)) = witness(x) for every generator x."""
    g, n = _int(params, "g", 2), _int(params, "n", 2)
    spec = _twist_spec(params)
    witness = str(params.get("witness", "qn"))
    if witness not in ("qn", "h1"):
        raise UsageError(f"witness must be 'qn' or 'h1', got {witness!r}")
    if witness == "qn":
        _needs_qn(n)
    try:
        twists.twist(g, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    endo = twists.corrupted_twist(g) if params.get("fault") == "twist" else None
    sub = twists.verify_twist_power_trivial(g, n, spec, witness, endo=endo)
    report.items.extend(sub.items)
    report.status, report.counterexample = sub.status, sub.counterexample


@register("twist-commute", {"g": 2, "n": 3, "spec": "twist:a1,twist:a2"})
def check_twist_commute(report: CheckReport, params: dict, rng, calib):
    """Twists along disjoint a_j, a_j' commute, and so do their n-th powers."""
    g, n = _int(params, "g", 2), _int(params, "n", 1)
    parts = str(params.get("spec", "")).split(",")
    if len(parts) != 2:
        raise UsageError("twist-commute needs --spec 'twist:aJ,twist:aK'")
    s1, s2 = (twists.parse_twist_spec(s) for s in parts)
    if not (isinstance(s1, twists.AlongA) and isinstance(s2, twists.AlongA)) or s1 == s2:
        raise UsageError("twist-commute needs two distinct AlongA twists")
    for s in (s1, s2):
        if not 1 <= s.j <= g:
            raise UsageError(f"{s} out of range for genus {g}")
    sub = twists.verify_commuting_twists(g, n, s1, s2)
    report.items.extend(sub.items)
    report.status, report.counterexample = sub.status, sub.counterexample


# --- geometry ------------------------------------------------------------------------

@register("four-point", {"samples": 100_000}, needs_calibration=True)
def check_four_point(report: CheckReport, params: dict, rng, calib):
    """Fresh quadruples never beat the calibrated delta-hat."""
    from .geometry.calibration import CALIBRATION_BOX, sample_quadruples
    samples = _int(params, "samples", 1)
    delta = calib["delta_hat"]
    dd = H.four_point_defect(*sample_quadruples(rng, samples, CALIBRATION_BOX))
    report.add("max four-point defect <= delta_hat + 1e-6", delta, float(dd.max()), 1e-6,
               passed=float(dd.max()) <= delta + 1e-6)
    report.add("calibration sample count", calib["samples"], calib["samples"])


@register("metric", {"samples": 100_000})
def check_metric(report: CheckReport, params: dict, rng, calib):
    """Triangle inequality and symmetry for the H^2 and cone metrics."""
    samples = _int(params, "samples", 1)
    box = H.SearchDomain(-5, 5, -5, 5)
    x, y, z = (box.sample(rng, samples) for _ in range(3))
    excess = H.distance(x, z) - H.distance(x, y) - H.distance(y, z)
    report.add("H^2 triangle inequality", 0.0, float(max(excess.max(), 0.0)), 1e-12)
    asym = np.abs(H.distance(x, y) - H.distance(y, x)).max()
    report.add("H^2 symmetry", 0.0, float(asym), 1e-12)
    excess = []
    for _ in range(10):
        cp = C.ConeParams(rng.uniform(0.2, 3.0), rng.uniform(2 * math.pi, 6 * math.pi))
        m = samples // 10
        ys = [rng.uniform(0, cp.circumference, m) for _ in range(3)]
        rs = [rng.uniform(0, cp.rho, m) for _ in range(3)]

        def d(i, j):
            return C.cone_distance(cp, C.circle_distance(cp, ys[i], ys[j]), rs[i], rs[j])
        excess.append(float((d(0, 2) - d(0, 1) - d(1, 2)).max()))
    report.add("cone triangle inequality", 0.0, max(max(excess), 0.0), 1e-12)


@register("lengths", {"samples": 50})
def check_lengths(report: CheckReport, params: dict, rng, calib):
    """stable length <= displacement_min <= stable length + 8 delta; power additivity."""
    samples = _int(params, "samples", 1)
    delta = calib["delta_hat"] if calib else math.log(2)
    dom = H.SearchDomain(-6, 6, -6, 6, grid=61)
    worst_low, worst_high, worst_pow = -math.inf, -math.inf, 0.0
    for _ in range(samples):
        M = H.random_loxodromic(rng)
        ell = H.stable_translation_length(M)
        disp = H.displacement_min(M, dom).value
        worst_low = max(worst_low, ell - disp)
        worst_high = max(worst_high, disp - ell - 8 * delta)
        for k in range(1, 6):
            worst_pow = max(worst_pow, abs(H.stable_translation_length(M ** k) - k * ell))
    report.add("displacement_min >= stable length - 1e-6", 0.0, worst_low, 1e-6, passed=worst_low <= 1e-6)
    report.add("displacement_min <= stable length + 8 delta", 0.0, worst_high, 0.0, passed=worst_high <= 0)
    report.add("|stable(M^k) - k stable(M)|, k <= 5", 0.0, worst_pow, 1e-9)


@register("cone", {"samples": 10_000})
def check_cone(report: CheckReport, params: dict, rng, calib):
    """Apex, zero-angle and pi-saturation cases; law of cosines matches the cone metric."""
    samples = _int(params, "samples", 1)
    worst = {"apex": 0.0, "zero": 0.0, "saturated": 0.0, "agreement": 0.0}
    for _ in range(samples):
        cp = C.ConeParams(rng.uniform(0.1, 4.0), rng.uniform(2 * math.pi, 8 * math.pi))
        r1, r2 = rng.uniform(0, cp.rho, 2)
        worst["apex"] = max(worst["apex"], abs(C.cone_distance(cp, rng.uniform(0, 50), r1, 0.0) - r1))
        worst["zero"] = max(worst["zero"], abs(C.cone_distance(cp, 0.0, r1, r2) - abs(r1 - r2)))
        dY = math.pi * math.sinh(cp.rho) * (1 + rng.uniform(0, 1))
        worst["saturated"] = max(worst["saturated"], abs(C.cone_distance(cp, dY, r1, r2) - (r1 + r2)))
        theta = rng.uniform(0, cp.total_angle / 2)
        law = C.cone_law_of_cosines(cp, theta, r1, r2)
        met = C.cone_distance(cp, theta * math.sinh(cp.rho), r1, r2)
        worst["agreement"] = max(worst["agreement"], abs(law - met))
    for name, value in worst.items():
        report.add(name, 0.0, value, 1e-12)


@register("energy", {"samples": 100})
def check_energy(report: CheckReport, params: dict, rng, calib):
    """lambda_inf <= lambda_1 <= |U| lambda_inf and lambda_1 <= lambda_1^+."""
    samples = _int(params, "samples", 1)
    tol = 1e-3
    dom = H.SearchDomain(-6, 6, -6, 6, grid=41, refine_starts=2)
    worst = {"chain_low": -math.inf, "chain_high": -math.inf, "restricted": -math.inf}
    witness = None
    for _ in range(samples):
        U = tuple(H.random_loxodromic(rng) for _ in range(int(rng.integers(1, 5))))
        balls = tuple((H.HPoint.from_complex(complex(dom.sample(rng, 1)[0])), float(rng.uniform(0.3, 1.5)))
                      for _ in range(int(rng.integers(1, 3))))
        cfg = EnergyConfig(U, dom, balls)
        l_inf = energy(cfg, math.inf).value
        l_1 = energy(cfg, 1).value
        l_plus = restricted_energy(cfg).value
        vals = {"chain_low": l_inf - l_1, "chain_high": l_1 - len(U) * l_inf, "restricted": l_1 - l_plus}
        for key, v in vals.items():
            if v > worst[key]:
                worst[key] = v
                if v > tol and witness is None:
                    witness = {"U": [M.to_json() for M in U], "lambda_inf": l_inf, "lambda_1": l_1,
                               "lambda_1_plus": l_plus}
    report.add("lambda_inf - lambda_1 <= tol", 0.0, worst["chain_low"], tol,
               passed=worst["chain_low"] <= tol, witness=witness)
    report.add("lambda_1 - |U| lambda_inf <= tol", 0.0, worst["chain_high"], tol,
               passed=worst["chain_high"] <= tol, witness=witness)
    report.add("lambda_1 - lambda_1^+ <= tol", 0.0, worst["restricted"], tol,
               passed=worst["restricted"] <= tol, witness=witness)


@register("fuchsian", {"L": 3})
def check_fuchsian(report: CheckReport, params: dict, rng, calib):
    """Genus-2 octagon group: relator, loxodromic generators, equal lengths, inj radius."""
    L = _int(params, "L", 1)
    F = genus2_fuchsian()
    report.add("relator distance to +-I", 0.0, relator_error(F), 1e-9)
    kinds = [H.classify(M).value for M in F]
    report.add("all loxodromic", ["loxodromic"] * 8, kinds)
    lengths = [H.stable_translation_length(M) for M in F]
    report.add("translation length spread", 0.0, max(lengths) - min(lengths), 1e-9)
    if calib:
        report.add("frozen translation length", calib["octagon"]["translation_length"], lengths[0], 1e-9)
    inj = H.injectivity_radius_estimate(genus2_generators(), L)
    report.add(f"injectivity radius (L={L}) > 0", True, inj > 0 and math.isfinite(inj))


@register("thinness", {"samples": 20, "points": 2000}, needs_calibration=True)
def check_thinness(report: CheckReport, params: dict, rng, calib):
    """Sampled thinness defect stays under 100 (delta/stable + 1) delta."""
    samples, points = _int(params, "samples", 1), _int(params, "points", 1)
    delta = calib["delta_hat"]
    worst_margin, worst_trunc = -math.inf, 0.0
    witness = None
    for _ in range(samples):
        M = H.random_loxodromic(rng)
        ell = H.stable_translation_length(M)
        for extra in (1.0, 5.0):
            res = H.thinness_defect(M, ell + extra, points, rng, delta)
            margin = res.defect - res.bound
            worst_trunc = max(worst_trunc, res.truncation_error)
            if margin > worst_margin:
                worst_margin = margin
                witness = {"M": M.to_json(), "d": ell + extra, **res.to_json()}
    report.add("max(defect - bound)", 0.0, worst_margin, 0.0, passed=worst_margin <= 0, witness=witness)
    report.add("boundary product truncation error", 0.0, worst_trunc, 1e-6)


@register("fix-set", {"samples": 4000}, needs_calibration=True)
def check_fix_set(report: CheckReport, params: dict, rng, calib):
    """Displacement outside Fix(U, d) grows at least like 2 d(x, Fix) + d - 10 delta."""
    samples = _int(params, "samples", 10)
    delta = calib["delta_hat"]
    total_violations, checked = 0, 0
    witness = None
    for _ in range(5):
        U = [H.random_loxodromic(rng) for _ in range(int(rng.integers(1, 3)))]
        lam = H.energy_of(U, H.SearchDomain(-6, 6, -6, 6, grid=41, refine_starts=2)).value
        d = max(lam, 5 * delta) + 0.5
        pts = H.SearchDomain(-6, 6, -4, 4).sample(rng, samples)
        probe = H.fix_set_probe(U, d, pts, delta)
        total_violations += len(probe.violations)
        checked += probe.checked
        if probe.violations and witness is None:
            witness = probe.violations[0]
    report.add("outside points checked", True, checked > 0)
    report.add("growth-bound violations", 0, total_violations, witness=witness)


# --- running -------------------------------------------------------------------------

def run_check(req: CheckRequest, calibration: dict | None = None, include_timing: bool = False) -> CheckReport:
    """Execute one check.  Mathematical failures give a 'fail' report; bad
    requests give an 'error' report.  Never raises for either."""
    params = dict(req.params)
    seed = int(params.pop("seed", 0) or 0)
    report = CheckReport(req.check_id, {}, seed=seed)
    start = time.perf_counter()
    try:
        if req.check_id not in CATALOGUE:
            raise UsageError(f"unknown check_id {req.check_id!r}; known: {', '.join(sorted(CATALOGUE))}")
        cdef = CATALOGUE[req.check_id]
        merged = {**cdef.defaults, **{k: v for k, v in params.items() if v is not None}}
        report.params = merged
        if cdef.needs_calibration and calibration is None:
            raise CalibrationMissing("this check needs a calibration file; run 'pql calibrate' first")
        rng = derive_rng(seed, req.check_id, merged)
        cdef.func(report, merged, rng, calibration)
    except (UsageError, CalibrationMissing) as exc:
        report.status, report.message = "error", str(exc)
    report.duration_ms = (time.perf_counter() - start) * 1000.0
    if req.output_path:
        Path(req.output_path).write_text(report.to_json(include_timing))
    return report


def exit_code(reports) -> int:
    statuses = {r.status for r in reports}
    if "error" in statuses:
        return 2
    return 1 if "fail" in statuses else 0


def algebra_cells() -> list[CheckRequest]:
    cells = [CheckRequest("cyclotomic")]
    cells += [CheckRequest("metabelian", {"n": n, "trials": 1000}) for n in range(3, 13)]
    for g in (2, 3, 4):
        for n in range(3, 13):
            for spec in surface.all_scc_specs(g):
                cells.append(CheckRequest("scc-order", {"g": g, "n": n, "spec": str(spec)}))
    for g in (2, 3):
        for spec in twists.all_twist_specs(g):
            cells.append(CheckRequest("twist-valid", {"g": g, "spec": str(spec)}))
            for n in range(3, 11):
                for witness in ("qn", "h1"):
                    cells.append(CheckRequest("twist-trivial",
                                              {"g": g, "n": n, "spec": str(spec), "witness": witness}))
        for j in range(1, g + 1):
            for k in range(j + 1, g + 1):
                cells.append(CheckRequest("twist-commute", {"g": g, "n": 3, "spec": f"twist:a{j},twist:a{k}"}))
    for g in (2, 3):
        cells.append(CheckRequest("h1-surjection", {"g": g, "n": 2}))
    return cells


def geometry_cells() -> list[CheckRequest]:
    return [CheckRequest(c) for c in ("four-point", "metric", "lengths", "cone", "energy",
                                      "fuchsian", "thinness", "fix-set")]


def suite_cells(name: str) -> list[CheckRequest]:
    if name == "algebra":
        return algebra_cells()
    if name == "geometry":
        return geometry_cells()
    if name == "all":
        return algebra_cells() + geometry_cells()
    raise UsageError(f"unknown suite {name!r}; expected algebra, geometry or all")


def cell_filename(req: CheckRequest) -> str:
    tag = "_".join(f"{k}-{v}" for k, v in sorted(req.params.items()))
    tag = tag.replace(":", "").replace(",", "+").replace("/", "")
    return f"{req.check_id}{'_' + tag if tag else ''}.json"


def run_suite(name: str, seed: int = 0, report_dir: str | Path | None = None,
              calibration_path: str | Path | None = None, fault: str | None = None,
              include_timing: bool = False, log=None) -> tuple[list[CheckReport], int]:
    cells = suite_cells(name)
    calibration = None
    if any(CATALOGUE[c.check_id].needs_calibration for c in cells):
        try:
            calibration = load_calibration(calibration_path) if calibration_path != "packaged" else load_calibration()
        except CalibrationMissing as exc:
            report = CheckReport(f"suite:{name}", {"seed": seed}, status="error", seed=seed, message=str(exc))
            return [report], 2
    out_dir = Path(report_dir) if report_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for req in cells:
        params = {**req.params, "seed": seed}
        if fault and req.check_id.startswith("twist-") and req.check_id != "twist-commute":
            params["fault"] = fault
        rep = run_check(CheckRequest(req.check_id, params), calibration)
        reports.append(rep)
        if log:
            log(rep.summary_line())
        if out_dir:
            (out_dir / cell_filename(req)).write_text(rep.to_json(include_timing))
    if out_dir:
        with open(out_dir / "summary.ndjson", "w") as fh:
            for rep in reports:
                line = {"check_id": rep.check_id, "params": rep.to_dict()["params"], "status": rep.status}
                if include_timing:
                    line["duration_ms"] = round(rep.duration_ms or 0.0, 3)
                fh.write(json.dumps(line, sort_keys=True) + "\n")
    return reports, exit_code(reports)
