"""Acceptance suite: the ten primary criteria at their stated tolerances.

Each test prints one PASS/FAIL line (collected again in the pytest terminal
summary).  Runtime limits are asserted alongside the numerical ones.
"""
import math
import time

import numpy as np

from pql import cyclo
from pql import surface as S
from pql import twists as T
from pql.geometry import cone as C
from pql.geometry import hyperbolic as H
from pql.geometry.calibration import CALIBRATION_BOX, calibrate, load_calibration, sample_quadruples
from pql.geometry.energy import EnergyConfig, energy, restricted_energy
from pql.geometry.fuchsian import genus2_fuchsian, genus2_generators, relator_error
from pql.qn import verify_metabelian_periodic

FRESH_SEED = 20261019


def test_criterion_01_metabelian(criterion):
    start = time.perf_counter()
    failed = []
    for n in range(3, 13):
        rep = verify_metabelian_periodic(n, trials=1000, seed=n)
        items = {it.name: it.observed for it in rep.items}
        if not rep.passed or items["ord(A)"] != n or items["ord([A,B])"] != n:
            failed.append(n)
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < 5.0
    assert criterion(1, "Q_n metabelian certificate, n=3..12, 1000 trials", ok,
                     f"failing n={failed}, {elapsed:.2f}s (limit 5s)")


def test_criterion_02_cyclotomic(criterion):
    bad_prod = []
    for n in range(1, 201):
        prod = (1,)
        for d in cyclo.divisors(n):
            prod = cyclo.poly_mul(prod, cyclo.cyclotomic_polynomial(d))
        if prod != (-1,) + (0,) * (n - 1) + (1,):
            bad_prod.append(n)
    bad_chi = [(n, k) for n in range(2, 33) for k in range(n)
               if not cyclo.chi_value(cyclo.ring_context(n), k).is_zero()]
    bad_xi = [n for n in range(3, 65) if cyclo.xi_order(cyclo.ring_context(n)) != n]
    xi2 = cyclo.xi_order(cyclo.ring_context(2))
    ok = not bad_prod and not bad_chi and not bad_xi and xi2 == 1
    assert criterion(2, "cyclotomic identities (exact)", ok,
                     f"product failures {bad_prod}, chi failures {bad_chi[:3]}, xi failures {bad_xi}, ord_2={xi2}")


def test_criterion_03_scc_orders(criterion):
    start = time.perf_counter()
    bad = []
    cells = 0
    for g in (2, 3, 4):
        for n in range(3, 13):
            for spec in S.all_scc_specs(g):
                cells += 1
                if S.scc_witness_order(g, n, spec) != n or S.scc_trivial_powers(g, n, spec):
                    bad.append((g, n, str(spec)))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5.0
    assert criterion(3, "scc order certificates", ok,
                     f"{cells} cells, failures {bad[:3]}, {elapsed:.2f}s (limit 5s)")


def test_criterion_04_twists(criterion):
    start = time.perf_counter()
    bad = []
    for g in (2, 3, 4):
        p = S.standard_presentation(g)
        bad += [("valid", g, str(s)) for s in T.all_twist_specs(g) if not T.endo_validate(p, T.twist(g, s))]
    for g in (2, 3):
        for n in range(3, 11):
            for spec in T.all_twist_specs(g):
                for witness in ("qn", "h1"):
                    if not T.verify_twist_power_trivial(g, n, spec, witness).passed:
                        bad.append(("trivial", g, n, str(spec), witness))
            for j in range(1, g + 1):
                for k in range(j + 1, g + 1):
                    if not T.verify_commuting_twists(g, n, T.AlongA(j), T.AlongA(k)).passed:
                        bad.append(("commute", g, n, j, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10.0
    assert criterion(4, "twist validity, power triviality, commuting twists", ok,
                     f"failures {bad[:3]}, {elapsed:.2f}s (limit 10s)")


def test_criterion_05_calibration_four_point(criterion):
    start = time.perf_counter()
    frozen = load_calibration()
    recomputed = calibrate(samples=10**6, seed=0)
    delta = frozen["delta_hat"]
    rng = np.random.default_rng(FRESH_SEED)
    worst_defect = float(H.four_point_defect(*sample_quadruples(rng, 10**5, CALIBRATION_BOX)).max())
    x, y, z = (CALIBRATION_BOX.sample(rng, 10**5) for _ in range(3))
    tri = float((H.distance(x, z) - H.distance(x, y) - H.distance(y, z)).max())
    cone_excess = 0.0
    for _ in range(10):
        cp = C.ConeParams(rng.uniform(0.2, 3.0), rng.uniform(2 * math.pi, 6 * math.pi))
        ys = [rng.uniform(0, cp.circumference, 10**4) for _ in range(3)]
        rs = [rng.uniform(0, cp.rho, 10**4) for _ in range(3)]

        def d(i, j):
            return C.cone_distance(cp, C.circle_distance(cp, ys[i], ys[j]), rs[i], rs[j])
        cone_excess = max(cone_excess, float((d(0, 2) - d(0, 1) - d(1, 2)).max()))
    elapsed = time.perf_counter() - start
    ok = (frozen["samples"] == 10**6 and recomputed["delta_hat"] == delta
          and worst_defect <= delta + 1e-6 and tri <= 1e-12 and cone_excess <= 1e-12 and elapsed < 30.0)
    assert criterion(5, "frozen delta-hat, four-point bound, triangle inequalities", ok,
                     f"delta_hat={delta:.9f} (reproduced: {recomputed['delta_hat'] == delta}), "
                     f"max defect={worst_defect:.9f}, H2 excess={tri:.2e}, cone excess={cone_excess:.2e}, "
                     f"{elapsed:.2f}s (limit 30s)")


def test_criterion_06_lengths(criterion):
    delta = load_calibration()["delta_hat"]
    rng = np.random.default_rng(FRESH_SEED + 6)
    dom = H.SearchDomain(-6, 6, -6, 6, grid=61)
    low, high, additivity = -math.inf, -math.inf, 0.0
    for _ in range(50):
        M = H.random_loxodromic(rng)
        ell = H.stable_translation_length(M)
        disp = H.displacement_min(M, dom).value
        low = max(low, ell - 1e-6 - disp)
        high = max(high, disp - ell - 8 * delta)
        for k in range(1, 6):
            additivity = max(additivity, abs(H.stable_translation_length(M ** k) - k * ell))
    ok = low <= 0 and high <= 0 and additivity <= 1e-9
    assert criterion(6, "displacement_min vs stable length; power additivity", ok,
                     f"lower slack {low:.2e}, upper slack {high:.3f}, additivity error {additivity:.2e}")


def test_criterion_07_cone(criterion):
    rng = np.random.default_rng(FRESH_SEED + 7)
    worst = {"apex": 0.0, "zero angle": 0.0, "saturation": 0.0, "law vs metric": 0.0}
    for _ in range(10**4):
        cp = C.ConeParams(rng.uniform(0.1, 4.0), rng.uniform(2 * math.pi, 8 * math.pi))
        r1, r2 = rng.uniform(0, cp.rho, 2)
        worst["apex"] = max(worst["apex"], abs(C.cone_distance(cp, rng.uniform(0, 50), r1, 0.0) - r1))
        worst["zero angle"] = max(worst["zero angle"], abs(C.cone_distance(cp, 0.0, r1, r2) - abs(r1 - r2)))
        dY = math.pi * math.sinh(cp.rho) * rng.uniform(1, 2)
        worst["saturation"] = max(worst["saturation"], abs(C.cone_distance(cp, dY, r1, r2) - (r1 + r2)))
        theta = rng.uniform(0, cp.total_angle / 2)
        law = C.cone_law_of_cosines(cp, theta, r1, r2)
        worst["law vs metric"] = max(worst["law vs metric"],
                                     abs(law - C.cone_distance(cp, theta * math.sinh(cp.rho), r1, r2)))
    ok = all(v <= 1e-12 for v in worst.values())
    assert criterion(7, "cone special cases and law of cosines", ok,
                     ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_08_energy(criterion):
    rng = np.random.default_rng(FRESH_SEED + 8)
    dom = H.SearchDomain(-6, 6, -6, 6, grid=41, refine_starts=2)
    tol = 1e-3
    worst = [-math.inf] * 3
    for _ in range(100):
        U = tuple(H.random_loxodromic(rng) for _ in range(int(rng.integers(1, 5))))
        balls = tuple((H.HPoint.from_complex(complex(dom.sample(rng, 1)[0])), float(rng.uniform(0.3, 1.5)))
                      for _ in range(int(rng.integers(1, 3))))
        cfg = EnergyConfig(U, dom, balls)
        l_inf, l_1, l_plus = energy(cfg, math.inf).value, energy(cfg, 1).value, restricted_energy(cfg).value
        worst = [max(worst[0], l_inf - l_1), max(worst[1], l_1 - len(U) * l_inf), max(worst[2], l_1 - l_plus)]
    ok = all(w <= tol for w in worst)
    assert criterion(8, "energy chain on 100 configs", ok,
                     f"max(l_inf - l_1)={worst[0]:.2e}, max(l_1 - |U| l_inf)={worst[1]:.2e}, "
                     f"max(l_1 - l_1+)={worst[2]:.2e} (tol {tol})")


def test_criterion_09_fuchsian(criterion):
    F = genus2_fuchsian()
    err = relator_error(F)
    lox = all(H.classify(M) is H.Kind.LOXODROMIC for M in F)
    lengths = [H.stable_translation_length(M) for M in F]
    spread = max(lengths) - min(lengths)
    inj = H.injectivity_radius_estimate(genus2_generators(), 3)
    ok = err <= 1e-9 and lox and spread <= 1e-9 and 0 < inj < math.inf
    assert criterion(9, "genus-2 octagon group", ok,
                     f"relator error {err:.1e}, loxodromic={lox}, length spread {spread:.1e}, "
                     f"injectivity radius (L=3) {inj:.6f}")


def test_criterion_10_thinness(criterion):
    delta = load_calibration()["delta_hat"]
    rng = np.random.default_rng(FRESH_SEED + 10)
    worst_margin, inside = -math.inf, []
    for _ in range(20):
        M = H.random_loxodromic(rng)
        ell = H.stable_translation_length(M)
        for extra in (1.0, 5.0):
            res = H.thinness_defect(M, ell + extra, 2000, rng, delta)
            worst_margin = max(worst_margin, res.defect - res.bound)
            inside.append(res.samples_inside)
    ok = worst_margin <= 0 and min(inside) > 0
    assert criterion(10, "thinness defect under 100 (delta/stable + 1) delta", ok,
                     f"max(defect - bound)={worst_margin:.3f}, fewest samples in Fix={min(inside)}")


if __name__ == "__main__":
    import sys

    def _print(number, title, ok, detail):
        print(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} | {detail}")
        return True

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        t(_print)
    sys.exit(0)
