import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pql.geometry import hyperbolic as H

LN2 = math.log(2.0)


def acosh_distance(p, q):
    """Textbook form, the oracle for the asinh implementation."""
    return math.acosh(1 + abs(p - q) ** 2 / (2 * p.imag * q.imag))


def diag(lam):
    return H.Isometry(lam, 0.0, 0.0, 1.0 / lam)


points = st.builds(lambda x, t: complex(x, math.exp(t)), st.floats(-4, 4), st.floats(-3, 3))


def test_hpoint_validation():
    with pytest.raises(ValueError):
        H.HPoint(0.0, 0.0)
    assert H.HPoint(1.0, 2.0).z == complex(1, 2)


def test_distance_examples():
    # along the imaginary axis d(i, 2i) is the integral of dy / y from 1 to 2
    axis_integral, _ = quad(lambda y: 1.0 / y, 1.0, 2.0)
    assert H.distance(1j, 2j) == pytest.approx(LN2, abs=1e-14)
    assert H.distance(1j, 2j) == pytest.approx(axis_integral, abs=1e-12)
    assert math.acosh(1.25) == pytest.approx(LN2, abs=1e-14)
    assert H.distance(0.3 + 2j, 0.3 + 2j) == 0.0


@settings(max_examples=300)
@given(points, points)
def test_distance_matches_acosh_form(p, q):
    d = float(H.distance(p, q))
    if d > 1e-3:
        assert d == pytest.approx(acosh_distance(p, q), rel=1e-9)


@settings(max_examples=200)
@given(points, points, st.floats(0.2, 3), st.floats(0, math.pi), st.floats(-2, 2))
def test_distance_isometry_invariant(p, q, ell, theta, shift):
    M = H.Isometry.from_matrix([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    M = M @ diag(math.exp(ell / 2)) @ H.Isometry(1.0, shift, 0.0, 1.0)
    assert float(H.distance(M(p), M(q))) == pytest.approx(float(H.distance(p, q)), abs=1e-9)


def test_gromov_product_examples():
    x, y = 1 + 1j, -2 + 3j
    assert H.gromov_product(x, y, x) == pytest.approx(0.0, abs=1e-15)
    assert H.gromov_product(1j, 8j, 2j) == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=300)
@given(points, points, points)
def test_gromov_product_range(x, y, z):
    gp = float(H.gromov_product(x, y, z))
    assert -1e-12 <= gp <= min(float(H.distance(x, z)), float(H.distance(y, z))) + 1e-12


def test_four_point_degenerate_cases():
    rng = np.random.default_rng(0)
    box = H.SearchDomain()
    x, y, t = (box.sample(rng, 1000) for _ in range(3))
    assert np.all(H.four_point_defect(x, y, x, t) <= 1e-12)
    assert np.all(H.four_point_defect(x, t, y, t) <= 1e-12)


def test_four_point_defect_bounded_by_log2():
    rng = np.random.default_rng(1)
    box = H.SearchDomain(-5, 5, -5, 5)
    dd = H.four_point_defect(*(box.sample(rng, 200_000) for _ in range(4)))
    assert dd.max() <= LN2 + 1e-9


def test_isometry_normalisation():
    M = H.Isometry(4.0, 0.0, 0.0, 1.0)
    assert M.a * M.d - M.b * M.c == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        H.Isometry(0.0, 1.0, 1.0, 0.0)


def test_classification_examples():
    P = H.Isometry(1, 1, 0, 1)
    L = H.Isometry(2, 0, 0, 0.5)
    E = H.Isometry(0, 1, -1, 0)
    assert H.classify(P) is H.Kind.PARABOLIC and H.stable_translation_length(P) == 0.0
    assert H.classify(L) is H.Kind.LOXODROMIC
    assert H.stable_translation_length(L) == pytest.approx(2 * LN2, abs=1e-12)
    assert H.stable_translation_length(L) == pytest.approx(float(H.displacement(L, 1j)), abs=1e-12)
    assert H.classify(E) is H.Kind.ELLIPTIC and H.stable_translation_length(E) == 0.0
    assert H.classify(H.Isometry.identity()) is H.Kind.ELLIPTIC


def test_displacement_min_examples():
    res = H.displacement_min(H.Isometry(2, 0, 0, 0.5))
    assert res.value == pytest.approx(2 * LN2, abs=1e-6)
    assert res.resolution > 0
    assert H.displacement_min(H.Isometry.identity()).value == pytest.approx(0.0, abs=1e-12)


def test_parabolic_displacement_decreases_with_domain():
    P = H.Isometry(1, 1, 0, 1)
    values = [H.displacement_min(P, H.SearchDomain(-1, 1, -1, top)).value for top in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(values, values[1:]))
    for top, v in zip((1, 2, 4, 8), values):
        assert v == pytest.approx(2 * math.asinh(1 / (2 * math.exp(top))), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_power_additivity(seed):
    M = H.random_loxodromic(np.random.default_rng(seed))
    ell = H.stable_translation_length(M)
    for k in range(1, 6):
        assert H.stable_translation_length(M ** k) == pytest.approx(k * ell, abs=1e-9)
    assert ((M ** -2) @ (M ** 2)).is_identity(1e-8)


def test_random_loxodromic_axis_through_box():
    rng = np.random.default_rng(5)
    for _ in range(20):
        M = H.random_loxodromic(rng)
        lo, hi = H.boundary_points(M)
        assert H.classify(M) is H.Kind.LOXODROMIC
        assert np.isfinite(lo) or np.isfinite(hi)


def equidistant_setup(ell):
    M = diag(math.exp(ell / 2))
    s = np.linspace(0.0, 3.0, 13)
    y = np.tanh(s) + 1j / np.cosh(s)  # distance s from the imaginary axis
    return M, s, y


def test_boundary_gromov_product_oracle():
    M, s, y = equidistant_setup(1.3)
    prod, trunc = H.boundary_gromov_product(M, y)
    assert np.allclose(prod, np.log(np.cosh(s)), atol=1e-9)
    assert trunc.max() < 1e-6


def test_displacement_on_equidistant_curves():
    ell = 1.3
    M, s, y = equidistant_setup(ell)
    expected = 2 * np.arcsinh(np.cosh(s) * math.sinh(ell / 2))
    assert np.allclose(H.displacement(M, y), expected, atol=1e-12)


def test_axis_frame_maps_imaginary_axis_to_axis():
    M = H.random_loxodromic(np.random.default_rng(9))
    g = H.axis_frame(M)
    ell = H.stable_translation_length(M)
    on_axis = g(np.exp(np.linspace(-2, 2, 9)) * 1j)
    assert np.allclose(H.displacement(M, on_axis), ell, atol=1e-9)


def test_thinness_examples():
    rng = np.random.default_rng(2)
    M = diag(math.exp(0.8))
    ell = H.stable_translation_length(M)
    prod, _ = H.boundary_gromov_product(M, np.array([1j, 5j]))
    assert np.all(prod <= 1e-12)
    res = H.thinness_defect(M, ell + 1.0, 2000, rng, LN2)
    assert res.ok and res.samples_inside > 0
    tight = H.thinness_defect(M, ell + 1e-6, 2000, rng, LN2)
    assert tight.defect <= 1e-3
    with pytest.raises(ValueError):
        H.thinness_defect(M, ell - 0.1, 10, rng, LN2)


def test_thinness_matches_equidistant_oracle():
    # the worst point sits on the boundary of the tube: ln cosh s - (d - ell)/2
    ell, extra = 1.0, 2.0
    M = diag(math.exp(ell / 2))
    s_edge = math.acosh(math.sinh((ell + extra) / 2) / math.sinh(ell / 2))
    res = H.thinness_defect(M, ell + extra, 20000, np.random.default_rng(3), LN2)
    assert res.defect == pytest.approx(math.log(math.cosh(s_edge)) - extra / 2, abs=2e-2)


def test_fix_set_examples():
    rng = np.random.default_rng(4)
    ell = 1.0
    M = diag(math.exp(ell / 2))
    pts = H.SearchDomain(-3, 3, -3, 3).sample(rng, 3000)
    near_axis = np.exp(np.linspace(-1, 1, 5)) * 1j
    probe = H.fix_set_probe([M], ell + 0.3, np.concatenate([near_axis, pts]), LN2)
    assert probe.ok and len(probe.inside) >= 5
    assert len(H.fix_set_probe([M], ell - 0.1, pts, LN2).inside) == 0
    probe = H.fix_set_probe([H.Isometry.identity()], 0.5, pts, LN2)
    assert len(probe.inside) == len(pts) and probe.checked == 0


def test_quasi_convexity_of_a_geodesic():
    ys = np.exp(np.linspace(-2, 2, 12)) * 1j
    logs = np.log(ys.imag)
    probes = H.SearchDomain(-3, 3, -3, 3).sample(np.random.default_rng(6), 50)
    res = H.strongly_quasi_convex(ys, lambda i, j: abs(logs[i] - logs[j]), probes, LN2)
    assert res.ok


def test_injectivity_radius_conventions():
    M = diag(math.exp(0.7))
    assert H.injectivity_radius_estimate([M], 3) == pytest.approx(1.4, abs=1e-12)
    assert H.injectivity_radius_estimate([H.Isometry.identity()], 3) == math.inf
    with pytest.raises(ValueError):
        H.injectivity_radius_estimate([M], 0)


def test_search_domain():
    dom = H.SearchDomain(-1, 1, -1, 1, grid=21)
    assert dom.resolution == pytest.approx(0.1)
    u = dom.grid_points()
    assert u.shape[0] == 21 * 21
    with pytest.raises(ValueError):
        H.SearchDomain(1, -1, 0, 1)
