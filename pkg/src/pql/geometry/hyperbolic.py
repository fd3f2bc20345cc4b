"""Upper half-plane model: distances, Gromov products, isometries and the
displacement quantities built from them.

Points are handled as complex numbers (scalars or numpy arrays) internally;
:class:`HPoint` is the validated public carrier.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

DET_TOL = 1e-12
PARABOLIC_TOL = 1e-9
EXACT_POWER_MAX = 16


def _exact_power(m: np.ndarray, k: int) -> np.ndarray:
    """m^k with every entry correctly rounded: float entries are exact
    rationals, so the product is formed in Fraction arithmetic. Floating
    matrix_power loses the trace to cancellation once entries dwarf it."""
    a, b, c, d = (Fraction(float(v)) for v in m.ravel())
    p = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
    for _ in range(k):
        p = (p[0] * a + p[1] * c, p[0] * b + p[1] * d, p[2] * a + p[3] * c, p[2] * b + p[3] * d)
    return np.array([[float(p[0]), float(p[1])], [float(p[2]), float(p[3])]])


@dataclass(frozen=True)
class HPoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise ValueError(f"points of H^2 need im > 0, got {self.im}")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))

    def to_json(self) -> list[float]:
        return [self.re, self.im]


def as_complex(p):
    if isinstance(p, HPoint):
        return p.z
    return p


def distance(p, q):
    """Hyperbolic distance; vectorised over numpy arrays of complex points.

    Uses 2 asinh(|p - q| / (2 sqrt(Im p Im q))), which equals
    acosh(1 + |p - q|^2 / (2 Im p Im q)) without the cancellation near 0.
    """
    p, q = as_complex(p), as_complex(q)
    num = np.abs(np.subtract(p, q))
    den = 2.0 * np.sqrt(np.imag(p) * np.imag(q))
    out = 2.0 * np.arcsinh(num / den)
    return float(out) if np.ndim(out) == 0 else out


def gromov_product(x, y, z):
    """<x, y>_z = (d(x, z) + d(y, z) - d(x, y)) / 2."""
    return 0.5 * (distance(x, z) + distance(y, z) - distance(x, y))


def four_point_defect(x, y, z, t):
    """min(<x,y>_t, <y,z>_t) - <x,z>_t; its supremum is the four-point delta."""
    return np.minimum(gromov_product(x, y, t), gromov_product(y, z, t)) - gromov_product(x, z, t)


# --- isometries ---------------------------------------------------------------

class Kind(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class Isometry:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det <= 0:
            raise ValueError(f"isometry matrix needs positive determinant, got {det}")
        # rounding alone moves ad - bc by about eps * |m|^2; rescaling on that
        # noise would corrupt the trace of large matrices
        scale = max(1.0, self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2)
        if abs(det - 1.0) > DET_TOL * scale:
            s = math.sqrt(det)
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) / s)

    @classmethod
    def from_matrix(cls, m) -> "Isometry":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __call__(self, z):
        z = as_complex(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse() ** -k
        if k <= EXACT_POWER_MAX:
            return Isometry.from_matrix(_exact_power(self.matrix, k))
        return Isometry.from_matrix(np.linalg.matrix_power(self.matrix, k))

    def is_identity(self, tol: float = DET_TOL) -> bool:
        m = self.matrix
        return bool(np.allclose(m, np.eye(2), atol=tol, rtol=0) or np.allclose(m, -np.eye(2), atol=tol, rtol=0))

    def to_json(self) -> list[list[float]]:
        return self.matrix.tolist()


def classify(M: Isometry) -> Kind:
    """Trace classification; the identity counts as elliptic (bounded orbits)."""
    t = abs(M.trace)
    if abs(t - 2.0) <= PARABOLIC_TOL:
        return Kind.ELLIPTIC if M.is_identity(PARABOLIC_TOL) else Kind.PARABOLIC
    return Kind.LOXODROMIC if t > 2.0 else Kind.ELLIPTIC


def stable_translation_length(M: Isometry) -> float:
    if classify(M) is not Kind.LOXODROMIC:
        return 0.0
    return 2.0 * math.acosh(abs(M.trace) / 2.0)


def displacement(M: Isometry, z):
    """d(Mz, z), vectorised."""
    z = as_complex(z)
    return distance(M(z), z)


# --- searches over a box ------------------------------------------------------

@dataclass(frozen=True)
class SearchDomain:
    """Box in (Re z, log Im z) coordinates, sampled on a grid and then refined."""
    re_min: float = -4.0
    re_max: float = 4.0
    log_im_min: float = -4.0
    log_im_max: float = 4.0
    grid: int = 81
    refine_starts: int = 3

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.log_im_max > self.log_im_min and self.grid >= 2):
            raise ValueError("degenerate search domain")

    @property
    def resolution(self) -> float:
        return max((self.re_max - self.re_min), (self.log_im_max - self.log_im_min)) / (self.grid - 1)

    def grid_points(self) -> np.ndarray:
        xs = np.linspace(self.re_min, self.re_max, self.grid)
        ts = np.linspace(self.log_im_min, self.log_im_max, self.grid)
        X, T = np.meshgrid(xs, ts)
        return (X + 1j * np.exp(T)).ravel()

    def contains(self, u: np.ndarray) -> bool:
        return bool(self.re_min <= u[0] <= self.re_max and self.log_im_min <= u[1] <= self.log_im_max)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        x = rng.uniform(self.re_min, self.re_max, size)
        t = rng.uniform(self.log_im_min, self.log_im_max, size)
        return x + 1j * np.exp(t)


@dataclass(frozen=True)
class SearchResult:
    value: float
    argmin: HPoint
    resolution: float

    def to_json(self) -> dict:
        return {"value": self.value, "argmin": self.argmin.to_json(), "resolution": self.resolution}


def minimize_over(objective, domain: SearchDomain, feasible=None) -> SearchResult:
    """Grid search then Nelder-Mead from the best grid points.

    ``objective`` maps a complex array to a real array.  ``feasible`` (optional)
    maps a complex array to a boolean mask; infeasible points are never returned.
    """
    pts = domain.grid_points()
    vals = np.asarray(objective(pts), dtype=float)
    if feasible is not None:
        vals = np.where(feasible(pts), vals, np.inf)
    if not np.isfinite(vals).any():
        raise ValueError("no feasible point in the search domain")
    order = np.argsort(vals)[: domain.refine_starts]
    best_val, best_z = float(vals[order[0]]), complex(pts[order[0]])

    def f(u):
        if not domain.contains(u):
            return np.inf
        z = np.array([u[0] + 1j * math.exp(u[1])])
        if feasible is not None and not feasible(z)[0]:
            return np.inf
        return float(objective(z)[0])

    step = domain.resolution
    for idx in order:
        if not np.isfinite(vals[idx]):
            continue
        z0 = pts[idx]
        u0 = np.array([z0.real, math.log(z0.imag)])
        simplex = np.array([u0, u0 + [step, 0.0], u0 + [0.0, step]])
        res = minimize(f, u0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-12,
                                "maxiter": 4000, "maxfev": 8000})
        if np.isfinite(res.fun) and res.fun < best_val:
            best_val, best_z = float(res.fun), complex(res.x[0], math.exp(res.x[1]))
    return SearchResult(best_val, HPoint.from_complex(best_z), domain.resolution)


def displacement_min(M: Isometry, domain: SearchDomain | None = None) -> SearchResult:
    """Numerical translation length inf_x d(Mx, x) over the domain."""
    domain = domain or SearchDomain()
    return minimize_over(lambda z: displacement(M, z), domain)


# --- loxodromic axis frame ----------------------------------------------------

def axis_frame(M: Isometry) -> Isometry:
    """g with g^-1 M g = diag(l, 1/l), l > 1: g(0) = M^-, g(inf) = M^+."""
    if classify(M) is not Kind.LOXODROMIC:
        raise ValueError("axis frame needs a loxodromic isometry")
    m = M.matrix if M.trace > 0 else -M.matrix
    vals, vecs = np.linalg.eig(m)
    vals, vecs = vals.real, vecs.real
    order = np.argsort(vals)[::-1]
    v_plus, v_minus = vecs[:, order[0]], vecs[:, order[1]]
    g = np.column_stack([v_plus, v_minus])
    if np.linalg.det(g) < 0:
        g[:, 1] *= -1
    return Isometry.from_matrix(g)


def boundary_points(M: Isometry) -> tuple[float, float]:
    """(M^-, M^+) on the real line; inf is returned as math.inf."""
    g = axis_frame(M)
    plus = math.inf if g.c == 0 else g.a / g.c
    minus = math.inf if g.d == 0 else g.b / g.d
    return minus, plus


def boundary_gromov_product(M: Isometry, y, truncation: float = 30.0) -> tuple[np.ndarray, np.ndarray]:
    """<M^-, M^+>_y as the limit of <p(-T), p(T)>_y along the axis p.

    Returns (value at T = truncation, |value(T) - value(T/2)|) so the caller can
    confirm the limit has stabilised.
    """
    g = axis_frame(M)
    w = g.inverse()(as_complex(y))

    def at(T):
        top, bottom = 1j * math.exp(T), 1j * math.exp(-T)
        return 0.5 * (distance(w, top) + distance(w, bottom) - 2.0 * T)

    v1, v2 = at(truncation), at(truncation / 2)
    return v1, np.abs(v1 - v2)


def thinness_bound(delta: float, stable_length: float) -> float:
    """100 (delta / stable_length + 1) delta."""
    return 100.0 * (delta / stable_length + 1.0) * delta


@dataclass(frozen=True)
class ThinnessResult:
    defect: float
    bound: float
    samples_inside: int
    truncation_error: float
    worst_point: HPoint | None

    @property
    def ok(self) -> bool:
        return self.defect <= self.bound

    def to_json(self) -> dict:
        return {"defect": self.defect, "bound": self.bound, "samples_inside": self.samples_inside,
                "truncation_error": self.truncation_error,
                "worst_point": None if self.worst_point is None else self.worst_point.to_json()}


def thinness_defect(M: Isometry, d: float, samples: int, rng: np.random.Generator,
                    delta: float) -> ThinnessResult:
    """max over sampled y in Fix(M, d) of <M^-, M^+>_y - (d - ||M||)/2.

    Candidates are spread in the axis frame over a tube slightly wider than
    Fix(M, d) and then filtered by their actual displacement.
    """
    if classify(M) is not Kind.LOXODROMIC:
        raise ValueError("thinness is defined here for loxodromic isometries")
    ell = stable_translation_length(M)
    if d < ell:
        raise ValueError(f"d = {d} is below the translation length {ell}")
    g = axis_frame(M)
    ratio = math.sinh(d / 2) / math.sinh(ell / 2)
    s_max = math.acosh(max(ratio, 1.0)) + 0.5
    s = rng.uniform(-s_max, s_max, samples)
    s[: min(8, samples)] = 0.0
    u = rng.uniform(-3.0, 3.0, samples)
    frame_pts = np.exp(u) * (np.tanh(s) + 1j / np.cosh(s))
    y = g(frame_pts)
    inside = displacement(M, y) <= d
    if not inside.any():
        return ThinnessResult(-math.inf, thinness_bound(delta, ell), 0, 0.0, None)
    y_in = y[inside]
    prod, trunc = boundary_gromov_product(M, y_in)
    defects = prod - 0.5 * (d - ell)
    k = int(np.argmax(defects))
    return ThinnessResult(float(defects[k]), thinness_bound(delta, ell), int(inside.sum()),
                          float(np.max(trunc)), HPoint.from_complex(complex(y_in[k])))


# --- fixed sets ------------------------------------------------------------------

@dataclass
class FixProbe:
    inside: np.ndarray
    diameter: float
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"inside": int(len(self.inside)), "diameter": self.diameter, "checked": self.checked,
                "violations": self.violations[:5]}


def max_displacement(U, z):
    return np.max(np.stack([displacement(M, z) for M in U]), axis=0)


def energy_of(U, domain: SearchDomain | None = None) -> SearchResult:
    """lambda(U) = inf_x max_{M in U} d(Mx, x)."""
    return minimize_over(lambda z: max_displacement(U, z), domain or SearchDomain())


def fix_set_probe(U, d: float, points, delta: float) -> FixProbe:
    """Classify sampled points against Fix(U, d) and test the growth bound
    sup_M d(Mx, x) >= 2 d(x, Fix) + d - 10 delta at each outside point, with
    d(x, Fix) measured to the sampled part of Fix."""
    if d <= 0:
        raise ValueError("d must be positive")
    z = np.asarray([as_complex(p) for p in points], dtype=complex) if not isinstance(points, np.ndarray) else points
    if z.size == 0:
        raise ValueError("empty sample set")
    disp = max_displacement(U, z)
    mask = disp <= d
    inside, outside = z[mask], z[~mask]
    diameter = 0.0
    if len(inside) > 1:
        sub = inside[:: max(1, len(inside) // 400)]
        diameter = float(np.max(distance(sub[:, None], sub[None, :])))
    violations = []
    if len(inside):
        for chunk in np.array_split(np.arange(len(outside)), max(1, len(outside) // 256)):
            xs = outside[chunk]
            dist_fix = np.min(distance(xs[:, None], inside[None, :]), axis=1)
            lower = 2.0 * dist_fix + d - 10.0 * delta
            bad = disp[~mask][chunk] < lower - 1e-9
            for idx in np.nonzero(bad)[0]:
                violations.append({"point": [float(xs[idx].real), float(xs[idx].imag)],
                                   "displacement": float(disp[~mask][chunk][idx]),
                                   "lower_bound": float(lower[idx])})
    checked = len(outside) if len(inside) else 0
    return FixProbe(inside, diameter, checked, violations)


# --- quasi-convexity -------------------------------------------------------------

@dataclass(frozen=True)
class QuasiConvexity:
    metric_defect: float
    qc_defect: float

    @property
    def ok(self) -> bool:
        return self.metric_defect <= 1e-12 and self.qc_defect <= 1e-12


def strongly_quasi_convex(Y, intrinsic, probes, delta: float) -> QuasiConvexity:
    """Sampled test of strong quasi-convexity for a subset Y.

    ``Y`` is a sample of the subset, ``intrinsic(i, j)`` its length metric between
    sample points i and j, ``probes`` ambient test points.  Reports the worst
    violation of d_X <= d_Y <= d_X + 8 delta and of d(x, Y) <= <y, y'>_x + 2 delta
    (non-positive values mean no violation was found).
    """
    Y = np.asarray(Y, dtype=complex)
    probes = np.asarray(probes, dtype=complex)
    metric_defect = -math.inf
    for i, j in itertools.combinations(range(len(Y)), 2):
        dx = distance(Y[i], Y[j])
        dy = intrinsic(i, j)
        metric_defect = max(metric_defect, dx - dy, dy - dx - 8.0 * delta)
    qc_defect = -math.inf
    for x in probes:
        d_to_Y = float(np.min(distance(x, Y)))
        gp = gromov_product(Y[:, None], Y[None, :], x)
        qc_defect = max(qc_defect, d_to_Y - float(np.min(gp)) - 2.0 * delta)
    return QuasiConvexity(metric_defect, qc_defect)


# --- injectivity radius ----------------------------------------------------------

def injectivity_radius_estimate(gens, L: int) -> float:
    """Least stable length over loxodromic reduced words of length <= L in the
    generators and their inverses; ``math.inf`` when no word is loxodromic."""
    if L < 1:
        raise ValueError("L must be >= 1")
    mats = [M.matrix for M in gens] + [M.inverse().matrix for M in gens]
    k = len(gens)
    best = math.inf
    frontier = [((), np.eye(2))]
    for _ in range(L):
        nxt = []
        for word, mat in frontier:
            for letter in range(2 * k):
                if word and letter == (word[-1] + k) % (2 * k):
                    continue
                m = mat @ mats[letter]
                nxt.append((word + (letter,), m))
                M = Isometry.from_matrix(m)
                if classify(M) is Kind.LOXODROMIC:
                    best = min(best, stable_translation_length(M))
        frontier = nxt
    return best


def random_loxodromic(rng: np.random.Generator, length_range=(0.2, 4.0), centre_box: float = 1.5) -> Isometry:
    """Loxodromic isometry whose axis passes through a random point x + iy with
    |x| <= centre_box and |log y| <= centre_box, in a random direction."""
    ell = rng.uniform(*length_range)
    x = rng.uniform(-centre_box, centre_box)
    y = math.exp(rng.uniform(-centre_box, centre_box))
    theta = rng.uniform(0.0, math.pi)
    move = np.array([[math.sqrt(y), x / math.sqrt(y)], [0.0, 1.0 / math.sqrt(y)]])
    turn = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    h = move @ turn
    core = np.diag([math.exp(ell / 2), math.exp(-ell / 2)])
    return Isometry.from_matrix(h @ core @ np.linalg.inv(h))
