"""The finite metabelian group Q_n of upper-triangular matrices over R.

An element ``(k, z)`` stands for the matrix ``[[xi^k, z], [0, 1]]``; the
product law ``(k, z)(k', z') = (k + k', xi^k z' + z)`` is the matrix product.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import ContextMismatch, RingContext, RingElement, _shift_into, ring_context, xi_power, xi_shift
from .report import CheckReport


@dataclass(frozen=True, eq=False)
class QnElement:
    context: RingContext
    k_exp: int
    upper: RingElement

    def __post_init__(self):
        object.__setattr__(self, "k_exp", self.k_exp % self.context.n)

    def diagonal(self) -> RingElement:
        return xi_power(self.context, self.k_exp)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QnElement):
            return NotImplemented
        if self.context != other.context or self.upper != other.upper:
            return False
        return self.k_exp == other.k_exp or self.diagonal() == other.diagonal()

    def __hash__(self) -> int:
        return hash((self.context.n, self.diagonal().coeffs, self.upper.coeffs))

    def __mul__(self, other: "QnElement") -> "QnElement":
        return qn_mul(self, other)

    def __pow__(self, m: int) -> "QnElement":
        return qn_pow(self, m)

    def is_identity(self) -> bool:
        return self == qn_identity(self.context)

    def to_json(self) -> dict:
        return {"k": self.k_exp, "z": list(self.upper.coeffs), "n": self.context.n}

    def __repr__(self) -> str:
        return f"Qn(n={self.context.n}, k={self.k_exp}, z={list(self.upper.coeffs)})"


def qn_identity(ctx: RingContext) -> QnElement:
    return QnElement(ctx, 0, ctx.zero())


def qn_generators(n: int) -> tuple[QnElement, QnElement]:
    """A = [[xi, 0], [0, 1]] and B = [[1, 1], [0, 1]]."""
    if n <= 2:
        raise ValueError(f"Q_n is defined for n > 2, got n={n}")
    ctx = ring_context(n)
    return QnElement(ctx, 1, ctx.zero()), QnElement(ctx, 0, ctx.one())


def qn_mul(x: QnElement, y: QnElement) -> QnElement:
    if x.context != y.context:
        raise ContextMismatch(f"{x.context!r} vs {y.context!r}")
    return QnElement(x.context, x.k_exp + y.k_exp, xi_shift(x.context, x.k_exp, y.upper, add=x.upper))


def qn_inv(x: QnElement) -> QnElement:
    return QnElement(x.context, -x.k_exp, -xi_shift(x.context, -x.k_exp, x.upper))


def qn_commutator(x: QnElement, y: QnElement) -> QnElement:
    return qn_mul(qn_mul(x, y), qn_mul(qn_inv(x), qn_inv(y)))


def qn_pow(x: QnElement, m: int) -> QnElement:
    if m < 0:
        return qn_pow(qn_inv(x), -m)
    out = qn_identity(x.context)
    for _ in range(m):
        out = qn_mul(out, x)
    return out


def qn_pow_closed_form(x: QnElement, m: int) -> QnElement:
    """C^m = (m k, (1 + xi^k + ... + xi^{(m-1)k}) z); cross-check for qn_pow."""
    ctx = x.context
    step = x.diagonal()
    term, total = ctx.one(), ctx.zero()
    for _ in range(m):
        total = total + term
        term = term * step
    return QnElement(ctx, m * x.k_exp, total * x.upper)


class PeriodicityViolation(ArithmeticError):
    pass


def qn_element_order(x: QnElement) -> int:
    """Least m >= 1 with x^m = 1, found by iterated multiplication up to n."""
    ident = qn_identity(x.context)
    p = x
    for m in range(1, x.context.n + 1):
        if p == ident:
            return m
        p = qn_mul(p, x)
    raise PeriodicityViolation(f"{x!r} has no order <= n")


def random_word_element(A: QnElement, B: QnElement, rng: np.random.Generator,
                        max_len: int = 20) -> QnElement:
    """Evaluate a random word of length <= max_len in A, B and their inverses.

    The running product (k, z) is updated in place, z += xi^k z_letter, which
    is the product law without an intermediate element per letter."""
    ctx = A.context
    letters = [(x.k_exp, x.upper.coeffs) for x in (A, B, qn_inv(A), qn_inv(B))]
    k, acc = 0, [0] * ctx.degree
    for idx in rng.integers(0, 4, size=int(rng.integers(0, max_len + 1))):
        k_l, z_l = letters[idx]
        _shift_into(ctx, acc, k, z_l)
        k += k_l
    return QnElement(ctx, k, ctx.element(acc))


def verify_metabelian_periodic(n: int, trials: int = 1000, seed: int = 0,
                               rng: np.random.Generator | None = None) -> CheckReport:
    report = CheckReport("metabelian", {"n": n, "trials": trials}, seed=seed)
    A, B = qn_generators(n)
    rng = rng if rng is not None else np.random.default_rng(seed)
    ident = qn_identity(A.context)
    one = A.context.one()

    unitri_bad = None
    abelian_bad = None
    periodic_bad = None
    closed_bad = None
    prev_comm = None
    for _ in range(trials):
        x = random_word_element(A, B, rng)
        y = random_word_element(A, B, rng)
        c = qn_commutator(x, y)
        if unitri_bad is None and c.diagonal() != one:
            unitri_bad = {"x": x, "y": y, "commutator": c}
        if prev_comm is not None and abelian_bad is None:
            if qn_mul(c, prev_comm) != qn_mul(prev_comm, c):
                abelian_bad = {"c1": prev_comm, "c2": c}
        prev_comm = c
        xn = qn_pow(x, n)
        if periodic_bad is None and xn != ident:
            periodic_bad = {"x": x, "x^n": xn}
        if closed_bad is None and qn_pow_closed_form(x, n) != xn:
            closed_bad = {"x": x}

    report.add("commutators unitriangular", True, unitri_bad is None, witness=unitri_bad)
    report.add("commutators pairwise commute", True, abelian_bad is None, witness=abelian_bad)
    report.add("x^n = identity", True, periodic_bad is None, witness=periodic_bad)
    report.add("closed-form power agrees", True, closed_bad is None, witness=closed_bad)
    for label, el in (("ord(A)", A), ("ord([A,B])", qn_commutator(A, B))):
        try:
            order = qn_element_order(el)
        except PeriodicityViolation:
            order = None
        report.add(label, n, order, witness={"element": el, "order": order})
    return report
