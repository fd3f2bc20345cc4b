"""Exact arithmetic in R = (Z/nZ)[X] / (Phi_n(X)).

Integer polynomials are tuples of Python ints, constant term first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Sequence

IntPolynomial = tuple[int, ...]


class ContextMismatch(ValueError):
    pass


def _trim(p: Sequence[int]) -> IntPolynomial:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(p: Sequence[int], q: Sequence[int]) -> IntPolynomial:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_divmod_monic(num: Sequence[int], den: Sequence[int]) -> tuple[IntPolynomial, IntPolynomial]:
    den = _trim(den)
    if not den or den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(_trim(num))
    dd = len(den) - 1
    if len(rem) - 1 < dd:
        return (), tuple(rem)
    quot = [0] * (len(rem) - dd)
    for shift in range(len(rem) - 1 - dd, -1, -1):
        c = rem[shift + dd]
        quot[shift] = c
        if c:
            for j, b in enumerate(den):
                rem[shift + j] -= c * b
    return _trim(quot), _trim(rem)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> IntPolynomial:
    """Phi_n over Z, by exact division of X^n - 1 by Phi_d for proper divisors d."""
    if n < 1:
        raise ValueError(f"cyclotomic_polynomial needs n >= 1, got {n}")
    num: IntPolynomial = (-1,) + (0,) * (n - 1) + (1,)
    for d in divisors(n)[:-1]:
        num, rem = poly_divmod_monic(num, cyclotomic_polynomial(d))
        if rem:
            raise ArithmeticError(f"Phi_{d} does not divide X^{n} - 1")
    return num


def format_poly(p: Sequence[int], var: str = "X") -> str:
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        mag = abs(c)
        body = str(mag) if (mag != 1 or i == 0) else ""
        sign = "-" if c < 0 else "+"
        terms.append((sign, body + mono))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


@dataclass(frozen=True, eq=False)
class RingContext:
    """Built only through ring_context(), which caches one instance per n,
    so identity comparison is the right equality."""

    n: int
    degree: int
    modulus: IntPolynomial = field(repr=False)

    def __repr__(self) -> str:
        return f"R(n={self.n})"

    def element(self, coeffs: Sequence[int]) -> "RingElement":
        return RingElement(self, _reduce(self, coeffs))

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.degree)

    def one(self) -> "RingElement":
        return self.element([1])


@lru_cache(maxsize=None)
def ring_context(n: int) -> RingContext:
    if n < 2:
        raise ValueError(f"ring_context needs n >= 2, got {n}")
    phi = cyclotomic_polynomial(n)
    modulus = tuple(c % n for c in phi)
    return RingContext(n=n, degree=len(phi) - 1, modulus=modulus)


def _reduce(ctx: RingContext, coeffs: Sequence[int]) -> tuple[int, ...]:
    n, d, mod = ctx.n, ctx.degree, ctx.modulus
    c = [x % n for x in coeffs]
    # modulus is monic, so reduce the top coefficient repeatedly
    for top in range(len(c) - 1, d - 1, -1):
        lead = c[top]
        if lead:
            base = top - d
            for j in range(d + 1):
                c[base + j] = (c[base + j] - lead * mod[j]) % n
    c = c[:d] + [0] * (d - len(c))
    return tuple(c)


@dataclass(frozen=True)
class RingElement:
    context: RingContext
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.context.degree:
            raise ValueError("coefficient vector length must equal the context degree")

    def __repr__(self) -> str:
        return f"{self.context!r}{list(self.coeffs)}"

    def __add__(self, other: "RingElement") -> "RingElement":
        return ring_add(self, other)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return ring_add(self, ring_neg(other))

    def __neg__(self) -> "RingElement":
        return ring_neg(self)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return ring_mul(self, other)

    def __pow__(self, k: int) -> "RingElement":
        return ring_pow(self, k)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        return {"ring": repr(self.context), "coeffs": list(self.coeffs)}


def _same(x: RingElement, y: RingElement) -> None:
    if x.context != y.context:
        raise ContextMismatch(f"{x.context!r} vs {y.context!r}")


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    _same(x, y)
    n = x.context.n
    return RingElement(x.context, tuple((a + b) % n for a, b in zip(x.coeffs, y.coeffs)))


def ring_neg(x: RingElement) -> RingElement:
    n = x.context.n
    return RingElement(x.context, tuple((-a) % n for a in x.coeffs))


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    _same(x, y)
    return RingElement(x.context, _reduce(x.context, poly_mul(x.coeffs, y.coeffs)))


def ring_pow(x: RingElement, k: int) -> RingElement:
    if k < 0:
        raise ValueError("negative powers are not defined for general ring elements")
    result = x.context.one()
    base = x
    while k:
        if k & 1:
            result = ring_mul(result, base)
        base = ring_mul(base, base)
        k >>= 1
    return result


def xi(ctx: RingContext) -> RingElement:
    """Class of X, a root of unity of order dividing n."""
    return ctx.element([0, 1])


def xi_order(ctx: RingContext) -> int:
    one = ctx.one()
    x = xi(ctx)
    p = x
    for k in range(1, ctx.n + 1):
        if p == one:
            return k
        p = ring_mul(p, x)
    raise ArithmeticError(f"xi has no order <= n in {ctx!r}")


@lru_cache(maxsize=None)
def _xi_table(ctx: RingContext) -> tuple[RingElement, ...]:
    x = xi(ctx)
    table = [ctx.one()]
    for _ in range(ctx.n - 1):
        table.append(ring_mul(table[-1], x))
    return tuple(table)


def xi_power(ctx: RingContext, k: int) -> RingElement:
    """xi^k, read from a per-context table (xi^n = 1 makes k mod n exact)."""
    return _xi_table(ctx)[k % ctx.n]


def _shift_into(ctx: RingContext, acc: list[int], k: int, coeffs: Sequence[int]) -> None:
    # acc += xi^k * coeffs, unreduced; row j of the table holds xi^j
    n, table = ctx.n, _xi_table(ctx)
    for i, c in enumerate(coeffs):
        if c:
            row = table[(i + k) % n].coeffs
            for j, r in enumerate(row):
                if r:
                    acc[j] += c * r


def xi_shift(ctx: RingContext, k: int, x: RingElement, add: RingElement | None = None) -> RingElement:
    """xi^k * x (+ add), as a sum of rows of the xi-power table (cheaper than ring_mul)."""
    if x.context is not ctx or (add is not None and add.context is not ctx):
        raise ContextMismatch(f"{ctx!r} vs {x.context!r}")
    acc = list(add.coeffs) if add is not None else [0] * ctx.degree
    _shift_into(ctx, acc, k, x.coeffs)
    n = ctx.n
    return RingElement(ctx, tuple(a % n for a in acc))


def chi_value(ctx: RingContext, k: int) -> RingElement:
    """1 + xi^k + xi^2k + ... + xi^(n-1)k, evaluated in R."""
    step = xi_power(ctx, k)
    term = ctx.one()
    total = ctx.zero()
    for _ in range(ctx.n):
        total = ring_add(total, term)
        term = ring_mul(term, step)
    return total
