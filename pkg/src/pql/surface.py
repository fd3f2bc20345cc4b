"""Surface-group presentations, simple closed curves in standard form,
and witness homomorphisms into F2, Q_n and H1(S; Z/n).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from . import words as W
from .qn import qn_element_order, qn_generators, qn_identity, qn_inv, qn_mul, qn_pow
from .words import Word


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int
    relator: Word

    @property
    def rank(self) -> int:
        return 2 * self.genus

    @property
    def names(self) -> list[str]:
        return W.surface_names(self.genus)

    def a(self, i: int) -> Word:
        return W.generator(self.rank, 2 * (i - 1))

    def b(self, i: int) -> Word:
        return W.generator(self.rank, 2 * (i - 1) + 1)

    def generators(self) -> list[Word]:
        return [W.generator(self.rank, k) for k in range(self.rank)]


def standard_presentation(g: int) -> SurfacePresentation:
    if g < 2:
        raise ValueError(f"genus must be >= 2 for a hyperbolic surface, got {g}")
    rank = 2 * g
    rel = W.identity(rank)
    for i in range(g):
        rel = rel * W.commutator(W.generator(rank, 2 * i), W.generator(rank, 2 * i + 1))
    return SurfacePresentation(g, rel)


@dataclass(frozen=True)
class NonSeparating:
    def __str__(self) -> str:
        return "nonsep"


@dataclass(frozen=True)
class Separating:
    index: int

    def __str__(self) -> str:
        return f"sep:{self.index}"


SccSpec = Union[NonSeparating, Separating]


def parse_scc_spec(text: str) -> SccSpec:
    if text == "nonsep":
        return NonSeparating()
    m = re.fullmatch(r"sep:(\d+)", text)
    if not m:
        raise ValueError(f"bad scc spec {text!r}; expected 'nonsep' or 'sep:i'")
    return Separating(int(m.group(1)))


def all_scc_specs(g: int) -> list[SccSpec]:
    return [NonSeparating()] + [Separating(i) for i in range(1, g)]


def separating_curve(p: SurfacePresentation, i: int) -> Word:
    """[a1,b1]...[ai,bi]"""
    out = W.identity(p.rank)
    for j in range(1, i + 1):
        out = out * W.commutator(p.a(j), p.b(j))
    return out


def scc_word(g: int, spec: SccSpec) -> Word:
    p = standard_presentation(g)
    if isinstance(spec, NonSeparating):
        return p.a(1)
    if not 1 <= spec.index < g:
        raise ValueError(f"separating index must satisfy 1 <= i < g, got i={spec.index}, g={g}")
    return separating_curve(p, spec.index)


# --- homomorphisms -------------------------------------------------------

@dataclass(frozen=True)
class H1Vector:
    n: int
    entries: tuple[int, ...]

    def __add__(self, other: "H1Vector") -> "H1Vector":
        return H1Vector(self.n, tuple((a + b) % self.n for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "H1Vector":
        return H1Vector(self.n, tuple((-a) % self.n for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_json(self) -> list[int]:
        return list(self.entries)


FREE2 = "free2"
QN = "qn"
H1 = "h1"


@dataclass(frozen=True)
class Homomorphism:
    """Generator-image map.  ``target`` is ``"free2"``, ``"qn"`` or ``"h1"``;
    ``n`` is the modulus for the finite targets."""
    domain_rank: int
    target: str
    images: tuple
    n: int | None = None

    def __post_init__(self):
        if len(self.images) != self.domain_rank:
            raise ValueError("one image per domain generator is required")

    def identity_element(self):
        if self.target == FREE2:
            return W.identity(2)
        if self.target == QN:
            return qn_identity(self.images[0].context)
        return H1Vector(self.n, (0,) * len(self.images[0].entries))

    def _mul(self, x, y):
        if self.target == QN:
            return qn_mul(x, y)
        return x + y if self.target == H1 else x * y

    def _inv(self, x):
        if self.target == QN:
            return qn_inv(x)
        return -x if self.target == H1 else W.invert(x)

    def table(self, names: Sequence[str] | None = None) -> dict[str, object]:
        names = names or W.default_names(self.domain_rank)
        out = {}
        for name, img in zip(names, self.images):
            out[name] = W.format_word(img, W.FREE2_NAMES) if self.target == FREE2 else img.to_json()
        return out


def hom_apply(h: Homomorphism, w: Word):
    if w.rank != h.domain_rank:
        raise W.AlphabetMismatch(f"word rank {w.rank} vs domain rank {h.domain_rank}")
    out = h.identity_element()
    inverses = {}
    for c in w.letters:
        img = h.images[abs(c) - 1]
        if c < 0:
            if c not in inverses:
                inverses[c] = h._inv(img)
            img = inverses[c]
        out = h._mul(out, img)
    return out


def is_target_identity(h: Homomorphism, x) -> bool:
    return x.is_zero() if h.target == H1 else x.is_identity()


def hom_validate(p: SurfacePresentation, h: Homomorphism) -> bool:
    """True iff the relator maps to the identity of the target."""
    if h.domain_rank != p.rank:
        raise ValueError(f"homomorphism domain rank {h.domain_rank} does not match genus {p.genus}")
    return is_target_identity(h, hom_apply(h, p.relator))


def f_hom(g: int) -> Homomorphism:
    """a1, bg -> a;  b1, ag -> b;  a_i, b_i -> 1 for 1 < i < g."""
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    a, b, e = W.generator(2, 0), W.generator(2, 1), W.identity(2)
    images = [e] * (2 * g)
    images[0] = a          # a1
    images[1] = b          # b1
    images[2 * g - 2] = b  # ag
    images[2 * g - 1] = a  # bg
    return Homomorphism(2 * g, FREE2, tuple(images))


def rho_hom(n: int) -> Homomorphism:
    """F2 -> Q_n, a -> A, b -> B."""
    A, B = qn_generators(n)
    return Homomorphism(2, QN, (A, B), n=n)


def compose(outer: Homomorphism, inner: Homomorphism) -> Homomorphism:
    if inner.target != FREE2 or outer.domain_rank != 2:
        raise ValueError("only composition through F2 is supported")
    return Homomorphism(inner.domain_rank, outer.target,
                        tuple(hom_apply(outer, img) for img in inner.images), n=outer.n)


def qn_witness(g: int, n: int) -> Homomorphism:
    """rho o f : Gamma -> Q_n."""
    return compose(rho_hom(n), f_hom(g))


def h1_hom(g: int, n: int) -> Homomorphism:
    rank = 2 * g
    images = tuple(H1Vector(n, tuple(1 if j == k else 0 for j in range(rank))) for k in range(rank))
    return Homomorphism(rank, H1, images, n=n)


def h1_image(g: int, n: int, w: Word) -> H1Vector:
    if w.rank != 2 * g:
        raise W.AlphabetMismatch(f"word rank {w.rank} vs genus {g}")
    return H1Vector(n, tuple(s % n for s in W.exponent_sums(w)))


def scc_witness_order(g: int, n: int, spec: SccSpec) -> int:
    """Order of rho(f(gamma)) in Q_n for the standard representative gamma."""
    gamma = scc_word(g, spec)
    return qn_element_order(hom_apply(qn_witness(g, n), gamma))


def scc_trivial_powers(g: int, n: int, spec: SccSpec) -> list[int]:
    """Exponents k in [1, n) with rho(f(gamma))^k = 1 (empty list certifies order exactly n)."""
    img = hom_apply(qn_witness(g, n), scc_word(g, spec))
    return [k for k in range(1, n) if qn_pow(img, k).is_identity()]

