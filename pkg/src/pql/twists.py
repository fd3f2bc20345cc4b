"""Dehn-twist endomorphisms of the standard surface presentation.

Two twist shapes are implemented, one per way a curve can split the surface:

* ``AlongA(j)`` twists along the non-separating curve a_j.  Everything off the
  dual curve b_j is fixed and ``b_j -> b_j a_j``.
* ``SeparatingCut(i)`` twists along gamma = [a1,b1]...[ai,bi].  The generators
  on the basepoint side are fixed; those on the far side are conjugated,
  ``x -> gamma x gamma^-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import words as W
from .report import CheckReport
from .surface import (QN, Homomorphism, SurfacePresentation, h1_hom, hom_apply,
                      hom_validate, qn_witness, separating_curve, standard_presentation)
from .words import Word


@dataclass(frozen=True)
class AlongA:
    j: int

    def __str__(self) -> str:
        return f"twist:a{self.j}"


@dataclass(frozen=True)
class SeparatingCut:
    i: int

    def __str__(self) -> str:
        return f"twist:sep:{self.i}"


TwistSpec = Union[AlongA, SeparatingCut]


def parse_twist_spec(text: str) -> TwistSpec:
    m = re.fullmatch(r"(?:twist:)?a(\d+)", text)
    if m:
        return AlongA(int(m.group(1)))
    m = re.fullmatch(r"(?:twist:)?sep:(\d+)", text)
    if m:
        return SeparatingCut(int(m.group(1)))
    raise ValueError(f"bad twist spec {text!r}; expected 'twist:aJ' or 'twist:sep:I'")


def all_twist_specs(g: int) -> list[TwistSpec]:
    return [AlongA(j) for j in range(1, g + 1)] + [SeparatingCut(i) for i in range(1, g)]


@dataclass(frozen=True)
class Endomorphism:
    genus: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != 2 * self.genus:
            raise ValueError("an endomorphism needs one image per generator")

    def __call__(self, w: Word) -> Word:
        return endo_apply(self, w)

    def table(self) -> dict[str, str]:
        names = W.surface_names(self.genus)
        return {name: W.format_word(img, names) for name, img in zip(names, self.images)}

    def to_json(self) -> dict[str, str]:
        return self.table()


def identity_endo(g: int) -> Endomorphism:
    return Endomorphism(g, tuple(W.generator(2 * g, k) for k in range(2 * g)))


def twist_curve(g: int, spec: TwistSpec) -> Word:
    p = standard_presentation(g)
    _check_spec(g, spec)
    if isinstance(spec, AlongA):
        return p.a(spec.j)
    return separating_curve(p, spec.i)


def _check_spec(g: int, spec: TwistSpec) -> None:
    if isinstance(spec, AlongA):
        if not 1 <= spec.j <= g:
            raise ValueError(f"AlongA index must be in [1, {g}], got {spec.j}")
    elif isinstance(spec, SeparatingCut):
        if not 1 <= spec.i < g:
            raise ValueError(f"SeparatingCut index must be in [1, {g - 1}], got {spec.i}")
    else:
        raise TypeError(f"not a twist spec: {spec!r}")


def twist(g: int, spec: TwistSpec) -> Endomorphism:
    p = standard_presentation(g)
    _check_spec(g, spec)
    images = list(p.generators())
    if isinstance(spec, AlongA):
        k = 2 * (spec.j - 1) + 1
        images[k] = p.b(spec.j) * p.a(spec.j)
    else:
        gamma = separating_curve(p, spec.i)
        for k in range(2 * spec.i, 2 * g):
            images[k] = gamma * images[k] * ~gamma
    return Endomorphism(g, tuple(images))


def endo_apply(e: Endomorphism, w: Word) -> Word:
    if w.rank != 2 * e.genus:
        raise W.AlphabetMismatch(f"word rank {w.rank} vs genus {e.genus}")
    out = W.identity(w.rank)
    for c in w.letters:
        img = e.images[abs(c) - 1]
        out = out * (img if c > 0 else ~img)
    return out


def endo_compose(e1: Endomorphism, e2: Endomorphism) -> Endomorphism:
    """(e1 o e2)(x) = e1(e2(x))."""
    if e1.genus != e2.genus:
        raise ValueError(f"genus mismatch: {e1.genus} vs {e2.genus}")
    return Endomorphism(e1.genus, tuple(endo_apply(e1, img) for img in e2.images))


def endo_power(e: Endomorphism, m: int) -> Endomorphism:
    if m < 0:
        raise ValueError("endo_power needs m >= 0")
    out = identity_endo(e.genus)
    for _ in range(m):
        out = endo_compose(e, out)
    return out


def endo_validate(p: SurfacePresentation, e: Endomorphism) -> bool:
    """True iff the relator is sent to a conjugate of the relator or of its inverse."""
    if p.genus != e.genus:
        raise ValueError(f"genus mismatch: {p.genus} vs {e.genus}")
    image = endo_apply(e, p.relator)
    return W.conjugacy_equal(image, p.relator) or W.conjugacy_equal(image, ~p.relator)


def abelianization_matrix(e: Endomorphism) -> np.ndarray:
    """Integer matrix whose column k is the exponent-sum vector of e(generator k)."""
    return np.array([W.exponent_sums(img) for img in e.images], dtype=np.int64).T


def abelianization_det(e: Endomorphism) -> int:
    return int(round(np.linalg.det(abelianization_matrix(e).astype(float))))


def growth_bound(g: int, spec: TwistSpec, n: int) -> int:
    """Largest generator-image length allowed for T^n: 1 + n|gamma| for a
    right-multiplication twist, 1 + 2n|gamma| for a conjugating one."""
    c = len(twist_curve(g, spec))
    return 1 + (n * c if isinstance(spec, AlongA) else 2 * n * c)


def make_witness(g: int, n: int, kind: str) -> Homomorphism:
    if kind in ("qn", "QnViaF"):
        return qn_witness(g, n)
    if kind in ("h1", "H1Mod"):
        return h1_hom(g, n)
    raise ValueError(f"unknown witness {kind!r}; expected 'qn' or 'h1'")


def verify_twist_power_trivial(g: int, n: int, spec: TwistSpec, witness: str = "qn",
                               endo: Endomorphism | None = None) -> CheckReport:
    """Check witness(T^n(x)) = witness(x) on every generator x.

    ``endo`` replaces ``twist(g, spec)``; it exists for fault injection.
    """
    report = CheckReport("twist-trivial", {"g": g, "n": n, "spec": str(spec), "witness": witness})
    p = standard_presentation(g)
    h = make_witness(g, n, witness)
    if h.target == QN and n <= 2:
        raise ValueError("the Q_n witness needs n > 2")
    if not report.add("witness kills relator", True, hom_validate(p, h), witness=h.table(p.names)):
        return report
    T = endo if endo is not None else twist(g, spec)
    report.add("twist validates", True, endo_validate(p, T), witness={"endomorphism": T.table()})
    Tn = endo_power(T, n)
    bound = growth_bound(g, spec, n)
    longest = max(len(img) for img in Tn.images)
    report.add("image length within growth bound", True, longest <= bound,
               witness={"longest": longest, "bound": bound})
    for name, x, img in zip(p.names, p.generators(), Tn.images):
        before, after = hom_apply(h, x), hom_apply(h, img)
        report.add(f"witness(T^n({name})) = witness({name})", _jsonish(before), _jsonish(after),
                   passed=before == after,
                   witness={"generator": name, "T^n image": W.format_word(img, p.names)})
    return report


def _jsonish(x):
    return x.to_json() if hasattr(x, "to_json") else x


def verify_commuting_twists(g: int, n: int, spec1: AlongA, spec2: AlongA) -> CheckReport:
    if not (isinstance(spec1, AlongA) and isinstance(spec2, AlongA)):
        raise TypeError("commuting-twist check takes two AlongA specs")
    if spec1.j == spec2.j:
        raise ValueError("the two curves must be disjoint (j != j')")
    report = CheckReport("twist-commute", {"g": g, "n": n, "spec1": str(spec1), "spec2": str(spec2)})
    T1, T2 = twist(g, spec1), twist(g, spec2)
    lhs, rhs = endo_compose(T1, T2), endo_compose(T2, T1)
    report.add("T1 T2 = T2 T1", True, lhs == rhs,
               witness={"T1T2": lhs.table(), "T2T1": rhs.table()})
    lhs = endo_power(endo_compose(T1, T2), n)
    rhs = endo_compose(endo_power(T1, n), endo_power(T2, n))
    report.add("(T1 T2)^n = T1^n T2^n", True, lhs == rhs,
               witness={"(T1T2)^n": lhs.table(), "T1^n T2^n": rhs.table()})
    return report


def corrupted_twist(g: int) -> Endomorphism:
    """Fault-injection hook: b1 -> a1, everything else fixed.  Not an automorphism."""
    images = list(identity_endo(g).images)
    images[1] = W.generator(2 * g, 0)
    return Endomorphism(g, tuple(images))
