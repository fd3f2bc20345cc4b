"""A genus-2 Fuchsian group from the regular octagon with vertex angle pi/4.

Sides are numbered 0..7 counter-clockwise (side k has its midpoint in
direction k pi/4) and labelled a1 b1 A1 B1 a2 b2 A2 B2.  With these side
pairings the product a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 is +-identity.
"""
from __future__ import annotations

import math

import numpy as np

from .hyperbolic import Isometry

# centre-to-side-midpoint distance: right triangle with angles pi/8, pi/8
INRADIUS = math.acosh(1.0 / math.tan(math.pi / 8))

_CAYLEY = np.array([[1, -1j], [1, 1j]])  # H -> D, z -> (z - i) / (z + i)
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


def _disk_rotation(phi: float) -> np.ndarray:
    return np.array([[np.exp(0.5j * phi), 0], [0, np.exp(-0.5j * phi)]])


def _disk_translation(t: float) -> np.ndarray:
    """Translation by signed distance t along the real diameter of the disk."""
    return np.array([[math.cosh(t / 2), math.sinh(t / 2)], [math.sinh(t / 2), math.cosh(t / 2)]], dtype=complex)


def side_pairing(src: int, dst: int) -> Isometry:
    """The orientation-preserving isometry taking side ``src`` onto side ``dst``
    and the octagon onto its neighbour across ``dst``."""
    th_src, th_dst = src * math.pi / 4, dst * math.pi / 4
    disk = _disk_rotation(th_dst - math.pi) @ _disk_translation(-2 * INRADIUS) @ _disk_rotation(-th_src)
    half = _CAYLEY_INV @ disk @ _CAYLEY
    if np.max(np.abs(half.imag)) > 1e-9:
        raise ArithmeticError("side pairing is not real after conjugation to H^2")
    return Isometry.from_matrix(half.real)


def genus2_generators() -> tuple[Isometry, Isometry, Isometry, Isometry]:
    """(a1, b1, a2, b2)."""
    a1 = side_pairing(2, 0)
    b1 = side_pairing(1, 3)
    a2 = side_pairing(6, 4)
    b2 = side_pairing(5, 7)
    return a1, b1, a2, b2


def genus2_fuchsian() -> tuple[Isometry, ...]:
    """The eight side pairings in relator order a1, b1, A1, B1, a2, b2, A2, B2."""
    a1, b1, a2, b2 = genus2_generators()
    return (a1, b1, a1.inverse(), b1.inverse(), a2, b2, a2.inverse(), b2.inverse())


def relator_product(mats) -> np.ndarray:
    out = np.eye(2)
    for M in mats:
        out = out @ M.matrix
    return out


def relator_error(mats) -> float:
    """Entrywise distance of the ordered product to the nearer of +I and -I."""
    P = relator_product(mats)
    return float(min(np.max(np.abs(P - np.eye(2))), np.max(np.abs(P + np.eye(2)))))


def expected_generator_length() -> float:
    """Closed form: |trace| = 2 cosh(INRADIUS) cos(pi/4) = 2 + sqrt 2."""
    return 2.0 * math.acosh(1.0 + math.sqrt(2.0) / 2.0)
