"""Hyperbolic cones of radius rho over a circle, and the conical law of cosines."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConeParams:
    rho: float
    total_angle: float = 2 * math.pi

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("cone radius must be positive")
        if self.total_angle < 2 * math.pi:
            raise ValueError("total angle must be at least 2 pi")

    @property
    def circumference(self) -> float:
        """Length of the base circle Y whose cone has total angle ``total_angle``."""
        return self.total_angle * math.sinh(self.rho)


def _check_radii(cp: ConeParams, *radii) -> None:
    for r in radii:
        if np.any(np.asarray(r) < 0) or np.any(np.asarray(r) > cp.rho):
            raise ValueError(f"radius outside [0, {cp.rho}]")


def _cone_kernel(r1, r2, angle):
    # cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(angle), written in
    # half-angle form: sinh^2(d/2) = sinh^2((r1-r2)/2) + sinh r1 sinh r2 sin^2(angle/2)
    h = np.sinh((r1 - r2) / 2.0) ** 2 + np.sinh(r1) * np.sinh(r2) * np.sin(angle / 2.0) ** 2
    out = 2.0 * np.arcsinh(np.sqrt(h))
    return float(out) if np.ndim(out) == 0 else out


def cone_distance(cp: ConeParams, dY, r1, r2):
    """Distance between (y, r1) and (y', r2) with d(y, y') = dY."""
    _check_radii(cp, r1, r2)
    if np.any(np.asarray(dY) < 0):
        raise ValueError("dY must be non-negative")
    angle = np.minimum(np.pi, np.asarray(dY) / math.sinh(cp.rho))
    return _cone_kernel(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float), angle)


def reduce_angle(cp: ConeParams, theta):
    """Representative of theta modulo the total angle in (-Theta/2, Theta/2]."""
    T = cp.total_angle
    t = np.mod(np.asarray(theta, dtype=float), T)
    return np.where(t > T / 2.0, t - T, t)


def cone_law_of_cosines(cp: ConeParams, theta, r1, r2):
    """ell with cosh ell = cosh r1 cosh r2 - sinh r1 sinh r2 cos(min(pi, |theta~|))."""
    _check_radii(cp, r1, r2)
    t = np.abs(reduce_angle(cp, theta))
    return _cone_kernel(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float), np.minimum(np.pi, t))


def cone_distance_acosh(cp: ConeParams, dY, r1, r2):
    """The displayed acosh form, kept for cross-checks away from d = 0."""
    angle = np.minimum(np.pi, np.asarray(dY) / math.sinh(cp.rho))
    val = np.cosh(r1) * np.cosh(r2) - np.sinh(r1) * np.sinh(r2) * np.cos(angle)
    return np.arccosh(np.maximum(val, 1.0))


def circle_distance(cp: ConeParams, y1, y2):
    """Arc-length distance on the base circle of circumference cp.circumference."""
    C = cp.circumference
    t = np.mod(np.asarray(y1) - np.asarray(y2), C)
    return np.minimum(t, C - t)
