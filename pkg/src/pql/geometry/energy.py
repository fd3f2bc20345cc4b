"""L^1 / L^infinity energies of a finite set of isometries, and the restricted
L^1 energy with the basepoint kept out of given thin-part balls."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hyperbolic import HPoint, Isometry, SearchDomain, SearchResult, displacement, distance, minimize_over


@dataclass(frozen=True)
class EnergyConfig:
    isometries: tuple[Isometry, ...]
    domain: SearchDomain = field(default_factory=SearchDomain)
    excluded_balls: tuple[tuple[HPoint, float], ...] = ()

    def __post_init__(self):
        if not self.isometries:
            raise ValueError("energy needs a nonempty set of isometries")
        for _, radius in self.excluded_balls:
            if not radius > 0:
                raise ValueError("excluded ball radii must be positive")


def energy_at(cfg: EnergyConfig, p, z):
    disp = np.stack([displacement(M, z) for M in cfg.isometries])
    if p == 1:
        return disp.sum(axis=0)
    if p in (np.inf, "inf", float("inf")):
        return disp.max(axis=0)
    raise ValueError(f"p must be 1 or inf, got {p!r}")


def energy(cfg: EnergyConfig, p=1) -> SearchResult:
    return minimize_over(lambda z: energy_at(cfg, p, z), cfg.domain)


def thick_part(cfg: EnergyConfig, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    ok = np.ones(z.shape, dtype=bool)
    for center, radius in cfg.excluded_balls:
        ok &= distance(z, center.z) >= radius
    return ok


def restricted_energy(cfg: EnergyConfig) -> SearchResult:
    if not cfg.excluded_balls:
        raise ValueError("restricted energy needs excluded balls")
    return minimize_over(lambda z: energy_at(cfg, 1, z), cfg.domain,
                         feasible=lambda z: thick_part(cfg, z))
