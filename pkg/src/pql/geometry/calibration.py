"""Measured four-point constant of H^2 and the frozen octagon data.

The constant is estimated once (random quadruples in a box, then local
maximisation from the best ones) and written to a versioned JSON file that
every delta-dependent check reads back.
"""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .fuchsian import genus2_fuchsian, genus2_generators, relator_error
from .hyperbolic import SearchDomain, four_point_defect, injectivity_radius_estimate, stable_translation_length

CALIBRATION_VERSION = 1
CALIBRATION_BOX = SearchDomain(-5.0, 5.0, -5.0, 5.0)
DEFAULT_PATH = Path("pql-calibration.json")


class CalibrationMissing(FileNotFoundError):
    pass


def _quad_from_params(u: np.ndarray, box: SearchDomain) -> list[complex] | None:
    pts = []
    for k in range(4):
        x, t = u[2 * k], u[2 * k + 1]
        if not (box.re_min <= x <= box.re_max and box.log_im_min <= t <= box.log_im_max):
            return None
        pts.append(complex(x, math.exp(t)))
    return pts


def sample_quadruples(rng: np.random.Generator, size: int, box: SearchDomain = CALIBRATION_BOX):
    return [box.sample(rng, size) for _ in range(4)]


def estimate_delta(samples: int, seed: int = 0, box: SearchDomain = CALIBRATION_BOX,
                   refine_top: int = 16, chunk: int = 250_000) -> dict:
    rng = np.random.default_rng(seed)
    best_vals = np.empty(0)
    best_quads = np.empty((0, 4), dtype=complex)
    remaining = samples
    while remaining > 0:
        m = min(chunk, remaining)
        quad = sample_quadruples(rng, m, box)
        dd = four_point_defect(*quad)
        top = np.argsort(dd)[-refine_top:]
        best_vals = np.concatenate([best_vals, dd[top]])
        best_quads = np.concatenate([best_quads, np.stack([q[top] for q in quad], axis=1)])
        remaining -= m
    sampled_max = float(best_vals.max())
    keep = np.argsort(best_vals)[-refine_top:]

    def neg_defect(u):
        pts = _quad_from_params(u, box)
        return math.inf if pts is None else -float(four_point_defect(*pts))

    refined = sampled_max
    for idx in keep:
        q = best_quads[idx]
        u0 = np.ravel([[z.real, math.log(z.imag)] for z in q])
        res = minimize(neg_defect, u0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000, "maxfev": 40000})
        if np.isfinite(res.fun):
            refined = max(refined, -float(res.fun))
    return {"sampled_max": sampled_max, "delta_hat": refined}


def calibrate(samples: int = 1_000_000, seed: int = 0) -> dict:
    est = estimate_delta(samples, seed)
    fuchs = genus2_fuchsian()
    lengths = [stable_translation_length(M) for M in fuchs]
    return {
        "version": CALIBRATION_VERSION,
        "samples": samples,
        "seed": seed,
        "box": {"re": [CALIBRATION_BOX.re_min, CALIBRATION_BOX.re_max],
                "log_im": [CALIBRATION_BOX.log_im_min, CALIBRATION_BOX.log_im_max]},
        "delta_hat": est["delta_hat"],
        "delta_sampled_max": est["sampled_max"],
        "octagon": {
            "generators": [M.to_json() for M in genus2_generators()],
            "relator_error": relator_error(fuchs),
            "translation_length": lengths[0],
            "injectivity_radius_L3": injectivity_radius_estimate(genus2_generators(), 3),
        },
    }


def write_calibration(data: dict, path: str | Path = DEFAULT_PATH) -> Path:
    path = Path(path)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path


def load_calibration(path: str | Path | None = None) -> dict:
    """Read a calibration file; ``None`` selects the copy frozen into the package."""
    if path is None:
        text = resources.files("pql.data").joinpath("calibration.json").read_text()
    else:
        path = Path(path)
        if not path.exists():
            raise CalibrationMissing(f"calibration file {path} not found; run 'pql calibrate' first")
        text = path.read_text()
    data = json.loads(text)
    if data.get("version") != CALIBRATION_VERSION:
        raise ValueError(f"unsupported calibration version {data.get('version')!r}")
    return data
