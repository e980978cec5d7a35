"""Photon-counting precision of the difference phase (error propagation on N_b).

All functions assume the variance-minimising coherent phase
``alpha = -i|alpha|``; only ``|alpha|`` enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List

from .errors import DegenerateInput
from .interferometer import InterferometerConfig, scenario_scalars


@dataclass(frozen=True)
class PrecisionPoint:
    theta: float
    p_theta: float
    p_normalized: float
    sql_normalized: float = math.nan


@dataclass(frozen=True)
class OptimalPoint:
    theta_opt: float
    p_opt: float
    degenerate: bool = False


def sql(cfg: InterferometerConfig) -> float:
    """Standard quantum limit ``|alpha|^2 cos^2(theta/2)`` (no squeezing)."""
    return cfg.alpha_sq * cfg.c**2


def n_precision_value(cfg: InterferometerConfig) -> float:
    """Inverse phase variance from counting photons in mode b.

    Raises
    ------
    DegenerateInput
        If ``alpha == 0``.
    """
    sc = scenario_scalars(cfg)
    if cfg.r == 0:
        # Removable singularity at theta = 0; the r = 0 expression is the SQL.
        return sql(cfg)
    eps, h = sc.epsilon, sc.h
    s2, c2 = cfg.s**2, cfg.c**2
    num = (1 - eps) ** 2 * s2 * c2
    den = s2 * s2 + math.exp(-2 * cfg.r) * s2 * c2 + eps * h
    return cfg.alpha_sq * num / den


def n_precision(cfg: InterferometerConfig) -> PrecisionPoint:
    p = n_precision_value(cfg)
    return PrecisionPoint(cfg.theta, p, p / cfg.alpha_sq, cfg.c**2)


def optimal_theta(alpha_abs: float, r: float) -> float:
    """Positive optimal working point; ``-theta_opt`` is equally optimal.

    Returns 0 for ``r == 0``, where the precision plateaus at the black fringe.
    """
    if alpha_abs <= 0:
        raise DegenerateInput("optimal phase is undefined for alpha = 0")
    return 2 * math.atan(math.sqrt(math.sinh(2 * r) / (math.sqrt(2) * alpha_abs)))


def optimal_precision(alpha_sq: float, r: float) -> float:
    """Maximum of the photon-counting precision over theta.

    Raises
    ------
    DegenerateInput
        If ``alpha_sq <= 0`` or the squeezed mode carries at least as many photons
        as the coherent mode (``epsilon >= 1``).
    """
    if alpha_sq <= 0:
        raise DegenerateInput("optimal precision is undefined for alpha = 0")
    ch2 = math.cosh(r) ** 2
    eps = math.sinh(r) ** 2 / alpha_sq
    if eps >= 1:
        raise DegenerateInput(f"epsilon = {eps:.3g} >= 1: outside the weak-squeezing regime")
    e2r = math.exp(2 * r)
    return alpha_sq * e2r * (1 - eps) ** 2 / (1 + e2r * (eps + 2 * math.sqrt(2 * eps * ch2)))


def optimal_point(alpha_abs: float, r: float) -> OptimalPoint:
    theta = optimal_theta(alpha_abs, r)
    return OptimalPoint(theta, optimal_precision(alpha_abs**2, r), degenerate=(r == 0))


def precision_curve(template: InterferometerConfig, theta_grid: Iterable[float]) -> List[PrecisionPoint]:
    """N-precision at every theta of the grid, with the SQL curve alongside."""
    out = []
    for theta in theta_grid:
        if abs(theta) > math.pi:
            raise ValueError(f"theta {theta} outside [-pi, pi]")
        out.append(n_precision(template.with_theta(theta)))
    return out
