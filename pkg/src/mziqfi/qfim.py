"""Quantum Fisher information matrix of output mode b on (phi, theta).

Parameter order is always ``(phi, theta)``: index 0 is the sum phase, index 1
the difference phase.

Between the fringes the mode is mixed (``lam > 1``) and the QFIM follows from
the Williamson decomposition ``sigma = lam S S^dag``::

    Q_kl = 4 lam^2 / (lam^2 + 1) Re(J_k^* J_l)
           + d_k lam d_l lam / (lam^2 - 1)
           + 2 d_k dvec^dag sigma^-1 d_l dvec

with ``J_k = S11^* d_k S12 - S12 d_k S11^*``. At a fringe the state is pure and
the QFIM jumps: the exact pure-state value ``Q0`` differs from the one-sided
limit ``Q0+`` by the curvature of ``lam``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotAtPurePoint, PureStateRegion
from .gaussian import (
    PURE_TOL,
    lambda_minus_one,
    lambda_sq_minus_one,
    output_squeezing,
    reduce_to_mode_b,
    squeezer_matrix,
    symplectic_eigenvalue_closed,
)
from .interferometer import InterferometerConfig

# Below this gap lam^2 - 1 is too small for the mixed formula to survive cancellation.
SWITCH_TOL = 1e-7
# Angular distance to the nearest multiple of pi that counts as sitting on a fringe.
FRINGE_TOL = 1e-14


class Regime(str, enum.Enum):
    MIXED = "Mixed"
    PURE_POINT = "PurePoint"
    PURE_LIMIT = "PureLimit"


@dataclass(frozen=True)
class QfimResult:
    q_phi_phi: float
    q_phi_theta: float
    q_theta_theta: float
    regime: Regime
    limit: Optional["QfimResult"] = None  # one-sided limit, reported at an exact fringe

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.q_phi_phi, self.q_phi_theta], [self.q_phi_theta, self.q_theta_theta]]
        )

    @property
    def theta_limit(self) -> float:
        """Difference-phase QFI approached from either side of the working point."""
        return (self.limit or self).q_theta_theta


@dataclass(frozen=True)
class ParamDerivatives:
    """Analytic derivatives of the mode-b moments with respect to (phi, theta).

    ``d_sigma[k]`` is ``d_k sigma``, ``d2_sigma[k, l]`` is ``d_k d_l sigma``,
    ``d_mean[k]`` is ``d_k (d, d*)``, ``d_s[k]`` is ``d_k S``.
    """

    sigma: np.ndarray
    lam: float
    lam_sq_minus_one: float
    d_sigma: np.ndarray
    d2_sigma: np.ndarray
    d_lambda: np.ndarray
    d_mean: np.ndarray
    d_r_out: np.ndarray
    s_matrix: np.ndarray
    d_s: np.ndarray
    j_phi: complex
    j_theta: complex

    @property
    def j(self) -> np.ndarray:
        return np.array([self.j_phi, self.j_theta])


def param_derivatives(cfg: InterferometerConfig) -> ParamDerivatives:
    th, r = cfg.theta, cfg.r
    ch, sh = math.cosh(r), math.sinh(r)
    e = complex(math.cos(cfg.phi), math.sin(cfg.phi))
    c, s = cfg.c, cfg.s
    g = c * c
    dg = -math.sin(th) / 2
    d2g = -math.cos(th) / 2

    m_theta = np.array([[2 * sh * sh, -2 * e * ch * sh], [-2 * e.conjugate() * ch * sh, 2 * sh * sh]])
    m_phi = np.array([[0, -2j * e * ch * sh], [2j * e.conjugate() * ch * sh, 0]])
    m_phiphi = np.array([[0, 2 * e * ch * sh], [2 * e.conjugate() * ch * sh, 0]])

    state = reduce_to_mode_b(cfg)
    sigma = state.sigma
    d_sigma = np.stack([g * m_phi, dg * m_theta])
    d2_sigma = np.array([[g * m_phiphi, dg * m_phi], [dg * m_phi, d2g * m_theta]])

    lam = symplectic_eigenvalue_closed(cfg)
    d_lam_theta = math.sin(th) * math.cos(th) * sh * sh / lam
    d_lambda = np.array([0.0, d_lam_theta])

    half = complex(math.cos(cfg.phi / 2), math.sin(cfg.phi / 2))
    dd_phi = 0.5j * state.d
    dd_theta = 1j * cfg.alpha * half * c / 2
    d_mean = np.array([[dd_phi, np.conj(dd_phi)], [dd_theta, np.conj(dd_theta)]])

    r_out = output_squeezing(cfg)
    x = s * s + math.exp(2 * r) * c * c
    dr_theta = 0.5 * (s * c * (1 - math.exp(2 * r)) / x - d_lam_theta / lam)
    cho, sho = math.cosh(r_out), math.sinh(r_out)
    s_matrix = squeezer_matrix(r_out, cfg.phi)
    ds_phi = np.array([[0, -1j * e * sho], [1j * e.conjugate() * sho, 0]])
    ds_theta = dr_theta * np.array([[sho, -e * cho], [-e.conjugate() * cho, sho]])
    d_s = np.stack([ds_phi, ds_theta])

    def _j(ds):
        return np.conj(s_matrix[0, 0]) * ds[0, 1] - s_matrix[0, 1] * np.conj(ds[0, 0])

    return ParamDerivatives(
        sigma=sigma,
        lam=lam,
        lam_sq_minus_one=lambda_sq_minus_one(cfg),
        d_sigma=d_sigma,
        d2_sigma=d2_sigma,
        d_lambda=d_lambda,
        d_mean=d_mean,
        d_r_out=np.array([0.0, dr_theta]),
        s_matrix=s_matrix,
        d_s=d_s,
        j_phi=complex(_j(ds_phi)),
        j_theta=complex(_j(ds_theta)),
    )


def _mean_term(der: ParamDerivatives, sigma_inv) -> np.ndarray:
    q = np.empty((2, 2))
    for k in range(2):
        for l in range(2):
            q[k, l] = 2 * np.real(der.d_mean[k].conj() @ sigma_inv @ der.d_mean[l])
    return q


def _result(q, regime, limit=None) -> QfimResult:
    off = 0.5 * (q[0, 1] + q[1, 0])
    return QfimResult(float(q[0, 0]), float(off), float(q[1, 1]), regime, limit)


def qfim_mixed(cfg: InterferometerConfig) -> QfimResult:
    """QFIM of the mixed mode-b state via its Williamson decomposition.

    Raises
    ------
    PureStateRegion
        If ``lam - 1 <= SWITCH_TOL``.
    """
    gap = lambda_minus_one(cfg)
    if gap <= SWITCH_TOL:
        raise PureStateRegion(f"lam - 1 = {gap:.3e} is within the pure-state switch tolerance")
    der = param_derivatives(cfg)
    lam2 = der.lam**2
    j = der.j
    q = 4 * lam2 / (lam2 + 1) * np.real(np.outer(j.conj(), j))
    q += np.outer(der.d_lambda, der.d_lambda) / der.lam_sq_minus_one
    q += _mean_term(der, np.linalg.inv(der.sigma))
    return _result(q, Regime.MIXED)


def _pure_parts(cfg, tol):
    gap = lambda_minus_one(cfg)
    if gap > tol:
        raise NotAtPurePoint(f"lam - 1 = {gap:.3e} exceeds {tol:.1e}; the state is mixed")
    der = param_derivatives(cfg)
    sigma_inv = np.linalg.inv(der.sigma)
    a = [sigma_inv @ der.d_sigma[k] for k in range(2)]
    return der, sigma_inv, a


def qfim_pure_point(cfg: InterferometerConfig) -> QfimResult:
    """QFIM of the exact pure state at a fringe."""
    der, sigma_inv, a = _pure_parts(cfg, PURE_TOL)
    q = np.array([[0.25 * np.real(np.trace(a[k] @ a[l])) for l in range(2)] for k in range(2)])
    q += _mean_term(der, sigma_inv)
    return _result(q, Regime.PURE_POINT)


def qfim_pure_limit(cfg: InterferometerConfig) -> QfimResult:
    """One-sided limit of the mixed-state QFIM as the working point approaches a fringe."""
    der, sigma_inv, a = _pure_parts(cfg, SWITCH_TOL)
    q = np.empty((2, 2))
    for k in range(2):
        for l in range(2):
            q[k, l] = 0.25 * np.real(
                np.trace(2 * sigma_inv @ der.d2_sigma[k, l] - a[k] @ a[l])
            )
    q += _mean_term(der, sigma_inv)
    return _result(q, Regime.PURE_LIMIT)


def fringe_distance(theta: float) -> float:
    """Angular distance from theta to the nearest fringe (multiple of pi)."""
    return abs(theta - math.pi * round(theta / math.pi))


def qfim(cfg: InterferometerConfig) -> QfimResult:
    """QFIM with automatic choice of formula.

    Mixed states use the Williamson formula. On an exact fringe the pure-state
    value is returned and the one-sided limit is attached as ``limit``. Close to
    a fringe (``lam - 1 <= SWITCH_TOL``) the limit formula is used directly.
    """
    if fringe_distance(cfg.theta) <= FRINGE_TOL:
        return _with_limit(qfim_pure_point(cfg), qfim_pure_limit(cfg))
    if lambda_minus_one(cfg) > SWITCH_TOL:
        return qfim_mixed(cfg)
    return qfim_pure_limit(cfg)


def _with_limit(point: QfimResult, limit: QfimResult) -> QfimResult:
    return QfimResult(point.q_phi_phi, point.q_phi_theta, point.q_theta_theta, point.regime, limit)


def two_mode_qfi(alpha_sq: float, r: float) -> float:
    """Difference-phase QFI when both output modes are measured."""
    if alpha_sq < 0 or r < 0:
        raise ValueError("alpha_sq and r must be non-negative")
    return alpha_sq * math.exp(2 * r) + math.sinh(r) ** 2
