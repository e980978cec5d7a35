"""Reduced Gaussian state of output mode b and its Williamson decomposition.

Covariances use the complex (annihilation/creation) convention in which the
vacuum has ``sigma = I``::

    sigma = [[1 + 2 C_N, 2 C_A], [2 C_A*, 1 + 2 C_N]]

with ``C_N = <db^dag db>`` and ``C_A = <db db>`` the central moments. In this
convention a single-mode state has purity ``1 / sqrt(det sigma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalState
from .interferometer import InterferometerConfig

PURE_TOL = 1e-9
PHYSICAL_TOL = 1e-9

K = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class SingleModeGaussian:
    """Mean field ``d`` and normal/anomalous central moments of one mode."""

    d: complex
    c_n: float
    c_a: complex

    @property
    def sigma(self) -> np.ndarray:
        return np.array(
            [
                [1 + 2 * self.c_n, 2 * self.c_a],
                [2 * np.conj(self.c_a), 1 + 2 * self.c_n],
            ],
            dtype=complex,
        )

    @property
    def mean_vector(self) -> np.ndarray:
        """``(d, d*)``."""
        return np.array([self.d, np.conj(self.d)], dtype=complex)

    def det_sigma(self) -> float:
        return (1 + 2 * self.c_n) ** 2 - 4 * abs(self.c_a) ** 2


@dataclass(frozen=True)
class WilliamsonDecomp:
    """``sigma = lam * S @ S^dag`` with ``S`` a single-mode squeezer of strength ``r_out``."""

    lam: float
    s_matrix: np.ndarray
    r_out: float
    phi: float

    def reconstruct(self) -> np.ndarray:
        return self.lam * self.s_matrix @ self.s_matrix.conj().T


def squeezer_matrix(r_out: float, phi: float) -> np.ndarray:
    e = complex(math.cos(phi), math.sin(phi))
    ch, sh = math.cosh(r_out), math.sinh(r_out)
    return np.array([[ch, -e * sh], [-e.conjugate() * sh, ch]], dtype=complex)


def reduce_to_mode_b(cfg: InterferometerConfig) -> SingleModeGaussian:
    """Gaussian moments of output mode b.

    For ``alpha = -i|alpha|`` the mean field is ``|alpha| e^{i phi/2} sin(theta/2)``;
    a general amplitude gives ``i alpha e^{i phi/2} sin(theta/2)``.
    """
    c2 = cfg.c**2
    ch, sh = math.cosh(cfg.r), math.sinh(cfg.r)
    half = complex(math.cos(cfg.phi / 2), math.sin(cfg.phi / 2))
    full = complex(math.cos(cfg.phi), math.sin(cfg.phi))
    return SingleModeGaussian(
        d=1j * cfg.alpha * half * cfg.s,
        c_n=c2 * sh * sh,
        c_a=-full * c2 * ch * sh,
    )


def lambda_sq_minus_one(cfg: InterferometerConfig) -> float:
    """``lam^2 - 1 = sin^2(theta) sinh^2(r)`` without cancellation."""
    return (math.sin(cfg.theta) * math.sinh(cfg.r)) ** 2


def lambda_minus_one(cfg: InterferometerConfig) -> float:
    x = lambda_sq_minus_one(cfg)
    return x / (1 + math.sqrt(1 + x))


def symplectic_eigenvalue_closed(cfg: InterferometerConfig) -> float:
    return math.sqrt(1 + lambda_sq_minus_one(cfg))


def symplectic_eigenvalue(state: SingleModeGaussian) -> float:
    """``sqrt(det sigma)``.

    Raises
    ------
    UnphysicalState
        If ``det sigma < 1 - 1e-9``.
    """
    det = state.det_sigma()
    if det < 1 - PHYSICAL_TOL:
        raise UnphysicalState(f"det(sigma) = {det!r} < 1")
    return math.sqrt(max(det, 1.0))


def purity(state: SingleModeGaussian) -> float:
    return 1.0 / symplectic_eigenvalue(state)


def is_pure(state: SingleModeGaussian, tol: float = PURE_TOL) -> bool:
    return abs(symplectic_eigenvalue(state) - 1) < tol


def williamson_from_covariance(sigma) -> WilliamsonDecomp:
    """Williamson decomposition of an arbitrary single-mode complex covariance.

    The input is first projected onto the Hermitian, equal-diagonal form (exact
    for closed-form states, a small correction for numerically extracted ones).
    A state with no anomalous correlation yields ``S = I`` and ``phi = 0``.
    """
    sigma = np.asarray(sigma, dtype=complex)
    diag = float(np.real(sigma[0, 0] + sigma[1, 1])) / 2
    off = (sigma[0, 1] + np.conj(sigma[1, 0])) / 2
    det = diag * diag - abs(off) ** 2
    if det < 1 - PHYSICAL_TOL:
        raise UnphysicalState(f"det(sigma) = {det!r} < 1")
    lam = math.sqrt(max(det, 1.0))
    if off == 0:
        return WilliamsonDecomp(lam, np.eye(2, dtype=complex), 0.0, 0.0)
    r_out = 0.5 * math.log((diag + abs(off)) / lam)
    phi = float(np.angle(-off))
    return WilliamsonDecomp(lam, squeezer_matrix(r_out, phi), r_out, phi)


def williamson(state: SingleModeGaussian) -> WilliamsonDecomp:
    return williamson_from_covariance(state.sigma)


def output_squeezing(cfg: InterferometerConfig) -> float:
    """``r_out = 1/2 ln[(sin^2(theta/2) + e^{2r} cos^2(theta/2)) / lam]``."""
    lam = symplectic_eigenvalue_closed(cfg)
    return 0.5 * math.log((cfg.s**2 + math.exp(2 * cfg.r) * cfg.c**2) / lam)


def williamson_closed_form(cfg: InterferometerConfig) -> WilliamsonDecomp:
    """Decomposition of the mode-b covariance directly from (theta, phi, r)."""
    lam = symplectic_eigenvalue_closed(cfg)
    r_out = output_squeezing(cfg)
    return WilliamsonDecomp(lam, squeezer_matrix(r_out, cfg.phi), r_out, cfg.phi)
