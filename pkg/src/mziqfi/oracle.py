"""Brute-force Fock-space oracle for the interferometer output.

The two-mode output state is built by applying, to ``|0,0>``, the displacement
of mode a, the squeezer on mode b, the balanced beam splitter, the arm phase
shifts and the inverse beam splitter. Every stage is the matrix exponential of
its generator truncated to ``D`` levels per mode, so truncation shows up only
as population near the top Fock levels (see :func:`tail_mass`).

Amplitude tensors are indexed ``[n_a, n_b]``. Phase derivatives are exact:
differentiating the diagonal phase stage inserts ``(i/2)(n_a - n_b)`` for theta
and ``(i/2)(n_a + n_b)`` for phi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import IllConditioned, TruncationWarning
from .gaussian import SingleModeGaussian
from .interferometer import InterferometerConfig

TAIL_THRESHOLD = 1e-10
EPS_CUT = 1e-14
SENSITIVITY_RTOL = 1e-4


@dataclass(frozen=True)
class FockCutoff:
    dim: int

    def __post_init__(self):
        if int(self.dim) < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.dim}")


@dataclass(frozen=True)
class TwoModeState:
    amplitudes: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.ravel()

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class SingleModeDensity:
    rho: np.ndarray

    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))


def _matrix(x) -> np.ndarray:
    return x.rho if isinstance(x, SingleModeDensity) else np.asarray(x)


def default_cutoff(alpha: complex, r: float) -> int:
    """Per-mode truncation large enough for a ~1e-12 squeezed and coherent tail."""
    a = abs(alpha)
    dim = math.ceil(a * a + 6 * a + 10 * math.sinh(r) ** 2 + 15)
    if r > 0:
        dim = max(dim, math.ceil(12 * math.log(10) / -math.log(math.tanh(r))) + 4)
    return dim


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def tail_mass(state: TwoModeState) -> float:
    """Norm deficit plus the population of the top two Fock levels of each mode."""
    p = np.abs(state.amplitudes) ** 2
    top = p[-2:, :].sum() + p[:, -2:].sum() - p[-2:, -2:].sum()
    return float(max(0.0, 1.0 - p.sum()) + top)


class FockWorkspace:
    """Cached operators for one ``(cutoff, alpha, r)``; phases are supplied per call.

    A workspace holds mutable caches and is meant for a single owner; build one per
    thread for concurrent use.
    """

    def __init__(self, alpha: complex, r: float, cutoff: Optional[int] = None):
        self.alpha = complex(alpha)
        self.r = float(r)
        self.cutoff = FockCutoff(int(cutoff or default_cutoff(alpha, r))).dim
        dim = self.cutoff
        a = annihilation(dim)
        disp = scipy.linalg.expm(self.alpha * a.T - np.conj(self.alpha) * a)
        sq = scipy.linalg.expm(0.5 * self.r * (a @ a - a.T @ a.T))
        self.input_state = TwoModeState(np.outer(disp[:, 0], sq[:, 0]))

        a_sp = sp.csr_matrix(a)
        eye = sp.identity(dim, format="csr")
        a_mode = sp.kron(a_sp, eye, format="csr")
        b_mode = sp.kron(eye, a_sp, format="csr")
        self._bs_gen = ((math.pi / 4) * (a_mode.T @ b_mode - a_mode @ b_mode.T)).tocsr()
        n = np.arange(dim)
        self._n_a = np.repeat(n, dim).astype(float)
        self._n_b = np.tile(n, dim).astype(float)
        self._mixed = expm_multiply(self._bs_gen, self.input_state.vector.astype(complex))

    def _evolve(self, theta, phi):
        theta_a, theta_b = (phi + theta) / 2, (phi - theta) / 2
        inside = np.exp(1j * (theta_a * self._n_a + theta_b * self._n_b)) * self._mixed
        cols = np.stack(
            [inside, 0.5j * (self._n_a - self._n_b) * inside, 0.5j * (self._n_a + self._n_b) * inside],
            axis=1,
        )
        out = expm_multiply(-self._bs_gen, cols)
        shape = (self.cutoff, self.cutoff)
        return [TwoModeState(out[:, k].reshape(shape)) for k in range(3)]

    def output_state(self, theta: float, phi: float = 0.0) -> TwoModeState:
        return self._evolve(theta, phi)[0]

    def point(self, theta: float, phi: float = 0.0) -> "FockPoint":
        psi, d_theta, d_phi = self._evolve(theta, phi)
        tail = max(tail_mass(psi), tail_mass(self.input_state))
        return FockPoint(theta, phi, psi, d_phi, d_theta, tail)


@dataclass(frozen=True)
class FockPoint:
    """Output state, its phase derivatives and reduced quantities at one working point."""

    theta: float
    phi: float
    state: TwoModeState
    d_phi: TwoModeState
    d_theta: TwoModeState
    tail: float

    @property
    def rho(self) -> SingleModeDensity:
        return reduce_density(self.state)

    def drho(self, wrt: str = "theta") -> np.ndarray:
        return density_derivative(self.state, self.d_theta if wrt == "theta" else self.d_phi)


def _checked(state: TwoModeState, tail: float, threshold: float = TAIL_THRESHOLD):
    if tail > threshold:
        warnings.warn(
            f"Fock truncation at D={state.cutoff} leaves tail mass {tail:.2e} > {threshold:.0e}",
            TruncationWarning,
            stacklevel=3,
        )
    return state


def fock_point(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> FockPoint:
    pt = FockWorkspace(cfg.alpha, cfg.r, cutoff).point(cfg.theta, cfg.phi)
    _checked(pt.state, pt.tail)
    return pt


def build_output_state(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> TwoModeState:
    return fock_point(cfg, cutoff).state


def derivative_state_theta(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> TwoModeState:
    return fock_point(cfg, cutoff).d_theta


def derivative_state_phi(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> TwoModeState:
    return fock_point(cfg, cutoff).d_phi


def reduce_density(state: TwoModeState) -> SingleModeDensity:
    """Trace out mode a: ``rho_b[m, n] = sum_k A[k, m] A[k, n]^*``."""
    amp = state.amplitudes
    return SingleModeDensity(amp.T @ amp.conj())


def density_derivative(state: TwoModeState, dstate: TwoModeState) -> np.ndarray:
    """``Tr_a(|dPsi><Psi| + |Psi><dPsi|)``."""
    amp, damp = state.amplitudes, dstate.amplitudes
    return damp.T @ amp.conj() + amp.T @ damp.conj()


def _sld_sum(p, blocks, eps_cut):
    total = p[:, None] + p[None, :]
    mask = total > eps_cut
    n = len(blocks)
    q = np.empty((n, n))
    for k in range(n):
        for l in range(k, n):
            val = 2 * np.sum(np.real(blocks[k][mask] * np.conj(blocks[l][mask])) / total[mask])
            q[k, l] = q[l, k] = val
    return q


def _sensitivity(q_a, q_b, what):
    scale = max(np.max(np.abs(q_a)), 1e-300)
    if np.max(np.abs(q_a - q_b)) > SENSITIVITY_RTOL * scale:
        raise IllConditioned(f"{what} changed by more than {SENSITIVITY_RTOL:g} relative under a tighter cutoff")


def sld_qfim(rho, drhos: Sequence[np.ndarray], eps_cut: float = EPS_CUT) -> np.ndarray:
    """QFIM from the spectral SLD formula ``2 Re(dk_ij dl_ji) / (p_i + p_j)``.

    Pairs with ``p_i + p_j <= eps_cut`` are dropped; the sum is recomputed with
    ``eps_cut / 10`` and :class:`IllConditioned` is raised if it moves.
    """
    p, vecs = np.linalg.eigh(_matrix(rho))
    blocks = [vecs.conj().T @ np.asarray(d) @ vecs for d in drhos]
    q = _sld_sum(p, blocks, eps_cut)
    _sensitivity(q, _sld_sum(p, blocks, eps_cut / 10), "SLD sum")
    return q


def sld_qfi(rho, drho, eps_cut: float = EPS_CUT) -> float:
    return float(sld_qfim(rho, [drho], eps_cut)[0, 0])


def _cfi_sum(p, dp, eps_p):
    mask = p > eps_p
    return float(np.sum(dp[mask] ** 2 / p[mask]))


def photon_counting_fisher(rho, drho, eps_p: float = EPS_CUT) -> float:
    """Classical Fisher information of the photon-number distribution."""
    p = np.real(np.diag(_matrix(rho)))
    dp = np.real(np.diag(np.asarray(drho)))
    f = _cfi_sum(p, dp, eps_p)
    _sensitivity(np.array(f), np.array(_cfi_sum(p, dp, eps_p / 10)), "photon-counting CFI")
    return f


def classical_fisher_number(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> float:
    pt = fock_point(cfg, cutoff)
    return photon_counting_fisher(pt.rho, pt.drho("theta"))


def oracle_qfi(cfg: InterferometerConfig, cutoff: Optional[int] = None) -> float:
    pt = fock_point(cfg, cutoff)
    return sld_qfi(pt.rho, pt.drho("theta"))


def pure_two_mode_qfi(state: TwoModeState, dstate: TwoModeState) -> float:
    """``4 (<dPsi|dPsi> - |<Psi|dPsi>|^2)`` for the full two-mode pure state."""
    psi, dpsi = state.vector, dstate.vector
    return float(4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2))


def photon_statistics(rho) -> tuple:
    """Mean and variance of the photon number."""
    p = np.real(np.diag(_matrix(rho)))
    n = np.arange(len(p))
    mean = float(n @ p)
    return mean, float((n * n) @ p - mean * mean)


def gaussian_moments(rho) -> SingleModeGaussian:
    """Mean field and normal/anomalous central moments extracted from a density matrix."""
    m = _matrix(rho)
    b = annihilation(m.shape[0])
    d = complex(np.trace(m @ b))
    c_n = float(np.real(np.trace(m @ b.T @ b))) - abs(d) ** 2
    c_a = complex(np.trace(m @ b @ b)) - d * d
    return SingleModeGaussian(d, c_n, c_a)
