"""Interferometer configuration and Heisenberg-picture statistics of output mode b.

The output annihilation operator of mode b is a linear combination of the
input vacuum operators,

.. math::
    b_{out} = e^{i\\Phi/2}\\left[c(b\\cosh r - b^\\dagger\\sinh r) + is(a + \\alpha)\\right],

with :math:`c = \\cos(\\theta/2)`, :math:`s = \\sin(\\theta/2)`. Everything in this
module holds for a general complex coherent amplitude. Downstream closed forms
(N-precision, optimal phase) assume the variance-minimising phase
``alpha = -1j * abs(alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInput


def db_to_r(db: float) -> float:
    """Convert a squeezing level in decibels to the squeezing parameter r."""
    return db * math.log(10.0) / 20.0


def r_to_db(r: float) -> float:
    return 20.0 * r / math.log(10.0)


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical scenario: coherent amplitude, squeezing, sum and difference phase.

    Parameters
    ----------
    alpha : complex
        Coherent amplitude injected into mode a.
    r : float
        Squeezing parameter of the vacuum injected into mode b (``r >= 0``).
    theta : float
        Difference phase ``theta_a - theta_b`` in radians.
    phi : float
        Sum phase ``theta_a + theta_b`` in radians.
    """

    alpha: complex
    r: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"squeezing r must be finite and >= 0, got {self.r}")
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("phases must be finite")
        if not (math.isfinite(self.alpha.real) and math.isfinite(self.alpha.imag)):
            raise ValueError("alpha must be finite")

    @classmethod
    def from_arm_phases(cls, alpha, r, theta_a, theta_b):
        """Build from the individual arm phase shifts."""
        return cls(alpha, r, theta=theta_a - theta_b, phi=theta_a + theta_b)

    @classmethod
    def standard(cls, alpha_abs, r, theta=0.0, phi=0.0):
        """Build with the variance-minimising amplitude ``alpha = -i|alpha|``."""
        return cls(-1j * abs(alpha_abs), r, theta, phi)

    @classmethod
    def from_db(cls, alpha, db, theta=0.0, phi=0.0):
        return cls(alpha, db_to_r(db), theta, phi)

    @property
    def alpha_abs(self) -> float:
        return abs(self.alpha)

    @property
    def alpha_sq(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def c(self) -> float:
        return math.cos(self.theta / 2)

    @property
    def s(self) -> float:
        return math.sin(self.theta / 2)

    @property
    def theta_a(self) -> float:
        return (self.phi + self.theta) / 2

    @property
    def theta_b(self) -> float:
        return (self.phi - self.theta) / 2

    def with_theta(self, theta) -> "InterferometerConfig":
        return InterferometerConfig(self.alpha, self.r, theta, self.phi)

    def with_phi(self, phi) -> "InterferometerConfig":
        return InterferometerConfig(self.alpha, self.r, self.theta, phi)


@dataclass(frozen=True)
class ModeTransform:
    """Coefficients of ``b_out = coeff_b*b + coeff_bdag*b^dag + coeff_a*a + displacement``."""

    coeff_b: complex
    coeff_bdag: complex
    coeff_a: complex
    displacement: complex

    def commutator(self) -> float:
        """``[b_out, b_out^dag]``; equals 1 for a valid bosonic mode."""
        return abs(self.coeff_b) ** 2 - abs(self.coeff_bdag) ** 2 + abs(self.coeff_a) ** 2


@dataclass(frozen=True)
class ScenarioScalars:
    epsilon: float
    h: float
    n_total: float


def output_mode_transform(cfg: InterferometerConfig) -> ModeTransform:
    phase = complex(math.cos(cfg.phi / 2), math.sin(cfg.phi / 2))
    c, s = cfg.c, cfg.s
    return ModeTransform(
        coeff_b=phase * c * math.cosh(cfg.r),
        coeff_bdag=-phase * c * math.sinh(cfg.r),
        coeff_a=phase * 1j * s,
        displacement=phase * 1j * s * cfg.alpha,
    )


def mean_photon_number(cfg: InterferometerConfig) -> float:
    """Mean photon number in output mode b."""
    c, s = cfg.c, cfg.s
    return c * c * math.sinh(cfg.r) ** 2 + s * s * cfg.alpha_sq


def photon_number_variance(cfg: InterferometerConfig) -> float:
    """Photon-number variance in output mode b for a general complex alpha."""
    c, s = cfg.c, cfg.s
    ch, sh = math.cosh(cfg.r), math.sinh(cfg.r)
    a = cfg.alpha
    beat = abs(a * ch + a.conjugate() * sh) ** 2
    return (
        s**4 * cfg.alpha_sq
        + s * s * c * c * sh * sh
        + 2 * c**4 * ch * ch * sh * sh
        + s * s * c * c * beat
    )


def scenario_scalars(cfg: InterferometerConfig) -> ScenarioScalars:
    """Photon-number ratio epsilon, the auxiliary h term and the total photon number.

    Raises
    ------
    DegenerateInput
        If ``alpha == 0`` (epsilon is undefined).
    """
    if cfg.alpha_abs == 0:
        raise DegenerateInput("epsilon = sinh^2 r / |alpha|^2 is undefined for alpha = 0")
    sh2 = math.sinh(cfg.r) ** 2
    c, s = cfg.c, cfg.s
    h = s * s * c * c + 2 * math.cosh(cfg.r) ** 2 * c**4
    return ScenarioScalars(epsilon=sh2 / cfg.alpha_sq, h=h, n_total=cfg.alpha_sq + sh2)
