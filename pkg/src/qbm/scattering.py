"""T-matrix models for the test particle / gas collisions.

The collision kernel only ever sees |t_tilde(q)|^2, the squared Fourier
transform of the effective interaction, as a function of the momentum
transfer magnitude (energy dependence is neglected).  Three models:

    Gaussian  t(x) = v0 exp(-|x|^2 / r0^2)
              t_tilde(q) = pi^(3/2) (2 pi)^-3 v0 r0^3 exp(-q^2 r0^2 / 4)
    Contact   t(x) = (2 pi / M) a0 delta^3(x)
              t_tilde(q) = a0 / (4 pi^2 M)          (q independent)
    Tabulated |t_tilde|^2 sampled on a strictly increasing q grid,
              monotone-cubic interpolated, clamped to zero past the table.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ExtrapolationBeyondTable, FugacityOutOfRange
from .gas import BE, FD, MB, thermal_wavelength  # noqa: F401  (re-exported op)


@dataclass(frozen=True)
class GaussianPotential:
    """Short-range Gaussian interaction of strength v0 and range r0."""

    v0: float
    r0: float

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError("Gaussian range r0 must be positive")


@dataclass(frozen=True)
class ContactPotential:
    """Zero-range interaction of scattering length a0 for a particle of
    mass M (the mass enters the T-matrix normalization)."""

    a0: float
    M: float

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError("test-particle mass M must be positive")


@dataclass(frozen=True)
class TabulatedTMatrix:
    """|t_tilde(q)|^2 given by samples on a strictly increasing q grid."""

    q: np.ndarray
    t2: np.ndarray
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        t2 = np.asarray(self.t2, dtype=float)
        if q.ndim != 1 or q.shape != t2.shape or q.size < 2:
            raise ValueError("table needs matching 1D q and |t|^2 arrays, length >= 2")
        if np.any(np.diff(q) <= 0):
            raise ValueError("table q samples must be strictly increasing")
        if np.any(t2 < 0):
            raise ValueError("|t_tilde|^2 samples must be non-negative")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "_interp", PchipInterpolator(q, t2, extrapolate=False))

    @classmethod
    def from_file(cls, path) -> "TabulatedTMatrix":
        """Load a two-column whitespace-separated table ``q |t_tilde|^2``.
        Lines starting with '#' are comments."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns 'q |t_tilde|^2'")
        return cls(q=data[:, 0], t2=data[:, 1])

    @property
    def q_max(self) -> float:
        return float(self.q[-1])


ScatteringModel = GaussianPotential | ContactPotential | TabulatedTMatrix


def t_tilde_sq(model: ScatteringModel, q):
    """|t_tilde(q)|^2 for any of the three models; vectorized in q >= 0.

    Tabulated queries beyond the last sample return 0 and record an
    ExtrapolationBeyondTable warning.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("momentum transfer magnitude q must be >= 0")
    if isinstance(model, GaussianPotential):
        amp = np.pi**1.5 * (2.0 * np.pi) ** -3 * model.v0 * model.r0**3
        out = amp * amp * np.exp(-q * q * model.r0 * model.r0 / 2.0)
    elif isinstance(model, ContactPotential):
        out = np.broadcast_to((model.a0 / (4.0 * np.pi**2 * model.M)) ** 2, q.shape).copy()
    elif isinstance(model, TabulatedTMatrix):
        beyond = q > model.q[-1]
        if np.any(beyond):
            warnings.warn(
                f"T-matrix table queried at q up to {np.max(q):.6g}, beyond its "
                f"last sample {model.q[-1]:.6g}; clamping to zero",
                ExtrapolationBeyondTable,
                stacklevel=2,
            )
        # below the first sample hold the first value flat (pchip would
        # otherwise extrapolate and could go negative)
        qc = np.clip(q, model.q[0], model.q[-1])
        out = np.where(beyond, 0.0, np.maximum(model._interp(qc), 0.0))
    else:
        raise TypeError(f"unknown scattering model {type(model).__name__}")
    return out[()] if out.ndim == 0 else out


def zeta(z: float, statistics: str) -> float:
    """Statistics factor multiplying the momentum-diffusion coefficient.

    z for MB, z/(1-z) for BE (enhancement), z/(1+z) for FD (blocking).
    """
    if statistics == MB:
        if z <= 0:
            raise FugacityOutOfRange(f"MB fugacity must be positive, got {z}")
        return z
    if statistics == BE:
        if not 0.0 < z < 1.0:
            raise FugacityOutOfRange(f"BE fugacity must satisfy 0 < z < 1, got {z}")
        return z / (1.0 - z)
    if statistics == FD:
        if z <= 0:
            raise FugacityOutOfRange(f"FD fugacity must be positive, got {z}")
        return z / (1.0 + z)
    raise ValueError(f"unknown statistics {statistics!r}")


def upsilon(r0: float, lambda_t: float) -> float:
    """Squared range-to-thermal-wavelength ratio: upsilon = 8 pi r0^2 / lambda_T^2.

    Equivalently upsilon = 4 m r0^2 / beta in natural units.
    """
    if r0 <= 0 or lambda_t <= 0:
        raise ValueError("r0 and lambda_T must be positive")
    return 8.0 * np.pi * r0 * r0 / (lambda_t * lambda_t)
