"""Physical parameter records for the gas and the test particle.

Natural units are used throughout the package: hbar = kB = 1.  Masses,
momenta and energies must be supplied in one consistent system; no unit
conversion is performed anywhere.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import FugacityOutOfRange

MB = "mb"
BE = "be"
FD = "fd"
STATISTICS = (MB, BE, FD)

# g_{3/2}(1) = zeta(3/2); BE density saturates here (condensation threshold)
_ZETA_32 = 2.6123753486854883


def thermal_wavelength(beta: float, m: float) -> float:
    """Thermal de Broglie wavelength lambda_T = sqrt(2 pi beta / m)."""
    return np.sqrt(2.0 * np.pi * beta / m)


def mb_fugacity(n: float, beta: float, m: float) -> float:
    """Maxwell-Boltzmann fugacity z = n * (2 pi beta / m)^(3/2).

    This is the classical-gas closure between density and fugacity; it is
    exact for MB statistics and the z << 1 limit of BE/FD.
    """
    if n <= 0 or beta <= 0 or m <= 0:
        raise ValueError("n, beta, m must all be positive")
    return n * (2.0 * np.pi * beta / m) ** 1.5


def _poly32(z: float, sign: float) -> float:
    """(2/sqrt(pi)) * int_0^inf sqrt(x) / (exp(x)/z + sign) dx.

    sign = -1 gives g_{3/2}(z) (Bose), sign = +1 gives f_{3/2}(z) (Fermi).
    Valid for z in (0,1) when sign = -1 and any z > 0 when sign = +1.
    """
    # 1/(e^x/z + sign) = z e^-x / (1 + sign z e^-x), overflow free
    integrand = lambda x: np.sqrt(x) * z * np.exp(-x) / (1.0 + sign * z * np.exp(-x))
    val, _ = quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return 2.0 / np.sqrt(np.pi) * val


def ideal_gas_density(z: float, beta: float, m: float, statistics: str) -> float:
    """Number density of the ideal gas at fugacity z.

    n = z / lambda_T^3 for MB, g_{3/2}(z) / lambda_T^3 for BE and
    f_{3/2}(z) / lambda_T^3 for FD.
    """
    _check_fugacity(z, statistics)
    lam3 = thermal_wavelength(beta, m) ** 3
    if statistics == MB:
        return z / lam3
    sign = -1.0 if statistics == BE else 1.0
    return _poly32(z, sign) / lam3


def fugacity_from_density(n: float, beta: float, m: float, statistics: str) -> float:
    """Invert the ideal-gas equation of state for the fugacity.

    Raises FugacityOutOfRange for a BE gas denser than the condensation
    threshold g_{3/2}(1)/lambda_T^3 (no normal-phase solution exists).
    """
    if n <= 0:
        raise ValueError("density must be positive")
    if statistics == MB:
        return mb_fugacity(n, beta, m)
    lam3 = thermal_wavelength(beta, m) ** 3
    target = n * lam3
    if statistics == BE:
        if target >= _ZETA_32:
            raise FugacityOutOfRange(
                f"BE density n*lambda_T^3 = {target:.6g} at or above the "
                f"condensation threshold {_ZETA_32:.6g}"
            )
        f = lambda z: _poly32(z, -1.0) - target
        return brentq(f, 1e-300, 1.0 - 1e-13, xtol=1e-300, rtol=8.9e-16)
    # FD: f_{3/2} is unbounded, expand the bracket until it straddles
    hi = 1.0
    while _poly32(hi, 1.0) < target:
        hi *= 4.0
    f = lambda z: _poly32(z, 1.0) - target
    return brentq(f, 1e-300, hi, xtol=1e-300, rtol=8.9e-16)


def _check_fugacity(z: float, statistics: str) -> None:
    if statistics not in STATISTICS:
        raise ValueError(f"unknown statistics {statistics!r}, expected one of {STATISTICS}")
    if statistics == BE:
        if not 0.0 < z < 1.0:
            raise FugacityOutOfRange(f"BE fugacity must satisfy 0 < z < 1, got {z}")
    elif z <= 0.0:
        raise FugacityOutOfRange(f"{statistics.upper()} fugacity must be positive, got {z}")


@dataclass(frozen=True)
class GasSpec:
    """Homogeneous ideal gas: particle mass, inverse temperature, density,
    fugacity and quantum statistics tag ('mb' | 'be' | 'fd')."""

    m: float
    beta: float
    n: float
    z: float
    statistics: str = MB

    def __post_init__(self):
        if self.m <= 0 or self.beta <= 0 or self.n <= 0:
            raise ValueError("m, beta, n must all be positive")
        _check_fugacity(self.z, self.statistics)

    @classmethod
    def maxwell_boltzmann(cls, m: float, beta: float, n: float) -> "GasSpec":
        """MB gas with the fugacity fixed by the classical equation of state."""
        return cls(m=m, beta=beta, n=n, z=mb_fugacity(n, beta, m), statistics=MB)

    @classmethod
    def from_density(cls, m: float, beta: float, n: float, statistics: str) -> "GasSpec":
        """Gas of given density; fugacity solved from the ideal-gas EOS."""
        z = fugacity_from_density(n, beta, m, statistics)
        return cls(m=m, beta=beta, n=n, z=z, statistics=statistics)

    @classmethod
    def from_fugacity(cls, m: float, beta: float, z: float, statistics: str) -> "GasSpec":
        """Gas of given fugacity; density from the ideal-gas EOS."""
        n = ideal_gas_density(z, beta, m, statistics)
        return cls(m=m, beta=beta, n=n, z=z, statistics=statistics)

    def with_fugacity(self, z: float) -> "GasSpec":
        return replace(self, z=z)

    @property
    def lambda_t(self) -> float:
        return thermal_wavelength(self.beta, self.m)


@dataclass(frozen=True)
class ParticleSpec:
    """Test particle of mass M immersed in the gas."""

    M: float

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError("test-particle mass M must be positive")

    def alpha(self, gas: GasSpec) -> float:
        """Mass ratio alpha = m / M (small in the Brownian limit)."""
        return gas.m / self.M


@dataclass(frozen=True)
class SFQuery:
    """Momentum transfer and test-particle momentum for a structure-factor
    evaluation.

    ``q`` may be a scalar magnitude (taken along the z axis), a 3-vector, or
    arrays of either (vectors are recognized by a trailing axis of length 3).
    ``p`` follows the same convention.  Everything broadcasts.
    """

    q: object
    p: object = 0.0

    def resolve(self):
        """Reduce to the two scalars the physics depends on: (|q|, p . q)."""
        qmag, qz = _magnitude_and_z(self.q)
        if _is_vector(self.p):
            p = np.asarray(self.p, dtype=float)
            if _is_vector(self.q):
                qv = np.asarray(self.q, dtype=float)
                pdotq = np.sum(p * qv, axis=-1)
            else:
                pdotq = p[..., 2] * qz
        else:
            pdotq = np.asarray(self.p, dtype=float) * qz
        return qmag, pdotq


def _is_vector(v) -> bool:
    a = np.asarray(v)
    return a.ndim >= 1 and a.shape[-1] == 3


def _magnitude_and_z(q):
    """(|q|, q_z) with scalar q interpreted as a magnitude along z."""
    a = np.asarray(q, dtype=float)
    if _is_vector(q):
        return np.sqrt(np.sum(a * a, axis=-1)), a[..., 2]
    return np.abs(a), a
