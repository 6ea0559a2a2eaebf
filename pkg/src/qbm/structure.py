"""Exact dynamic structure factors of the ideal quantum gas.

The structure factor S(q, E) is the spectral weight with which the gas hands
momentum q and energy E to the test particle.  Here E is the test particle's
kinetic-energy gain,

    E(q, p) = q^2 / 2M + p.q / M,

and the gas-side kinematics enter through

    sigma(q, p) = (q^2 + 2 m E(q, p)) / (2 |q|).

All evaluators share the prefactor

    K(q) = (2 pi)^-3 * 2 pi m^2 / (n beta q) = m^2 / (4 pi^2 n beta q)

and obey detailed balance S(q, E) = exp(-beta E) S(q, -E) at fixed |q|, which
is what makes the Maxwell state stationary under the collisional dynamics.

Closed forms (hbar = 1):

    MB:  S = K z exp[-(beta/2m) sigma^2]
    BE:  S = -K log(1 - (1-A) x_be) / (1-A),  x_be = z b / (1 - z a)
    FD:  S = +K log(1 + (1-A) x_fd) / (1-A),  x_fd = z b / (1 + z a)

with A = exp(beta E), b = exp[-(beta/2m) sigma^2], and
a = exp[-(beta/2m) (sigma - q)^2] = A b.  The point A = 1 (zero energy
transfer) is a removable singularity and is evaluated by series.

The Brownian limit keeps the exponent of the MB form to first order in the
mass ratio alpha = m/M:

    S_inf = K z exp(-beta q^2 / 8m) exp(-beta E / 2).
"""

import numpy as np

from .errors import DegenerateQ, FugacityOutOfRange, IndeterminatePoint
from .gas import BE, FD, MB, GasSpec, ParticleSpec, SFQuery

# switch to the series form of the BE/FD logarithms once |(1-A) x| is below
# this; the quartic series term is then < 1e-17 relative
_SERIES_CUT = 1e-4


def energy_transfer(q, p, particle: ParticleSpec):
    """Kinetic energy gained by the test particle absorbing momentum q.

    E = q^2/(2M) + p.q/M.  Total function; q = 0 gives 0.
    """
    query = SFQuery(q=q, p=p)
    qmag, pdotq = query.resolve()
    return qmag * qmag / (2.0 * particle.M) + pdotq / particle.M


def sigma(q, p, gas: GasSpec, particle: ParticleSpec):
    """Gas-side momentum coordinate sigma = (q^2 + 2 m E)/(2 |q|).

    Satisfies sigma(-E) = |q| - sigma(E) under energy reflection, which is
    the algebraic root of detailed balance.
    """
    qmag, pdotq = SFQuery(q=q, p=p).resolve()
    _require_nonzero_q(qmag)
    e = qmag * qmag / (2.0 * particle.M) + pdotq / particle.M
    return (qmag * qmag + 2.0 * gas.m * e) / (2.0 * qmag)


def s_mb(query: SFQuery, gas: GasSpec, particle: ParticleSpec):
    """Maxwell-Boltzmann dynamic structure factor."""
    _require_positive_z(gas.z, MB)
    qmag, e = _resolve_qe(query, particle)
    _require_nonzero_q(qmag)
    sig = _sigma_qe(qmag, e, gas.m)
    pref = _prefactor(qmag, gas)
    return pref * gas.z * np.exp(-(gas.beta / (2.0 * gas.m)) * sig * sig)


def s_be(query: SFQuery, gas: GasSpec, particle: ParticleSpec):
    """Bose-Einstein dynamic structure factor (requires 0 < z < 1)."""
    if not 0.0 < gas.z < 1.0:
        raise FugacityOutOfRange(f"BE fugacity must satisfy 0 < z < 1, got {gas.z}")
    return _s_quantum(query, gas, particle, sign=-1.0)


def s_fd(query: SFQuery, gas: GasSpec, particle: ParticleSpec):
    """Fermi-Dirac dynamic structure factor (requires z > 0)."""
    _require_positive_z(gas.z, FD)
    return _s_quantum(query, gas, particle, sign=+1.0)


def s_mb_brownian(query: SFQuery, gas: GasSpec, particle: ParticleSpec):
    """Brownian-limit MB structure factor S_inf.

    Exponent truncated at first order in alpha = m/M; detailed balance
    S(q,E) = exp(-beta E) S(q,-E) holds exactly for this form as well.
    """
    _require_positive_z(gas.z, MB)
    qmag, e = _resolve_qe(query, particle)
    _require_nonzero_q(qmag)
    return _s_brownian_qe(qmag, e, gas)


def structure_factor(query: SFQuery, gas: GasSpec, particle: ParticleSpec):
    """Dispatch on the gas statistics tag."""
    if gas.statistics == MB:
        return s_mb(query, gas, particle)
    if gas.statistics == BE:
        return s_be(query, gas, particle)
    return s_fd(query, gas, particle)


# ---------------------------------------------------------------------------
# scalar (|q|, E) kernels, shared with the evolution engines
# ---------------------------------------------------------------------------

def _prefactor(qmag, gas: GasSpec):
    return gas.m * gas.m / (4.0 * np.pi**2 * gas.n * gas.beta * qmag)


def _sigma_qe(qmag, e, m):
    return (qmag * qmag + 2.0 * m * e) / (2.0 * qmag)


def _s_brownian_qe(qmag, e, gas: GasSpec):
    pref = _prefactor(qmag, gas)
    return pref * gas.z * np.exp(
        -gas.beta * qmag * qmag / (8.0 * gas.m) - 0.5 * gas.beta * e
    )


def _s_quantum(query, gas, particle, sign):
    """BE (sign=-1) / FD (sign=+1) evaluation with series regularization.

    The prefactor denominator 1 - A vanishes at zero energy transfer; there
    the quotient log(1 -+ (1-A) x)/(1-A) has the finite limit -+x and is
    evaluated by its series in (1-A) x.
    """
    qmag, e = _resolve_qe(query, particle)
    _require_nonzero_q(qmag)
    sig = _sigma_qe(qmag, e, gas.m)
    c = gas.beta / (2.0 * gas.m)
    b = np.exp(-c * sig * sig)
    a = np.exp(-c * (sig - qmag) ** 2)
    eps = -np.expm1(gas.beta * e)  # 1 - A
    x = gas.z * b / (1.0 + sign * gas.z * a)
    t = eps * x

    series = x * (1.0 - sign * t / 2.0 + t * t / 3.0 - sign * t**3 / 4.0)
    use_series = np.abs(t) < _SERIES_CUT
    safe_eps = np.where(use_series, 1.0, eps)
    with np.errstate(divide="ignore", invalid="ignore"):
        general = sign * np.log1p(sign * t) / safe_eps
    val = _prefactor(qmag, gas) * np.where(use_series, series, general)
    if not np.all(np.isfinite(val)):
        raise IndeterminatePoint("structure factor evaluation produced a non-finite value")
    return val[()] if np.ndim(val) == 0 else val


def _resolve_qe(query, particle):
    qmag, pdotq = query.resolve()
    e = qmag * qmag / (2.0 * particle.M) + pdotq / particle.M
    return qmag, e


def _require_nonzero_q(qmag):
    if np.any(np.asarray(qmag) == 0.0):
        raise DegenerateQ("structure factors carry a 1/q prefactor; |q| must be > 0")


def _require_positive_z(z, statistics):
    if z <= 0.0:
        raise FugacityOutOfRange(f"{statistics.upper()} fugacity must be positive, got {z}")
