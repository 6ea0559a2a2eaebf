"""Momentum-diffusion coefficient and the Fokker-Planck transport set.

The 3D momentum-diffusion coefficient is

    D_pp = zeta(z) (2/3) (pi^2 m^2 / beta) int d^3q |t_tilde(q)|^2 q e^(-beta q^2 / 8m)
         = zeta(z) (2/3) (pi^2 m^2 / beta) 4 pi int_0^inf q^3 |t_tilde(q)|^2 e^(-a q^2) dq

with a = beta/8m (isotropy reduces the angular integral to 4 pi).  The
optional flag restores the (1 + 2 alpha) factor the Brownian limit drops
from the exponent.

Closed forms, re-derived from int_0^inf q^3 e^(-a q^2) dq = 1/(2 a^2) with
a = (beta/8m)(1 + upsilon) for the Gaussian model:

    Gaussian:  D_pp = zeta(z) (1/48) v0^2 m upsilon^3 / (1 + upsilon)^2
    Contact:   D_pp = zeta(z) (32/3) (m / beta^2) alpha^2 a0^2 / lambda_T^2

The remaining coefficients are tied to D_pp:

    kappa = -beta/(4M),  eta = beta D_pp / M,  D_xx = kappa^2 D_pp,

so that D_pp / eta = M / beta, the classical Kramers ratio that keeps the
Maxwell state stationary.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureNonConvergent, TabulatedRangeTooShort
from .gas import GasSpec, ParticleSpec, thermal_wavelength
from .scattering import (
    ContactPotential,
    GaussianPotential,
    ScatteringModel,
    TabulatedTMatrix,
    t_tilde_sq,
    upsilon,
    zeta,
)

# (1 + u) e^-u <= 1e-14 at u = 36: the q^3 e^(-a q^2) weight beyond
# q_max = sqrt(36/a) carries less than 1e-14 of the radial integral
_TAIL_EXPONENT = 36.0
# same tail estimate against the 1e-8 budget allowed for a finite table
_TABLE_TAIL_FRACTION = 1e-8


@dataclass(frozen=True)
class TransportCoefficients:
    """Momentum diffusion, friction, position diffusion, and the momentum
    superoperator scale kappa = -beta/(4M)."""

    d_pp: float
    eta: float
    d_xx: float
    kappa: float

    def __post_init__(self):
        if self.d_pp < 0:
            raise ValueError("momentum diffusion coefficient must be >= 0")


def transport_coefficients(d_pp: float, gas: GasSpec, particle: ParticleSpec) -> TransportCoefficients:
    """Assemble the full transport set from a momentum-diffusion coefficient.

    eta and D_xx are defined through D_pp, so D_pp/eta = M/beta holds by
    construction.
    """
    kappa = -gas.beta / (4.0 * particle.M)
    eta = d_pp * gas.beta / particle.M
    d_xx = kappa * kappa * d_pp
    return TransportCoefficients(d_pp=d_pp, eta=eta, d_xx=d_xx, kappa=kappa)


def d_pp_quadrature(
    model: ScatteringModel,
    gas: GasSpec,
    particle: ParticleSpec,
    include_alpha_correction: bool = False,
) -> float:
    """Momentum-diffusion coefficient by adaptive quadrature of the radial
    integral (Gauss-Kronrod with interval subdivision).

    With ``include_alpha_correction`` the thermal weight keeps the
    (1 + 2 alpha) factor; by default it is dropped so the closed forms are
    matched exactly.
    """
    zfac = zeta(gas.z, gas.statistics)
    alpha = particle.alpha(gas) if include_alpha_correction else 0.0
    a = gas.beta * (1.0 + 2.0 * alpha) / (8.0 * gas.m)
    q_max = np.sqrt(_TAIL_EXPONENT / a)

    integrand = lambda q: q**3 * t_tilde_sq(model, q) * np.exp(-a * q * q)

    if isinstance(model, TabulatedTMatrix):
        u_end = a * model.q_max**2
        if (1.0 + u_end) * np.exp(-u_end) > _TABLE_TAIL_FRACTION:
            raise TabulatedRangeTooShort(
                f"table ends at q = {model.q_max:.6g} where the thermal weight "
                f"still carries a fraction {(1.0 + u_end) * np.exp(-u_end):.3g} "
                f"> {_TABLE_TAIL_FRACTION:g} of the radial integral"
            )
        # the interpolant is only C1 at the knots; integrate knot panels with
        # an embedded Gauss-Legendre pair instead of global subdivision
        val = _panel_quadrature(integrand, model.q, min(q_max, model.q_max))
    else:
        out = quad(integrand, 0.0, q_max, epsabs=0.0, epsrel=1e-12,
                   limit=400, full_output=True)
        val, abserr = out[0], out[1]
        if len(out) > 3:
            raise QuadratureNonConvergent(f"radial D_pp integral did not converge: {out[3]}")
        if val != 0.0 and abserr > 1e-10 * abs(val):
            raise QuadratureNonConvergent(
                f"radial D_pp integral error estimate {abserr:.3g} exceeds "
                f"1e-10 relative to {val:.6g}"
            )
    return zfac * (2.0 / 3.0) * np.pi**2 * gas.m**2 / gas.beta * 4.0 * np.pi * val


def _panel_quadrature(f, knots, q_max):
    """Integrate f on [0, q_max] with panels split at the knots, using a
    10/20-point Gauss-Legendre pair per panel as the error estimate."""
    edges = np.unique(np.concatenate([[0.0, q_max], knots[(knots > 0) & (knots < q_max)]]))
    lo_nodes, lo_weights = np.polynomial.legendre.leggauss(10)
    hi_nodes, hi_weights = np.polynomial.legendre.leggauss(20)

    def rule(nodes, weights):
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        q = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        return float(np.sum(w * f(q)))

    coarse, fine = rule(lo_nodes, lo_weights), rule(hi_nodes, hi_weights)
    if fine != 0.0 and abs(fine - coarse) > 1e-10 * abs(fine):
        raise QuadratureNonConvergent(
            f"tabulated radial integral pair disagreement "
            f"{abs(fine - coarse) / abs(fine):.3g} exceeds 1e-10"
        )
    return fine


def d_pp_gaussian_closed(v0: float, r0: float, gas: GasSpec) -> float:
    """Closed form for the Gaussian model (exact value of the radial integral)."""
    ups = upsilon(r0, thermal_wavelength(gas.beta, gas.m))
    return zeta(gas.z, gas.statistics) * v0 * v0 * gas.m * ups**3 / (48.0 * (1.0 + ups) ** 2)


def d_pp_contact_closed(a0: float, gas: GasSpec, particle: ParticleSpec) -> float:
    """Closed form for the contact model (exact value of the radial integral)."""
    alpha = particle.alpha(gas)
    lam2 = thermal_wavelength(gas.beta, gas.m) ** 2
    return (
        zeta(gas.z, gas.statistics)
        * (32.0 / 3.0)
        * gas.m
        / gas.beta**2
        * alpha**2
        * a0**2
        / lam2
    )


def d_pp_closed(model: ScatteringModel, gas: GasSpec, particle: ParticleSpec):
    """Closed form matching the model, or None for tabulated models."""
    if isinstance(model, GaussianPotential):
        return d_pp_gaussian_closed(model.v0, model.r0, gas)
    if isinstance(model, ContactPotential):
        return d_pp_contact_closed(model.a0, gas, particle)
    return None
