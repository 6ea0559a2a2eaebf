"""Collisional quantum Brownian motion of a test particle in an ideal gas.

Natural units hbar = kB = 1 throughout.  The package provides the exact
dynamic structure factors of the ideal MB/BE/FD gas, the momentum-diffusion
coefficient of the Brownian limit (adaptive quadrature plus closed forms),
and two evolution engines: a momentum-grid Lindblad integrator and a
phase-space Kramers solver, each with analytic oracles and invariant checks.
"""

from .errors import (
    CFLViolation,
    ConfigError,
    DegenerateQ,
    ExtrapolationBeyondTable,
    FugacityOutOfRange,
    GridMismatch,
    GridTooNarrow,
    IndeterminatePoint,
    ParseError,
    QbmError,
    QbmNumericalError,
    QuadratureNonConvergent,
    StepUnstable,
    TabulatedRangeTooShort,
    ValidationError,
)
from .gas import (
    BE,
    FD,
    MB,
    GasSpec,
    ParticleSpec,
    SFQuery,
    fugacity_from_density,
    ideal_gas_density,
    mb_fugacity,
    thermal_wavelength,
)
from .kramers import WignerGrid, kramers_evolve, kramers_rhs, ou_marginal_exact
from .lindblad import (
    DensityMatrixGrid,
    MomentumGrid,
    build_q_grid,
    jump_rates,
    kramers_moyal_residual,
    l1_distance_to_maxwell,
    lindblad_evolve,
    lindblad_generator,
    maxwell_weights,
    stationary_state,
)
from .report import EvolutionReport
from .scattering import (
    ContactPotential,
    GaussianPotential,
    ScatteringModel,
    TabulatedTMatrix,
    t_tilde_sq,
    upsilon,
    zeta,
)
from .structure import (
    energy_transfer,
    s_be,
    s_fd,
    s_mb,
    s_mb_brownian,
    sigma,
    structure_factor,
)
from .transport import (
    TransportCoefficients,
    d_pp_closed,
    d_pp_contact_closed,
    d_pp_gaussian_closed,
    d_pp_quadrature,
    transport_coefficients,
)

__version__ = "0.1.0"
