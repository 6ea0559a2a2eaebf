"""Phase-space solver for the Fokker-Planck (Kramers) limit.

The Wigner image of the operator Fokker-Planck equation is

    dW/dt = -(p/M) dW/dx + eta d(p W)/dp + D_pp d^2W/dp^2 + D_xx d^2W/dx^2,

re-derived term by term from the double-commutator form: [x,[x,.]] maps to
momentum diffusion, [p,[p,.]] to position diffusion, and the mixed
[x,{p,.}] term to friction with eta = -4 kappa D_pp = beta D_pp / M, which
reproduces the classical Kramers ratio D_pp / eta = M / beta.

The evolve engine Strang-splits each step into

    stream(dt/2)  xdiff(dt/2)  momentum-OU(dt)  xdiff(dt/2)  stream(dt/2)

with exact Fourier shifts for the periodic free streaming, centered
second-order explicit differences for the x diffusion, and a Chang-Cooper
flux discretization (theta-weighted in time) for the momentum
Ornstein-Uhlenbeck operator.  The Chang-Cooper weights make the discrete
Maxwell state an exact fixed point of the momentum step; the momentum
boundaries are absorbing (zero ghost values), so grids should extend far
enough that the tails are negligible.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import CFLViolation
from .gas import ParticleSpec
from .report import EvolutionReport
from .transport import TransportCoefficients


@dataclass
class WignerGrid:
    """Real phase-space density W(x, p) on a uniform grid.

    x is periodic with period nx * dx (the node x_min + nx*dx coincides with
    x_min); p has absorbing boundaries.  w has shape (nx, n_p).
    """

    x_min: float
    dx: float
    nx: int
    p_min: float
    dp: float
    n_p: int
    w: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        if self.w.shape != (self.nx, self.n_p):
            raise ValueError(f"w must have shape ({self.nx}, {self.n_p}), got {self.w.shape}")
        if self.dx <= 0 or self.dp <= 0:
            raise ValueError("grid spacings must be positive")

    @classmethod
    def gaussian(cls, x_min, dx, nx, p_min, dp, n_p, x0=0.0, xvar=1.0, p0=0.0, pvar=1.0):
        """Normalized product Gaussian; mass is exactly one on the grid."""
        x = x_min + dx * np.arange(nx)
        p = p_min + dp * np.arange(n_p)
        wx = np.exp(-((x - x0) ** 2) / (2.0 * xvar))
        wp = np.exp(-((p - p0) ** 2) / (2.0 * pvar))
        w = wx[:, None] * wp[None, :]
        w /= w.sum() * dx * dp
        return cls(x_min, dx, nx, p_min, dp, n_p, w)

    @classmethod
    def gaussian_p_uniform_x(cls, length, nx, p_min, dp, n_p, p0=0.0, pvar=1.0):
        """x-uniform state with a Gaussian momentum marginal."""
        return cls.gaussian(
            0.0, length / nx, nx, p_min, dp, n_p,
            x0=0.0, xvar=np.inf, p0=p0, pvar=pvar,
        )

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.nx)

    @property
    def p(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.n_p)

    def mass(self) -> float:
        return float(self.w.sum() * self.dx * self.dp)

    def marginal_p(self) -> np.ndarray:
        """Momentum marginal density, integrated over x."""
        return self.w.sum(axis=0) * self.dx

    def marginal_x(self) -> np.ndarray:
        return self.w.sum(axis=1) * self.dp

    def moments(self) -> dict:
        mass = self.mass()
        fp = self.marginal_p() * self.dp / mass
        fx = self.marginal_x() * self.dx / mass
        mean_p = float(np.sum(self.p * fp))
        mean_x = float(np.sum(self.x * fx))
        return {
            "mass": mass,
            "mean_x": mean_x,
            "mean_p": mean_p,
            "var_x": float(np.sum((self.x - mean_x) ** 2 * fx)),
            "var_p": float(np.sum((self.p - mean_p) ** 2 * fp)),
        }


def ou_marginal_exact(p0, var0, t, coeffs: TransportCoefficients, particle: ParticleSpec):
    """Exact momentum-marginal moments of the Kramers dynamics.

    mean(t) = p0 exp(-eta t);
    var(t) = (M/beta)(1 - exp(-2 eta t)) + var0 exp(-2 eta t),
    with M/beta read off the transport set through beta = -4 kappa M.
    """
    t = np.asarray(t, dtype=float)
    decay = np.exp(-coeffs.eta * t)
    beta = -4.0 * coeffs.kappa * particle.M
    var_eq = particle.M / beta
    mean = p0 * decay
    var = var_eq * (1.0 - decay * decay) + var0 * decay * decay
    return (mean[()], var[()]) if t.ndim == 0 else (mean, var)


def kramers_rhs(wg: WignerGrid, coeffs: TransportCoefficients, particle: ParticleSpec) -> np.ndarray:
    """Centered second-order discretization of the phase-space right side.

    Periodic in x, zero ghost values in p.  Used for stationarity and
    convergence checks; the evolve engine uses the split steps instead.
    """
    w = wg.w
    p = wg.p
    dwdx = (np.roll(w, -1, axis=0) - np.roll(w, 1, axis=0)) / (2.0 * wg.dx)
    d2wdx = (np.roll(w, -1, axis=0) - 2.0 * w + np.roll(w, 1, axis=0)) / wg.dx**2

    padded = np.zeros((wg.nx, wg.n_p + 2))
    padded[:, 1:-1] = w
    pw = padded * np.concatenate(([p[0] - wg.dp], p, [p[-1] + wg.dp]))
    dpw = (pw[:, 2:] - pw[:, :-2]) / (2.0 * wg.dp)
    d2wdp = (padded[:, 2:] - 2.0 * w + padded[:, :-2]) / wg.dp**2

    return (
        -(p[None, :] / particle.M) * dwdx
        + coeffs.eta * dpw
        + coeffs.d_pp * d2wdp
        + coeffs.d_xx * d2wdx
    )


def _cc_delta(w):
    """Chang-Cooper weight delta(w) = 1/w - 1/(e^w - 1), delta(0) = 1/2."""
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < 1e-4
    ws = np.where(small, 1.0, w)
    with np.errstate(over="ignore"):
        general = 1.0 / ws - 1.0 / np.expm1(ws)
    series = 0.5 - w / 12.0 + w**3 / 720.0
    return np.where(small, series, general)


def _cc_tridiagonal(p_nodes, dp, coeffs):
    """Semi-discrete Chang-Cooper operator L with dW/dt = L W (absorbing).

    Returns the three diagonals (lower, main, upper) of L.
    """
    d = coeffs.d_pp
    eta = coeffs.eta
    n = p_nodes.size
    faces = p_nodes[0] - 0.5 * dp + dp * np.arange(n + 1)
    c = eta * faces
    delta = _cc_delta(c * dp / d) if d > 0 else np.full(n + 1, 0.5)

    # J_i = c_i [(1-delta_i) W_i + delta_i W_{i-1}] + d (W_i - W_{i-1})/dp
    # with ghost values W_{-1} = W_n = 0;  dW_i/dt = (J_{i+1} - J_i)/dp
    a_up = (c[1:] * (1.0 - delta[1:]) + d / dp)      # coefficient of W_i in J_{i}
    a_dn = (c[1:] * delta[1:] - d / dp)              # coefficient of W_{i-1} in J_i
    # here a_up[i], a_dn[i] describe face i+1 (between node i and i+1), i = 0..n-1
    face_up = np.concatenate(([c[0] * (1.0 - delta[0]) + d / dp], a_up))
    face_dn = np.concatenate(([c[0] * delta[0] - d / dp], a_dn))

    main = (face_dn[1:] - face_up[:-1]) / dp
    upper = face_up[1:] / dp     # multiplies W_{i+1} in dW_i/dt, length n (last unused)
    lower = -face_dn[:-1] / dp   # multiplies W_{i-1} in dW_i/dt, length n (first unused)
    return lower[1:], main, upper[:-1]


def kramers_evolve(
    w0: WignerGrid,
    t_final: float,
    dt: float,
    coeffs: TransportCoefficients,
    particle: ParticleSpec,
    record_every: int = 10,
    theta: float = 0.5,
    snapshot_times=(),
) -> tuple[WignerGrid, EvolutionReport]:
    """Strang-split integration of the Kramers equation.

    Raises CFLViolation at construction if the explicit x-diffusion half
    step is unstable or the per-step streaming displacement exceeds the
    periodic domain.
    """
    nx, n_p = w0.nx, w0.n_p
    dx, dp = w0.dx, w0.dp
    length = nx * dx
    p = w0.p

    diff_cfl = coeffs.d_xx * (0.5 * dt) / dx**2
    if diff_cfl > 0.5:
        raise CFLViolation(
            f"x-diffusion half step has D_xx dt/2 / dx^2 = {diff_cfl:.3g} > 0.5"
        )
    max_shift = np.max(np.abs(p)) / particle.M * dt
    if max_shift > length:
        raise CFLViolation(
            f"streaming displacement {max_shift:.3g} per step exceeds the "
            f"periodic domain length {length:.3g}"
        )

    # exact streaming phases for a half step (periodic in x)
    kx = 2.0 * np.pi * np.fft.fftfreq(nx, d=dx)
    phase_half = np.exp(-1j * kx[:, None] * (p[None, :] / particle.M) * (0.5 * dt))

    # theta-weighted Chang-Cooper step for the momentum OU operator
    lower, main, upper = _cc_tridiagonal(p, dp, coeffs)
    ab = np.zeros((3, n_p))
    ab[0, 1:] = -theta * dt * upper
    ab[1, :] = 1.0 - theta * dt * main
    ab[2, :-1] = -theta * dt * lower

    def ou_step(w):
        rhs = w.copy()
        rhs[:, :-1] += (1.0 - theta) * dt * upper * w[:, 1:]
        rhs[:, :] += (1.0 - theta) * dt * main * w
        rhs[:, 1:] += (1.0 - theta) * dt * lower * w[:, :-1]
        return solve_banded((1, 1), ab, rhs.T).T

    def stream_half(w):
        return np.real(np.fft.ifft(phase_half * np.fft.fft(w, axis=0), axis=0))

    def xdiff_half(w):
        if coeffs.d_xx == 0.0:
            return w
        lap = (np.roll(w, -1, axis=0) - 2.0 * w + np.roll(w, 1, axis=0)) / dx**2
        return w + (0.5 * dt) * coeffs.d_xx * lap

    # dt is honored exactly (the split matrices depend on it); the run ends
    # at the nearest multiple of dt to t_final
    n_steps = max(1, int(round(t_final / dt)))

    # stationary momentum weights for the distance series: exp(2 kappa p^2)
    mw = np.exp(2.0 * coeffs.kappa * p * p)
    mw /= mw.sum()

    w = w0.w.copy()
    grid = WignerGrid(w0.x_min, dx, nx, w0.p_min, dp, n_p, w)
    times, masses, mean_x, mean_p, var_x, var_p, dists = [], [], [], [], [], [], []
    snapshots = []
    snapshot_steps = {min(n_steps, max(0, int(round(ts / dt)))) for ts in snapshot_times}

    def record(step, w_now):
        g = WignerGrid(w0.x_min, dx, nx, w0.p_min, dp, n_p, w_now)
        mom = g.moments()
        times.append(step * dt)
        masses.append(mom["mass"])
        mean_x.append(mom["mean_x"])
        mean_p.append(mom["mean_p"])
        var_x.append(mom["var_x"])
        var_p.append(mom["var_p"])
        fp = g.marginal_p() * dp / mom["mass"]
        dists.append(float(np.sum(np.abs(fp - mw))))
        return g

    record(0, w)
    if 0 in snapshot_steps:
        snapshots.append((0.0, w.copy()))

    for step in range(1, n_steps + 1):
        w = stream_half(w)
        w = xdiff_half(w)
        w = ou_step(w)
        w = xdiff_half(w)
        w = stream_half(w)
        if step % record_every == 0 or step == n_steps:
            record(step, w)
        if step in snapshot_steps:
            snapshots.append((step * dt, w.copy()))

    report = EvolutionReport(
        times=np.array(times),
        trace=np.array(masses),
        mean_p=np.array(mean_p),
        var_p=np.array(var_p),
        dist_stationary=np.array(dists),
        mean_x=np.array(mean_x),
        var_x=np.array(var_x),
        snapshots=snapshots,
    )
    final = WignerGrid(w0.x_min, dx, nx, w0.p_min, dp, n_p, w)
    return final, report
