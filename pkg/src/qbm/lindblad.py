"""Momentum-grid integrator for the collisional master equation in the
Brownian limit, reduced to one dimension.

State: the density matrix rho(p, p') on a uniform momentum grid.  Dynamics:

    d rho(p,p')/dt = -i [E0(p) - E0(p')] rho(p,p')
        + sum_q w(q) [ sqrt(S(q,p-q) S(q,p'-q)) rho(p-q, p'-q)
                       - (S(q,p) + S(q,p'))/2 * rho(p,p') ]

with E0(p) = p^2/2M, S the Brownian-limit MB structure factor, q running
over the symmetric grid {+-k dp} and w(q) = 2 pi (2 pi)^3 n |t_tilde(q)|^2 dq
the discretized kernel prefactor.  Each q term is the jump p -> p + q taken
at rate w(q) S(q, p); written with shift operators it is the V rho V^dagger
gain of the manifest Lindblad form (V(q) = exp(i q x) exp(kappa q p), kappa =
-beta/4M), the ordering under which S-detailed-balance makes the Maxwell
state exactly stationary.  The mirrored ordering that shifts indices the
other way is the same family relabeled q -> -q and adds nothing once the sum
is symmetric.

Transitions that would leave the grid are removed from gain and loss
together, which keeps the truncated generator a genuine Lindblad generator:
trace-free, Hermiticity preserving, completely positive.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateQ,
    ExtrapolationBeyondTable,
    GridMismatch,
    GridTooNarrow,
    StepUnstable,
)
from .gas import GasSpec, ParticleSpec
from .report import EvolutionReport
from .scattering import ScatteringModel, t_tilde_sq
from .structure import _s_brownian_qe

_TRACE_TOL = 1e-12
_HERM_TOL = 1e-12


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform 1D momentum grid p_i = p_min + i * dp, i = 0 .. n-1."""

    p_min: float
    dp: float
    n: int

    def __post_init__(self):
        if self.dp <= 0 or self.n < 2:
            raise ValueError("need dp > 0 and at least two grid points")

    @classmethod
    def centered(cls, p_max: float, n: int) -> "MomentumGrid":
        """Symmetric grid on [-p_max, p_max] with n points."""
        return cls(p_min=-p_max, dp=2.0 * p_max / (n - 1), n=n)

    @property
    def nodes(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.n)

    def offset_of(self, q: float) -> int:
        """Integer grid offset of a momentum transfer, or GridMismatch."""
        k = q / self.dp
        k_round = round(k)
        if abs(k - k_round) > 1e-9 * max(1.0, abs(k)):
            raise GridMismatch(f"q = {q} is not a multiple of dp = {self.dp}")
        if abs(k_round) >= self.n:
            raise GridMismatch(f"q = {q} shifts beyond the {self.n}-point grid")
        return int(k_round)


class DensityMatrixGrid:
    """Density matrix discretized on a MomentumGrid.

    The continuum kernel rho(p, p') is sampled at the nodes; sums over the
    diagonal carry the uniform weight dp, which is the functional the
    finite-grid generator conserves exactly.  Physical states are Hermitian,
    unit trace and positive up to integrator error.
    """

    def __init__(self, grid: MomentumGrid, rho: np.ndarray):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (grid.n, grid.n):
            raise ValueError(f"rho must be {grid.n} x {grid.n}, got {rho.shape}")
        self.grid = grid
        self.rho = rho

    @classmethod
    def from_populations(cls, grid: MomentumGrid, weights) -> "DensityMatrixGrid":
        """Diagonal state with populations proportional to ``weights``."""
        w = np.asarray(weights, dtype=float)
        if w.shape != (grid.n,):
            raise ValueError("weights must match the grid size")
        if np.any(w < 0) or w.sum() <= 0:
            raise ValueError("populations must be non-negative with positive sum")
        diag = w / (w.sum() * grid.dp)
        return cls(grid, np.diag(diag).astype(complex))

    def copy(self) -> "DensityMatrixGrid":
        return DensityMatrixGrid(self.grid, self.rho.copy())

    @property
    def p(self) -> np.ndarray:
        return self.grid.nodes

    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)) * self.grid.dp)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.rho + self.rho.conj().T)
        return float(np.linalg.eigvalsh(h)[0] * self.grid.dp)

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)) * self.grid.dp

    def mean_p(self) -> float:
        pops = self.populations()
        return float(np.sum(self.p * pops) / np.sum(pops))

    def var_p(self) -> float:
        pops = self.populations()
        mean = np.sum(self.p * pops) / np.sum(pops)
        return float(np.sum((self.p - mean) ** 2 * pops) / np.sum(pops))


def stationary_state(beta: float, particle: ParticleSpec, p_grid: MomentumGrid) -> DensityMatrixGrid:
    """Normalized Maxwell state on the grid, diag(exp(-beta p^2 / 2M)).

    Raises GridTooNarrow when either grid edge still carries a relative
    Maxwell weight of 1e-12 or more.
    """
    nodes = p_grid.nodes
    edge = max(abs(nodes[0]), abs(nodes[-1]))
    near_edge = min(abs(nodes[0]), abs(nodes[-1]))
    w_edge = np.exp(-beta * near_edge**2 / (2.0 * particle.M))
    if w_edge >= 1e-12:
        raise GridTooNarrow(
            f"Maxwell weight at the grid edge is {w_edge:.3g} (>= 1e-12); "
            f"widen the grid beyond |p| = {edge:.6g}"
        )
    return DensityMatrixGrid.from_populations(
        p_grid, np.exp(-beta * nodes**2 / (2.0 * particle.M))
    )


def maxwell_weights(beta: float, particle: ParticleSpec, p_grid: MomentumGrid) -> np.ndarray:
    """Normalized Maxwell populations at the grid nodes (sums to one)."""
    w = np.exp(-beta * p_grid.nodes**2 / (2.0 * particle.M))
    return w / w.sum()


def l1_distance_to_maxwell(state: DensityMatrixGrid, gas: GasSpec, particle: ParticleSpec) -> float:
    """L1 distance between the populations and the Maxwell weights."""
    return float(np.sum(np.abs(state.populations() - maxwell_weights(gas.beta, particle, state.grid))))


# ---------------------------------------------------------------------------
# collision kernel on the grid
# ---------------------------------------------------------------------------

def build_q_grid(
    p_grid: MomentumGrid,
    gas: GasSpec,
    particle: ParticleSpec,
    model: ScatteringModel,
    drop_tol: float = 1e-10,
) -> np.ndarray:
    """Symmetric momentum-transfer grid {+-dp, ..., +-K dp}.

    K is the smallest cutoff whose dropped kernel weight (the q-only part of
    the jump-rate profile) is below ``drop_tol`` of the total, capped at the
    grid size.
    """
    dp = p_grid.dp
    alpha = particle.alpha(gas)
    k = np.arange(1, p_grid.n)
    q = k * dp
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationBeyondTable)
        profile = t_tilde_sq(model, q) / q * np.exp(
            -gas.beta * (1.0 + 2.0 * alpha) * q * q / (8.0 * gas.m)
        )
    total = profile.sum()
    if total <= 0.0:
        return np.array([])
    tail = total - np.cumsum(profile)
    cut = int(np.searchsorted(-tail, -drop_tol * total) + 1)
    cut = min(cut, p_grid.n - 1)
    qs = np.arange(1, cut + 1) * dp
    return np.concatenate([-qs[::-1], qs])


def jump_rates(
    p_grid: MomentumGrid,
    q_grid: np.ndarray,
    gas: GasSpec,
    particle: ParticleSpec,
    model: ScatteringModel,
) -> np.ndarray:
    """Rates R[k, i] for the jump p_i -> p_i + q_k.

    R = w(q) S_inf(q, p) with w(q) = 2 pi (2 pi)^3 n |t_tilde(q)|^2 dq; the
    gas density cancels against the 1/n of the structure factor.  Grid
    retention is not applied here.
    """
    q = np.asarray(q_grid, dtype=float)
    if np.any(q == 0.0):
        raise DegenerateQ("q = 0 carries a 1/q prefactor and never contributes")
    p = p_grid.nodes
    qmag = np.abs(q)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationBeyondTable)
        w = 2.0 * np.pi * (2.0 * np.pi) ** 3 * gas.n * t_tilde_sq(model, qmag) * p_grid.dp
    e = q[:, None] ** 2 / (2.0 * particle.M) + q[:, None] * p[None, :] / particle.M
    s = _s_brownian_qe(qmag[:, None], e, gas)
    return w[:, None] * s


class _Kernel:
    """Precomputed slices and weights for repeated generator evaluation."""

    def __init__(self, p_grid, gas, particle, model, q_grid):
        n = p_grid.n
        offsets = [p_grid.offset_of(q) for q in np.asarray(q_grid, dtype=float)]
        rates = jump_rates(p_grid, q_grid, gas, particle, model) if len(offsets) else np.zeros((0, n))
        self.terms = []
        self.loss = np.zeros(n)
        for k, rate_row in zip(offsets, rates):
            src0, src1 = max(0, -k), n - max(0, k)
            if src1 <= src0:
                continue
            src = slice(src0, src1)
            dst = slice(src0 + k, src1 + k)
            g = np.sqrt(rate_row[src])
            self.terms.append((src, dst, g))
            self.loss[src] += rate_row[src]
        e0 = p_grid.nodes**2 / (2.0 * particle.M)
        self.phase = e0[:, None] - e0[None, :]
        self.max_loss = float(self.loss.max()) if n else 0.0
        self.max_freq = float(np.max(np.abs(self.phase)))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = (-1j * self.phase) * rho
        out -= 0.5 * (self.loss[:, None] + self.loss[None, :]) * rho
        for src, dst, g in self.terms:
            out[dst, dst] += (g[:, None] * g[None, :]) * rho[src, src]
        return out


def lindblad_generator(
    rho: DensityMatrixGrid,
    gas: GasSpec,
    particle: ParticleSpec,
    model: ScatteringModel,
    q_grid: np.ndarray,
) -> DensityMatrixGrid:
    """Time derivative of the state under the master equation.

    The output is Hermitian and trace-free (uniform-weight diagonal sum) by
    construction of the gain/loss pairing.
    """
    kernel = _Kernel(rho.grid, gas, particle, model, q_grid)
    return DensityMatrixGrid(rho.grid, kernel.apply(rho.rho))


def lindblad_evolve(
    rho0: DensityMatrixGrid,
    gas: GasSpec,
    particle: ParticleSpec,
    model: ScatteringModel,
    t_final: float,
    dt: float | None = None,
    q_grid: np.ndarray | None = None,
    record_every: int = 10,
    snapshot_times=(),
) -> tuple[DensityMatrixGrid, EvolutionReport]:
    """Integrate the master equation with classical RK4.

    ``dt`` defaults to min(0.5 / max loss rate, 2 / max Bohr frequency),
    inside both the dissipative and the oscillatory stability regions.
    Aborts with StepUnstable if the per-step trace or Hermiticity drift
    exceeds ten times its tolerance (1e-12).
    """
    grid = rho0.grid
    if q_grid is None:
        q_grid = build_q_grid(grid, gas, particle, model)
    kernel = _Kernel(grid, gas, particle, model, q_grid)

    if dt is None:
        bounds = []
        if kernel.max_loss > 0:
            bounds.append(0.5 / kernel.max_loss)
        if kernel.max_freq > 0:
            bounds.append(2.0 / kernel.max_freq)
        dt = min(bounds) if bounds else t_final / 100.0
    n_steps = max(1, int(np.ceil(t_final / dt - 1e-12)))
    dt = t_final / n_steps

    maxwell = maxwell_weights(gas.beta, particle, grid)
    snapshot_steps = {min(n_steps, max(0, int(round(ts / dt)))) for ts in snapshot_times}

    rho = rho0.rho.copy()
    times, traces, herms, eigs, means, varis, dists = [], [], [], [], [], [], []
    snapshots = []

    def record(step):
        state = DensityMatrixGrid(grid, rho)
        times.append(step * dt)
        traces.append(state.trace())
        herms.append(state.hermiticity_defect())
        eigs.append(state.min_eigenvalue())
        means.append(state.mean_p())
        varis.append(state.var_p())
        dists.append(float(np.sum(np.abs(state.populations() - maxwell))))

    record(0)
    if 0 in snapshot_steps:
        snapshots.append((0.0, grid.nodes, np.real(np.diag(rho)).copy()))

    trace_ref = float(np.real(np.trace(rho)) * grid.dp)
    for step in range(1, n_steps + 1):
        k1 = kernel.apply(rho)
        k2 = kernel.apply(rho + 0.5 * dt * k1)
        k3 = kernel.apply(rho + 0.5 * dt * k2)
        k4 = kernel.apply(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        trace_now = float(np.real(np.trace(rho)) * grid.dp)
        drift = abs(trace_now - trace_ref)
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if drift > 10.0 * _TRACE_TOL or herm > 10.0 * _HERM_TOL:
            raise StepUnstable(
                f"step {step}: trace drift {drift:.3g} / Hermiticity defect "
                f"{herm:.3g} exceeded 10x tolerance; reduce dt"
            )
        trace_ref = trace_now

        if step % record_every == 0 or step == n_steps:
            record(step)
        if step in snapshot_steps:
            snapshots.append((step * dt, grid.nodes, np.real(np.diag(rho)).copy()))

    report = EvolutionReport(
        times=np.array(times),
        trace=np.array(traces),
        mean_p=np.array(means),
        var_p=np.array(varis),
        dist_stationary=np.array(dists),
        min_eig=np.array(eigs),
        herm_defect=np.array(herms),
        snapshots=snapshots,
    )
    return DensityMatrixGrid(grid, rho), report


# ---------------------------------------------------------------------------
# small momentum-transfer expansion diagnostics
# ---------------------------------------------------------------------------

def kramers_moyal_residual(
    q: float,
    rho: DensityMatrixGrid,
    gas: GasSpec,
    particle: ParticleSpec,
) -> float:
    """Norm of [exact single-q dissipator] - [its second-order expansion].

    The exact bracket is V rho V^dag - {V^dag V, rho}/2 with V = exp(iqx)
    exp(kappa q p); the expansion keeps superoperator terms through q^2:

        q Dx[rho] + q^2/2 Dx^2[rho] - kappa^2 q^2/2 (p-p')^2 rho
            + kappa q^2 Dx[(p+p') rho]

    where Dx = -(d/dp + d/dp') generates the simultaneous momentum shift
    (evaluated spectrally, so the measured remainder is the pure Taylor
    remainder, cubic in q).  The state should vanish at the grid edges.
    """
    grid = rho.grid
    if q == 0.0:
        return 0.0
    k = grid.offset_of(q)
    kappa = -gas.beta / (4.0 * particle.M)
    p = grid.nodes
    mat = rho.rho

    # exact bracket
    g = np.exp(kappa * q * p)
    h = g * g
    exact = -0.5 * (h[:, None] + h[None, :]) * mat
    n = grid.n
    src = slice(max(0, -k), n - max(0, k))
    dst = slice(max(0, -k) + k, n - max(0, k) + k)
    gs = g[src]
    exact[dst, dst] += (gs[:, None] * gs[None, :]) * mat[src, src]

    # second-order expansion
    d1 = _shift_generator(mat, grid.dp)
    d2 = _shift_generator(d1, grid.dp)
    psum = p[:, None] + p[None, :]
    pdiff = p[:, None] - p[None, :]
    trunc = (
        q * d1
        + 0.5 * q * q * d2
        - 0.5 * kappa * kappa * q * q * pdiff**2 * mat
        + kappa * q * q * _shift_generator(psum * mat, grid.dp)
    )
    return float(np.linalg.norm(exact - trunc) * grid.dp)


def _shift_generator(mat: np.ndarray, dp: float) -> np.ndarray:
    """-(d/dp + d/dp') of a momentum-grid kernel, by spectral differentiation."""
    n = mat.shape[0]
    omega = 2.0j * np.pi * np.fft.fftfreq(n, d=dp)
    ddp0 = np.fft.ifft(omega[:, None] * np.fft.fft(mat, axis=0), axis=0)
    ddp1 = np.fft.ifft(omega[None, :] * np.fft.fft(mat, axis=1), axis=1)
    return -(ddp0 + ddp1)
