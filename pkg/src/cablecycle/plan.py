"""Periodic force plans and the carrier trajectories they induce.

Each cycle edge gets a sinusoid A cos(xi t + phi_color) through a proper edge
coloring, so adjacent coefficients never have simultaneous zero derivatives.
Carrier i combines the coefficients of its incoming and outgoing edges:

    f_i(t) = f0_i + mu_i(t) delta_i + mu_bar_i(t) delta_bar_i

which keeps the net wrench on the load constant while the force (hence the
cable direction, hence the carrier) moves forever. With positive tension the
carrier position follows from the cable direction q_i = f_i / ||f_i|| at
constant cable length, and its velocity is (L_i / T_i) times the component of
f_i's derivative orthogonal to f_i.

The analytic bounds come from the derivative locus: [mu_dot; mu_bar_dot] is
xi M_i [cos xi t; sin xi t] with a constant 2x2 M_i, so f_i's derivative
sweeps an ellipse with semi-axes xi * (singular values of [delta_i
delta_bar_i] M_i). Combined with tension extrema and the worst-case
orthogonal fraction alpha_i, that yields a strictly positive lower bound on
every carrier's speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InadmissibleCycleError, VanishingTensionError
from .graph import EdgeColoring, HamiltonianCycle
from .statics import (
    AdmissibilityReport,
    LoadModel,
    check_admissibility,
    equilibrium_offset,
    grasp_matrix,
    nullspace_basis,
)

# Below this tension the cable direction is numerically undefined.
TENSION_FLOOR = 1e-6

DEFAULT_AMPLITUDE = 1.0  # N
DEFAULT_XI = 2.0  # rad/s
DEFAULT_CABLE_LENGTH = 0.8  # m

BOUNDS_SAMPLES_PER_PERIOD = 10_000


def library_phases(n_colors: int) -> tuple[float, ...]:
    """Phases pi * k / n_colors, k = 0..n_colors-1.

    Reproduces the two-function library (0, pi/2) for even-n minimal
    colorings, the three-function one (0, pi/3, 2pi/3) for odd n, and the
    pi/n-spaced n-function library that fits every cycle at once.
    """
    if n_colors < 2:
        raise ValueError("need at least two distinct functions")
    return tuple(math.pi * k / n_colors for k in range(n_colors))


@dataclass(frozen=True)
class CoefficientLibrary:
    """Sinusoid family c_k(t) = A cos(xi t + phases[k])."""

    amplitude: float
    xi: float
    phases: tuple[float, ...]

    def __post_init__(self):
        # amplitude 0 is the degenerate hover plan: forces stay at f0.
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be non-negative")
        if not self.xi > 0.0:
            raise ValueError("angular frequency must be positive")
        ph = self.phases
        for a in range(len(ph)):
            for b in range(a + 1, len(ph)):
                gap = (ph[a] - ph[b]) % math.pi
                if min(gap, math.pi - gap) < 1e-9:
                    raise ValueError(
                        "library phases must be distinct modulo pi "
                        "(otherwise two functions share stationary points)"
                    )

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.xi


@dataclass(frozen=True)
class ForcePlan:
    """Immutable periodic plan for all n carriers.

    beta/beta_bar are the phases of carrier i's incoming and outgoing edge
    coefficients; attach_world caches the world-frame attachment points at
    the equilibrium pose.
    """

    load: LoadModel
    cycle: HamiltonianCycle
    coloring: EdgeColoring
    library: CoefficientLibrary
    f0: np.ndarray  # n x 3
    delta: np.ndarray  # n x 3
    delta_bar: np.ndarray  # n x 3
    beta: np.ndarray  # n
    beta_bar: np.ndarray  # n
    lengths: np.ndarray  # n
    attach_world: np.ndarray  # n x 3
    report: AdmissibilityReport

    @property
    def n(self) -> int:
        return self.load.n

    @property
    def period(self) -> float:
        return self.library.period


@dataclass(frozen=True)
class TrajectorySample:
    """All carriers at one instant."""

    t: float
    force: np.ndarray  # n x 3
    tension: np.ndarray  # n
    direction: np.ndarray  # n x 3 unit cable directions
    position: np.ndarray  # n x 3
    velocity: np.ndarray  # n x 3


@dataclass(frozen=True)
class PlanBounds:
    """Per-carrier analytic envelope of the plan (arrays of length n)."""

    gamma_min: np.ndarray  # force-derivative ellipse semi-axes at unit xi, N
    gamma_max: np.ndarray
    alpha: np.ndarray  # min fraction of force derivative orthogonal to force
    tension_min: np.ndarray  # N
    tension_max: np.ndarray
    speed_min: np.ndarray  # m/s, (L/T_max) xi alpha gamma_min
    speed_max: np.ndarray  # m/s, (L/T_min) xi gamma_max

    def to_dict(self) -> dict:
        return {
            "gamma_min": self.gamma_min.tolist(),
            "gamma_max": self.gamma_max.tolist(),
            "alpha": self.alpha.tolist(),
            "tension_min_n": self.tension_min.tolist(),
            "tension_max_n": self.tension_max.tolist(),
            "speed_min_mps": self.speed_min.tolist(),
            "speed_max_mps": self.speed_max.tolist(),
        }


def build_plan(
    load: LoadModel,
    cycle: HamiltonianCycle,
    coloring: EdgeColoring,
    amplitude: float = DEFAULT_AMPLITUDE,
    xi: float = DEFAULT_XI,
    lengths: float | np.ndarray = DEFAULT_CABLE_LENGTH,
) -> ForcePlan:
    """Assemble and validate a plan; rejects inadmissible cycles."""
    n = load.n
    if cycle.n != n:
        raise ValueError(f"cycle has {cycle.n} vertices, load has {n} attachments")
    if len(coloring.colors) != n:
        raise ValueError("coloring does not match the cycle's edge count")
    lengths = np.broadcast_to(np.asarray(lengths, dtype=float), (n,)).copy()
    if not np.all(lengths > 0.0):
        raise ValueError("cable lengths must be positive")

    g = grasp_matrix(load)
    _, f0_per = equilibrium_offset(g, load)
    basis = nullspace_basis(cycle, load)
    report = check_admissibility(basis, f0_per)
    if not report.admissible:
        raise InadmissibleCycleError(
            f"cycle {list(cycle.tour)} is inadmissible for this load", report=report
        )

    library = CoefficientLibrary(
        amplitude=float(amplitude), xi=float(xi), phases=library_phases(coloring.n_colors)
    )
    beta = np.array([library.phases[coloring.colors[h] - 1] for h in basis.incoming])
    beta_bar = np.array(
        [library.phases[coloring.colors[(h + 1) % n] - 1] for h in basis.incoming]
    )
    if np.any(beta == beta_bar):
        raise ValueError("coloring assigned identical phases to adjacent edges")
    return ForcePlan(
        load=load,
        cycle=cycle,
        coloring=coloring,
        library=library,
        f0=f0_per,
        delta=basis.delta,
        delta_bar=basis.delta_bar,
        beta=beta,
        beta_bar=beta_bar,
        lengths=lengths,
        attach_world=load.attachments_world(),
        report=report,
    )


def _forces(plan: ForcePlan, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Force and force derivative for all carriers; t of shape (T,),
    returns (T, n, 3) arrays."""
    a, xi = plan.library.amplitude, plan.library.xi
    ph = xi * t[:, None] + plan.beta[None, :]
    ph_bar = xi * t[:, None] + plan.beta_bar[None, :]
    mu = a * np.cos(ph)
    mu_bar = a * np.cos(ph_bar)
    mu_d = -a * xi * np.sin(ph)
    mu_bar_d = -a * xi * np.sin(ph_bar)
    f = plan.f0[None] + mu[..., None] * plan.delta[None] + mu_bar[..., None] * plan.delta_bar[None]
    fd = mu_d[..., None] * plan.delta[None] + mu_bar_d[..., None] * plan.delta_bar[None]
    return f, fd


def _states(plan: ForcePlan, t: np.ndarray):
    """Batched kinematics: (force, force_dot, tension, q, q_dot, pos, vel)."""
    f, fd = _forces(plan, t)
    tension = np.linalg.norm(f, axis=2)
    low = tension.min()
    if low <= TENSION_FLOOR:
        raise VanishingTensionError(
            f"tension reached {low:.3e} N (floor {TENSION_FLOOR:.0e} N); plan invalid"
        )
    q = f / tension[..., None]
    fd_perp = fd - q * np.sum(q * fd, axis=2, keepdims=True)
    q_dot = fd_perp / tension[..., None]
    pos = plan.attach_world[None] + plan.lengths[None, :, None] * q
    vel = plan.lengths[None, :, None] * q_dot
    return f, fd, tension, q, q_dot, pos, vel


def force_at(plan: ForcePlan, i: int, t) -> tuple[np.ndarray, np.ndarray]:
    """(f_i, f_i_dot) at time t (scalar or 1-D array)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    f, fd = _forces(plan, t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return f[0, i], fd[0, i]
    return f[:, i], fd[:, i]


def carrier_state_at(plan: ForcePlan, i: int, t) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(position, velocity, tension, cable direction) of carrier i at t."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    _, _, tension, q, _, pos, vel = _states(plan, t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return pos[0, i], vel[0, i], tension[0, i], q[0, i]
    return pos[:, i], vel[:, i], tension[:, i], q[:, i]


def phase_grid(plan: ForcePlan, samples_per_period: int) -> np.ndarray:
    """Times covering one period uniformly in phase (endpoint excluded)."""
    theta = np.linspace(0.0, 2.0 * math.pi, samples_per_period, endpoint=False)
    return theta / plan.library.xi


def compute_bounds(
    plan: ForcePlan, samples_per_period: int = BOUNDS_SAMPLES_PER_PERIOD
) -> PlanBounds:
    """Tension extrema by dense sampling plus the ellipse-based speed bounds.

    gamma are the singular values of [delta_i delta_bar_i] M_i, M_i the 2x2
    phase matrix including the amplitude, so ||f_i_dot|| stays in
    xi * [gamma_min, gamma_max]. alpha_i is the sampled minimum of
    ||f_dot_perp|| / ||f_dot|| over a period.
    """
    import warnings

    n = plan.n
    a, xi = plan.library.amplitude, plan.library.xi
    t = phase_grid(plan, samples_per_period)
    f, fd, tension, q, _, _, _ = _states(plan, t)

    gamma_min = np.zeros(n)
    gamma_max = np.zeros(n)
    for i in range(n):
        m_i = a * np.array(
            [
                [-math.sin(plan.beta[i]), -math.cos(plan.beta[i])],
                [-math.sin(plan.beta_bar[i]), -math.cos(plan.beta_bar[i])],
            ]
        )
        ellipse = np.column_stack([plan.delta[i], plan.delta_bar[i]]) @ m_i
        s = np.linalg.svd(ellipse, compute_uv=False)
        gamma_max[i], gamma_min[i] = s[0], s[1]

    # Guard against ||f_dot|| = 0 samples (only reachable with a tampered,
    # improperly colored plan); the ratio then collapses to 0 as it should.
    fd_norm = np.maximum(np.linalg.norm(fd, axis=2), 1e-300)
    fd_perp = fd - q * np.sum(q * fd, axis=2, keepdims=True)
    alpha = (np.linalg.norm(fd_perp, axis=2) / fd_norm).min(axis=0)
    if alpha.min() < 1e-9:
        warnings.warn(
            "force and its derivative become numerically collinear "
            f"(alpha = {alpha.min():.3e}); the plan is borderline inadmissible",
            RuntimeWarning,
            stacklevel=2,
        )
    t_min = tension.min(axis=0)
    t_max = tension.max(axis=0)
    return PlanBounds(
        gamma_min=gamma_min,
        gamma_max=gamma_max,
        alpha=alpha,
        tension_min=t_min,
        tension_max=t_max,
        speed_min=plan.lengths / t_max * xi * alpha * gamma_min,
        speed_max=plan.lengths / t_min * xi * gamma_max,
    )


def sample_trajectory(plan: ForcePlan, t0: float, t1: float, dt: float) -> list[TrajectorySample]:
    """Samples at t0, t0+dt, ... up to t1 (inclusive within rounding)."""
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    count = int(math.floor((t1 - t0) / dt + 1e-9)) + 1
    t = t0 + dt * np.arange(count)
    f, _, tension, q, _, pos, vel = _states(plan, t)
    return [
        TrajectorySample(
            t=float(t[k]),
            force=f[k],
            tension=tension[k],
            direction=q[k],
            position=pos[k],
            velocity=vel[k],
        )
        for k in range(count)
    ]


def trajectory_header(n: int) -> list[str]:
    cols = ["t"]
    for i in range(1, n + 1):
        cols += [
            f"px{i}", f"py{i}", f"pz{i}",
            f"vx{i}", f"vy{i}", f"vz{i}",
            f"fx{i}", f"fy{i}", f"fz{i}",
            f"T{i}",
        ]
    return cols


def write_trajectory_csv(path: str | Path, samples: list[TrajectorySample]) -> None:
    """CSV with columns t then per carrier px,py,pz,vx,vy,vz,fx,fy,fz,T.

    Values are printed with 17 significant digits so parsing and
    re-serializing is lossless.
    """
    if not samples:
        raise ValueError("no samples to write")
    n = samples[0].force.shape[0]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(trajectory_header(n)) + "\n")
        for s in samples:
            row = [s.t]
            for i in range(n):
                row.extend(s.position[i])
                row.extend(s.velocity[i])
                row.extend(s.force[i])
                row.append(s.tension[i])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
