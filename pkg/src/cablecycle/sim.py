"""Closed-loop validation: rigid-body load, elastic cables, PD carriers.

The load is a full 6-DOF rigid body driven by the cable spring-damper
forces, gravity, and linear viscous friction. Each carrier is a double
integrator tracking its planned trajectory with a PD law on noise-corrupted
measurements of its own state (gravity compensated, no force feedforward),
so cable reaction acts as an unmodeled disturbance. Everything integrates
with fixed-step RK4; the orientation block is re-orthonormalized after every
step.

Because the plan assumes inextensible cables while the simulated ones are
springs, a plan-perfect setup would still settle below the target pose: each
cable stretches by T/K_c and each carrier sags by T/K_p against its PD
spring. Two measures cancel the static part of that gap: carriers start at
the stretch-consistent point (plan position plus T(0)/K_c along the cable)
and, unless ``reference_trim`` is disabled, references are shifted by the
constant (1/K_c + 1/K_p) f0_i so the elastic equilibrium coincides with the
target pose. Disable the trim for a literal reading of the paper setup.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import geom
from . import plan as plan_mod
from .errors import DegenerateGeometryError, SimulationDivergenceError
from .graph import HamiltonianCycle, color_edges, enumerate_cycles
from .plan import ForcePlan, build_plan
from .statics import LoadModel

MIN_CABLE_EXTENT = 1e-9  # m, below this the cable direction is undefined

EYE3 = np.eye(3)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(list(seed) if isinstance(seed, tuple) else seed)


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters; defaults reproduce the reference setup."""

    carrier_mass: float = 0.1  # kg
    kp: float = 100.0  # N/m, diagonal proportional gain
    kd: float = 10.0  # N s/m, diagonal derivative gain
    noise_pos_std: float = 0.005  # m, measurement noise on carrier position
    noise_vel_std: float = 0.01  # m/s, measurement noise on carrier velocity
    load_linear_damping: float = 0.1  # N s/m
    load_angular_damping: float = 0.1  # N m s
    cable_stiffness: float = 500.0  # N/m
    cable_damping: float = 1.0  # N s/m
    dt: float = 1e-3  # s
    duration: float = 30.0  # s
    seed: int | tuple = 0
    bilateral_springs: bool = False  # True: cables may push (literal springs)
    cable_reaction_on_carriers: bool = True  # couple cable force into carriers
    reference_trim: bool = True  # cancel static sag in the references
    pin_carriers: bool = False  # kinematically lock carriers to references
    use_plan_forces: bool = False  # apply planned forces instead of spring law
    record_every: int = 1  # series decimation for CSV output

    def __post_init__(self):
        for name in ("carrier_mass", "kp", "cable_stiffness", "dt", "duration"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("kd", "cable_damping", "noise_pos_std", "noise_vel_std",
                     "load_linear_damping", "load_angular_damping"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class SimState:
    """Full simulator state; ``rng`` is the noise stream."""

    t: float
    load_pos: np.ndarray
    load_vel: np.ndarray
    rotation: np.ndarray
    omega_body: np.ndarray
    carrier_pos: np.ndarray  # n x 3
    carrier_vel: np.ndarray  # n x 3
    rng: np.random.Generator | None = None


@dataclass(frozen=True)
class AttachmentSampler:
    """Random body-frame attachment points on a jittered ring with height."""

    n: int
    seed: int
    radius: float = 1.2  # m
    angle_jitter: float = 0.2  # rad, uniform in [0, angle_jitter]
    height: float = 1.0  # m, uniform in [0, height]


def sample_attachments(sampler: AttachmentSampler) -> np.ndarray:
    """Points [R_z(2 pi i / n + zeta_i) (radius, 0); z_i], i = 1..n."""
    if sampler.n < 3:
        raise ValueError("need at least 3 attachment points")
    rng = np.random.default_rng(sampler.seed)
    zeta = rng.uniform(0.0, sampler.angle_jitter, sampler.n)
    z = rng.uniform(0.0, sampler.height, sampler.n)
    pts = np.zeros((sampler.n, 3))
    for i in range(sampler.n):
        angle = 2.0 * math.pi * (i + 1) / sampler.n + zeta[i]
        pts[i, 0] = sampler.radius * math.cos(angle)
        pts[i, 1] = sampler.radius * math.sin(angle)
        pts[i, 2] = z[i]
    return pts


def cable_force(
    carrier_pos,
    attach_pos,
    attach_vel,
    carrier_vel,
    stiffness: float,
    damping: float,
    rest_length: float,
    bilateral: bool = False,
) -> tuple[np.ndarray, float]:
    """Spring-damper cable: returns (force on the load, tension magnitude).

    The force on the carrier is the exact negation. Slack cables (tension
    would be negative) exert nothing unless ``bilateral`` is set.
    """
    d = np.asarray(carrier_pos, dtype=float) - np.asarray(attach_pos, dtype=float)
    dist = float(np.linalg.norm(d))
    if dist < MIN_CABLE_EXTENT:
        raise DegenerateGeometryError(
            f"carrier and attachment point coincide (distance {dist:.3e} m)"
        )
    dhat = d / dist
    stretch = dist - rest_length
    rate = float(dhat @ (np.asarray(carrier_vel, dtype=float) - np.asarray(attach_vel, dtype=float)))
    tension = stiffness * stretch + damping * rate
    if not bilateral:
        tension = max(tension, 0.0)
    return tension * dhat, tension


class _Engine:
    """Precomputed constants and the state derivative for one scenario."""

    def __init__(self, load: LoadModel, plan: ForcePlan, cfg: SimConfig):
        self.load = load
        self.plan = plan
        self.cfg = cfg
        self.n = load.n
        self.inv_mass = 1.0 / load.mass
        self.inertia = load.inertia
        self.inertia_inv = np.linalg.inv(load.inertia)
        self.gravity = load.gravity
        self.attach_body = load.attachments
        self.rest = plan.lengths.copy()
        self.inv_carrier_mass = 1.0 / cfg.carrier_mass
        # The plan assumes inextensible cables; the simulated springs only
        # realize the planned tension T_i(t) if the carrier stands off by the
        # elastic elongation T_i(t)/K_c along the cable, i.e. f_i(t)/K_c
        # (plus the PD sag f_i(t)/K_p when carriers feel the reaction).
        # The correction vanishes in the inextensible limit K_c -> inf.
        self.compliance = 1.0 / cfg.cable_stiffness
        if cfg.cable_reaction_on_carriers:
            self.compliance += 1.0 / cfg.kp
        if not cfg.reference_trim:
            self.compliance = 0.0
        # Hot-loop scratch: np.cross carries too much Python overhead for
        # 3-vectors, so cross products go through this skew buffer and
        # column arithmetic instead.
        self._s_omega = np.zeros((3, 3))

    def references(self, t: np.ndarray):
        """(positions, velocities, planned forces) at the given times."""
        f, fd, _, _, _, pos, vel = plan_mod._states(self.plan, t)
        return pos + self.compliance * f, vel + self.compliance * fd, f

    def deriv(self, y, ref_p, ref_v, noise_p, noise_v, ref_f, diag=False):
        cfg = self.cfg
        n = self.n
        p_l = y[0:3]
        v_l = y[3:6]
        r = y[6:15].reshape(3, 3)
        omega = y[15:18]
        if cfg.pin_carriers:
            p_c = ref_p
            v_c = ref_v
        else:
            p_c = y[18 : 18 + 3 * n].reshape(n, 3)
            v_c = y[18 + 3 * n :].reshape(n, 3)

        wx, wy, wz = omega
        s_omega = self._s_omega
        s_omega[0, 1] = -wz
        s_omega[0, 2] = wy
        s_omega[1, 0] = wz
        s_omega[1, 2] = -wx
        s_omega[2, 0] = -wy
        s_omega[2, 1] = wx

        attach = p_l + self.attach_body @ r.T
        # d/dt (R b) = R S(omega) b, and S(omega)^T = -S(omega)
        v_attach = v_l - self.attach_body @ s_omega @ r.T

        if cfg.use_plan_forces:
            f_load = ref_f
            tension = np.sqrt(np.einsum("ij,ij->i", ref_f, ref_f))
        else:
            d = p_c - attach
            dist = np.sqrt(np.einsum("ij,ij->i", d, d))
            if dist.min() < MIN_CABLE_EXTENT:
                raise DegenerateGeometryError("carrier and attachment point coincide")
            dhat = d / dist[:, None]
            rate = np.einsum("ij,ij->i", dhat, v_c - v_attach)
            tension = cfg.cable_stiffness * (dist - self.rest) + cfg.cable_damping * rate
            if not cfg.bilateral_springs:
                tension = np.maximum(tension, 0.0)
            f_load = tension[:, None] * dhat

        f_sum = np.add.reduce(f_load, 0)
        a_l = self.inv_mass * (f_sum - cfg.load_linear_damping * v_l)
        a_l[2] -= self.gravity
        f_body = f_load @ r
        b = self.attach_body
        torque = np.array(
            [
                float(b[:, 1] @ f_body[:, 2] - b[:, 2] @ f_body[:, 1]),
                float(b[:, 2] @ f_body[:, 0] - b[:, 0] @ f_body[:, 2]),
                float(b[:, 0] @ f_body[:, 1] - b[:, 1] @ f_body[:, 0]),
            ]
        )
        jw = self.inertia @ omega
        torque[0] -= cfg.load_angular_damping * wx + (wy * jw[2] - wz * jw[1])
        torque[1] -= cfg.load_angular_damping * wy + (wz * jw[0] - wx * jw[2])
        torque[2] -= cfg.load_angular_damping * wz + (wx * jw[1] - wy * jw[0])
        omega_dot = self.inertia_inv @ torque
        r_dot = r @ s_omega

        ydot = np.empty_like(y)
        ydot[0:3] = v_l
        ydot[3:6] = a_l
        ydot[6:15] = r_dot.reshape(9)
        ydot[15:18] = omega_dot
        if cfg.pin_carriers:
            ydot[18:] = 0.0
        else:
            u = (
                cfg.kp * (ref_p - p_c - noise_p)
                + cfg.kd * (ref_v - v_c - noise_v)
            )
            # Gravity compensation in u cancels carrier weight exactly; the
            # controller never models the cable, so when the reaction is
            # coupled in it acts as a pure disturbance.
            if cfg.cable_reaction_on_carriers:
                a_c = self.inv_carrier_mass * (u - f_load)
            else:
                a_c = self.inv_carrier_mass * u
            ydot[18 : 18 + 3 * n] = v_c.reshape(-1)
            ydot[18 + 3 * n :] = a_c.reshape(-1)
        if diag:
            return ydot, tension, f_load
        return ydot


def _pack(state: SimState, n: int) -> np.ndarray:
    y = np.empty(18 + 6 * n)
    y[0:3] = state.load_pos
    y[3:6] = state.load_vel
    y[6:15] = state.rotation.reshape(9)
    y[15:18] = state.omega_body
    y[18 : 18 + 3 * n] = state.carrier_pos.reshape(-1)
    y[18 + 3 * n :] = state.carrier_vel.reshape(-1)
    return y


def _unpack(y: np.ndarray, t: float, n: int, rng) -> SimState:
    return SimState(
        t=t,
        load_pos=y[0:3].copy(),
        load_vel=y[3:6].copy(),
        rotation=y[6:15].reshape(3, 3).copy(),
        omega_body=y[15:18].copy(),
        carrier_pos=y[18 : 18 + 3 * n].reshape(n, 3).copy(),
        carrier_vel=y[18 + 3 * n :].reshape(n, 3).copy(),
        rng=rng,
    )


def _reorthonormalize(y: np.ndarray) -> None:
    """One Newton-Schulz step pulls the rotation block back onto SO(3)."""
    r = y[6:15].reshape(3, 3)
    y[6:15] = (r @ (1.5 * np.eye(3) - 0.5 * (r.T @ r))).reshape(9)


def initial_state(load: LoadModel, plan: ForcePlan, cfg: SimConfig) -> SimState:
    """Equilibrium-consistent start: load at its target pose, carriers on
    their references, so the springs reproduce the planned forces at t=0."""
    f, fd, _, _, _, pos, vel = plan_mod._states(plan, np.array([0.0]))
    stretch = 1.0 / cfg.cable_stiffness
    return SimState(
        t=0.0,
        load_pos=load.position.copy(),
        load_vel=np.zeros(3),
        rotation=load.rotation.copy(),
        omega_body=np.zeros(3),
        carrier_pos=pos[0] + stretch * f[0],
        carrier_vel=vel[0] + stretch * fd[0],
        rng=_rng(cfg.seed),
    )


def step(state: SimState, plan: ForcePlan, cfg: SimConfig) -> SimState:
    """One RK4 step of cfg.dt from the given state; draws one noise sample
    per step (held across the four stages)."""
    engine = _Engine(plan.load, plan, cfg)
    n = plan.n
    y = _pack(state, n)
    times = np.array([state.t, state.t + 0.5 * cfg.dt, state.t + cfg.dt])
    ref_p, ref_v, ref_f = engine.references(times)
    rng = state.rng if state.rng is not None else _rng(cfg.seed)
    noise_p = rng.normal(0.0, cfg.noise_pos_std, (n, 3)) if cfg.noise_pos_std > 0 else np.zeros((n, 3))
    noise_v = rng.normal(0.0, cfg.noise_vel_std, (n, 3)) if cfg.noise_vel_std > 0 else np.zeros((n, 3))
    y_next = _rk4(engine, y, cfg.dt, ref_p, ref_v, ref_f, noise_p, noise_v)
    if not math.isfinite(float(np.sum(y_next))):
        raise SimulationDivergenceError(
            f"non-finite state at t = {state.t + cfg.dt:.6f} s", t=state.t + cfg.dt
        )
    if cfg.pin_carriers:
        y_next[18 : 18 + 3 * n] = ref_p[2].reshape(-1)
        y_next[18 + 3 * n :] = ref_v[2].reshape(-1)
    return _unpack(y_next, state.t + cfg.dt, n, rng)


def _rk4(engine, y, dt, ref_p, ref_v, ref_f, noise_p, noise_v):
    k1 = engine.deriv(y, ref_p[0], ref_v[0], noise_p, noise_v, ref_f[0])
    k2 = engine.deriv(y + (0.5 * dt) * k1, ref_p[1], ref_v[1], noise_p, noise_v, ref_f[1])
    k3 = engine.deriv(y + (0.5 * dt) * k2, ref_p[1], ref_v[1], noise_p, noise_v, ref_f[1])
    k4 = engine.deriv(y + dt * k3, ref_p[2], ref_v[2], noise_p, noise_v, ref_f[2])
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _reorthonormalize(y_next)
    return y_next


@dataclass
class SimMetrics:
    """Full-resolution error/speed/tension series and their aggregates."""

    t: np.ndarray
    e_pl: np.ndarray  # m
    e_rl: np.ndarray  # rad, |yaw| + |pitch| + |roll|
    speed: np.ndarray  # steps x n, m/s
    tension: np.ndarray  # steps x n, N
    max_rotation_defect: float = 0.0  # Frobenius norm of R^T R - I, worst step
    max_e_pl: float = field(init=False)
    mean_e_pl: float = field(init=False)
    max_e_rl: float = field(init=False)
    min_speed: np.ndarray = field(init=False)
    max_speed: np.ndarray = field(init=False)
    min_tension: np.ndarray = field(init=False)
    max_tension: np.ndarray = field(init=False)

    def __post_init__(self):
        self.max_e_pl = float(self.e_pl.max())
        self.mean_e_pl = float(self.e_pl.mean())
        self.max_e_rl = float(self.e_rl.max())
        self.min_speed = self.speed.min(axis=0)
        self.max_speed = self.speed.max(axis=0)
        self.min_tension = self.tension.min(axis=0)
        self.max_tension = self.tension.max(axis=0)

    def to_dict(self) -> dict:
        return {
            "max_e_pl_m": self.max_e_pl,
            "mean_e_pl_m": self.mean_e_pl,
            "max_e_rl_deg": math.degrees(self.max_e_rl),
            "min_speed_mps": self.min_speed.tolist(),
            "max_speed_mps": self.max_speed.tolist(),
            "min_tension_n": self.min_tension.tolist(),
            "max_tension_n": self.max_tension.tolist(),
        }


@dataclass
class SimSeries:
    """Decimated state series for CSV export."""

    t: np.ndarray
    carrier_pos: np.ndarray  # K x n x 3
    carrier_vel: np.ndarray
    cable_force: np.ndarray  # K x n x 3, force on the load
    tension: np.ndarray  # K x n
    load_pos: np.ndarray  # K x 3
    load_euler: np.ndarray  # K x 3, (roll, pitch, yaw) rad


def run(load: LoadModel, plan: ForcePlan, cfg: SimConfig) -> tuple[SimMetrics, SimSeries]:
    """Integrate for cfg.duration from the equilibrium-consistent state."""
    if plan.n != load.n or not np.allclose(plan.load.attachments, load.attachments):
        raise ValueError("plan and load describe different attachment geometries")
    n = load.n
    engine = _Engine(load, plan, cfg)
    steps = int(round(cfg.duration / cfg.dt))
    if steps < 1:
        raise ValueError("duration shorter than one step")

    # References and planned forces at every half-step, plus per-step noise,
    # are precomputed: the integration loop then touches numpy only for the
    # actual dynamics.
    stage_t = 0.5 * cfg.dt * np.arange(2 * steps + 1)
    ref_p, ref_v, ref_f = engine.references(stage_t)
    rng = _rng(cfg.seed)
    noise_p = (
        rng.normal(0.0, cfg.noise_pos_std, (steps, n, 3))
        if cfg.noise_pos_std > 0
        else np.zeros((steps, n, 3))
    )
    noise_v = (
        rng.normal(0.0, cfg.noise_vel_std, (steps, n, 3))
        if cfg.noise_vel_std > 0
        else np.zeros((steps, n, 3))
    )

    state0 = initial_state(load, plan, cfg)
    y = _pack(state0, n)

    kt = steps + 1
    m_e_pl = np.empty(kt)
    m_e_rl = np.empty(kt)
    m_speed = np.empty((kt, n))
    m_tension = np.empty((kt, n))
    rec_idx = list(range(0, steps + 1, cfg.record_every))
    if rec_idx[-1] != steps:
        rec_idx.append(steps)
    rec_set = set(rec_idx)
    s_pos, s_vel, s_force, s_tension, s_lpos, s_euler, s_t = [], [], [], [], [], [], []

    p_eq = load.position
    r_eq_t = load.rotation.T
    rot_defect = 0.0
    deriv = engine.deriv
    dt = cfg.dt
    pin = cfg.pin_carriers

    for k in range(steps + 1):
        j = 2 * k
        kd1, tension_k, force_k = deriv(
            y, ref_p[j], ref_v[j], noise_p[min(k, steps - 1)], noise_v[min(k, steps - 1)],
            ref_f[j], diag=True,
        )
        # Record observables of the current state.
        m_e_pl[k] = math.sqrt(
            (y[0] - p_eq[0]) ** 2 + (y[1] - p_eq[1]) ** 2 + (y[2] - p_eq[2]) ** 2
        )
        r_now = y[6:15].reshape(3, 3)
        defect = np.linalg.norm(r_now.T @ r_now - EYE3)
        if defect > rot_defect:
            rot_defect = defect
        r_err = r_eq_t @ r_now
        yaw, pitch, roll = geom.euler_zyx(r_err)
        m_e_rl[k] = abs(yaw) + abs(pitch) + abs(roll)
        if pin:
            v_c = ref_v[j]
        else:
            v_c = y[18 + 3 * n :].reshape(n, 3)
        m_speed[k] = np.linalg.norm(v_c, axis=1)
        m_tension[k] = tension_k
        if k in rec_set:
            s_t.append(k * dt)
            s_pos.append(ref_p[j].copy() if pin else y[18 : 18 + 3 * n].reshape(n, 3).copy())
            s_vel.append(v_c.copy())
            s_force.append(force_k.copy())
            s_tension.append(tension_k.copy())
            s_lpos.append(y[0:3].copy())
            s_euler.append(np.array([roll, pitch, yaw]))
        if k == steps:
            break

        k2 = deriv(y + (0.5 * dt) * kd1, ref_p[j + 1], ref_v[j + 1], noise_p[k], noise_v[k], ref_f[j + 1])
        k3 = deriv(y + (0.5 * dt) * k2, ref_p[j + 1], ref_v[j + 1], noise_p[k], noise_v[k], ref_f[j + 1])
        k4 = deriv(y + dt * k3, ref_p[j + 2], ref_v[j + 2], noise_p[k], noise_v[k], ref_f[j + 2])
        y += (dt / 6.0) * (kd1 + 2.0 * k2 + 2.0 * k3 + k4)
        _reorthonormalize(y)
        if pin:
            y[18 : 18 + 3 * n] = ref_p[j + 2].reshape(-1)
            y[18 + 3 * n :] = ref_v[j + 2].reshape(-1)
        if not math.isfinite(float(np.sum(y))):
            raise SimulationDivergenceError(
                f"non-finite state at t = {(k + 1) * dt:.6f} s", t=(k + 1) * dt
            )

    metrics = SimMetrics(
        t=dt * np.arange(steps + 1),
        e_pl=m_e_pl,
        e_rl=m_e_rl,
        speed=m_speed,
        tension=m_tension,
        max_rotation_defect=float(rot_defect),
    )
    series = SimSeries(
        t=np.array(s_t),
        carrier_pos=np.array(s_pos),
        carrier_vel=np.array(s_vel),
        cable_force=np.array(s_force),
        tension=np.array(s_tension),
        load_pos=np.array(s_lpos),
        load_euler=np.array(s_euler),
    )
    return metrics, series


def write_series_csv(path: str | Path, series: SimSeries) -> None:
    """Same carrier columns as the plan CSV plus load pose columns."""
    n = series.carrier_pos.shape[1]
    header = plan_mod.trajectory_header(n) + ["plx", "ply", "plz", "roll", "pitch", "yaw"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(len(series.t)):
            row = [series.t[k]]
            for i in range(n):
                row.extend(series.carrier_pos[k, i])
                row.extend(series.carrier_vel[k, i])
                row.extend(series.cable_force[k, i])
                row.append(series.tension[k, i])
            row.extend(series.load_pos[k])
            row.extend(series.load_euler[k])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


@dataclass
class SweepRow:
    """Outcome of one cycle's simulation within a sweep."""

    tour: tuple[int, ...]
    admissible: bool
    score: float
    metrics: dict | None


def _sweep_worker(args) -> SweepRow:
    load, tour, mode, amplitude, xi, lengths, cfg, index = args
    cycle = HamiltonianCycle(tour)
    try:
        p = build_plan(
            load, cycle, color_edges(cycle, mode), amplitude=amplitude, xi=xi, lengths=lengths
        )
    except plan_mod.InadmissibleCycleError:
        return SweepRow(tour=tour, admissible=False, score=0.0, metrics=None)
    cfg_i = replace(cfg, seed=_seed_for(cfg.seed, index))
    metrics, _ = run(load, p, cfg_i)
    return SweepRow(
        tour=tour, admissible=True, score=p.report.score, metrics=metrics.to_dict()
    )


def _seed_for(base, index: int) -> tuple:
    if isinstance(base, tuple):
        return base + (index,)
    return (base, index)


def run_sweep(
    load: LoadModel,
    cfg: SimConfig,
    mode: str = "universal",
    amplitude: float = plan_mod.DEFAULT_AMPLITUDE,
    xi: float = plan_mod.DEFAULT_XI,
    lengths: float = plan_mod.DEFAULT_CABLE_LENGTH,
    cycles: list[HamiltonianCycle] | None = None,
    jobs: int = 1,
) -> list[SweepRow]:
    """One simulation per admissible Hamiltonian cycle.

    The universal n-function library (mode="universal") keeps the same
    edge-to-function assignment valid for every cycle. Each cycle gets an
    independent noise stream derived from (cfg.seed, cycle index), so results
    do not depend on execution order or parallelism.
    """
    if cycles is None:
        cycles = enumerate_cycles(load.n)
    tasks = [
        (load, c.tour, mode, amplitude, xi, lengths, cfg, i) for i, c in enumerate(cycles)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_worker, tasks))
    return [_sweep_worker(t) for t in tasks]
