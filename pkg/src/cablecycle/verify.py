"""Independent checks of a plan against the three trajectory requirements:
constant load wrench, bounded positive tensions, and never-stopping carriers.

The grasp matrix and nullspace construction are re-derived here from first
principles (plain loops, no code shared with the statics module beyond the
skew helper) so this layer can serve as an oracle for the planner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import plan as plan_mod
from .geom import E3, skew
from .graph import HamiltonianCycle
from .plan import ForcePlan
from .statics import LoadModel

STATICS_TOL = 1e-9  # N / N*m mixed wrench norm
SMOOTHNESS_TOL = 1e-6
SPEED_BOUND_SLACK = 1.01  # sampled minimum may undershoot the bound by 1%
FD_STEP = 1e-6  # s, central finite differences


def grasp_matrix_ref(attachments: np.ndarray, rotation: np.ndarray) -> np.ndarray:
    """Reference 6 x 3n grasp matrix, assembled entry by entry."""
    attachments = np.asarray(attachments, dtype=float)
    rotation = np.asarray(rotation, dtype=float)
    n = attachments.shape[0]
    g = np.zeros((6, 3 * n))
    for i in range(n):
        g[0:3, 3 * i : 3 * i + 3] = np.eye(3)
        g[3:6, 3 * i : 3 * i + 3] = skew(attachments[i]) @ rotation.T
    return g


def nullspace_ref(
    attachments: np.ndarray, rotation: np.ndarray, cycle: HamiltonianCycle
) -> np.ndarray:
    """Reference 3n x n nullspace matrix, built edge by edge: column j puts
    the rotated attachment offset of edge j at its source vertex's block and
    its negation at the destination's."""
    attachments = np.asarray(attachments, dtype=float)
    rotation = np.asarray(rotation, dtype=float)
    n = attachments.shape[0]
    out = np.zeros((3 * n, n))
    for j, (src, dst) in enumerate(cycle.edges):
        b = rotation @ (attachments[dst - 1] - attachments[src - 1])
        out[3 * (src - 1) : 3 * (src - 1) + 3, j] = b
        out[3 * (dst - 1) : 3 * (dst - 1) + 3, j] = -b
    return out


def verify_nullspace(load: LoadModel, cycle: HamiltonianCycle) -> float:
    """Largest ||G N(:, i)|| over the columns of the reference construction."""
    g = grasp_matrix_ref(load.attachments, load.rotation)
    n_mat = nullspace_ref(load.attachments, load.rotation, cycle)
    return float(np.max(np.linalg.norm(g @ n_mat, axis=0)))


@dataclass(frozen=True)
class VerificationReport:
    """Sampled evidence for each requirement, plus one pass flag apiece."""

    statics_residual_max: float
    tension_min: np.ndarray  # per carrier, N
    tension_max: np.ndarray
    speed_min: np.ndarray  # per carrier, m/s
    speed_max: np.ndarray
    smoothness_defect: float
    bound_speed_min: np.ndarray  # analytic lower bounds from the plan
    smooth_ok: bool
    statics_ok: bool
    tension_ok: bool
    speed_ok: bool

    @property
    def passed(self) -> bool:
        return self.smooth_ok and self.statics_ok and self.tension_ok and self.speed_ok

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "statics_residual_max": self.statics_residual_max,
            "tension_min_n": self.tension_min.tolist(),
            "tension_max_n": self.tension_max.tolist(),
            "speed_min_mps": self.speed_min.tolist(),
            "speed_max_mps": self.speed_max.tolist(),
            "smoothness_defect": self.smoothness_defect,
            "bound_speed_min_mps": self.bound_speed_min.tolist(),
            "flags": {
                "smooth": self.smooth_ok,
                "statics": self.statics_ok,
                "tension": self.tension_ok,
                "speed": self.speed_ok,
            },
        }


def verify_plan(plan: ForcePlan, samples_per_period: int = 10_000) -> VerificationReport:
    """Sample one period and check every requirement; failures become flags,
    not exceptions.

    The analytic speed bound from the plan is cross-checked: it must not
    exceed the sampled minimum speed by more than 1%.
    """
    if samples_per_period < 1000:
        raise ValueError("need at least 1000 samples per period")
    n = plan.n
    t = plan_mod.phase_grid(plan, samples_per_period)
    f, fd = plan_mod._forces(plan, t)

    # Statics residual against the locally built grasp matrix.
    g = grasp_matrix_ref(plan.load.attachments, plan.load.rotation)
    w0 = np.concatenate([plan.load.mass * plan.load.gravity * E3, np.zeros(3)])
    residual = np.linalg.norm(f.reshape(len(t), 3 * n) @ g.T - w0[None, :], axis=1)
    statics_residual_max = float(residual.max())

    tension = np.linalg.norm(f, axis=2)
    tension_min = tension.min(axis=0)
    tension_max = tension.max(axis=0)

    # Carrier speeds from the force derivative's orthogonal component.
    safe_t = np.maximum(tension, 1e-300)
    q = f / safe_t[..., None]
    fd_perp = fd - q * np.sum(q * fd, axis=2, keepdims=True)
    speed = plan.lengths[None, :] / safe_t * np.linalg.norm(fd_perp, axis=2)
    speed_min = speed.min(axis=0)
    speed_max = speed.max(axis=0)

    # C1 check: analytic derivatives vs central finite differences of the
    # force and of the carrier positions, at a few hundred probe times.
    # Positions are rebuilt here from the forces (tension guarded) so a
    # degenerate plan still yields a report instead of an exception.
    def positions(f_arr):
        tn = np.maximum(np.linalg.norm(f_arr, axis=2), 1e-300)
        return plan.attach_world[None] + plan.lengths[None, :, None] * f_arr / tn[..., None]

    probe = t[:: max(1, len(t) // 256)]
    f_hi, _ = plan_mod._forces(plan, probe + FD_STEP)
    f_lo, _ = plan_mod._forces(plan, probe - FD_STEP)
    f_mid, fd_probe = plan_mod._forces(plan, probe)
    defect_f = np.abs((f_hi - f_lo) / (2.0 * FD_STEP) - fd_probe).max()
    tn_mid = np.maximum(np.linalg.norm(f_mid, axis=2), 1e-300)
    q_mid = f_mid / tn_mid[..., None]
    vel_mid = (
        plan.lengths[None, :, None]
        / tn_mid[..., None]
        * (fd_probe - q_mid * np.sum(q_mid * fd_probe, axis=2, keepdims=True))
    )
    defect_p = np.abs((positions(f_hi) - positions(f_lo)) / (2.0 * FD_STEP) - vel_mid).max()
    smoothness_defect = float(max(defect_f, defect_p))

    try:
        bound_speed_min = plan_mod.compute_bounds(plan, samples_per_period).speed_min
    except plan_mod.VanishingTensionError:
        bound_speed_min = np.zeros(n)

    smooth_ok = smoothness_defect <= SMOOTHNESS_TOL
    statics_ok = statics_residual_max <= STATICS_TOL
    tension_ok = bool(tension_min.min() > plan_mod.TENSION_FLOOR and np.isfinite(tension_max).all())
    speed_ok = bool(
        bound_speed_min.min() > 0.0
        and np.all(bound_speed_min <= speed_min * SPEED_BOUND_SLACK)
    )
    return VerificationReport(
        statics_residual_max=statics_residual_max,
        tension_min=tension_min,
        tension_max=tension_max,
        speed_min=speed_min,
        speed_max=speed_max,
        smoothness_defect=smoothness_defect,
        bound_speed_min=bound_speed_min,
        smooth_ok=smooth_ok,
        statics_ok=statics_ok,
        tension_ok=tension_ok,
        speed_ok=speed_ok,
    )
