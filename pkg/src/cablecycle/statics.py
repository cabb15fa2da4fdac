"""Load statics: grasp matrix, minimum-norm equilibrium forces, the
cycle-indexed nullspace basis, and cycle admissibility.

The grasp matrix G maps the 3n stacked cable forces to the 6-wrench at the
load's center of mass. For a Hamiltonian cycle H over the attachment points,
N(H) = (H kron I3) * blockdiag(b_e1, ..., b_en) stacks n linearly independent
directions of internal force (columns of the nullspace of G), where b_ij is
the world-frame offset between attachments i and j. Carrier i sees exactly
two of those directions, delta_i (incoming edge, negated) and delta_bar_i
(outgoing edge), so its force moves on a 2D affine subspace through its
equilibrium offset f0_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import geom
from .errors import DegenerateLoadError
from .graph import HamiltonianCycle, incidence

STANDARD_GRAVITY = 9.81


@dataclass(frozen=True)
class LoadModel:
    """Rigid body with n >= 3 cable attachment points and a target pose."""

    mass: float
    inertia: np.ndarray  # 3x3, kg m^2
    attachments: np.ndarray  # n x 3 body-frame points, m
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    gravity: float = STANDARD_GRAVITY

    def __post_init__(self):
        object.__setattr__(self, "mass", float(self.mass))
        if not self.mass > 0.0:
            raise ValueError(f"load mass must be positive, got {self.mass}")
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape == (3,):
            inertia = np.diag(inertia)
        if inertia.shape != (3, 3):
            raise ValueError(f"inertia must be 3x3 (or a 3-vector diagonal), got {inertia.shape}")
        if np.max(np.abs(inertia - inertia.T)) > 1e-12:
            raise ValueError("inertia must be symmetric")
        attachments = np.asarray(self.attachments, dtype=float)
        if attachments.ndim != 2 or attachments.shape[1] != 3 or attachments.shape[0] < 3:
            raise ValueError("attachments must be an (n, 3) array with n >= 3")
        if not np.all(np.isfinite(attachments)):
            raise ValueError("attachments must be finite")
        object.__setattr__(self, "inertia", inertia)
        object.__setattr__(self, "attachments", attachments)
        object.__setattr__(self, "position", geom.as_vec3(self.position))
        object.__setattr__(self, "rotation", geom.require_rotation(self.rotation))
        object.__setattr__(self, "gravity", float(self.gravity))
        if not self.gravity > 0.0:
            raise ValueError("gravity must be positive")

    @property
    def n(self) -> int:
        return self.attachments.shape[0]

    def attachments_world(self) -> np.ndarray:
        """Attachment points in the world frame at the equilibrium pose."""
        return self.position + self.attachments @ self.rotation.T

    def to_dict(self) -> dict:
        return {
            "mass_kg": self.mass,
            "inertia": self.inertia.tolist(),
            "attachments": self.attachments.tolist(),
            "equilibrium": {
                "position": self.position.tolist(),
                "rotation_matrix": self.rotation.tolist(),
            },
            "gravity": self.gravity,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LoadModel":
        eq = data.get("equilibrium", {})
        return cls(
            mass=data["mass_kg"],
            inertia=np.asarray(data["inertia"], dtype=float),
            attachments=np.asarray(data["attachments"], dtype=float),
            position=np.asarray(eq.get("position", [0.0, 0.0, 0.0]), dtype=float),
            rotation=np.asarray(eq.get("rotation_matrix", np.eye(3).tolist()), dtype=float),
            gravity=data.get("gravity", STANDARD_GRAVITY),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "LoadModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class GraspMatrix:
    """6 x 3n force-to-wrench map with its pseudoinverse cached."""

    matrix: np.ndarray
    pinv: np.ndarray

    @property
    def rank(self) -> int:
        return geom.matrix_rank(self.matrix)


def grasp_matrix(load: LoadModel) -> GraspMatrix:
    """Assemble G: identity blocks on top, skew(b_i) R^T blocks below."""
    n = load.n
    g = np.zeros((6, 3 * n))
    rt = load.rotation.T
    for i in range(n):
        g[:3, 3 * i : 3 * i + 3] = np.eye(3)
        g[3:, 3 * i : 3 * i + 3] = geom.skew(load.attachments[i]) @ rt
    return GraspMatrix(matrix=g, pinv=geom.pseudoinverse(g))


def equilibrium_wrench(load: LoadModel) -> np.ndarray:
    """Wrench the cables must exert to hold the load still: weight, no moment."""
    return np.concatenate([load.mass * load.gravity * geom.E3, np.zeros(3)])


def equilibrium_offset(g: GraspMatrix, load: LoadModel) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-norm stacked cable forces f0 balancing gravity.

    Returns (f0 stacked of shape (3n,), per-carrier view of shape (n, 3)).
    Raises DegenerateLoadError when rank(G) < 6.
    """
    if g.rank < 6:
        raise DegenerateLoadError(
            f"grasp matrix has rank {g.rank} < 6; equilibrium wrench unreachable or ambiguous"
        )
    f0 = g.pinv @ equilibrium_wrench(load)
    return f0, f0.reshape(load.n, 3)


@dataclass(frozen=True)
class NullspaceBasis:
    """Nullspace matrix N(H) plus the per-carrier geometry derived from it.

    ``incoming`` maps carrier i (0-based) to the 0-based index of its
    incoming cycle edge h_i; the outgoing edge is (h_i + 1) mod n.
    """

    n_matrix: np.ndarray  # 3n x n
    delta: np.ndarray  # n x 3, incoming-edge direction (negated offset)
    delta_bar: np.ndarray  # n x 3, outgoing-edge direction
    incoming: tuple[int, ...]
    cycle: HamiltonianCycle

    @property
    def n(self) -> int:
        return self.n_matrix.shape[1]


def nullspace_basis(cycle: HamiltonianCycle, load: LoadModel) -> NullspaceBasis:
    """Build N(H) = (H kron I3) blockdiag(b_e) and the delta pairs."""
    n = load.n
    if cycle.n != n:
        raise ValueError(f"cycle has {cycle.n} vertices but load has {n} attachments")
    h = incidence(cycle)
    # b_edge[j] = R (b_{e_j^2} - b_{e_j^1}) in the world frame
    b_edge = np.array(
        [
            load.rotation @ (load.attachments[dst - 1] - load.attachments[src - 1])
            for src, dst in cycle.edges
        ]
    )
    n_matrix = np.zeros((3 * n, n))
    for i in range(n):
        for j in range(n):
            if h[i, j] != 0:
                n_matrix[3 * i : 3 * i + 3, j] = h[i, j] * b_edge[j]
    incoming = tuple(cycle.incoming_edge(i + 1) for i in range(n))
    delta = np.array([-b_edge[incoming[i]] for i in range(n)])
    delta_bar = np.array([b_edge[(incoming[i] + 1) % n] for i in range(n)])
    return NullspaceBasis(
        n_matrix=n_matrix, delta=delta, delta_bar=delta_bar, incoming=incoming, cycle=cycle
    )


@dataclass(frozen=True)
class AdmissibilityReport:
    """Per-carrier admissibility flags and angle diagnostics.

    ``aligned_triple[i]`` is set when delta_i and delta_bar_i are parallel
    (the three attachment points around carrier i are collinear).
    ``f0_in_span[i]`` is set when the equilibrium offset lies in their span,
    which would let the cable force (and tension) reach zero.
    """

    aligned_triple: tuple[bool, ...]
    f0_in_span: tuple[bool, ...]
    delta_angle: tuple[float, ...]  # angle between delta_i and delta_bar_i, rad
    f0_angle: tuple[float, ...]  # angle between f0_i and the span normal, rad
    admissible: bool
    score: float


def _span_diagnostics(f0_i, d, db):
    """sin of the delta angle, cos of the f0-to-normal angle, and the flags."""
    nd, ndb, nf = np.linalg.norm(d), np.linalg.norm(db), np.linalg.norm(f0_i)
    normal = np.cross(d, db)
    nn = np.linalg.norm(normal)
    sin_delta = nn / (nd * ndb) if nd > 0 and ndb > 0 else 0.0
    aligned = geom.matrix_rank(np.column_stack([d, db])) < 2
    in_span = geom.matrix_rank(np.column_stack([f0_i, d, db])) < 3
    cos_f0 = abs(float(normal @ f0_i)) / (nn * nf) if nn > 0 and nf > 0 else 0.0
    return sin_delta, cos_f0, aligned, in_span


def check_admissibility(basis: NullspaceBasis, f0_per: np.ndarray) -> AdmissibilityReport:
    """Evaluate both sufficiency conditions for every carrier."""
    f0_per = np.asarray(f0_per, dtype=float).reshape(basis.n, 3)
    aligned, in_span, d_angle, f_angle, scores = [], [], [], [], []
    for i in range(basis.n):
        sin_d, cos_f, bad_triple, bad_span = _span_diagnostics(
            f0_per[i], basis.delta[i], basis.delta_bar[i]
        )
        aligned.append(bad_triple)
        in_span.append(bad_span)
        d_angle.append(float(np.arcsin(min(1.0, sin_d))))
        f_angle.append(float(np.arccos(min(1.0, cos_f))))
        scores.append(sin_d * cos_f)
    admissible = not any(aligned) and not any(in_span)
    return AdmissibilityReport(
        aligned_triple=tuple(aligned),
        f0_in_span=tuple(in_span),
        delta_angle=tuple(d_angle),
        f0_angle=tuple(f_angle),
        admissible=admissible,
        score=min(scores) if admissible else 0.0,
    )


def score_cycle(basis: NullspaceBasis, f0_per: np.ndarray) -> float:
    """Ranking heuristic in [0, 1]: prefers orthogonal delta pairs and f0
    orthogonal to their span; 0 for inadmissible cycles.

    min_i |sin(angle(delta_i, delta_bar_i))| * |cos(angle(f0_i, span normal))|
    """
    return check_admissibility(basis, f0_per).score
