"""Coordinated never-stopping carrier trajectories for a cable-suspended
load held at a fixed pose, with analytic verification and a closed-loop
physics simulation."""

__version__ = "0.1.0"

from .errors import (
    DegenerateGeometryError,
    DegenerateLoadError,
    InadmissibleCycleError,
    PlannerError,
    SimulationDivergenceError,
    VanishingTensionError,
)
from .graph import EdgeColoring, HamiltonianCycle, color_edges, enumerate_cycles, incidence
from .plan import (
    CoefficientLibrary,
    ForcePlan,
    PlanBounds,
    TrajectorySample,
    build_plan,
    carrier_state_at,
    compute_bounds,
    force_at,
    sample_trajectory,
)
from .sim import AttachmentSampler, SimConfig, SimState, run, run_sweep, sample_attachments
from .statics import (
    AdmissibilityReport,
    GraspMatrix,
    LoadModel,
    NullspaceBasis,
    check_admissibility,
    equilibrium_offset,
    grasp_matrix,
    nullspace_basis,
    score_cycle,
)
from .verify import VerificationReport, verify_nullspace, verify_plan

__all__ = [
    "AdmissibilityReport",
    "AttachmentSampler",
    "CoefficientLibrary",
    "DegenerateGeometryError",
    "DegenerateLoadError",
    "EdgeColoring",
    "ForcePlan",
    "GraspMatrix",
    "HamiltonianCycle",
    "InadmissibleCycleError",
    "LoadModel",
    "NullspaceBasis",
    "PlanBounds",
    "PlannerError",
    "SimConfig",
    "SimState",
    "SimulationDivergenceError",
    "TrajectorySample",
    "VanishingTensionError",
    "VerificationReport",
    "build_plan",
    "carrier_state_at",
    "check_admissibility",
    "color_edges",
    "compute_bounds",
    "enumerate_cycles",
    "equilibrium_offset",
    "force_at",
    "grasp_matrix",
    "incidence",
    "nullspace_basis",
    "run",
    "run_sweep",
    "sample_attachments",
    "sample_trajectory",
    "score_cycle",
    "verify_nullspace",
    "verify_plan",
]
