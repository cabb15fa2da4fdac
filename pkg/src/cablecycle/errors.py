"""Exception types shared across the planner and simulator."""


class PlannerError(Exception):
    """Base class for all cablecycle-specific failures."""


class DegenerateLoadError(PlannerError):
    """Grasp matrix is rank deficient: the equilibrium wrench is unreachable
    or the force allocation is ambiguous."""


class InadmissibleCycleError(PlannerError):
    """The chosen Hamiltonian cycle violates an admissibility condition.

    Carries the per-carrier diagnostic report in ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class VanishingTensionError(PlannerError):
    """A cable tension dropped to (numerically) zero, so the cable direction
    is undefined and the plan is invalid."""


class DegenerateGeometryError(PlannerError):
    """Carrier and attachment point (numerically) coincide; the cable
    direction is undefined."""


class SimulationDivergenceError(PlannerError):
    """The integrator produced a non-finite state. ``t`` holds the simulated
    time at which divergence was detected."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
