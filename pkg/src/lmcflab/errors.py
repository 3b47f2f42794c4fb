"""Exception hierarchy shared by all modules.

Exit-code contract for the CLI: usage/parameter problems map to 2,
numerical-tolerance failures to 3, model-assumption violations to 4.
"""


class LmcflabError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParameterError(LmcflabError):
    """Invalid arguments (wrong dimension, nonpositive parameter, ...)."""

    exit_code = 2


class ToleranceError(LmcflabError):
    """A numerical tolerance could not be met; carries the achieved estimate."""

    exit_code = 3

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ModelAssumptionError(LmcflabError):
    """Input violates a structural assumption (non-Lagrangian, non-exact, ...)."""

    exit_code = 4


class LagrangianConditionError(ModelAssumptionError):
    """Frame or surface fails the omega-vanishing test; carries the residual."""

    def __init__(self, message, omega_residual=None):
        super().__init__(message)
        self.omega_residual = omega_residual


class NonExactLoopError(ModelAssumptionError):
    """A sampled loop has a nonzero Liouville period."""

    def __init__(self, message, loop_index=None, period=None):
        super().__init__(message)
        self.loop_index = loop_index
        self.period = period


class TruncationError(ToleranceError):
    """Quadrature/sampling extent insufficient for the requested tolerance."""


class TailEnergyError(ToleranceError):
    """Mode-expansion tail energy above threshold."""


class GraphRepresentabilityError(ModelAssumptionError):
    """Requested graph/perturbation leaves the representable regime."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class MatchingAmbiguityError(ModelAssumptionError):
    """Component matching between a state and a reference cone is ambiguous."""

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = candidates


class DecayRateError(ModelAssumptionError):
    """Declared decay rate inconsistent with the sampled data."""

    def __init__(self, message, fitted_rate=None):
        super().__init__(message)
        self.fitted_rate = fitted_rate


class PhaseSumError(ParameterError):
    """Phase vector does not satisfy the sum constraint."""


class NewtonStagnationError(ToleranceError):
    """Damped Newton failed to converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
