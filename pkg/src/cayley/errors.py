"""Exception hierarchy shared by all modules."""


class CayleyError(Exception):
    """Base class for every error raised by the package."""


class InputError(CayleyError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class CharacterizationError(CayleyError):
    """The combinatorial characterization does not hold (CLI exit code 3)."""


class InfeasibleError(CayleyError):
    """Numerical infeasibility or missing witness (CLI exit code 4)."""


class EdgeNotFound(InputError):
    pass


class VertexNotFound(InputError):
    pass


class NotANonEdge(InputError):
    pass


class GraphNotConnected(InputError):
    pass


class MinorTargetTooLarge(InputError):
    pass


class NotPartialKTree(CharacterizationError):
    pass


class BadParameterSet(InputError):
    pass


class BadInterval(InputError):
    pass


class BadParameter(InputError):
    pass


class UnsupportedDimension(InputError):
    pass


class NotPolytopeRepresentable(CharacterizationError):
    pass


class EmptyConfigurationSpace(InfeasibleError):
    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class Degenerate(InfeasibleError):
    """Coincident centers with equal radii: infinitely many solutions."""


class NotRealizable(InfeasibleError):
    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class ConfigOutsideSpace(InfeasibleError):
    pass


class BaseRealizationRequired(InfeasibleError):
    pass


class IncompleteRealization(InputError):
    pass


class NoWitness(InfeasibleError):
    pass


class OracleInapplicable(CayleyError):
    pass
