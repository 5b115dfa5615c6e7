"""Exception hierarchy shared by the graph, path, and probability layers."""


class FrontdoorError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(FrontdoorError):
    pass


class CycleDetected(GraphError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle))


class DanglingEndpoint(GraphError):
    pass


class DuplicateLabel(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class SetsNotDisjoint(GraphError):
    pass


class LimitExceeded(GraphError):
    pass


class ParseError(FrontdoorError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class KeepContainsLatent(GraphError):
    pass


class EndpointNotKept(GraphError):
    pass


class SegmentNotProjectable(GraphError):
    pass


class InvalidQuery(FrontdoorError):
    pass


class CriterionNotSatisfied(FrontdoorError):
    pass


class ProbabilityError(FrontdoorError):
    pass


class StateSpaceTooLarge(ProbabilityError):
    pass


class ValueOutOfDomain(ProbabilityError):
    pass


class ZeroProbabilityEvent(ProbabilityError):
    pass


class NonPositiveDistribution(ProbabilityError):
    pass


class InvalidModel(ProbabilityError):
    pass


class ConstructionError(FrontdoorError):
    """Invalid parameters for one of the counterexample generators."""


class SelfLoop(GraphError):
    pass


class InvalidK(ConstructionError):
    pass


class InvalidLength(ConstructionError):
    pass


class InvalidSpec(ConstructionError):
    pass


class LengthMismatch(ConstructionError):
    pass
