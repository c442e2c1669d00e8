"""Exception types shared across the library."""


class HierflowError(Exception):
    """Base class for all library errors."""


# graph construction
class SelfLoopError(HierflowError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"self-loop at vertex {vertex}")


class VertexOutOfRangeError(HierflowError):
    pass


class InfeasibleFlowError(HierflowError):
    pass


# dynamic forest
class NotARootError(HierflowError):
    pass


class SameTreeError(HierflowError):
    pass


class NoParentError(HierflowError):
    pass


# push-relabel
class WeightZeroError(HierflowError):
    pass


class BadInstanceError(HierflowError):
    pass


# hierarchy
class NotAcyclicError(HierflowError):
    pass


class LevelViolationError(HierflowError):
    pass


class NotStronglyConnectedError(HierflowError):
    pass


class InvalidHierarchyError(HierflowError):
    pass


# builder
class IterationCapExceededError(HierflowError):
    pass


class BuildFailedError(HierflowError):
    def __init__(self, message, component=None, witness=None):
        self.component = component
        self.witness = witness
        super().__init__(message)


class CutCheckFailedError(HierflowError):
    """A matching-player round produced a cut that fails its contract."""


# driver
class NotADAGError(HierflowError):
    pass


# file formats
class ParseError(HierflowError):
    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class MissingSourceOrSinkError(HierflowError):
    pass


class ArcCountMismatchError(HierflowError):
    pass


class NotDiffusionError(HierflowError):
    pass


class BadParamsError(HierflowError):
    pass
