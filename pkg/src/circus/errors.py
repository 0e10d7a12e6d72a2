"""Exception hierarchy shared by every module."""


class CircusError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class UniverseTooLarge(CircusError):
    pass


class UniverseMismatch(CircusError):
    pass


class UnknownVariable(CircusError):
    pass


class InvalidDiagram(CircusError):
    pass


class CyclicGraph(InvalidDiagram):
    pass


class MissingBranch(InvalidDiagram):
    pass


class SinkWithOutEdge(InvalidDiagram):
    pass


class StrayEpsilon(InvalidDiagram):
    pass


class PreconditionViolated(CircusError):
    """An operation was applied outside the class it is defined for."""


class SemanticsMismatch(PreconditionViolated):
    pass


class InvalidCircuit(CircusError):
    pass


class NotStructured(CircusError):
    def __init__(self, message, gate=None):
        super().__init__(message)
        self.gate = gate


class InvalidVTree(CircusError):
    pass


class NotFullBinary(InvalidVTree):
    pass


class LeafSetMismatch(InvalidVTree):
    pass


class InvalidAutomaton(CircusError):
    pass


class ParseError(Exception):
    """Malformed input file (CLI exit code 2)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
