"""Exception hierarchy shared by all modules."""


class MorseTWError(Exception):
    """Base class for every error raised by this package."""


class InputError(MorseTWError):
    """The caller supplied malformed or unsupported input."""


class VerificationError(MorseTWError):
    """An internal self-check failed; this indicates a bug, not bad input."""


# complex
class InvalidFace(InputError):
    pass


class MixedDimension(InvalidFace):
    pass


class DegenerateFace(InvalidFace):
    pass


class DuplicateFace(InvalidFace):
    pass


class NotDimension3(InputError):
    pass


class TriangleInMoreThanTwoTetrahedra(InputError):
    pass


class NotClosed3Manifold(InputError):
    pass


# treewidth / acfm
class TooLarge(InputError):
    pass


class InvalidDecomposition(InputError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class InvalidInputDecomposition(InvalidDecomposition):
    pass


class InvalidDualDecomposition(InvalidDecomposition):
    pass


class DisconnectedEdgeStar(InputError):
    """The tetrahedra around some edge are not linked through shared triangles."""


class NotAMatching(InputError):
    pass


class ParityViolation(VerificationError):
    pass


class WitnessVerificationFailed(VerificationError):
    pass


# morse
class NotInComplex(InputError):
    pass


class NotCodimensionOne(InputError):
    pass


class SpinePairsNotCycleFree(InputError):
    pass


class DisconnectedGamma(InputError):
    pass


# reductions
class UnknownSentence(InputError):
    pass


class NotFound(MorseTWError):
    pass


class BudgetExceeded(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
