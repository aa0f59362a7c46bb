"""Exception hierarchy shared by the library and the command line."""


class CubeboundError(Exception):
    """Base class for all errors raised by cubebound."""


class ParseError(CubeboundError, ValueError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class InvalidLetter(CubeboundError, ValueError):
    pass


class PreconditionError(CubeboundError):
    """An operation was called with inputs violating its precondition."""


class GraphMismatch(PreconditionError):
    pass


class NotGeodesic(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError, IndexError):
    pass


class HorizonTooSmall(PreconditionError):
    pass


class HorizonExceeded(PreconditionError):
    pass


class RaysIndistinguishable(PreconditionError):
    pass


class ResourceLimit(CubeboundError):
    pass
