"""Exception types shared across the package."""


class RefpolyError(Exception):
    """Base class for all domain errors raised by refpoly."""


class RankMismatch(RefpolyError):
    pass


class Degenerate(RefpolyError):
    """Point set does not span its ambient space."""

    def __init__(self, affine_dim, dim):
        super().__init__(f"points span an affine subspace of dimension {affine_dim} < {dim}")
        self.affine_dim = affine_dim
        self.dim = dim


class NoInteriorOrigin(RefpolyError):
    pass


class NonIntegerVPM(RefpolyError):
    pass


class NotReflexive(RefpolyError):
    pass


class NotReflexivePair(RefpolyError):
    pass


class WrongDimension(RefpolyError):
    pass


class Unsupported(RefpolyError):
    pass


class InvalidSubsystem(RefpolyError):
    pass


class ParseError(RefpolyError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
