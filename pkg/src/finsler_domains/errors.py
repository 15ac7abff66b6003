"""Exception hierarchy. Every class carries a stable machine-readable code."""


class FinslerError(Exception):
    code = "FINSLER_ERROR"


class NotHermitian(FinslerError):
    code = "NOT_HERMITIAN"


class NotPositiveDefinite(FinslerError):
    code = "NOT_POSITIVE_DEFINITE"


class NotSquare(FinslerError):
    code = "NOT_SQUARE"


class ShapeMismatch(FinslerError):
    code = "SHAPE_MISMATCH"


class SymmetryViolation(FinslerError):
    code = "SYMMETRY_VIOLATION"


class SamplerExhausted(FinslerError):
    code = "SAMPLER_EXHAUSTED"


class BadParams(FinslerError):
    code = "BAD_PARAMS"


class ZeroTangent(FinslerError):
    code = "ZERO_TANGENT"


class InvalidProfile(FinslerError):
    code = "INVALID_PROFILE"


class NotInDomain(FinslerError):
    code = "NOT_IN_DOMAIN"


class NumericalBreakdown(FinslerError):
    code = "NUMERICAL_BREAKDOWN"


class SingularPivot(FinslerError):
    code = "SINGULAR_PIVOT"
