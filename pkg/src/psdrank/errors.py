"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures to stable process exit statuses.
"""


class PsdRankError(Exception):
    exit_code = 1


class ParseError(PsdRankError, ValueError):
    exit_code = 2


class GeometryError(PsdRankError, ValueError):
    exit_code = 3


class NotFullDimensional(GeometryError):
    pass


class NotAVertex(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class NotOctahedron(GeometryError):
    pass


class DegenerateParams(GeometryError):
    pass


class TooLarge(PsdRankError, ValueError):
    pass


class BudgetExceeded(PsdRankError):
    exit_code = 4


class InvalidCertificate(PsdRankError, ValueError):
    exit_code = 5


class DimensionMismatch(InvalidCertificate):
    pass


class IrrationalFactor(PsdRankError):
    pass


class NotSymmetric(PsdRankError, ValueError):
    pass


class FieldTooLarge(PsdRankError):
    pass


class RadicandTooLarge(PsdRankError, ValueError):
    pass


class NegativeEntry(PsdRankError, ValueError):
    pass


class NonPositiveAlpha(PsdRankError, ValueError):
    pass
