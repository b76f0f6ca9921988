"""Exception hierarchy.

Every error carries a module-qualified ``code`` (``"contour.OriginRevisit"``)
so the command line can report failures uniformly.
"""


class BorelContourError(Exception):
    module = "borelcontour"

    @property
    def code(self):
        return f"{self.module}.{type(self).__name__}"


# contour
class ContourError(BorelContourError):
    module = "contour"


class EmptySpec(ContourError):
    pass


class JointDiscontinuity(ContourError):
    pass


class OriginRevisit(ContourError):
    pass


class ContourSpecError(ContourError):
    pass


class WindingFailure(ContourError):
    pass


class CutoffOutOfRange(ContourError):
    pass


# quad
class QuadError(BorelContourError):
    module = "quad"


class NoConvergence(QuadError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class PoleOnContour(QuadError):
    pass


# series
class SeriesError(BorelContourError):
    module = "series"


class ModelMismatch(SeriesError):
    pass


class GammaOverflow(SeriesError):
    pass


class IllConditioned(SeriesError):
    pass


# bounds
class BoundsError(BorelContourError):
    module = "bounds"


class OutOfSector(BoundsError):
    pass


class DeltaOutOfRange(BoundsError):
    pass


# ambiguity
class AmbiguityError(BorelContourError):
    module = "ambiguity"


class SectorMismatch(AmbiguityError):
    pass


# adler
class AdlerError(BorelContourError):
    module = "adler"


class NonSimplePole(AdlerError):
    pass


class ExtrapolationDivergence(AdlerError):
    pass


class InsufficientOrders(AdlerError):
    pass


class NonPositiveBound(AdlerError):
    pass


# cli
class CliError(BorelContourError):
    module = "cli"


class ConfigParse(CliError):
    pass


class FileIO(CliError):
    pass
