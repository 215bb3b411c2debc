"""Exception hierarchy shared by all troplag modules."""


class TroplagError(Exception):
    """Base class for every error raised by troplag."""


# fan_core
class FanError(TroplagError):
    pass


class NonPrimitiveRay(FanError):
    pass


class ParallelRays(FanError):
    pass


class NotComplete(FanError):
    pass


class NonMaximalCone(FanError):
    pass


class NotCartier(FanError):
    """The support function of a divisor has a non-integral slope on some cone."""


# trop_multisec
class MultisectionError(TroplagError):
    pass


class UnsupportedDegree(MultisectionError):
    pass


class ParityMismatch(MultisectionError):
    pass


class NotRealizable(MultisectionError):
    pass


# bundle_mirror
class BundleError(TroplagError):
    pass


class NotP2Fan(BundleError):
    pass


class GluingInconsistent(BundleError):
    pass


class NotInFamily(BundleError):
    pass


class AmbiguousMatch(BundleError):
    pass


# realization_engine
class RealizationError(TroplagError):
    pass


class GenericityViolated(RealizationError):
    pass


class SignRelationViolated(RealizationError):
    pass


class InadmissiblePolynomial(RealizationError):
    pass


class WrongZeroCount(RealizationError):
    def __init__(self, message, brackets=None):
        super().__init__(message)
        self.brackets = brackets or []


class DriftBoundViolated(RealizationError):
    pass


class MonotonicityFailure(RealizationError):
    pass


class ShrinkExhausted(RealizationError):
    pass


class BranchPointSkipped(UserWarning):
    """Samples too close to the branch point were dropped from a point cloud."""


# cli_io
class DocumentError(TroplagError):
    """A JSON document failed to parse or did not match its schema."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location

    def __str__(self):
        msg = super().__str__()
        return f"{self.location}: {msg}" if self.location else msg


class EmptySubject(TroplagError):
    pass
