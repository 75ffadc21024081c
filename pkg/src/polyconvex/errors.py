"""Exception hierarchy.

Everything raised deliberately by the package derives from
:class:`PolyConvexError`; the CLI maps :class:`ValidationError` to exit code 2
and :class:`NumericalFailure` to exit code 4.
"""


class PolyConvexError(Exception):
    pass


class ValidationError(PolyConvexError):
    """Bad input: malformed literal, degenerate plane, violated precondition."""


class NumericalFailure(PolyConvexError):
    pass


class NotTotallyReal(ValidationError):
    def __init__(self, index=None, msg=None):
        self.index = index
        super().__init__(msg or f"plane {index} is not totally real")


class NotTransverseToBase(ValidationError):
    def __init__(self, index=None):
        self.index = index
        super().__init__(f"plane {index} meets the base plane in more than the origin")


class NotTransverse(ValidationError):
    pass


class SingularT(ValidationError):
    pass


class DegeneratePlane(ValidationError):
    pass


class DegenerateBase(ValidationError):
    pass


class DegenerateEpsilon(ValidationError):
    pass


class EmptyFamily(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class RealSpectrum(ValidationError):
    pass


class RealDistinctSpectrum(ValidationError):
    pass


class RepeatedRealSpectrum(ValidationError):
    pass


class HypothesisFailed(ValidationError):
    pass


class PairwiseHypothesisFails(ValidationError):
    def __init__(self, pair, msg=None):
        self.pair = pair
        super().__init__(msg or f"pairwise union {pair} is not known to be convex")


class OutsideOmega(ValidationError):
    pass


class UnsupportedPolynomial(ValidationError):
    pass


class NotApplicable(ValidationError):
    pass


class NotTriangular(ValidationError):
    pass


class LpNumericalFailure(NumericalFailure):
    pass


class SoundnessViolation(NumericalFailure):
    """A separating witness failed its re-check on a denser cloud."""
