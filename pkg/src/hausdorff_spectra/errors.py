"""Exception hierarchy shared by all modules."""


class HausdorffSpectraError(Exception):
    """Base class for every error raised by this package."""


class SpecValidationError(HausdorffSpectraError, ValueError):
    pass


class NonInvertible(SpecValidationError):
    def __init__(self, k, det):
        self.k = k
        self.det = det
        super().__init__(f"matrix of entry k={k} is singular (|det| = {abs(det):.3e})")


class NonSymmetric(SpecValidationError):
    def __init__(self, k, asymmetry):
        self.k = k
        self.asymmetry = asymmetry
        super().__init__(f"matrix of entry k={k} is not symmetric (max |A - A^T| = {asymmetry:.3e})")


class NonCommuting(SpecValidationError):
    def __init__(self, i, j, norm):
        self.i = i
        self.j = j
        self.norm = norm
        super().__init__(f"matrices of entries k={i} and k={j} do not commute (max |[A,B]| = {norm:.3e})")


class DuplicateMatrix(SpecValidationError):
    def __init__(self, k, l):
        self.k = k
        self.l = l
        super().__init__(f"entries k={k} and k={l} carry the same matrix")


class ExactEigenvalueMismatch(SpecValidationError):
    def __init__(self, k, gap):
        self.k = k
        self.gap = gap
        super().__init__(f"exact eigenvalues of entry k={k} disagree with the matrix (gap {gap:.3e})")


class DegenerateFamily(HausdorffSpectraError):
    pass


class SearchTooLarge(HausdorffSpectraError, ValueError):
    pass


class BaseTooLarge(HausdorffSpectraError, ValueError):
    pass


class NotScalarDilation(HausdorffSpectraError, ValueError):
    pass


class NoTailFormula(HausdorffSpectraError):
    pass


class HypothesisNotMet(HausdorffSpectraError):
    """The rotational-invariance (log independence) hypothesis does not hold."""


class EmptySet(HausdorffSpectraError, ValueError):
    pass


class BoxTooSmall(HausdorffSpectraError):
    pass


class BadExponent(HausdorffSpectraError, ValueError):
    pass


class UnknownCase(HausdorffSpectraError, KeyError):
    pass


class SpecFileError(HausdorffSpectraError, ValueError):
    """Malformed spec document; ``location`` names the offending field."""

    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")
