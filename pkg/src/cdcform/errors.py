"""Exception types raised across the package."""


class CDCError(Exception):
    """Base class for every error raised by this package."""


class DuplicateLabelError(CDCError, ValueError):
    pass


class UnknownLabelError(CDCError, KeyError):
    pass


class RedundantSetError(CDCError, ValueError):
    def __init__(self, smaller, larger):
        super().__init__(f"set {sorted(smaller)} is contained in {sorted(larger)}")
        self.smaller = smaller
        self.larger = larger


class CoverageGapError(CDCError, ValueError):
    def __init__(self, uncovered):
        super().__init__(f"labels not covered by any set: {list(uncovered)}")
        self.uncovered = list(uncovered)


class EmptySetError(CDCError, ValueError):
    pass


class IndexOutOfRangeError(CDCError, IndexError):
    pass


class CapTooSmallError(CDCError, ValueError):
    pass


class SizeLimitError(CDCError, ValueError):
    """An exact routine refused an instance above its configured size gate."""


class RankExceedsCapError(CDCError, ValueError):
    pass


class BadParameterError(CDCError, ValueError):
    pass


class TriangulationError(CDCError, ValueError):
    def __init__(self, violations):
        super().__init__("invalid triangulation: " + "; ".join(str(v) for v in violations))
        self.violations = list(violations)


class PartitionError(CDCError, ValueError):
    def __init__(self, violations):
        super().__init__("invalid partition: " + "; ".join(str(v) for v in violations))
        self.violations = list(violations)


class TheoremViolationError(CDCError, AssertionError):
    """A checked structural guarantee failed; indicates a bug in a validator."""


class CodeTooShortError(CDCError, ValueError):
    pass


class NodeCountMismatchError(CDCError, ValueError):
    pass


class NotSubsetOfConflictEdgesError(CDCError, ValueError):
    pass


class DuplicateCodeError(CDCError, ValueError):
    pass


class WidthMismatchError(CDCError, ValueError):
    pass


class InvalidCoverError(CDCError, ValueError):
    def __init__(self, violations):
        super().__init__("invalid cover: " + "; ".join(str(v) for v in violations[:5]))
        self.violations = list(violations)


class MissingValueError(CDCError, ValueError):
    pass


class NonRepresentableCoefficientError(CDCError, ValueError):
    pass


class NotIBModelError(CDCError, ValueError):
    pass
