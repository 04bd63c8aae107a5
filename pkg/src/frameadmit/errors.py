"""Exception hierarchy.

Every error carries a short ``condition`` id so command-line reports can say
which check produced it.
"""


class FrameAdmitError(Exception):
    condition = "error"

    def __init__(self, message="", condition=None):
        super().__init__(message)
        if condition is not None:
            self.condition = condition


class InvalidSpec(FrameAdmitError, ValueError):
    condition = "invalid-spec"


class DimensionMismatch(FrameAdmitError, ValueError):
    condition = "dimension-mismatch"


class KMismatch(FrameAdmitError, ValueError):
    condition = "k-mismatch"


class HorizonExceeded(FrameAdmitError):
    condition = "horizon-exceeded"


class NotSummable(FrameAdmitError):
    condition = "not-summable"


class NumericalFailure(FrameAdmitError):
    condition = "numerical-failure"


class NotMajorized(FrameAdmitError):
    condition = "not-majorized"


class NotPositiveDefinite(FrameAdmitError, ValueError):
    condition = "not-positive-definite"


class NotAdmissible(FrameAdmitError):
    condition = "not-admissible"


class TruncationInadmissible(FrameAdmitError):
    condition = "truncation-inadmissible"


class SufficiencyFailed(FrameAdmitError):
    condition = "sufficiency-failed"


class UnknownExample(FrameAdmitError, KeyError):
    condition = "unknown-example"

    def __str__(self):
        return Exception.__str__(self)
