"""Exception hierarchy shared by every module."""


class HopcoreError(Exception):
    """Base class for all library errors."""

    kind = "error"


class InvalidWeightError(HopcoreError, ValueError):
    kind = "invalid-weight"


class InvalidParameterError(HopcoreError, ValueError):
    kind = "invalid-parameter"


class InvalidMetricError(HopcoreError, ValueError):
    kind = "invalid-metric"


class InvalidInputError(HopcoreError, ValueError):
    kind = "invalid-input"


class PreconditionViolation(HopcoreError, ValueError):
    kind = "precondition-violation"


class WitnessTooHeavyError(HopcoreError):
    """A tree edge has no witness path in G that is at most as heavy as the edge."""

    kind = "witness-too-heavy"

    def __init__(self, edge, witness_length, tree_weight):
        self.edge = edge
        self.witness_length = witness_length
        self.tree_weight = tree_weight
        super().__init__(
            f"tree edge {edge}: lightest admissible witness has length "
            f"{witness_length} > tree weight {tree_weight}"
        )


class SamplingFailureError(HopcoreError):
    kind = "sampling-failure"


class CoverageFailureError(HopcoreError):
    kind = "coverage-failure"


class InfeasibleInstanceError(HopcoreError):
    kind = "infeasible-instance"


class TooManyGroupsError(HopcoreError):
    kind = "too-many-groups"


class BudgetExceededError(HopcoreError):
    kind = "budget-exceeded"


class ParseError(HopcoreError, ValueError):
    kind = "parse-error"
