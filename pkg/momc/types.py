from typing import List, Tuple, Optional, Sequence, Dict, Iterable, Iterator, Union
from enum import Enum

State = int
ActionIndex = int
PointK = Tuple[float, ...]


class ObjectiveKind(Enum):
    """The kind of quantity an objective optimizes."""

    PROB_REACH_MAX = 'prob-reach-max'
    """Maximize the probability of reaching a labelled set of states."""

    PROB_REACH_MIN = 'prob-reach-min'
    """Minimize the probability of reaching a labelled set of states."""

    REWARD_MAX = 'reward-max'
    """Maximize the expected total accumulated reward of a reward structure."""

    REWARD_MIN = 'reward-min'
    """Minimize the expected total accumulated reward of a reward structure."""

    @property
    def is_reachability(self) -> bool:
        return self in (ObjectiveKind.PROB_REACH_MAX, ObjectiveKind.PROB_REACH_MIN)

    @property
    def sign(self) -> int:
        return 1 if self in (ObjectiveKind.PROB_REACH_MAX, ObjectiveKind.REWARD_MAX) else -1


class ParetoStatus(Enum):
    """The reason the Pareto refinement loop stopped."""

    CONVERGED = 'converged'
    """The gap between the under- and over-approximation is at most epsilon."""

    QUERY_BUDGET_EXHAUSTED = 'query-budget-exhausted'
    """The configured number of scalarized queries ran out before convergence."""

    VI_NOT_CONVERGED = 'vi-not-converged'
    """A scalarized query hit its iteration limit; earlier results are kept."""

    DEGENERATE = 'degenerate'
    """Refinement stalled while the achieved points were affinely degenerate."""

    STAGNATED = 'stagnated'
    """A weight was repeated without improving its scalar value."""

    INCONSISTENT = 'inconsistent'
    """The gap closed, but some achieved point violates a certified halfspace by more than 1e-6."""

    @property
    def is_partial(self) -> bool:
        return self != ParetoStatus.CONVERGED


class Achievability(Enum):
    """The answer to an achievability query against a Pareto approximation."""

    ACHIEVABLE = 'achievable'
    """The target is dominated by the under-approximation."""

    NOT_ACHIEVABLE = 'not-achievable'
    """The target violates a halfspace of the over-approximation."""

    UNKNOWN = 'unknown'
    """The target lies between the two approximations."""


class DocumentError(ValueError):
    """A model or export document could not be decoded. Always carries a position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__('{} (line {}, column {})'.format(message, line, column))
        self.message = message
        self.line = line
        self.column = column


class DocumentSyntaxError(DocumentError):
    pass


class DocumentSchemaError(DocumentError):
    def __init__(self, message: str, field: str, line: int, column: int):
        super().__init__('{}: {}'.format(field, message), line, column)
        self.field = field


class ModelValidationError(DocumentError):
    def __init__(self, violations: list, line: int, column: int):
        summary = '; '.join(str(v) for v in violations)
        super().__init__('invalid model: {}'.format(summary), line, column)
        self.violations = violations


class ObjectiveResolutionError(ValueError):
    """An objective names a proposition or reward structure the model does not have."""

    def __init__(self, spec, message: str):
        super().__init__('objective {}: {}'.format(spec, message))
        self.spec = spec


class HorizonMismatchError(ValueError):
    """A scalarized query mixed step-bounded and unbounded objectives, or distinct step bounds."""


class DivergenceError(RuntimeError):
    """Value iteration exceeded the divergence threshold: the objective value is possibly infinite."""

    def __init__(self, state: int, value: float):
        super().__init__('possibly infinite value: scalarized value {!r} at state {}'.format(value, state))
        self.state = state
        self.value = value
