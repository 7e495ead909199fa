import itertools
from abc import abstractmethod
from .types import *
from .mdp import Mdp


class Strategy(object):
    """
    Base class of deterministic strategies. See :class:`MemorylessStrategy` and :class:`FiniteHorizonStrategy`.
    """

    @abstractmethod
    def choice(self, state: State, remaining_steps: Optional[int] = None) -> ActionIndex:
        """
        :param state: The current state.
        :param remaining_steps: The number of steps left, for time-dependent strategies.
        :return: The index of the chosen action among the actions of `state`.
        """
        pass

    @abstractmethod
    def is_valid_for(self, model: Mdp) -> bool:
        """:return: `True` if every chosen index is a valid action index of its state in `model`."""
        pass


class MemorylessStrategy(Strategy):
    """Chooses the same action in a state every time it is visited."""

    def __init__(self, choices: Sequence[ActionIndex]):
        self.choices = tuple(int(c) for c in choices)

    def choice(self, state: State, remaining_steps: Optional[int] = None) -> ActionIndex:
        return self.choices[state]

    def is_valid_for(self, model: Mdp) -> bool:
        return len(self.choices) == model.num_states and all(
            0 <= c < len(model.actions[s]) for s, c in enumerate(self.choices))

    def __eq__(self, other):
        if not isinstance(other, MemorylessStrategy):
            return NotImplemented
        return self.choices == other.choices

    def __hash__(self):
        return hash(self.choices)

    def __repr__(self):
        return 'MemorylessStrategy({!r})'.format(list(self.choices))


class FiniteHorizonStrategy(Strategy):
    """
    A time-dependent strategy for `horizon` steps. ``table[t - 1][s]`` is the action taken in state `s` when `t`
    steps remain, for `t` in ``1..horizon``.
    """

    def __init__(self, table: Sequence[Sequence[ActionIndex]]):
        self.table = tuple(tuple(int(c) for c in row) for row in table)

    @property
    def horizon(self) -> int:
        return len(self.table)

    def choice(self, state: State, remaining_steps: Optional[int] = None) -> ActionIndex:
        if remaining_steps is None or not 1 <= remaining_steps <= self.horizon:
            raise ValueError('remaining_steps must be in 1..{}, got {}'.format(self.horizon, remaining_steps))
        return self.table[remaining_steps - 1][state]

    def is_valid_for(self, model: Mdp) -> bool:
        return all(len(row) == model.num_states and all(0 <= c < len(model.actions[s]) for s, c in enumerate(row))
                   for row in self.table)

    def __eq__(self, other):
        if not isinstance(other, FiniteHorizonStrategy):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return 'FiniteHorizonStrategy({!r})'.format([list(row) for row in self.table])


def enumerate_memoryless_strategies(model: Mdp) -> Iterator[MemorylessStrategy]:
    """
    Yields every memoryless deterministic strategy of `model` in lexicographic order of the choice vector.
    The count is the product of the per-state action counts, so only use this on small models.
    """
    for choices in itertools.product(*(range(len(state_actions)) for state_actions in model.actions)):
        yield MemorylessStrategy(choices)
