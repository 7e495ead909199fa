import math
import numpy as np
import scipy.sparse as sp
from .types import *

# probabilities of one distribution must sum to 1 within this
DISTRIBUTION_TOL = 1e-9


class Action(object):
    """
    One action of a state: a label and a sparse distribution over successor states.

    The distribution is stored as a tuple of `(target, probability)` pairs sorted by target index.
    """

    def __init__(self, label: str, distribution: Iterable[Tuple[State, float]]):
        self.label = label
        self.distribution = tuple(sorted((int(t), float(p)) for t, p in distribution))

    def __eq__(self, other):
        if not isinstance(other, Action):
            return NotImplemented
        return self.label == other.label and self.distribution == other.distribution

    def __hash__(self):
        return hash((self.label, self.distribution))

    def __repr__(self):
        return 'Action({!r}, {!r})'.format(self.label, list(self.distribution))


class Violation(object):
    """A single invariant violation found by :func:`validate_mdp`."""

    def __init__(self, message: str, state: Optional[State] = None, action: Optional[ActionIndex] = None):
        self.message = message
        self.state = state
        self.action = action

    def __eq__(self, other):
        if not isinstance(other, Violation):
            return NotImplemented
        return (self.message, self.state, self.action) == (other.message, other.state, other.action)

    def __str__(self):
        if self.state is None:
            return self.message
        if self.action is None:
            return '{} at state {}'.format(self.message, self.state)
        return '{} at ({}, {})'.format(self.message, self.state, self.action)

    def __repr__(self):
        return 'Violation({!r})'.format(str(self))


class Mdp(object):
    """
    A finite Markov decision process with named reward structures and atomic-proposition labels.

    Rewards are attached to state-action pairs: ``rewards[name][s][a]`` is the reward collected when action `a` is
    taken in state `s`. Labels map a proposition name to the set of states where it holds.

    Instances are treated as immutable once built: the sparse matrices derived from them are cached, so do not mutate
    the fields after construction. Use :func:`validate_mdp` to check a model before solving it.

    Example: ::

        mdp = Mdp(num_states=2, initial_state=0,
                  actions=[[Action('a', [(1, 1.0)]), Action('b', [(1, 1.0)])],
                           [Action('loop', [(1, 1.0)])]],
                  labels={'done': {1}},
                  rewards={'r1': [[1.0, 0.0], [0.0]], 'r2': [[0.0, 1.0], [0.0]]})
    """

    def __init__(self, num_states: int, initial_state: State, actions: Sequence[Sequence[Action]],
                 labels: Dict[str, Iterable[State]] = None, rewards: Dict[str, Sequence[Sequence[float]]] = None):
        self.num_states = int(num_states)
        self.initial_state = int(initial_state)
        self.actions = tuple(tuple(state_actions) for state_actions in actions)
        self.labels = {name: frozenset(int(s) for s in states) for name, states in (labels or {}).items()}
        self.rewards = {name: tuple(tuple(float(r) for r in per_state) for per_state in values)
                        for name, values in (rewards or {}).items()}
        self._row_starts = None
        self._transitions = None
        self._reward_vectors = {}

    def __eq__(self, other):
        if not isinstance(other, Mdp):
            return NotImplemented
        return (self.num_states == other.num_states and self.initial_state == other.initial_state
                and self.actions == other.actions and self.labels == other.labels and self.rewards == other.rewards)

    def __repr__(self):
        return 'Mdp(num_states={}, choices={}, labels={}, rewards={})'.format(
            self.num_states, self.num_choices, sorted(self.labels), sorted(self.rewards))

    @property
    def num_choices(self) -> int:
        """The number of state-action pairs."""
        return sum(len(state_actions) for state_actions in self.actions)

    @property
    def row_starts(self) -> np.ndarray:
        """
        :return: Array of length `num_states + 1`; the state-action rows of state `s` are
            ``row_starts[s]:row_starts[s + 1]``.
        """
        if self._row_starts is None:
            counts = [len(state_actions) for state_actions in self.actions]
            starts = np.zeros(len(counts) + 1, dtype=np.int64)
            np.cumsum(counts, out=starts[1:])
            starts.flags.writeable = False
            self._row_starts = starts
        return self._row_starts

    @property
    def row_states(self) -> np.ndarray:
        """The owning state of every state-action row."""
        return np.repeat(np.arange(self.num_states), np.diff(self.row_starts))

    def transition_matrix(self) -> sp.csr_matrix:
        """
        :return: The transition probabilities as a CSR matrix of shape `(num_choices, num_states)`, one row per
            state-action pair in state-major order.
        """
        if self._transitions is None:
            rows, cols, data = [], [], []
            row = 0
            for state_actions in self.actions:
                for action in state_actions:
                    for target, prob in action.distribution:
                        rows.append(row)
                        cols.append(target)
                        data.append(prob)
                    row += 1
            self._transitions = sp.csr_matrix((data, (rows, cols)), shape=(row, self.num_states))
        return self._transitions

    def reward_vector(self, name: str) -> np.ndarray:
        """:return: The rewards of structure `name` flattened to one entry per state-action row."""
        if name not in self._reward_vectors:
            values = np.fromiter((r for per_state in self.rewards[name] for r in per_state), dtype=float)
            values.flags.writeable = False
            self._reward_vectors[name] = values
        return self._reward_vectors[name]

    def action_index(self, state: State, label: str) -> ActionIndex:
        for i, action in enumerate(self.actions[state]):
            if action.label == label:
                return i
        raise ValueError('state {} has no action labelled {!r}'.format(state, label))


def validate_mdp(model: Mdp) -> List[Violation]:
    """
    Checks every structural invariant of `model` and reports all violations; it never raises.

    :param model: The :class:`Mdp` to check.
    :return: A list of :class:`Violation`, empty if the model is well formed.
    """
    violations = []

    if model.num_states < 1:
        violations.append(Violation('model has no states'))
    if not 0 <= model.initial_state < max(model.num_states, 0):
        violations.append(Violation('initial state {} out of range'.format(model.initial_state)))
    if len(model.actions) != model.num_states:
        violations.append(Violation('expected actions for {} states, found {}'.format(
            model.num_states, len(model.actions))))

    for s, state_actions in enumerate(model.actions):
        if len(state_actions) == 0:
            violations.append(Violation('no actions', s))
        labels = [action.label for action in state_actions]
        for label in sorted({l for l in labels if labels.count(l) > 1}):
            violations.append(Violation('duplicate action label {!r}'.format(label), s))
        for a, action in enumerate(state_actions):
            if len(action.distribution) == 0:
                violations.append(Violation('empty distribution', s, a))
                continue
            total = 0.0
            seen = set()
            for target, prob in action.distribution:
                if not 0 <= target < model.num_states:
                    violations.append(Violation('target {} out of range'.format(target), s, a))
                if target in seen:
                    violations.append(Violation('duplicate target {}'.format(target), s, a))
                seen.add(target)
                if not (math.isfinite(prob) and 0.0 < prob <= 1.0):
                    violations.append(Violation('probability {!r} not in (0, 1]'.format(prob), s, a))
                total += prob
            if not abs(total - 1.0) <= DISTRIBUTION_TOL:
                violations.append(Violation('sum {!r} != 1'.format(total), s, a))

    for name, states in sorted(model.labels.items()):
        for s in sorted(states):
            if not 0 <= s < model.num_states:
                violations.append(Violation('label {!r} names state {} out of range'.format(name, s)))

    for name, values in sorted(model.rewards.items()):
        if len(values) != len(model.actions):
            violations.append(Violation('reward {!r} has {} states, expected {}'.format(
                name, len(values), len(model.actions))))
            continue
        for s, (per_state, state_actions) in enumerate(zip(values, model.actions)):
            if len(per_state) != len(state_actions):
                violations.append(Violation('reward {!r} has {} actions, expected {}'.format(
                    name, len(per_state), len(state_actions)), s))
                continue
            for a, r in enumerate(per_state):
                if not (math.isfinite(r) and r >= 0.0):
                    violations.append(Violation('reward {!r} value {!r} is not finite and >= 0'.format(name, r),
                                                s, a))

    return violations
