import logging
import numpy as np
from .types import *
from .mdp import Mdp, Action
from .strategy import MemorylessStrategy

logger = logging.getLogger(__name__)


class ObjectiveSpec(object):
    """
    A user objective: maximize or minimize the probability of reaching a labelled set of states, or the expected
    total reward of a reward structure, optionally within `step_bound` steps.

    :param kind: An :class:`ObjectiveKind` or its text value, e.g. ``'prob-reach-max'``.
    :param target: A proposition name for reachability kinds, a reward-structure name for reward kinds.
    :param step_bound: Optional horizon, at least 1.
    """

    def __init__(self, kind: Union[ObjectiveKind, str], target: str, step_bound: Optional[int] = None):
        self.kind = ObjectiveKind(kind)
        self.target = target
        self.step_bound = None if step_bound is None else int(step_bound)

    @property
    def name(self) -> str:
        """A readable axis name, e.g. ``reward-max(time)`` or ``prob-reach-min(fail,10)``."""
        if self.step_bound is None:
            return '{}({})'.format(self.kind.value, self.target)
        return '{}({},{})'.format(self.kind.value, self.target, self.step_bound)

    def __eq__(self, other):
        if not isinstance(other, ObjectiveSpec):
            return NotImplemented
        return (self.kind, self.target, self.step_bound) == (other.kind, other.target, other.step_bound)

    def __hash__(self):
        return hash((self.kind, self.target, self.step_bound))

    def __str__(self):
        return self.name

    def __repr__(self):
        return 'ObjectiveSpec({!r}, {!r}, step_bound={!r})'.format(self.kind.value, self.target, self.step_bound)


class ObjectiveMapping(object):
    """
    How one user objective is read off the transformed model.

    The user-facing value is ``transformed_value + offset``; the value in normalized (maximizing) orientation is
    ``sign * user_value``.
    """

    def __init__(self, spec: ObjectiveSpec, reward_name: str, sign: int, horizon: Optional[int], offset: float = 0.0):
        self.spec = spec
        self.reward_name = reward_name
        self.sign = sign
        self.horizon = horizon
        self.offset = offset

    def __repr__(self):
        return 'ObjectiveMapping({!r}, reward={!r}, sign={}, horizon={}, offset={})'.format(
            self.spec.name, self.reward_name, self.sign, self.horizon, self.offset)


class NormalizedObjectives(object):
    """
    `k` maximizing expected-total-reward objectives on one shared transformed model, together with the metadata
    needed to turn value vectors on the transformed model back into user-facing objective values.
    """

    def __init__(self, transformed_model: Mdp, mappings: Sequence[ObjectiveMapping], absorbing: Iterable[State] = ()):
        self.transformed_model = transformed_model
        self.mappings = tuple(mappings)
        self.absorbing = frozenset(absorbing)
        self._signed_rewards = None

    @property
    def k(self) -> int:
        return len(self.mappings)

    @property
    def signs(self) -> PointK:
        return tuple(float(m.sign) for m in self.mappings)

    @property
    def horizons(self) -> Tuple[Optional[int], ...]:
        return tuple(m.horizon for m in self.mappings)

    @property
    def axis_names(self) -> List[str]:
        return [m.spec.name for m in self.mappings]

    def signed_rewards(self) -> np.ndarray:
        """:return: Array of shape `(num_choices, k)`: each column is a reward structure times its sign."""
        if self._signed_rewards is None:
            columns = [m.sign * self.transformed_model.reward_vector(m.reward_name) for m in self.mappings]
            rewards = np.column_stack(columns) if columns else np.zeros((self.transformed_model.num_choices, 0))
            rewards.flags.writeable = False
            self._signed_rewards = rewards
        return self._signed_rewards

    def normalized_offsets(self) -> np.ndarray:
        return np.array([m.sign * m.offset for m in self.mappings], dtype=float)

    def to_user(self, normalized_point: Sequence[float]) -> PointK:
        """Converts a point in normalized orientation to user-facing values (applying the sign is an involution)."""
        return tuple(float(m.sign * x) for m, x in zip(self.mappings, normalized_point))

    def to_normalized(self, user_point: Sequence[float]) -> PointK:
        return tuple(float(m.sign * x) for m, x in zip(self.mappings, user_point))

    def project_strategy(self, sigma: MemorylessStrategy) -> MemorylessStrategy:
        """
        Maps a memoryless strategy of the input model onto the transformed model. Target states made absorbing have a
        single action, so they choose 0; every other state keeps its choice.
        """
        return MemorylessStrategy([0 if s in self.absorbing else c for s, c in enumerate(sigma.choices)])


def _reach_reward_name(proposition: str, existing) -> str:
    name = '__reach_{}'.format(proposition)
    while name in existing:
        name = '_' + name
    return name


def normalize_objectives(model: Mdp, specs: Sequence[ObjectiveSpec]) -> NormalizedObjectives:
    """
    Reduces every objective to a maximizing expected-total-reward objective on one transformed model.

    Reachability objectives on proposition `g` make every `g`-state absorbing (a single zero-reward self-loop) and
    pay, on every action of a non-`g` state, the probability mass that action moves into `g`. All reachability
    targets are transformed together, so the model is shared by the `k` objectives. Minimizing objectives get sign
    -1 and are maximized negated. Step bounds are carried through unchanged.

    :param model: The input :class:`Mdp`.
    :param specs: At least one :class:`ObjectiveSpec`.
    :return: The :class:`NormalizedObjectives`.
    """
    if len(specs) == 0:
        raise ValueError('at least one objective is required')

    for spec in specs:
        if spec.step_bound is not None and spec.step_bound < 1:
            raise ObjectiveResolutionError(spec, 'step bound must be at least 1')
        if spec.kind.is_reachability:
            if spec.target not in model.labels:
                raise ObjectiveResolutionError(spec, 'unknown proposition {!r}'.format(spec.target))
        elif spec.target not in model.rewards:
            raise ObjectiveResolutionError(spec, 'unknown reward structure {!r}'.format(spec.target))

    propositions = sorted({spec.target for spec in specs if spec.kind.is_reachability})
    if not propositions:
        mappings = [ObjectiveMapping(spec, spec.target, spec.kind.sign, spec.step_bound) for spec in specs]
        return NormalizedObjectives(model, mappings)

    absorbing = set()
    for proposition in propositions:
        absorbing |= model.labels[proposition]

    for s in sorted(absorbing):
        state_actions = model.actions[s]
        if len(specs) > 1 and not all(action.distribution == ((s, 1.0),) for action in state_actions):
            logger.warning('state %d is a reachability target but not absorbing; it is made absorbing, which also '
                           'stops the other objectives there', s)

    actions = []
    for s, state_actions in enumerate(model.actions):
        if s in absorbing:
            actions.append((Action(state_actions[0].label if state_actions else 'loop', [(s, 1.0)]),))
        else:
            actions.append(state_actions)

    rewards = {}
    for name, values in model.rewards.items():
        rewards[name] = [[0.0] if s in absorbing else list(per_state) for s, per_state in enumerate(values)]

    reward_names = {}
    for proposition in propositions:
        name = _reach_reward_name(proposition, model.rewards)
        reward_names[proposition] = name
        goal = model.labels[proposition]
        values = []
        for s, state_actions in enumerate(model.actions):
            if s in absorbing:
                values.append([0.0])
            else:
                values.append([sum(p for t, p in action.distribution if t in goal) for action in state_actions])
        rewards[name] = values

    transformed = Mdp(model.num_states, model.initial_state, actions, model.labels, rewards)

    mappings = []
    for spec in specs:
        if spec.kind.is_reachability:
            offset = 1.0 if model.initial_state in model.labels[spec.target] else 0.0
            mappings.append(ObjectiveMapping(spec, reward_names[spec.target], spec.kind.sign, spec.step_bound,
                                             offset))
        else:
            mappings.append(ObjectiveMapping(spec, spec.target, spec.kind.sign, spec.step_bound))

    logger.debug('normalized %d objectives, %d absorbing target states', len(mappings), len(absorbing))
    return NormalizedObjectives(transformed, mappings, absorbing)
