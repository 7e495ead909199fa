import numpy as np
from momc import *

REWARD_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)


def random_model(rng: np.random.Generator, num_states: int = 5, max_actions: int = 3, num_objectives: int = 2,
                 kinds: Optional[Sequence[Union[ObjectiveKind, str]]] = None, step_bound: Optional[int] = None,
                 reward_levels: Sequence[float] = REWARD_LEVELS) -> ModelDocument:
    """
    A random model whose every strategy reaches the absorbing last state with probability 1, so all expected total
    rewards are finite: each action of a non-final state moves to some higher-numbered state with positive
    probability.

    Reward structures are named ``r0``, ``r1``, ... and the proposition ``goal`` labels one random non-initial state.

    :param rng: The random generator; equal seeds give equal models.
    :param num_states: At least 2.
    :param max_actions: Each non-final state gets between 1 and this many actions.
    :param num_objectives: The number of objectives, each on its own reward structure (or on ``goal``).
    :param kinds: Objective kinds, one per objective; reward-max for all when omitted.
    :param step_bound: Step bound attached to every objective.
    :param reward_levels: The values rewards are drawn from.
    """
    if num_states < 2:
        raise ValueError('num_states must be at least 2, got {}'.format(num_states))
    kinds = [ObjectiveKind.REWARD_MAX] * num_objectives if kinds is None else [ObjectiveKind(k) for k in kinds]
    if len(kinds) != num_objectives:
        raise ValueError('expected {} objective kinds, got {}'.format(num_objectives, len(kinds)))

    sink = num_states - 1
    actions = []
    for s in range(sink):
        state_actions = []
        for a in range(int(rng.integers(1, max_actions + 1))):
            forward = int(rng.integers(s + 1, num_states))
            others = [int(t) for t in rng.choice(num_states, size=int(rng.integers(0, 3)), replace=False)]
            targets = sorted({forward} | set(others))
            weights = rng.integers(1, 5, size=len(targets)).astype(float)
            probs = weights / weights.sum()
            state_actions.append(Action('a{}'.format(a), zip(targets, (float(p) for p in probs))))
        actions.append(state_actions)
    actions.append([Action('loop', [(sink, 1.0)])])

    rewards = {}
    for i in range(num_objectives):
        rewards['r{}'.format(i)] = [[float(rng.choice(reward_levels)) for _ in state_actions]
                                    for state_actions in actions[:-1]] + [[0.0]]

    labels = {'goal': [int(rng.integers(1, num_states))]}
    model = Mdp(num_states, 0, actions, labels, rewards)

    objectives = [ObjectiveSpec(kind, 'goal' if kind.is_reachability else 'r{}'.format(i), step_bound)
                  for i, kind in enumerate(kinds)]
    return ModelDocument(model, objectives)
