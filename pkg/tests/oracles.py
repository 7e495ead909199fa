"""
Shared fixtures and brute-force oracles for the test suite.
"""
import itertools
import os
import numpy as np
import momc
from momc import *
from momc.geometry import distance_to_closure
from momc.models import random_model, tradeoff_model

# set to False for a quick run of the randomized suites at reduced size
FULL_CORPUS = True

CORPUS_SIZE = 200 if FULL_CORPUS else 25
WEIGHTS_PER_MODEL = 10 if FULL_CORPUS else 4
DUALITY_CASES = 500 if FULL_CORPUS else 60

# the nineteen distinct coordinates of a reference three-objective Pareto surface plot
FIGURE_POINTS = [
    (0.7551020408163269, 0.0, 2.326530612244897),
    (0.0, 0.7551020408163269, 2.3265306122448965),
    (0.0, 0.0, 2.3265306122448983),
    (0.2448979591836734, 0.9999999999999997, 0.0),
    (0.0, 1.0000000000000007, 0.0),
    (0.0, 1.0000000000000007, 2.020408163265302),
    (1.0000000000000007, 0.0, 0.0),
    (1.0000000000000007, 0.24489795918366936, 0.0),
    (1.0000000000000007, 0.0, 2.0204081632653015),
    (0.7551020408163269, 0.48979591836734715, 2.3265306122448934),
    (0.9387755102040825, 0.0, 2.142857142857143),
    (0.8775510204081638, 0.3673469387755106, 0.0),
    (0.2448979591836734, 0.9999999999999998, 2.0204081632653073),
    (0.0, 0.9387755102040825, 2.142857142857141),
    (1.0000000000000007, 0.2448979591836734, 2.0204081632653077),
    (0.48979591836734715, 0.7551020408163269, 2.3265306122448965),
    (0.9387755102040825, 0.30612244897959184, 2.1428571428571392),
    (0.2448979591836734, 0.9387755102040825, 2.142857142857141),
    (0.30612244897959184, 0.9387755102040825, 2.1428571428571406),
]

FIGURE_FIRST_TRIANGLE = [
    (0.7551020408163269, 0.0, 2.326530612244897),
    (0.0, 0.7551020408163269, 2.3265306122448965),
    (0.0, 0.0, 2.3265306122448983),
]


def normalized(doc: ModelDocument) -> NormalizedObjectives:
    return normalize_objectives(doc.model, doc.objectives)


def m1_norm() -> NormalizedObjectives:
    return normalized(tradeoff_model())


def random_corpus(seed: int, count: int = CORPUS_SIZE, **kwargs) -> List[ModelDocument]:
    """`count` random models, reproducible from `seed`. Keyword arguments go to :func:`random_model`."""
    rng = np.random.default_rng(seed)
    return [random_model(rng, **kwargs) for _ in range(count)]


def random_weight(rng: np.random.Generator, k: int) -> PointK:
    return tuple(float(c) for c in rng.dirichlet(np.ones(k)))


def memoryless_points(norm: NormalizedObjectives) -> List[PointK]:
    """Normalized value vector of every memoryless deterministic strategy, by exact linear solves."""
    points = []
    for sigma in enumerate_memoryless_strategies(norm.transformed_model):
        points.append(norm.to_normalized(solve_strategy_exactly(norm, sigma)))
    return points


def time_dependent_strategies(model: Mdp, horizon: int) -> Iterator[FiniteHorizonStrategy]:
    """Every deterministic time-dependent strategy for `horizon` steps."""
    rows = [list(s.choices) for s in enumerate_memoryless_strategies(model)]
    for table in itertools.product(rows, repeat=horizon):
        yield FiniteHorizonStrategy(table)


def closure_distance(points: Sequence[PointK], target: Sequence[float]) -> float:
    """Distance from `target` to the downward convex closure of `points`."""
    return distance_to_closure(list(points), target)[0]


def hausdorff_of_closures(a: Sequence[PointK], b: Sequence[PointK]) -> float:
    """Hausdorff distance between the downward convex closures of two point sets, measured at their points."""
    return max(max(closure_distance(b, p) for p in a), max(closure_distance(a, p) for p in b))

TRADEOFF_PATH = os.path.join(os.path.dirname(momc.__file__), 'res', 'tradeoff.momdp.json')


def induced_chain(model: Mdp, sigma: MemorylessStrategy) -> np.ndarray:
    """Dense transition matrix of the Markov chain `sigma` induces on `model`."""
    chain = np.zeros((model.num_states, model.num_states))
    for s, a in enumerate(sigma.choices):
        for t, p in model.actions[s][a].distribution:
            chain[s, t] += p
    return chain


def original_value(model: Mdp, spec: ObjectiveSpec, sigma: MemorylessStrategy) -> float:
    """
    User-facing value of an unbounded objective under `sigma`, computed on the untransformed model by a dense solve.
    Reachability solves over the states that can still reach the target; rewards over every state but the last,
    which random models make an absorbing zero-reward sink.
    """
    chain = induced_chain(model, sigma)
    n = model.num_states
    if spec.kind.is_reachability:
        goal = sorted(model.labels[spec.target])
        if model.initial_state in goal:
            return 1.0
        can_reach = set(goal)
        grown = True
        while grown:
            grown = False
            for s in range(n):
                if s not in can_reach and any(chain[s, t] > 0 for t in can_reach):
                    can_reach.add(s)
                    grown = True
        inner = [s for s in sorted(can_reach) if s not in goal]
        if model.initial_state not in inner:
            return 0.0
        system = np.eye(len(inner)) - chain[np.ix_(inner, inner)]
        x = np.linalg.solve(system, chain[np.ix_(inner, goal)].sum(axis=1))
        return float(x[inner.index(model.initial_state)])
    rewards = np.array([model.rewards[spec.target][s][a] for s, a in enumerate(sigma.choices)])
    inner = list(range(n - 1))
    x = np.linalg.solve(np.eye(n - 1) - chain[np.ix_(inner, inner)], rewards[inner])
    return float(x[model.initial_state])
