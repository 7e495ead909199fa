"""
Scalarized queries: for a weight vector over the `k` normalized objectives, compute an optimal deterministic strategy
and its full value vector.

Every state carries a `k`-vector of values. One sweep picks in every state the action maximizing the weighted sum of
``reward + expected successor vector`` (lowest action index on ties) and copies that action's vector. Once the
weighted values settle, the chosen strategy is evaluated on its own, so the point returned belongs to it in every
coordinate, including those with zero weight.
"""
import logging
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg
import scipy.sparse.csgraph
from .types import *
from .utilities import DIVERGENCE_THRESHOLD, as_point
from .objectives import NormalizedObjectives
from .strategy import Strategy, MemorylessStrategy, FiniteHorizonStrategy

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-8
DEFAULT_MAX_ITERS = 1000000
EVALUATION_TOL = 1e-10

# action values this close to the state maximum count as ties
TIE_TOL = 1e-12

WEIGHT_SUM_TOL = 1e-12


class QueryResult(object):
    """
    The answer to one scalarized query.

    - `weights`: the weight vector queried.
    - `point`: value vector of `strategy` at the initial state, user-facing orientation.
    - `normalized_point`: the same vector in maximizing orientation (each coordinate times its sign).
    - `scalar_value`: ``weights . normalized_point``.
    - `strategy`: the optimal :class:`Strategy` found.
    - `iterations_used`: number of sweeps performed.
    - `converged`: `False` if the iteration limit was hit first.
    - `scalar_trace`: the scalarized value at the initial state after every sweep (offsets excluded).
    """

    def __init__(self, weights: PointK, point: PointK, normalized_point: PointK, scalar_value: float,
                 strategy: Strategy, iterations_used: int, converged: bool, scalar_trace: Sequence[float] = ()):
        self.weights = weights
        self.point = point
        self.normalized_point = normalized_point
        self.scalar_value = scalar_value
        self.strategy = strategy
        self.iterations_used = iterations_used
        self.converged = converged
        self.scalar_trace = tuple(scalar_trace)

    def __repr__(self):
        return 'QueryResult(weights={}, point={}, scalar_value={!r}, iterations_used={}, converged={})'.format(
            self.weights, self.point, self.scalar_value, self.iterations_used, self.converged)


def validate_weight(w: Sequence[float], k: int) -> np.ndarray:
    """
    :return: `w` as a float array.
    :raises ValueError: Unless `w` has `k` nonnegative entries summing to 1 within 1e-12.
    """
    arr = np.asarray(w, dtype=float)
    if arr.shape != (k,):
        raise ValueError('weight vector must have {} entries, got {}'.format(k, list(w)))
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError('weight vector entries must be finite and nonnegative, got {}'.format(list(w)))
    if abs(arr.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError('weight vector must sum to 1, got {!r}'.format(float(arr.sum())))
    return arr


def _state_argmax(values: np.ndarray, row_starts: np.ndarray) -> np.ndarray:
    """Row index of the best action of every state; the lowest index wins ties."""
    starts = row_starts[:-1]
    maxima = np.maximum.reduceat(values, starts)
    per_row = np.repeat(maxima, np.diff(row_starts))
    rows = np.arange(len(values))
    tied = values >= per_row - TIE_TOL * (1.0 + np.abs(per_row))
    return np.minimum.reduceat(np.where(tied, rows, len(values)), starts)


def _check_divergence(scalar: np.ndarray):
    worst = int(np.argmax(np.abs(scalar)))
    if abs(scalar[worst]) > DIVERGENCE_THRESHOLD:
        raise DivergenceError(worst, float(scalar[worst]))


def _finish(norm: NormalizedObjectives, w: np.ndarray, x_initial: np.ndarray, strategy: Strategy,
            iterations: int, converged: bool, trace) -> QueryResult:
    normalized = x_initial + norm.normalized_offsets()
    return QueryResult(as_point(w), norm.to_user(normalized), as_point(normalized), float(w @ normalized),
                       strategy, iterations, converged, trace)


def _evaluate_chain(chain, chain_rewards: np.ndarray, x: np.ndarray, tol: float, max_iters: int) -> np.ndarray:
    """Iterates ``x <- r + P x`` on an induced Markov chain until the largest change is below `tol`."""
    for _ in range(max_iters):
        new_x = chain_rewards + chain @ x
        _check_divergence(np.max(np.abs(new_x), axis=1))
        change = float(np.max(np.abs(new_x - x))) if x.size else 0.0
        x = new_x
        if change < tol:
            return x
    logger.warning('strategy evaluation did not reach tolerance %g within %d sweeps', tol, max_iters)
    return x


def weighted_value_iteration(norm: NormalizedObjectives, w: Sequence[float], delta: float = DEFAULT_DELTA,
                             max_iters: int = DEFAULT_MAX_ITERS) -> QueryResult:
    """
    Maximizes ``w . values`` over memoryless deterministic strategies for unbounded objectives.

    Sweeps until the sup-norm change of the scalarized values over all states is below `delta`, or `max_iters`
    sweeps were made (the result is then flagged ``converged=False``; this is not an error). A converged result
    reports the value vector of the returned strategy, evaluated on its induced chain to 1e-10.

    :param norm: The :class:`NormalizedObjectives`; none may carry a step bound.
    :param w: The weight vector.
    :param delta: Absolute convergence tolerance on scalarized values.
    :param max_iters: Maximum number of sweeps.
    :raises DivergenceError: If a scalarized state value exceeds 1e12.
    """
    weights = validate_weight(w, norm.k)
    if any(h is not None for h in norm.horizons):
        raise HorizonMismatchError('weighted_value_iteration needs unbounded objectives, got horizons {}'.format(
            list(norm.horizons)))
    if delta <= 0:
        raise ValueError('delta must be positive, got {!r}'.format(delta))
    if max_iters < 1:
        raise ValueError('max_iters must be at least 1, got {!r}'.format(max_iters))

    model = norm.transformed_model
    transitions = model.transition_matrix()
    rewards = norm.signed_rewards()
    row_starts = model.row_starts

    x = np.zeros((model.num_states, norm.k))
    scalar = np.zeros(model.num_states)
    best = row_starts[:-1]
    trace = []
    converged = False
    iterations = 0
    while iterations < max_iters:
        q = rewards + transitions @ x
        best = _state_argmax(q @ weights, row_starts)
        x = q[best]
        new_scalar = x @ weights
        iterations += 1
        _check_divergence(new_scalar)
        trace.append(float(new_scalar[model.initial_state]))
        change = float(np.max(np.abs(new_scalar - scalar)))
        scalar = new_scalar
        if change < delta:
            converged = True
            break

    if not converged:
        logger.warning('value iteration did not converge within %d sweeps for weights %s', max_iters, list(w))
    logger.debug('weights %s: %d sweeps, converged=%s', list(w), iterations, converged)

    strategy = MemorylessStrategy(best - row_starts[:-1])
    if converged:
        # coordinates with little or no weight may still be far off; settle them on the chosen strategy
        x = _evaluate_chain(transitions[best], rewards[best], x, EVALUATION_TOL, max_iters)
    return _finish(norm, weights, x[model.initial_state], strategy, iterations, converged, trace)


def _check_horizon(norm: NormalizedObjectives, horizon: int):
    bounds = set(norm.horizons)
    if bounds != {None} and bounds != {horizon}:
        raise HorizonMismatchError('objectives carry horizons {}, cannot answer a query with horizon {}'.format(
            list(norm.horizons), horizon))


def finite_horizon_weighted_vi(norm: NormalizedObjectives, w: Sequence[float], horizon: int) -> QueryResult:
    """
    Maximizes ``w . values`` over `horizon` steps with exactly `horizon` backward sweeps. The strategy returned is
    time-dependent.

    :param norm: The :class:`NormalizedObjectives`; every objective must carry `horizon` as its step bound, or none
        may carry a step bound.
    :param w: The weight vector.
    :param horizon: Number of steps, at least 1.
    """
    weights = validate_weight(w, norm.k)
    if horizon < 1:
        raise ValueError('horizon must be at least 1, got {!r}'.format(horizon))
    _check_horizon(norm, horizon)

    model = norm.transformed_model
    transitions = model.transition_matrix()
    rewards = norm.signed_rewards()
    row_starts = model.row_starts

    x = np.zeros((model.num_states, norm.k))
    table = []
    trace = []
    for _ in range(horizon):
        q = rewards + transitions @ x
        best = _state_argmax(q @ weights, row_starts)
        x = q[best]
        table.append(best - row_starts[:-1])
        trace.append(float(x[model.initial_state] @ weights))

    return _finish(norm, weights, x[model.initial_state], FiniteHorizonStrategy(table), horizon, True, trace)


def solve_query(norm: NormalizedObjectives, w: Sequence[float], delta: float = DEFAULT_DELTA,
                max_iters: int = DEFAULT_MAX_ITERS) -> QueryResult:
    """
    Dispatches to :func:`weighted_value_iteration` for unbounded objectives and to
    :func:`finite_horizon_weighted_vi` when every objective carries the same step bound.

    :raises HorizonMismatchError: If the objectives mix step bounds.
    """
    bounds = set(norm.horizons)
    if bounds == {None}:
        return weighted_value_iteration(norm, w, delta, max_iters)
    if len(bounds) == 1:
        return finite_horizon_weighted_vi(norm, w, bounds.pop())
    raise HorizonMismatchError('objectives with distinct step bounds {} cannot be scalarized together'.format(
        list(norm.horizons)))


def _rows_of(norm: NormalizedObjectives, choices: Sequence[int]) -> np.ndarray:
    model = norm.transformed_model
    choices = np.asarray(choices, dtype=np.int64)
    if np.any(choices < 0) or np.any(choices >= np.diff(model.row_starts)):
        raise ValueError('strategy chooses an action a state does not have')
    return model.row_starts[:-1] + choices


def evaluate_strategy(norm: NormalizedObjectives, sigma: Strategy, tol: float = EVALUATION_TOL,
                      max_iters: int = DEFAULT_MAX_ITERS) -> PointK:
    """
    Value vector of a fixed strategy at the initial state, in user-facing orientation.

    Unbounded objectives are evaluated by value iteration on the induced Markov chain until the largest change is
    below `tol`; step-bounded objectives (or a :class:`FiniteHorizonStrategy`) by exactly `horizon` sweeps.

    :raises DivergenceError: If a value exceeds 1e12.
    """
    model = norm.transformed_model
    if not sigma.is_valid_for(model):
        raise ValueError('{!r} is not a valid strategy for {!r}'.format(sigma, model))

    transitions = model.transition_matrix()
    rewards = norm.signed_rewards()
    bounds = set(norm.horizons)

    if isinstance(sigma, FiniteHorizonStrategy):
        _check_horizon(norm, sigma.horizon)
        horizon = sigma.horizon
    elif bounds == {None}:
        horizon = None
    elif len(bounds) == 1:
        horizon = bounds.pop()
    else:
        raise HorizonMismatchError('objectives with distinct step bounds {} cannot be evaluated together'.format(
            list(norm.horizons)))

    x = np.zeros((model.num_states, norm.k))
    if horizon is not None:
        for t in range(1, horizon + 1):
            rows = _rows_of(norm, [sigma.choice(s, t) for s in range(model.num_states)])
            x = rewards[rows] + transitions[rows] @ x
    else:
        rows = _rows_of(norm, [sigma.choice(s) for s in range(model.num_states)])
        x = _evaluate_chain(transitions[rows], rewards[rows], x, tol, max_iters)

    return norm.to_user(x[model.initial_state] + norm.normalized_offsets())


def solve_strategy_exactly(norm: NormalizedObjectives, sigma: MemorylessStrategy) -> PointK:
    """
    Exact value vector of a memoryless strategy on unbounded objectives, by a sparse linear solve of
    ``(I - P) x = r`` over the states that are reachable from the initial state and can still collect reward.

    :raises DivergenceError: If the initial state reaches a bottom component that collects reward.
    """
    model = norm.transformed_model
    if not sigma.is_valid_for(model):
        raise ValueError('{!r} is not a valid strategy for {!r}'.format(sigma, model))
    if set(norm.horizons) != {None}:
        raise HorizonMismatchError('exact solves need unbounded objectives')

    n = model.num_states
    rows = _rows_of(norm, sigma.choices)
    chain = model.transition_matrix()[rows].tocsr()
    chain_rewards = norm.signed_rewards()[rows]

    reachable = np.zeros(n, dtype=bool)
    reachable[sp.csgraph.breadth_first_order(chain, model.initial_state, directed=True,
                                             return_predecessors=False)] = True

    num_components, component = sp.csgraph.connected_components(chain, directed=True, connection='strong')
    coo = chain.tocoo()
    leaves = np.zeros(num_components, dtype=bool)
    leaves[component[coo.row[component[coo.row] != component[coo.col]]]] = True
    bottom = ~leaves[component]

    values = np.zeros(norm.k)
    for j in range(norm.k):
        collecting = chain_rewards[:, j] != 0.0
        if np.any(collecting & bottom & reachable):
            state = int(np.flatnonzero(collecting & bottom & reachable)[0])
            raise DivergenceError(state, float('inf'))
        sources = np.flatnonzero(collecting)
        if len(sources) == 0:
            continue
        # virtual node n has an edge to every collecting state; walk the reversed chain from it
        edge_from = np.concatenate([coo.col, np.full(len(sources), n)])
        edge_to = np.concatenate([coo.row, sources])
        extended = sp.csr_matrix((np.ones(len(edge_from)), (edge_from, edge_to)), shape=(n + 1, n + 1))
        can_collect = np.zeros(n + 1, dtype=bool)
        can_collect[sp.csgraph.breadth_first_order(extended, n, directed=True, return_predecessors=False)] = True
        solve_set = np.flatnonzero(can_collect[:n] & reachable)
        if model.initial_state not in solve_set:
            continue
        sub = chain[solve_set][:, solve_set]
        system = (sp.identity(len(solve_set), format='csc') - sub).tocsc()
        x = sp.linalg.spsolve(system, chain_rewards[solve_set, j])
        x = np.atleast_1d(x)
        values[j] = x[int(np.searchsorted(solve_set, model.initial_state))]

    return norm.to_user(values + norm.normalized_offsets())
