"""
The refinement loop that sandwiches the Pareto curve between an under-approximation (the downward convex closure of
achieved points) and an over-approximation (the intersection of the halfspaces every scalarized optimum certifies).
"""
import logging
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from .types import *
from .utilities import ABS_TOL, unit_weight
from .objectives import NormalizedObjectives
from .solver import DEFAULT_DELTA, DEFAULT_MAX_ITERS, QueryResult, solve_query
from .geometry import Halfspace, convex_hull, distance_to_closure, pareto_gap
from .approximation import ParetoApproximation, QueryRecord

logger = logging.getLogger(__name__)

# an under point may exceed a halfspace by this much before it is reported
CONTAINMENT_TOL = 1e-6

# a repeated weight must improve its scalar value by at least this much to continue
STAGNATION_TOL = 1e-9

MAX_OBJECTIVES = 3


class EngineConfig(object):
    """
    Settings of :func:`approximate_pareto`.

    :param epsilon: Stop once the gap between the approximations is at most this.
    :param max_queries: Total number of scalarized queries allowed, initial ones included. At least `k`.
    :param vi_delta: Convergence threshold forwarded to value iteration.
    :param vi_max_iters: Sweep limit forwarded to value iteration.
    :param box_margin: Slack added above the single-objective optima when closing the over-approximation.
    :param workers: Threads used for the initial single-objective queries.
    """

    def __init__(self, epsilon: float = 1e-3, max_queries: int = 64, vi_delta: float = DEFAULT_DELTA,
                 vi_max_iters: int = DEFAULT_MAX_ITERS, box_margin: float = 1e-6, workers: int = 1):
        if not epsilon > 0:
            raise ValueError('epsilon must be positive, got {!r}'.format(epsilon))
        if max_queries < 1:
            raise ValueError('max_queries must be at least 1, got {!r}'.format(max_queries))
        if not vi_delta > 0:
            raise ValueError('vi_delta must be positive, got {!r}'.format(vi_delta))
        if vi_max_iters < 1:
            raise ValueError('vi_max_iters must be at least 1, got {!r}'.format(vi_max_iters))
        if box_margin < 0:
            raise ValueError('box_margin must be nonnegative, got {!r}'.format(box_margin))
        if workers < 1:
            raise ValueError('workers must be at least 1, got {!r}'.format(workers))
        self.epsilon = float(epsilon)
        self.max_queries = int(max_queries)
        self.vi_delta = float(vi_delta)
        self.vi_max_iters = int(vi_max_iters)
        self.box_margin = float(box_margin)
        self.workers = int(workers)

    def __repr__(self):
        return ('EngineConfig(epsilon={!r}, max_queries={}, vi_delta={!r}, vi_max_iters={}, box_margin={!r}, '
                'workers={})').format(self.epsilon, self.max_queries, self.vi_delta, self.vi_max_iters,
                                      self.box_margin, self.workers)


def _query(norm: NormalizedObjectives, cfg: EngineConfig, w: PointK) -> QueryResult:
    result = solve_query(norm, w, cfg.vi_delta, cfg.vi_max_iters)
    logger.debug('query %s -> %s (scalar %r, %d sweeps)', w, result.normalized_point, result.scalar_value,
                 result.iterations_used)
    return result


def _record(approx: ParetoApproximation, w: PointK, result: QueryResult) -> bool:
    """Logs a query; adds its point and halfspace only when value iteration converged."""
    approx.query_log.append(QueryRecord(w, result.normalized_point, result.scalar_value, result.iterations_used,
                                        result.converged))
    if not result.converged:
        logger.warning('value iteration did not converge for weight %s after %d sweeps', w, result.iterations_used)
        return False
    approx.add_point(result.normalized_point)
    approx.halfspaces.append(Halfspace(w, result.scalar_value))
    return True


def _check_containment(approx: ParetoApproximation):
    """Sets `containment_violations` to the number of (halfspace, point) pairs off by more than CONTAINMENT_TOL."""
    count = 0
    for h in approx.halfspaces:
        for p in approx.under_points:
            excess = h.violation(p)
            if excess > CONTAINMENT_TOL:
                count += 1
                if count > approx.containment_violations:
                    logger.warning('point %s violates halfspace %s by %r', p, h, excess)
    approx.containment_violations = count


def approximate_pareto(norm: NormalizedObjectives, cfg: Optional[EngineConfig] = None) -> ParetoApproximation:
    """
    Approximates the Pareto curve of `norm` to within `cfg.epsilon`.

    The single-objective optima are queried first. Each further query uses the weight suggested by
    :func:`pareto_gap` for the over-approximation vertex farthest from the under-approximation, until that distance is
    at most epsilon or a stopping rule fires. Every stopping reason is reported in the returned status; partial
    results are kept.

    :param norm: The normalized objectives, 1 to 3 of them.
    :param cfg: The :class:`EngineConfig`; defaults apply when omitted.
    :return: The :class:`ParetoApproximation`.
    :raises DivergenceError: If a query finds a possibly infinite value.
    """
    cfg = cfg or EngineConfig()
    k = norm.k
    if not 1 <= k <= MAX_OBJECTIVES:
        raise ValueError('between 1 and {} objectives are supported, got {}'.format(MAX_OBJECTIVES, k))
    if cfg.max_queries < k:
        raise ValueError('max_queries ({}) must be at least the number of objectives ({})'.format(
            cfg.max_queries, k))

    approx = ParetoApproximation(k, norm.signs, norm.axis_names, cfg.epsilon)

    weights = [unit_weight(k, i) for i in range(k)]
    if cfg.workers > 1 and k > 1:
        # the model caches are filled lazily and without a lock
        norm.transformed_model.transition_matrix()
        norm.signed_rewards()
        with ThreadPoolExecutor(max_workers=min(cfg.workers, k)) as executor:
            results = list(executor.map(lambda w: _query(norm, cfg, w), weights))
    else:
        results = [_query(norm, cfg, w) for w in weights]

    all_converged = True
    for w, result in zip(weights, results):
        all_converged &= _record(approx, w, result)
    if not all_converged:
        approx.status = ParetoStatus.VI_NOT_CONVERGED
        logger.info('stopped after the initial queries: %s', approx.status.value)
        return approx

    if k == 1:
        approx.gap = 0.0
        approx.witness = approx.under_points[0]
        approx.status = ParetoStatus.CONVERGED
        return approx

    upper = np.array([r.scalar_value for r in results]) + cfg.box_margin

    while True:
        _check_containment(approx)

        lower = np.minimum(0.0, np.min(np.array(approx.under_points), axis=0))
        over = approx.over_vertices(lower, upper)
        if not over:
            logger.warning('over-approximation is empty inside the box [%s, %s]', list(lower), list(upper))
            approx.status = ParetoStatus.STAGNATED
            break

        gap = pareto_gap(approx.under_points, over)
        approx.gap, approx.witness = gap.gap, gap.witness
        logger.debug('turn %d: gap %r at %s, next weight %s', len(approx.query_log), gap.gap, gap.witness,
                     gap.suggested_weight)

        if gap.gap <= cfg.epsilon:
            if approx.containment_violations:
                approx.status = ParetoStatus.INCONSISTENT
                logger.warning('gap closed with %d containment violations', approx.containment_violations)
            else:
                approx.status = ParetoStatus.CONVERGED
            break
        if len(approx.query_log) >= cfg.max_queries:
            approx.status = ParetoStatus.QUERY_BUDGET_EXHAUSTED
            break

        w = gap.suggested_weight
        previous = [r.scalar_value for r in approx.query_log
                    if r.converged and max(abs(a - b) for a, b in zip(r.weights, w)) <= ABS_TOL]

        result = _query(norm, cfg, w)
        if not _record(approx, w, result):
            approx.status = ParetoStatus.VI_NOT_CONVERGED
            break

        if previous and result.scalar_value - max(previous) < STAGNATION_TOL:
            degenerate = convex_hull(approx.under_points, k).affine_dim < k
            approx.status = ParetoStatus.DEGENERATE if degenerate else ParetoStatus.STAGNATED
            logger.warning('weight %s repeated without improvement, stopping with gap %r', w, approx.gap)
            break

    logger.info('pareto approximation finished: %s after %d queries, gap %r', approx.status.value,
                len(approx.query_log), approx.gap)
    return approx


def query_achievability(approx: ParetoApproximation, target: Sequence[float]) -> Achievability:
    """
    Decides whether a target vector, in the orientation the user stated the objectives, can be met.

    :return: :attr:`Achievability.ACHIEVABLE` when the target lies in the downward closure of the under points,
        :attr:`Achievability.NOT_ACHIEVABLE` when it violates a certified halfspace, and :attr:`Achievability.UNKNOWN`
        when it lies between the two.
    """
    if len(target) != approx.k:
        raise ValueError('target must have {} coordinates, got {}'.format(approx.k, len(target)))
    if not approx.under_points:
        raise ValueError('the approximation holds no achieved points')
    normalized = tuple(s * float(t) for s, t in zip(approx.signs, target))
    distance, _, _ = distance_to_closure(approx.under_points, normalized)
    if distance <= ABS_TOL:
        return Achievability.ACHIEVABLE
    if any(h.violation(normalized) > ABS_TOL for h in approx.halfspaces):
        return Achievability.NOT_ACHIEVABLE
    return Achievability.UNKNOWN
