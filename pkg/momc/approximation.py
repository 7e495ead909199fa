import math
from .utilities import json, MomcJSONEncoder, MomcJSONDecoder, as_point, lex_sorted_unique
from .types import *
from .geometry import Halfspace, Hull, DegenerateHull, convex_hull, closure_of, halfspace_vertices

EXPORT_FORMAT_VERSION = 1


class QueryRecord(object):
    """
    One entry of the query log: the weight queried, the achieved point in normalized orientation, the scalar
    optimum, the sweeps used, and whether value iteration converged.
    """

    def __init__(self, weights: Sequence[float], point: Sequence[float], scalar_value: float, iterations: int,
                 converged: bool):
        self.weights = as_point(weights)
        self.point = as_point(point)
        self.scalar_value = float(scalar_value)
        self.iterations = int(iterations)
        self.converged = bool(converged)

    def __eq__(self, other):
        if not isinstance(other, QueryRecord):
            return NotImplemented
        return (self.weights, self.point, self.scalar_value, self.iterations, self.converged) == \
               (other.weights, other.point, other.scalar_value, other.iterations, other.converged)

    def __repr__(self):
        return 'QueryRecord(weights={}, point={}, scalar_value={!r}, iterations={}, converged={})'.format(
            self.weights, self.point, self.scalar_value, self.iterations, self.converged)


class ParetoApproximation(object):
    """
    The state of a Pareto curve approximation. Everything is stored in normalized (maximizing) orientation; use
    :meth:`user_points` for the values as the user stated the objectives.

    The under-approximation is the downward convex closure of `under_points`. The over-approximation is the
    intersection of `halfspaces`. Every query, converged or not, is recorded in `query_log`; only converged queries
    contribute points and halfspaces.

    Here are some example uses:

    Listing the achieved trade-offs: ::

        for point in approx.user_points():
            print(dict(zip(approx.axis_names, point)))

    Persisting a run and loading it again: ::

        approx.save('curve.json')
        same = ParetoApproximation.from_file('curve.json')
    """

    def __init__(self, k: int, signs: Sequence[float], axis_names: Sequence[str], epsilon: float):
        if len(signs) != k or len(axis_names) != k:
            raise ValueError('expected {} signs and axis names, got {} and {}'.format(k, len(signs), len(axis_names)))
        self.k = k
        self.signs = as_point(signs)
        self.axis_names = list(axis_names)
        self.epsilon = float(epsilon)
        self.under_points = []  # type: List[PointK]
        self.halfspaces = []  # type: List[Halfspace]
        self.query_log = []  # type: List[QueryRecord]
        self.gap = float('inf')
        self.witness = None  # type: Optional[PointK]
        self.status = ParetoStatus.QUERY_BUDGET_EXHAUSTED
        self.containment_violations = 0

    def __eq__(self, other):
        if not isinstance(other, ParetoApproximation):
            return NotImplemented
        return (self.k == other.k and self.signs == other.signs and self.axis_names == other.axis_names
                and self.epsilon == other.epsilon and self.under_points == other.under_points
                and self.halfspaces == other.halfspaces and self.query_log == other.query_log
                and self.gap == other.gap and self.witness == other.witness and self.status == other.status
                and self.containment_violations == other.containment_violations)

    def __repr__(self):
        return 'ParetoApproximation(k={}, points={}, queries={}, gap={!r}, status={})'.format(
            self.k, len(self.under_points), len(self.query_log), self.gap, self.status.value)

    def add_point(self, point: Sequence[float], tol: float = 1e-12) -> bool:
        """
        Adds an achieved point unless it repeats one already held.

        :return: `True` if the point was new.
        """
        point = as_point(point)
        if any(max(abs(a - b) for a, b in zip(point, q)) <= tol for q in self.under_points):
            return False
        self.under_points = lex_sorted_unique(self.under_points + [point])
        return True

    def user_points(self) -> List[PointK]:
        """:return: The under points with every coordinate in the orientation the user stated."""
        return [tuple(s * x + 0.0 for s, x in zip(self.signs, p)) for p in self.under_points]

    def under_hull(self) -> Union[Hull, DegenerateHull]:
        """The convex hull of the under points, without downward closure. Requires k of 2 or 3."""
        return convex_hull(self.under_points, self.k)

    def under_closure(self, extra: Sequence[Sequence[float]] = ()) -> Hull:
        return closure_of(self.under_points, extra)

    def over_vertices(self, lower: Sequence[float], upper: Sequence[float]) -> List[PointK]:
        """Vertices of the over-approximation intersected with the box ``[lower, upper]``."""
        return halfspace_vertices(self.halfspaces, lower, upper, self.k)

    def max_violation(self) -> float:
        """:return: The largest amount by which an under point violates a halfspace; at most 0 when contained."""
        return max((h.violation(p) for h in self.halfspaces for p in self.under_points), default=0.0)

    def save(self, filename: str):
        """
        Save the approximation to a json file, in the export schema.

        :param filename: The file to save to.
        """
        with open(filename, 'w', encoding='utf-8', newline='') as fp:
            fp.write(dumps_approximation(self))

    @classmethod
    def from_file(cls, filename: str) -> 'ParetoApproximation':
        """
        :param filename: The json file to load the :class:`ParetoApproximation` from.
        :return: The :class:`ParetoApproximation` that was originally saved to the file using :meth:`save`.
        """
        with open(filename, encoding='utf-8', newline='') as fp:
            return loads_approximation(fp.read())


class ParetoApproximationEncoder(MomcJSONEncoder):
    def default(self, o):
        if isinstance(o, ParetoApproximation):
            return {
                'type': 'ParetoApproximation',
                'format_version': EXPORT_FORMAT_VERSION,
                'objectives': [{'name': name, 'sign': int(sign)} for name, sign in zip(o.axis_names, o.signs)],
                'status': o.status.value,
                'gap': o.gap if math.isfinite(o.gap) else None,
                'epsilon': o.epsilon,
                'witness': o.witness,
                'containment_violations': o.containment_violations,
                'under_points': o.under_points,
                'halfspaces': o.halfspaces,
                'query_log': o.query_log,
            }
        elif isinstance(o, Halfspace):
            return {
                'weights': o.weights,
                'offset': o.offset,
            }
        elif isinstance(o, QueryRecord):
            return {
                'weights': o.weights,
                'point': o.point,
                'scalar_value': o.scalar_value,
                'iterations': o.iterations,
                'converged': o.converged,
            }
        return super().default(o)


class ParetoApproximationDecoder(MomcJSONDecoder):
    def _object_hook(self, obj):
        if 'type' in obj and obj['type'] == 'ParetoApproximation':
            if obj['format_version'] != EXPORT_FORMAT_VERSION:
                raise ValueError('unsupported export format version {}'.format(obj['format_version']))
            objectives = obj['objectives']
            approx = ParetoApproximation(len(objectives), [o['sign'] for o in objectives],
                                         [o['name'] for o in objectives], obj['epsilon'])
            approx.status = ParetoStatus(obj['status'])
            approx.gap = float('inf') if obj['gap'] is None else float(obj['gap'])
            approx.witness = None if obj['witness'] is None else as_point(obj['witness'])
            approx.containment_violations = int(obj['containment_violations'])
            approx.under_points = [as_point(p) for p in obj['under_points']]
            approx.halfspaces = [Halfspace(h['weights'], h['offset']) for h in obj['halfspaces']]
            approx.query_log = [QueryRecord(q['weights'], q['point'], q['scalar_value'], q['iterations'],
                                            q['converged']) for q in obj['query_log']]
            return approx

        return super()._object_hook(obj)


def dumps_approximation(approx: ParetoApproximation) -> str:
    """Canonical JSON text of an approximation: equal approximations give identical text."""
    return json.dumps(approx, cls=ParetoApproximationEncoder, indent=2, allow_nan=False) + '\n'


def loads_approximation(text: str) -> ParetoApproximation:
    approx = json.loads(text, cls=ParetoApproximationDecoder)
    if not isinstance(approx, ParetoApproximation):
        raise ValueError('document is not a ParetoApproximation export')
    return approx
