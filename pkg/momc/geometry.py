"""
Convex geometry in two and three dimensions, with absolute tolerance 1e-9 on every predicate.

Point lists are sorted lexicographically before any construction, so every result is reproducible.
"""
import itertools
import logging
import math
import warnings
import numpy as np
import scipy.linalg
from scipy.spatial import ConvexHull
try:
    from scipy.spatial import QhullError
except ImportError:
    from scipy.spatial.qhull import QhullError
from .types import *
from .utilities import ABS_TOL, as_point, lex_sorted_unique, normalize_weight, unit_weight

logger = logging.getLogger(__name__)

# points closer than this in every coordinate are merged before hull construction
MERGE_TOL = 1e-12

# subset systems whose smallest LU pivot is below this are skipped
PIVOT_TOL = 1e-12


class Halfspace(object):
    """The region ``{q : weights . q <= offset}``, with nonnegative weights summing to 1."""

    def __init__(self, weights: Sequence[float], offset: float):
        self.weights = as_point(weights)
        self.offset = float(offset)
        if any(w < 0.0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError('halfspace weights must be nonnegative and sum to 1, got {}'.format(self.weights))
        if not math.isfinite(self.offset):
            raise ValueError('halfspace offset must be finite, got {!r}'.format(self.offset))

    def violation(self, point: Sequence[float]) -> float:
        """:return: How far `point` lies outside the halfspace; negative inside."""
        return float(np.dot(self.weights, point)) - self.offset

    def contains(self, point: Sequence[float], tol: float = ABS_TOL) -> bool:
        return self.violation(point) <= tol

    def __eq__(self, other):
        if not isinstance(other, Halfspace):
            return NotImplemented
        return self.weights == other.weights and self.offset == other.offset

    def __repr__(self):
        return 'Halfspace({}, {!r})'.format(self.weights, self.offset)


class Facet(object):
    """
    One facet of a :class:`Hull`: the indices of the hull points lying on it, in counter-clockwise order seen from
    outside starting at the lexicographically smallest, its outward normal scaled to unit L1 norm, and the offset
    such that ``normal . q <= offset`` holds on the hull.
    """

    def __init__(self, indices: Sequence[int], normal: Sequence[float], offset: float):
        self.indices = tuple(indices)
        self.normal = as_point(normal)
        self.offset = float(offset)

    def __repr__(self):
        return 'Facet({}, normal={}, offset={!r})'.format(list(self.indices), self.normal, self.offset)


class Hull(object):
    """
    A full-dimensional convex hull in dimension 2 or 3.

    `points` holds every input point on the boundary, sorted lexicographically; facets index into it. Points lying
    on a facet without being extreme (for example the middle of three collinear points) are listed in that facet's
    polygon but are not `vertices`.
    """

    is_degenerate = False

    def __init__(self, dim: int, points: Sequence[PointK], vertex_indices: Sequence[int], facets: Sequence[Facet]):
        self.dim = dim
        self.points = list(points)
        self.vertex_indices = tuple(vertex_indices)
        self.facets = list(facets)

    @property
    def vertices(self) -> List[PointK]:
        """The extreme points, sorted lexicographically."""
        return [self.points[i] for i in self.vertex_indices]

    @property
    def affine_dim(self) -> int:
        return self.dim

    def contains(self, point: Sequence[float], tol: float = ABS_TOL) -> bool:
        return all(np.dot(f.normal, point) - f.offset <= tol for f in self.facets)

    def facet_edges(self, facet: Facet) -> List[Tuple[int, int]]:
        """Boundary segments of a facet polygon (dim 3) or the pieces of a facet segment (dim 2)."""
        idx = facet.indices
        if self.dim == 2:
            return list(zip(idx[:-1], idx[1:]))
        return [(idx[i], idx[(i + 1) % len(idx)]) for i in range(len(idx))]

    def facet_simplices(self, facet: Facet) -> List[Tuple[int, ...]]:
        """
        Triangulates a facet polygon by fanning from the point after the lexicographically smallest one.
        In dimension 2 the facet segment is returned in pieces instead.
        """
        if self.dim == 2:
            return self.facet_edges(facet)
        idx = facet.indices
        cycle = idx[1:] + idx[:1]
        apex = cycle[0]
        return [(apex, cycle[i], cycle[i + 1]) for i in range(1, len(cycle) - 1)]

    def triangles(self) -> List[Tuple[int, ...]]:
        """Every facet triangle in facet order (facet pieces in dimension 2)."""
        return [s for f in self.facets for s in self.facet_simplices(f)]

    def pareto_facets(self, tol: float = ABS_TOL) -> List[Facet]:
        """:return: The facets whose outward normal has no negative component."""
        return [f for f in self.facets if all(c >= -tol for c in f.normal)]

    @property
    def volume(self) -> float:
        """Area in dimension 2, volume in dimension 3."""
        return float(ConvexHull(np.array(self.vertices)).volume)

    def __repr__(self):
        return 'Hull(dim={}, vertices={}, facets={})'.format(self.dim, len(self.vertex_indices), len(self.facets))


class DegenerateHull(object):
    """
    The result of :func:`convex_hull` when the points do not span the requested dimension. Carries the affine
    dimension actually found.
    """

    is_degenerate = True

    def __init__(self, dim: int, points: Sequence[PointK], affine_dim: int):
        self.dim = dim
        self.points = list(points)
        self.affine_dim = affine_dim

    @property
    def vertices(self) -> List[PointK]:
        return list(self.points)

    @property
    def volume(self) -> float:
        return 0.0

    def outline(self) -> List[PointK]:
        """
        The extreme points of the degenerate set in boundary order: one point, the two ends of a segment, or a
        planar polygon counter-clockwise in its own plane starting at the lexicographically smallest point.
        """
        if not self.points:
            return []
        arr = np.array(self.points)
        if self.affine_dim == 0:
            return [self.points[0]]
        center = arr.mean(axis=0)
        _, _, vt = np.linalg.svd(arr - center)
        coords = (arr - center) @ vt[:self.affine_dim].T
        if self.affine_dim == 1:
            order = np.argsort(coords[:, 0], kind='stable')
            return sorted([self.points[order[0]], self.points[order[-1]]])
        hull = ConvexHull(coords)
        ring = [int(i) for i in hull.vertices]
        start = ring.index(min(ring))
        return [self.points[i] for i in ring[start:] + ring[:start]]

    def __repr__(self):
        return 'DegenerateHull(dim={}, points={}, affine_dim={})'.format(self.dim, len(self.points), self.affine_dim)


def _affine_dimension(arr: np.ndarray) -> int:
    if len(arr) <= 1:
        return 0
    return int(np.linalg.matrix_rank(arr[1:] - arr[0], tol=ABS_TOL))


def _counter_clockwise(arr: np.ndarray, indices: List[int], normal: np.ndarray) -> List[int]:
    """Orders points lying on one facet counter-clockwise around the outward normal, starting at the smallest."""
    if len(arr[0]) == 2:
        tangent = np.array([-normal[1], normal[0]])
        return sorted(indices, key=lambda i: (float(arr[i] @ tangent), i))
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(normal)))] = 1.0
    u = axis - (axis @ normal) * normal
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    center = arr[indices].mean(axis=0)
    ring = sorted(indices, key=lambda i: math.atan2(float((arr[i] - center) @ v), float((arr[i] - center) @ u)))
    start = ring.index(min(ring))
    return ring[start:] + ring[:start]


def convex_hull(points: Iterable[Sequence[float]], dim: int) -> Union[Hull, DegenerateHull]:
    """
    Convex hull of points in dimension 2 or 3.

    Example: ::

        >>> convex_hull([(0, 0), (1, 0), (0, 1), (0.2, 0.2)], 2).vertices
        [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]

    :param points: The points; each must have `dim` coordinates.
    :param dim: 2 or 3.
    :return: A :class:`Hull`, or a :class:`DegenerateHull` carrying the affine dimension found when there are
        fewer than `dim + 1` affinely independent points.
    """
    if dim not in (2, 3):
        raise ValueError('convex_hull supports dimensions 2 and 3, got {}'.format(dim))
    pts = lex_sorted_unique(points, MERGE_TOL)
    if any(len(p) != dim for p in pts):
        raise ValueError('every point must have {} coordinates'.format(dim))
    if not all(math.isfinite(c) for p in pts for c in p):
        raise ValueError('points must have finite coordinates')

    arr = np.array(pts, dtype=float).reshape(len(pts), dim)
    affine_dim = _affine_dimension(arr)
    if len(pts) < dim + 1 or affine_dim < dim:
        return DegenerateHull(dim, pts, affine_dim)
    try:
        qhull = ConvexHull(arr)
    except QhullError:
        logger.debug('qhull rejected %d points of affine dimension %d', len(pts), affine_dim)
        return DegenerateHull(dim, pts, affine_dim)

    planes = []
    for equation in qhull.equations:
        if not any(np.max(np.abs(equation - other)) <= ABS_TOL for other in planes):
            planes.append(equation)

    raw_facets = []
    for equation in planes:
        normal, c = equation[:dim], equation[dim]
        on_plane = [i for i in range(len(pts)) if abs(float(arr[i] @ normal + c)) <= ABS_TOL]
        raw_facets.append((_counter_clockwise(arr, on_plane, normal), normal, c))

    boundary = sorted({i for indices, _, _ in raw_facets for i in indices} | {int(i) for i in qhull.vertices})
    position = {old: new for new, old in enumerate(boundary)}
    extreme = sorted(position[int(i)] for i in qhull.vertices)

    facets = []
    for indices, normal, c in raw_facets:
        scale = float(np.abs(normal).sum())
        facets.append(Facet([position[i] for i in indices], normal / scale, -c / scale))
    facets.sort(key=lambda f: sorted(pts[boundary[i]] for i in f.indices))

    return Hull(dim, [pts[i] for i in boundary], extreme, facets)


def hull_volume(points: Iterable[Sequence[float]], dim: int) -> float:
    """:return: Area (dim 2) or volume (dim 3) of the hull of `points`; 0 for degenerate sets."""
    return convex_hull(points, dim).volume


def halfspace_vertices(halfspaces: Sequence[Halfspace], lower: Sequence[float], upper: Sequence[float],
                       dim: int) -> List[PointK]:
    """
    Vertices of the intersection of `halfspaces` with the box ``[lower, upper]``.

    Every `dim`-subset of the boundary planes (halfspace boundaries and box faces) is solved as a linear system;
    near-singular systems are skipped, and solutions violating any constraint by more than 1e-9 are dropped.

    :return: The vertices, deduplicated at 1e-9 and sorted lexicographically; empty if the intersection is empty.
    """
    if dim not in (2, 3):
        raise ValueError('halfspace_vertices supports dimensions 2 and 3, got {}'.format(dim))
    if len(halfspaces) == 0:
        raise ValueError('at least one halfspace is required')
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != (dim,) or upper.shape != (dim,) or np.any(lower > upper):
        raise ValueError('box [{}, {}] is empty or has the wrong dimension'.format(list(lower), list(upper)))

    rows = [np.asarray(h.weights, dtype=float) for h in halfspaces]
    offsets = [h.offset for h in halfspaces]
    for i in range(dim):
        rows.append(np.eye(dim)[i])
        offsets.append(upper[i])
        rows.append(-np.eye(dim)[i])
        offsets.append(-lower[i])
    a = np.array(rows)
    b = np.array(offsets)

    found = []
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        for subset in itertools.combinations(range(len(a)), dim):
            system = a[list(subset)]
            lu, piv = scipy.linalg.lu_factor(system, check_finite=False)
            if np.min(np.abs(np.diag(lu))) < PIVOT_TOL:
                continue
            x = scipy.linalg.lu_solve((lu, piv), b[list(subset)], check_finite=False)
            if np.all(a @ x - b <= ABS_TOL):
                found.append(x)
    return lex_sorted_unique(found, ABS_TOL)


def downward_closure(points: Iterable[Sequence[float]], lower: Sequence[float]) -> Union[Hull, DegenerateHull]:
    """
    Hull of `points` and their shadows: copies with any subset of coordinates lowered to `lower`. This is the set of
    points dominated by the hull of `points`, truncated at `lower`.
    """
    lower = np.asarray(lower, dtype=float)
    k = len(lower)
    shadows = []
    for p in points:
        p = np.maximum(np.asarray(p, dtype=float), lower)
        for mask in itertools.product((False, True), repeat=k):
            shadows.append(np.where(mask, lower, p))
    return convex_hull(shadows, k)


def _closest_on_segment(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    length = float(ab @ ab)
    if length == 0.0:
        return a
    t = min(max(float((p - a) @ ab) / length, 0.0), 1.0)
    return a + t * ab


def _closest_on_triangle(p: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    ab, ac, ap = b - a, c - a, p - a
    d1, d2 = ab @ ap, ac @ ap
    if d1 <= 0 and d2 <= 0:
        return a
    bp = p - b
    d3, d4 = ab @ bp, ac @ bp
    if d3 >= 0 and d4 <= d3:
        return b
    vc = d1 * d4 - d3 * d2
    if vc <= 0 and d1 >= 0 and d3 <= 0:
        return a + d1 / (d1 - d3) * ab
    cp = p - c
    d5, d6 = ab @ cp, ac @ cp
    if d6 >= 0 and d5 <= d6:
        return c
    vb = d5 * d2 - d1 * d6
    if vb <= 0 and d2 >= 0 and d6 <= 0:
        return a + d2 / (d2 - d6) * ac
    va = d3 * d6 - d5 * d4
    if va <= 0 and (d4 - d3) >= 0 and (d5 - d6) >= 0:
        return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b)
    denom = va + vb + vc
    if denom == 0.0:
        # zero-area triangle: fall back to its edges
        candidates = [_closest_on_segment(p, a, b), _closest_on_segment(p, b, c), _closest_on_segment(p, a, c)]
        return min(candidates, key=lambda q: float((p - q) @ (p - q)))
    return a + ab * (vb / denom) + ac * (vc / denom)


def nearest_on_hull(hull: Hull, point: Sequence[float]) -> Tuple[float, PointK, int]:
    """
    Euclidean distance from `point` to `hull`.

    :return: Tuple of the distance (0 inside), the nearest point of the hull, and the index of the facet it lies on
        (-1 inside). Among facets at the same distance the one whose normal best aligns with the separating
        direction wins, then the lowest index.
    """
    p = np.asarray(point, dtype=float)
    if hull.contains(p):
        return 0.0, as_point(p), -1
    pts = np.array(hull.points)
    best = None
    for fi, facet in enumerate(hull.facets):
        for simplex in hull.facet_simplices(facet):
            if len(simplex) == 2:
                q = _closest_on_segment(p, pts[simplex[0]], pts[simplex[1]])
            else:
                q = _closest_on_triangle(p, pts[simplex[0]], pts[simplex[1]], pts[simplex[2]])
            distance = float(np.linalg.norm(p - q))
            direction = (p - q) / distance if distance > 0 else np.zeros_like(p)
            alignment = float(np.dot(facet.normal, direction)) / float(np.linalg.norm(facet.normal))
            key = (round(distance, 12), -round(alignment, 12), fi)
            if best is None or key < best[0]:
                best = (key, distance, q, fi)
    _, distance, q, fi = best
    return distance, as_point(q), fi


class GapResult(object):
    """The result of :func:`pareto_gap`."""

    def __init__(self, gap: float, witness: PointK, suggested_weight: PointK):
        self.gap = gap
        self.witness = witness
        self.suggested_weight = suggested_weight

    def __iter__(self):
        return iter((self.gap, self.witness, self.suggested_weight))

    def __repr__(self):
        return 'GapResult(gap={!r}, witness={}, suggested_weight={})'.format(
            self.gap, self.witness, self.suggested_weight)


def _points_of(under) -> List[PointK]:
    if isinstance(under, (Hull, DegenerateHull)):
        return under.vertices
    return [as_point(p) for p in under]


def closure_of(under, extra: Sequence[Sequence[float]] = ()) -> Hull:
    """
    Downward closure of the under set, truncated one unit below every coordinate of the under points and of
    `extra`, so that the truncation never affects distances measured from `extra`.
    """
    pts = np.array(_points_of(under), dtype=float)
    everything = np.vstack([pts] + [np.asarray(extra, dtype=float).reshape(-1, pts.shape[1])])
    return downward_closure(pts, everything.min(axis=0) - 1.0)


def distance_to_closure(under, point: Sequence[float], closure: Hull = None) -> Tuple[float, PointK, PointK]:
    """
    Distance from `point` to the downward closure of the under set.

    :return: Tuple of distance, nearest point, and the suggested weight (the L1-normalized outward normal of the
        nearest facet, or the unit weight of the most violated axis when that normal has no positive component).
    """
    p = np.asarray(point, dtype=float)
    pts = _points_of(under)
    k = len(p)
    if not pts:
        raise ValueError('the under set is empty')
    if any(np.all(p <= np.asarray(q) + ABS_TOL) for q in pts):
        return 0.0, as_point(p), tuple(1.0 / k for _ in range(k))
    if k == 1:
        top = max(q[0] for q in pts)
        return float(p[0] - top), (top,), (1.0,)
    if closure is None:
        closure = closure_of(pts, [p])
    distance, nearest, fi = nearest_on_hull(closure, p)
    if fi < 0:
        return 0.0, as_point(p), tuple(1.0 / k for _ in range(k))
    weight = normalize_weight(closure.facets[fi].normal)
    if weight is None:
        weight = unit_weight(k, int(np.argmax(p - np.asarray(nearest))))
    return distance, nearest, weight


def pareto_gap(under, over_vertices: Sequence[Sequence[float]]) -> GapResult:
    """
    The largest Euclidean distance from an over-approximation vertex to the downward closure of the under set.

    :param under: A :class:`Hull`, a :class:`DegenerateHull`, or a plain list of points.
    :param over_vertices: Vertices of the over-approximation; at least one.
    :return: :class:`GapResult` with the gap, the vertex attaining it, and the weight to query next.
    """
    over = lex_sorted_unique(over_vertices)
    if not over:
        raise ValueError('over_vertices must not be empty')
    pts = _points_of(under)
    k = len(over[0])
    closure = closure_of(pts, over) if k > 1 else None

    gap, witness, weight = 0.0, over[0], tuple(1.0 / k for _ in range(k))
    for v in over:
        distance, _, suggested = distance_to_closure(pts, v, closure)
        if distance > gap:
            gap, witness, weight = distance, v, suggested
    return GapResult(gap, witness, weight)
