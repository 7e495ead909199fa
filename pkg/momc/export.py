"""
Emitters for a finished :class:`ParetoApproximation`: a TikZ picture of the under-approximation surface, the canonical
JSON export, and a CSV table of achieved points.
"""
import copy
import csv
import inspect
import io
import math
import numpy as np
from .utilities import json, format_float
from .types import *
from .geometry import Hull, DegenerateHull, convex_hull
from .approximation import ParetoApproximation, dumps_approximation, loads_approximation

# tick positions may exceed the largest coordinate by this much
TICK_TOL = 1e-9


class TikzStyle(object):
    """
    Drawing parameters of :func:`emit_tikz`. The defaults reproduce the look of a standard 3D Pareto surface plot:
    translucent gray facets, ``-latex'`` axis arrows and an oblique projection.

    :param opacity: Fill opacity of the facets, in [0, 1].
    :param color: TikZ color of the facet fills.
    :param edge_color: TikZ color of the edges between facets.
    :param arrow: Arrow tip specification of the axes.
    :param tick_step: Distance between axis ticks, positive.
    :param tick_length: Length of a tick mark.
    :param axis_margin: How far each axis extends beyond the largest coordinate on it.
    :param scale: The picture scale.
    :param x_vector: Projection of the x unit vector, in cm.
    :param y_vector: Projection of the y unit vector, in cm.
    :param z_vector: Projection of the z unit vector, in cm.
    :param axis_labels: The labels placed at the end of the axes.
    """

    def __init__(self, opacity: float = 0.3, color: str = 'gray!40', edge_color: str = 'gray', arrow: str = "-latex'",
                 tick_step: float = 0.5, tick_length: float = 0.04, axis_margin: float = 0.12, scale: float = 0.3,
                 x_vector: Sequence[float] = (-4.499513, -1.834018), y_vector: Sequence[float] = (0.0, 6.577848),
                 z_vector: Sequence[float] = (2.304853, -0.661467), axis_labels: Sequence[str] = ('$x$', '$y$', '$z$')):
        if not 0.0 <= opacity <= 1.0:
            raise ValueError('opacity must be in [0, 1], got {!r}'.format(opacity))
        if not tick_step > 0:
            raise ValueError('tick_step must be positive, got {!r}'.format(tick_step))
        if not scale > 0:
            raise ValueError('scale must be positive, got {!r}'.format(scale))
        for name, vector in (('x_vector', x_vector), ('y_vector', y_vector), ('z_vector', z_vector)):
            if len(vector) != 2:
                raise ValueError('{} must have 2 components, got {}'.format(name, list(vector)))
        if len(axis_labels) != 3:
            raise ValueError('axis_labels must have 3 entries, got {}'.format(list(axis_labels)))
        self.opacity = float(opacity)
        self.color = color
        self.edge_color = edge_color
        self.arrow = arrow
        self.tick_step = float(tick_step)
        self.tick_length = float(tick_length)
        self.axis_margin = float(axis_margin)
        self.scale = float(scale)
        self.x_vector = tuple(float(c) for c in x_vector)
        self.y_vector = tuple(float(c) for c in y_vector)
        self.z_vector = tuple(float(c) for c in z_vector)
        self.axis_labels = tuple(axis_labels)

    @classmethod
    def from_file(cls, filename: str) -> 'TikzStyle':
        """
        Loads a style from a JSON object whose keys are constructor arguments. Omitted keys keep their defaults.

        :raises ValueError: On unknown keys or invalid values.
        """
        with open(filename, encoding='utf-8') as fp:
            data = json.load(fp)
        if not isinstance(data, dict):
            raise ValueError('{}: a TikZ style must be a JSON object'.format(filename))
        known = set(inspect.signature(cls).parameters)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError('{}: unknown style keys {}'.format(filename, ', '.join(unknown)))
        return cls(**data)


class ExportBundle(object):
    """An approximation together with the axis names and signs of the objectives it was computed for."""

    def __init__(self, approximation: ParetoApproximation, axis_names: Optional[Sequence[str]] = None,
                 signs: Optional[Sequence[float]] = None):
        self.approximation = approximation
        self.axis_names = list(approximation.axis_names if axis_names is None else axis_names)
        self.signs = tuple(float(s) for s in (approximation.signs if signs is None else signs))
        if len(self.axis_names) != approximation.k or len(self.signs) != approximation.k:
            raise ValueError('expected {} axis names and signs, got {} and {}'.format(
                approximation.k, len(self.axis_names), len(self.signs)))

    @property
    def k(self) -> int:
        return self.approximation.k

    def user(self, point: Sequence[float]) -> PointK:
        # adding 0.0 turns -0.0 into 0.0
        return tuple(s * x + 0.0 for s, x in zip(self.signs, point))


def _coordinate(point: Sequence[float]) -> str:
    return '(' + ', '.join(format_float(c) for c in point) + ')'


def _length(value: float) -> str:
    text = format_float(value)
    return text[:-2] if text.endswith('.0') else text


def _axis_point(k: int, axis: int, value: str, other: str = '0') -> str:
    return '(' + ','.join(value if i == axis else other for i in range(k)) + ')'


def _ticks(top: float, step: float) -> List[float]:
    ticks = []
    i = 1
    while i * step <= top + TICK_TOL:
        ticks.append(i * step)
        i += 1
    return ticks


def _header(k: int, style: TikzStyle) -> List[str]:
    if k == 3:
        options = 'scale={},x = {{({}cm,{}cm)}}, y = {{({}cm,{}cm)}},z = {{({}cm,{}cm)}},font=\\scriptsize'.format(
            _length(style.scale), *(_length(c) for c in style.x_vector + style.y_vector + style.z_vector))
    else:
        options = 'scale={},font=\\scriptsize'.format(_length(style.scale))
    return ['\\begin{{tikzpicture}}[{}]'.format(options), '\\tikzstyle{every node}+=[font=\\tiny]']


def _axes(k: int, ends: Sequence[float], tops: Sequence[float], style: TikzStyle) -> List[str]:
    lines = []
    origin = '(' + ','.join('0' for _ in range(k)) + ')'
    for axis in reversed(range(k)):
        lines.append('\\draw[{}] {} -- {};'.format(style.arrow, origin, _axis_point(k, axis, format_float(ends[axis]))))

    tick = format_float(style.tick_length)
    # x ticks rise along y, y ticks along x, z ticks along y
    offset_axis = [1, 0, 1]
    placement = ['above', 'left', 'above']
    for axis in range(k):
        for t in _ticks(tops[axis], style.tick_step):
            start = _axis_point(k, axis, format_float(t))
            coords = ['0'] * k
            coords[axis] = format_float(t)
            coords[offset_axis[axis]] = tick
            lines.append('\\draw {} -- ({}) node[{}, inner sep=1pt] {{{:g}}};'.format(
                start, ','.join(coords), placement[axis], t))
    return lines


def _axis_labels(k: int, ends: Sequence[float], style: TikzStyle) -> List[str]:
    origin = '(' + ','.join('0' for _ in range(k)) + ')'
    nodes = ['pos=0.9, below', 'pos=0.95, right', 'pos=1, above']
    return ['\\path[{}] {} -- {} node[{}] {{{}}};'.format(
        style.arrow, origin, _axis_point(k, axis, format_float(ends[axis])), nodes[axis], style.axis_labels[axis])
        for axis in reversed(range(k))]


def _fill(style: TikzStyle, points: Sequence[PointK]) -> str:
    return '\\path[fill, line width=0pt, opacity={}, color={}] {} -- cycle;'.format(
        _length(style.opacity), style.color,
        ' -- '.join(_coordinate(p) for p in points))


def _draw(style: TikzStyle, points: Sequence[PointK]) -> str:
    return '\\draw[color={}] {};'.format(style.edge_color, ' -- '.join(_coordinate(p) for p in points))


def _ring_2d(hull: Hull) -> List[int]:
    pts = np.array(hull.points)
    center = pts.mean(axis=0)
    ring = sorted(range(len(pts)), key=lambda i: math.atan2(pts[i][1] - center[1], pts[i][0] - center[0]))
    start = ring.index(min(ring))
    return ring[start:] + ring[:start]


def _surface(bundle: ExportBundle, hull: Union[Hull, DegenerateHull], style: TikzStyle) -> List[str]:
    if isinstance(hull, DegenerateHull):
        outline = [bundle.user(p) for p in hull.outline()]
        lines = ['% degenerate under-approximation: affine dimension {}'.format(hull.affine_dim)]
        if len(outline) == 1:
            lines.append('\\fill[color={}] {} circle (2pt);'.format(style.edge_color, _coordinate(outline[0])))
        elif len(outline) == 2:
            lines.append(_draw(style, outline))
        else:
            lines.append(_fill(style, outline))
            lines.append(_draw(style, outline + outline[:1]))
        return lines

    user_points = [bundle.user(p) for p in hull.points]
    if hull.dim == 2:
        ring = _ring_2d(hull)
        lines = [_fill(style, [user_points[i] for i in ring])]
        for facet in hull.pareto_facets():
            lines.append(_draw(style, [user_points[i] for i in facet.indices]))
        return lines

    facets = hull.pareto_facets()
    lines = []
    for facet in facets:
        for triangle in hull.facet_simplices(facet):
            lines.append(_fill(style, [user_points[i] for i in triangle]))

    owners = {}
    for fi, facet in enumerate(facets):
        for a, b in hull.facet_edges(facet):
            owners.setdefault((min(a, b), max(a, b)), set()).add(fi)
    for fi, facet in enumerate(facets):
        for a, b in hull.facet_edges(facet):
            key = (min(a, b), max(a, b))
            if len(owners.get(key, ())) > 1:
                lines.append(_draw(style, [user_points[a], user_points[b]]))
                del owners[key]
    return lines


def emit_tikz(bundle: ExportBundle, style: Optional[TikzStyle] = None) -> str:
    """
    Draws the under-approximation as a TikZ picture.

    For three objectives every facet of the achieved-point hull that faces the Pareto direction is triangulated and
    emitted as one closed fill path per triangle, followed by the edges where two such facets meet. For two
    objectives the hull is one filled polygon with its Pareto boundary drawn on top. A degenerate point set is drawn
    as points or segments under a comment line.

    :param bundle: The :class:`ExportBundle` to draw; 2 or 3 objectives.
    Coordinates are printed in shortest round-trip form, so a coordinate may carry 17 significant digits; reading
    the picture back gives the exact doubles of the achieved points.

    :param style: The :class:`TikzStyle`; defaults apply when omitted.
    :return: The picture source, ending with a newline. Equal inputs give identical text.
    """
    style = style or TikzStyle()
    k = bundle.k
    if k == 1:
        raise ValueError('a single objective has no surface to draw; use the csv format instead')
    if k not in (2, 3):
        raise ValueError('TikZ output supports 2 or 3 objectives, got {}'.format(k))

    approx = bundle.approximation
    user_points = [bundle.user(p) for p in approx.under_points]
    tops = [max([0.0] + [p[axis] for p in user_points]) for axis in range(k)]
    ends = [top + style.axis_margin for top in tops]

    lines = _header(k, style)
    lines += _axes(k, ends, tops, style)
    if approx.under_points:
        lines += _surface(bundle, convex_hull(approx.under_points, k), style)
    else:
        lines.append('% no achieved points')
    lines.append('')
    lines += _axis_labels(k, ends, style)
    lines.append('\\end{tikzpicture}')
    return '\n'.join(lines) + '\n'


def emit_json(bundle: ExportBundle) -> str:
    """
    Canonical JSON export: format version, objectives with name and sign, status, gap, epsilon, witness, achieved
    points, halfspaces and the query log, all in normalized orientation. Reading it back with
    :func:`parse_json_export` and emitting again gives identical text.
    """
    approx = copy.copy(bundle.approximation)
    approx.axis_names = list(bundle.axis_names)
    approx.signs = bundle.signs
    return dumps_approximation(approx)


def parse_json_export(text: str) -> ExportBundle:
    """:return: The :class:`ExportBundle` described by text written by :func:`emit_json`."""
    return ExportBundle(loads_approximation(text))


def emit_csv(bundle: ExportBundle) -> str:
    """
    One header row of axis names and one row per achieved point in user orientation, quoted per RFC 4180 with CRLF
    line endings.
    """
    buffer = io.StringIO(newline='')
    writer = csv.writer(buffer, lineterminator='\r\n')
    writer.writerow(bundle.axis_names)
    for point in bundle.approximation.under_points:
        writer.writerow([format_float(c) for c in bundle.user(point)])
    return buffer.getvalue()
