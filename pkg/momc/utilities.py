try:
    # prefer simplejson when it is installed, as the stdlib decoder is slower on large models
    import simplejson as json
except ImportError:
    import json
import numpy as np
from .types import *

# absolute tolerance of every geometric predicate
ABS_TOL = 1e-9

# scalarized values above this are reported as possibly infinite
DIVERGENCE_THRESHOLD = 1e12


def format_float(x: float) -> str:
    """Shortest decimal text that round-trips to the same 64-bit float."""
    return repr(float(x))


def as_point(coords: Iterable[float]) -> PointK:
    return tuple(float(c) for c in coords)


def lex_sorted_unique(points: Iterable[Sequence[float]], tol: float = 0.0) -> List[PointK]:
    """
    Sorts points lexicographically and drops every point within `tol` (sup-norm) of one already kept.

    :param points: The points to sort.
    :param tol: Points closer than this in every coordinate are considered equal.
    :return: A new list of tuples.
    """
    kept = []
    for p in sorted(as_point(p) for p in points):
        if any(max(abs(a - b) for a, b in zip(p, q)) <= tol for q in kept):
            continue
        kept.append(p)
    return kept


def normalize_weight(w: Sequence[float]) -> Optional[PointK]:
    """
    Clips negative components to zero and rescales to unit L1 norm.

    :return: The normalized weight, or `None` if no component is positive.
    """
    arr = np.clip(np.asarray(w, dtype=float), 0.0, None)
    total = arr.sum()
    if total <= 0.0:
        return None
    arr = arr / total
    return as_point(arr)


def unit_weight(k: int, i: int) -> PointK:
    return tuple(1.0 if j == i else 0.0 for j in range(k))


class MomcJSONEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, ParetoStatus):
            return {
                'type': 'ParetoStatus',
                'value': o.value,
            }
        elif isinstance(o, ObjectiveKind):
            return {
                'type': 'ObjectiveKind',
                'value': o.value,
            }
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


class MomcJSONDecoder(json.JSONDecoder):
    def __init__(self, *args, **kwargs):
        hook = self._object_hook
        if 'object_hook' in kwargs:
            original_hook = kwargs.pop('object_hook')
            hook = lambda obj: self._object_hook(original_hook(obj))
        super().__init__(object_hook=hook, *args, **kwargs)

    def _object_hook(self, obj):
        if 'type' in obj and len(obj) == 2 and 'value' in obj:
            if obj['type'] == 'ParetoStatus':
                return ParetoStatus(obj['value'])
            elif obj['type'] == 'ObjectiveKind':
                return ObjectiveKind(obj['value'])
        return obj
