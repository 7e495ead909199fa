__version__ = '1.0.0'

from .types import *
from .utilities import MomcJSONEncoder, MomcJSONDecoder, ABS_TOL, DIVERGENCE_THRESHOLD
from .mdp import Mdp, Action, Violation, validate_mdp
from .objectives import ObjectiveSpec, ObjectiveMapping, NormalizedObjectives, normalize_objectives
from .strategy import Strategy, MemorylessStrategy, FiniteHorizonStrategy, enumerate_memoryless_strategies
from .model_io import ModelDocument, parse_model_document, serialize_model_document, FILE_EXTENSION
from .solver import QueryResult, weighted_value_iteration, finite_horizon_weighted_vi, solve_query, \
    evaluate_strategy, solve_strategy_exactly
from .geometry import Halfspace, Facet, Hull, DegenerateHull, GapResult, convex_hull, hull_volume, \
    halfspace_vertices, downward_closure, pareto_gap
from .approximation import QueryRecord, ParetoApproximation, ParetoApproximationEncoder, ParetoApproximationDecoder
from .engine import EngineConfig, approximate_pareto, query_achievability
from .export import TikzStyle, ExportBundle, emit_tikz, emit_json, parse_json_export, emit_csv
