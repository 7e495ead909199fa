from .tradeoff import tradeoff_model, three_way_model, two_step_chain, duplicate_objective_model
from .random_models import random_model
