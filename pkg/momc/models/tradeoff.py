from momc import *


def tradeoff_model() -> ModelDocument:
    """
    Two actions out of the initial state, each paying one unit on a different reward structure before moving to an
    absorbing sink. Maximizing both rewards yields the Pareto curve from (1, 0) to (0, 1).
    """
    model = Mdp(num_states=2, initial_state=0,
                actions=[[Action('a', [(1, 1.0)]), Action('b', [(1, 1.0)])],
                         [Action('loop', [(1, 1.0)])]],
                labels={'done': [1]},
                rewards={'r1': [[1.0, 0.0], [0.0]], 'r2': [[0.0, 1.0], [0.0]]})
    return ModelDocument(model, [ObjectiveSpec('reward-max', 'r1'), ObjectiveSpec('reward-max', 'r2')])


def three_way_model() -> ModelDocument:
    """Like :func:`tradeoff_model` with a third action and a third reward structure."""
    model = Mdp(num_states=2, initial_state=0,
                actions=[[Action('a', [(1, 1.0)]), Action('b', [(1, 1.0)]), Action('c', [(1, 1.0)])],
                         [Action('loop', [(1, 1.0)])]],
                rewards={'r1': [[1.0, 0.0, 0.0], [0.0]],
                         'r2': [[0.0, 1.0, 0.0], [0.0]],
                         'r3': [[0.0, 0.0, 1.0], [0.0]]})
    return ModelDocument(model, [ObjectiveSpec('reward-max', name) for name in ('r1', 'r2', 'r3')])


def two_step_chain(step_bound: Optional[int] = 2) -> ModelDocument:
    """
    A chain of two forced steps paying (1, 0) and then (0, 1). Both objectives carry `step_bound`.
    """
    model = Mdp(num_states=3, initial_state=0,
                actions=[[Action('go', [(1, 1.0)])],
                         [Action('go', [(2, 1.0)])],
                         [Action('loop', [(2, 1.0)])]],
                labels={'end': [2]},
                rewards={'r1': [[1.0], [0.0], [0.0]], 'r2': [[0.0], [1.0], [0.0]]})
    return ModelDocument(model, [ObjectiveSpec('reward-max', 'r1', step_bound),
                                 ObjectiveSpec('reward-max', 'r2', step_bound)])


def duplicate_objective_model() -> ModelDocument:
    """The same reward structure maximized twice; every achievable point lies on the diagonal."""
    model = Mdp(num_states=3, initial_state=0,
                actions=[[Action('safe', [(2, 1.0)]), Action('risky', [(1, 0.5), (2, 0.5)])],
                         [Action('collect', [(2, 1.0)])],
                         [Action('loop', [(2, 1.0)])]],
                rewards={'gain': [[0.5, 0.0], [2.0], [0.0]]})
    return ModelDocument(model, [ObjectiveSpec('reward-max', 'gain'), ObjectiveSpec('reward-max', 'gain')])
