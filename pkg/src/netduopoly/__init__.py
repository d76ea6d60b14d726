"""Duopoly marketing on influence networks: dynamics, centrality and budget allocation."""
from .allocation import (
    Allocation,
    SeedingCapacityReport,
    classify_regime,
    firm_utilities,
    marginal_utility,
    max_seed_count,
    nash_equilibrium,
    optimal_allocation,
    quality_leverage,
    seeding_capacity,
    thresholds,
)
from .centrality import CentralityProfile, balanced_centrality, centrality, centrality_series_oracle, star_centralities
from .dynamics import ConsumptionState, DynamicsOperator, build_operator, steady_state, step, trajectory
from .errors import *  # noqa: F401,F403
from .graph import Network, balanced_ring, k_star, read_graph, star, validate, write_graph
from .params import EXAMPLE1, ModelParams

__version__ = "0.1.0"
