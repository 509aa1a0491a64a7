"""Fair score repair operations."""

from .distributions import partition_population, empirical_distribution, cdf, quantile, mixture
from .transport import optimal_plan_1d, map_from_plan, transport_cost, wasserstein2, pushforward
from .barycenter import barycenter, interpolate_map, displacement_interpolate
from .repair import repair, apply_map_to_individual
from .metrics import (
    individual_fairness_error,
    decision_maker_utility,
    parity_gap,
    rank_by_score,
    precision_at_k,
    ndcg_at_k,
    disparity_measure,
    crossing_rank,
    make_k_grid,
    evaluate,
)
from .data import (
    generate_synthetic,
    load_synthetic_spec,
    preset_spec,
    load_population_csv,
    load_repaired_csv,
    write_population_csv,
    write_repair_csv,
)

__all__ = [
    "partition_population", "empirical_distribution", "cdf", "quantile", "mixture",
    "optimal_plan_1d", "map_from_plan", "transport_cost", "wasserstein2", "pushforward",
    "barycenter", "interpolate_map", "displacement_interpolate",
    "repair", "apply_map_to_individual",
    "individual_fairness_error", "decision_maker_utility", "parity_gap", "rank_by_score",
    "precision_at_k", "ndcg_at_k", "disparity_measure", "crossing_rank", "make_k_grid", "evaluate",
    "generate_synthetic", "load_synthetic_spec", "preset_spec", "load_population_csv",
    "load_repaired_csv", "write_population_csv", "write_repair_csv",
]
