"""Memory-bounded generational genetic programming."""

from ._core import (
    BreedingPlan,
    ExprPool,
    GenerationStats,
    Individual,
    PoolExhaustedError,
    PlanInvariantError,
    Problem,
    RunConfig,
    RunResult,
    emit_csv,
    parse_csv,
    pool_capacity,
    random_tree,
    run_evolution,
    run_evolution_naive,
    subtree_crossover,
)

__all__ = [
    "BreedingPlan",
    "ExprPool",
    "GenerationStats",
    "Individual",
    "PoolExhaustedError",
    "PlanInvariantError",
    "Problem",
    "RunConfig",
    "RunResult",
    "emit_csv",
    "parse_csv",
    "pool_capacity",
    "random_tree",
    "run_evolution",
    "run_evolution_naive",
    "subtree_crossover",
]
