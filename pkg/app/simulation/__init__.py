"""Seeded agent-based simulator comparing ranking policies."""
from app.simulation.population import centroid_distance, generate_population, group_means, relabel_groups
from app.simulation.behavior import agent_vote, agree_probability, update_affect, update_opinion
from app.simulation.engine import advance, candidates, create_items, expose_new_items, measure, run, step
from app.simulation.scenarios import paired_comparison, run_sweep, sybil_config

__all__ = [
    "generate_population",
    "group_means",
    "relabel_groups",
    "centroid_distance",
    "agent_vote",
    "agree_probability",
    "update_opinion",
    "update_affect",
    "create_items",
    "expose_new_items",
    "candidates",
    "advance",
    "step",
    "measure",
    "run",
    "run_sweep",
    "paired_comparison",
    "sybil_config",
]
