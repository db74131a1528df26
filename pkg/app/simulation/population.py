"""
Synthetic populations: agents drawn around group means, plus the fixed
measurement panel of survey items.
"""
import logging
import math
from typing import Dict, List

import numpy as np

from app.config import INITIAL_AFFECT
from app.models.simulation import AgentState, SimConfig, SimWorld
from app.models.votes import GroupId, ItemId

logger = logging.getLogger(__name__)

# Generator streams, combined with (seed, tick) into a seed sequence
STREAM_POPULATION = 0
STREAM_ITEMS = 1
STREAM_VOTES = 2
STREAM_PANEL = 3
STREAM_MEASURE = 4
STREAM_AUDIENCE = 5


def generator(seed: int, tick: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, tick, stream])


def group_means(cfg: SimConfig) -> np.ndarray:
    """
    Group centres with neighbouring groups `faction_separation` apart.

    Two groups sit at +/- separation/2 on the first axis; more groups are
    spaced on a circle in the first two axes (on a line when d = 1).
    """
    k, d, sep = cfg.n_groups, cfg.opinion_dimension, cfg.faction_separation
    means = np.zeros((k, d))
    if k == 1:
        return means
    if k == 2 or d == 1:
        means[:, 0] = (np.arange(k) - (k - 1) / 2.0) * sep
        return means
    radius = sep / (2.0 * math.sin(math.pi / k))
    angles = 2.0 * math.pi * np.arange(k) / k
    means[:, 0] = radius * np.cos(angles)
    means[:, 1] = radius * np.sin(angles)
    return means


def agent_ids(n: int) -> List[str]:
    width = len(str(max(n - 1, 0)))
    return [f"a{i:0{width}d}" for i in range(n)]


def generate_population(cfg: SimConfig) -> SimWorld:
    """
    Seeded world at tick 0.

    Agents are split into contiguous, near-equal groups and drawn from an
    isotropic normal around their group mean; every affect_out starts at 50.
    The first round(sybil_fraction * n) agents of a seeded permutation are
    sybils. Panel item j sits near the mean of group j mod k.
    """
    rng = generator(cfg.seed, 0, STREAM_POPULATION)
    means = group_means(cfg)
    ids = agent_ids(cfg.n_agents)
    groups = np.array_split(np.arange(cfg.n_agents), cfg.n_groups)

    opinions = np.zeros((cfg.n_agents, cfg.opinion_dimension))
    labels: List[GroupId] = [""] * cfg.n_agents
    for g, members in enumerate(groups):
        opinions[members] = means[g] + cfg.noise_scale * rng.standard_normal((len(members), cfg.opinion_dimension))
        for idx in members:
            labels[int(idx)] = str(g)

    n_sybil = int(round(cfg.sybil_fraction * cfg.n_agents))
    sybils = set(rng.permutation(cfg.n_agents)[:n_sybil].tolist())

    agents = {
        aid: AgentState(
            opinion=opinions[i].tolist(),
            group=labels[i],
            affect_out=INITIAL_AFFECT,
            sybil=i in sybils,
        )
        for i, aid in enumerate(ids)
    }

    panel_rng = generator(cfg.seed, 0, STREAM_PANEL)
    panel: Dict[ItemId, List[float]] = {}
    width = len(str(max(cfg.panel_size - 1, 0)))
    for j in range(cfg.panel_size):
        centre = means[j % cfg.n_groups]
        panel[f"panel{j:0{width}d}"] = (
            centre + cfg.noise_scale * panel_rng.standard_normal(cfg.opinion_dimension)
        ).tolist()

    logger.info(
        "Population: %d agents in %d groups (%d sybils), panel of %d items",
        cfg.n_agents, cfg.n_groups, n_sybil, cfg.panel_size,
    )
    return SimWorld(agents=agents, panel=panel)


def relabel_groups(world: SimWorld, mapping: Dict[GroupId, GroupId]) -> SimWorld:
    """Copy of the world with group ids renamed; opinions untouched"""
    relabeled = world.model_copy(deep=True)
    for agent in relabeled.agents.values():
        agent.group = mapping.get(agent.group, agent.group)
    return relabeled


def centroid_distance(world: SimWorld, a: GroupId, b: GroupId) -> float:
    """Euclidean distance between two groups' mean opinions"""
    def centroid(g: GroupId) -> np.ndarray:
        return np.mean([agent.opinion for agent in world.agents.values() if agent.group == g], axis=0)
    return float(np.linalg.norm(centroid(a) - centroid(b)))
