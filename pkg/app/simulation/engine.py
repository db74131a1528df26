"""
Tick loop: new items, ranked feeds, votes and the opinion/affect updates they
trigger, followed by a relation measurement on the fixed survey panel.

Every random draw comes from a generator keyed by (seed, tick, stream), so a
run is bit-identical for a given config. Feeds for a tick are ranked on the
votes recorded before the tick plus the initial-audience votes on its new
items; the feed votes are appended afterwards.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.metrics.bridging import bridging_delta, relation_report
from app.metrics.prevalence import CROSS_GROUP_APPROVAL, DIVERSE_APPROVAL, signal_prevalence
from app.models.ranking import RankedFeed, ValueModel
from app.models.relations import Clustering
from app.models.reports import RelationMetricReport
from app.models.simulation import Interaction, SimConfig, SimItem, SimulationResult, SimWorld, TickFeed
from app.models.votes import GroupId, ItemId, PersonId, VoteValue
from app.ranking.engine import RankingContext, rank
from app.relation.graph import vote_similarity_graph
from app.relation.votes import build_vote_matrix
from app.simulation.behavior import agent_vote, update_affect, update_opinion
from app.simulation.population import (
    STREAM_AUDIENCE,
    STREAM_ITEMS,
    STREAM_MEASURE,
    STREAM_VOTES,
    generate_population,
    generator,
)

logger = logging.getLogger(__name__)


def true_clustering(world: SimWorld) -> Clustering:
    return Clustering.from_labels(world.group_labels())


def create_items(world: SimWorld, cfg: SimConfig) -> Dict[ItemId, SimItem]:
    """
    This tick's new items.

    Each has a uniformly drawn author; its position is the author's opinion
    pulled toward the population centre by U(0, item_moderation) of the gap,
    plus isotropic noise of scale item_noise.
    """
    rng = generator(cfg.seed, world.tick, STREAM_ITEMS)
    authors = sorted(world.agents)
    opinions = np.array([world.agents[a].opinion for a in authors])
    centre = opinions.mean(axis=0)

    items: Dict[ItemId, SimItem] = {}
    for k in range(cfg.items_per_tick):
        author = authors[int(rng.integers(len(authors)))]
        own = np.asarray(world.agents[author].opinion)
        pull = rng.uniform(0.0, cfg.item_moderation)
        noise = rng.standard_normal(cfg.opinion_dimension)
        position = own + pull * (centre - own) + cfg.item_noise * noise
        items[f"t{world.tick:04d}i{k:03d}"] = SimItem(
            position=position.tolist(),
            author=author,
            created_tick=world.tick,
        )
    return items


def expose_new_items(
    world: SimWorld,
    items: Dict[ItemId, SimItem],
    cfg: SimConfig,
) -> List[Tuple[PersonId, ItemId, VoteValue]]:
    """
    Votes from each new item's initial audience.

    Per item, agents are taken in the order of a seeded permutation of agent
    ids until every group has contributed seed_audience of them (or run out).
    The picks depend only on agent ids, so relabelling groups picks the same
    agents. These votes give new items informative signals before any feed is
    ranked; they move neither opinions nor affect and are not interactions.
    """
    if cfg.seed_audience == 0 or not items:
        return []
    rng = generator(cfg.seed, world.tick, STREAM_AUDIENCE)
    agents = sorted(world.agents)

    records: List[Tuple[PersonId, ItemId, VoteValue]] = []
    for iid in sorted(items):
        taken: Dict[GroupId, int] = {}
        audience: List[PersonId] = []
        for idx in rng.permutation(len(agents)):
            aid = agents[int(idx)]
            group = world.agents[aid].group
            if taken.get(group, 0) < cfg.seed_audience:
                taken[group] = taken.get(group, 0) + 1
                audience.append(aid)

        item = items[iid]
        sybil_item = world.agents[item.author].sybil
        for aid in sorted(audience):
            value = agent_vote(world.agents[aid], item.position, rng, cfg.pass_probability, sybil_item=sybil_item)
            records.append((aid, iid, value))
    return records


def candidates(world: SimWorld, cfg: SimConfig, viewer: str) -> List[ItemId]:
    """Items from the last candidate_window ticks the viewer has not voted on"""
    oldest = world.tick - cfg.candidate_window + 1
    return sorted(
        iid for iid, item in world.items.items()
        if item.created_tick >= oldest and not world.votes.has_vote(viewer, iid)
    )


def advance(
    world: SimWorld,
    cfg: SimConfig,
    policy: Optional[ValueModel] = None,
) -> Tuple[SimWorld, List[TickFeed]]:
    """One tick; returns the new world and the feeds it realized"""
    policy = (policy or cfg.value_model).model_copy(update={"top_k": cfg.feed_size})
    nxt = world.model_copy(deep=True)
    tick = nxt.tick
    new_items = create_items(nxt, cfg)
    nxt.items.update(new_items)
    for person, iid, value in expose_new_items(nxt, new_items, cfg):
        nxt.votes.add_vote(person, iid, value)

    eligible = sorted(iid for iid, item in nxt.items.items() if item.created_tick > tick - cfg.candidate_window)
    context = RankingContext.for_value_model(nxt.votes, true_clustering(nxt), policy, extra_items=eligible)

    feeds: Dict[str, RankedFeed] = {}
    for viewer in sorted(nxt.agents):
        pool = candidates(nxt, cfg, viewer)
        if pool:
            feeds[viewer] = rank(viewer, pool, context, policy)

    rng = generator(cfg.seed, tick, STREAM_VOTES)
    interactions: List[Interaction] = []
    for viewer in sorted(feeds):
        agent = nxt.agents[viewer]
        for allocation in feeds[viewer].allocations:
            item = nxt.items[allocation.object]
            author = nxt.agents[item.author]
            value = agent_vote(agent, item.position, rng, cfg.pass_probability, sybil_item=author.sybil)
            cross = author.group != agent.group
            agent.opinion = update_opinion(
                agent.opinion, item.position, value, cfg.opinion_step, cfg.repulsion_beyond
            )
            agent.affect_out = update_affect(agent.affect_out, value, cross, cfg.affect_step)
            interactions.append(Interaction(
                tick=tick,
                person=viewer,
                item=allocation.object,
                slot=allocation.slot,
                value=int(value),
                author=item.author,
                cross_group=cross,
            ))

    for interaction in interactions:
        nxt.votes.add_vote(interaction.person, interaction.item, interaction.value)
    nxt.history.extend(interactions)
    nxt.tick = tick + 1

    logger.info("Tick %d: %d feeds, %d votes, mean affect %.2f", tick, len(feeds), len(interactions), nxt.mean_affect())
    return nxt, [TickFeed(tick=tick, feed=feeds[v]) for v in sorted(feeds)]


def step(world: SimWorld, cfg: SimConfig, policy: Optional[ValueModel] = None) -> SimWorld:
    """Advance the world by one tick under `policy` (default: cfg.value_model)"""
    return advance(world, cfg, policy)[0]


def measure(world: SimWorld, cfg: SimConfig) -> Tuple[RelationMetricReport, Dict[str, float]]:
    """
    Relation metrics on the survey panel plus last tick's motif prevalence.

    Panel votes reuse the same random draws every tick, so the similarity
    graph changes only when opinions do.
    """
    rng = generator(cfg.seed, 0, STREAM_MEASURE)
    records = []
    for aid in sorted(world.agents):
        agent = world.agents[aid]
        for survey_item in sorted(world.panel):
            vote = agent_vote(agent, world.panel[survey_item], rng, cfg.pass_probability)
            records.append((aid, survey_item, int(vote)))

    graph = vote_similarity_graph(build_vote_matrix(records), tau=cfg.similarity_threshold)
    clustering = true_clustering(world)

    prevalence = {DIVERSE_APPROVAL: 0.0, CROSS_GROUP_APPROVAL: 0.0}
    if world.tick > 0:
        window = (world.tick - 1, world.tick - 1)
        if clustering.k >= 2:
            prevalence[DIVERSE_APPROVAL] = signal_prevalence(world.history, DIVERSE_APPROVAL, window, clustering)
        prevalence[CROSS_GROUP_APPROVAL] = signal_prevalence(world.history, CROSS_GROUP_APPROVAL, window)

    report = relation_report(
        world.tick,
        graph,
        clustering,
        extra={
            "mean_affect": world.mean_affect(),
            **{f"{name}_prevalence": value for name, value in prevalence.items()},
        },
        rwc_walks=cfg.rwc_walks,
        rwc_steps=cfg.rwc_steps,
        rwc_method=cfg.rwc_method,
        seed=cfg.seed,
        strict=False,
    )
    return report, prevalence


def run(cfg: SimConfig, policy: Optional[ValueModel] = None) -> SimulationResult:
    """
    Baseline measurement, then `ticks` steps each followed by a measurement.

    Bridging deltas compare the baseline with the final report and are absent
    when ticks = 0.
    """
    policy = policy or cfg.value_model
    world = generate_population(cfg)
    report, prevalence = measure(world, cfg)
    reports = [report]
    affect = [world.mean_affect()]
    feeds: List[TickFeed] = []

    for _ in range(cfg.ticks):
        world, tick_feeds = advance(world, cfg, policy)
        report, prevalence = measure(world, cfg)
        reports.append(report)
        affect.append(world.mean_affect())
        feeds.extend(tick_feeds)

    sybil_share = None
    if any(agent.sybil for agent in world.agents.values()):
        tops = [tf.feed.top() for tf in feeds if tf.feed.allocations]
        sybil_tops = sum(1 for item in tops if world.agents[world.items[item].author].sybil)
        sybil_share = sybil_tops / len(tops) if tops else 0.0

    result = SimulationResult(
        config=cfg.model_copy(update={"value_model": policy}),
        reports=reports,
        bridging=bridging_delta(reports[0], reports[-1], prevalence=prevalence) if cfg.ticks else None,
        affect_series=affect,
        feeds=feeds,
        sybil_gac_share=sybil_share,
        world=world,
    )
    logger.info(
        "Run finished: seed %d, %d ticks, final values %s",
        cfg.seed, cfg.ticks, {k: round(v, 4) for k, v in reports[-1].values.items()},
    )
    return result
