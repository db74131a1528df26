"""
Tests for the agent-based simulator: population generation, agent behaviour,
the tick loop and multi-run experiments.
"""
import math
from collections import Counter

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from app.io.serialization import read_model
from app.models import AgentState, SimConfig, ValueModel, VoteValue
from app.ranking import score_key
from app.simulation import (
    advance,
    agent_vote,
    agree_probability,
    candidates,
    centroid_distance,
    create_items,
    expose_new_items,
    generate_population,
    group_means,
    measure,
    paired_comparison,
    relabel_groups,
    run,
    run_sweep,
    step,
    sybil_config,
    update_affect,
    update_opinion,
)
from app.simulation.behavior import AGREE_BIAS, vote_from_uniform
from app.simulation.population import STREAM_VOTES, generator
from app.utils.errors import ErrorType, InputError

from conftest import FIXTURES

STRUCTURAL_METRICS = ("modularity", "ei", "rwc", "mean_affect")


@pytest.fixture
def small_config() -> SimConfig:
    return read_model(FIXTURES / "sim_small.json", SimConfig)


@pytest.fixture
def compare_config() -> SimConfig:
    return read_model(FIXTURES / "sim_compare.json", SimConfig)


class TestSimConfig:
    """Config validation"""

    def test_seed_required(self):
        with pytest.raises(ValidationError):
            SimConfig()

    @pytest.mark.parametrize("field", ["opinion_step", "affect_step"])
    def test_steps_below_one(self, field):
        with pytest.raises(ValidationError):
            SimConfig(seed=0, **{field: 1.0})

    def test_groups_within_agents(self):
        with pytest.raises(ValidationError):
            SimConfig(seed=0, n_agents=2, n_groups=3)

    def test_negative_similarity_threshold(self):
        with pytest.raises(ValidationError):
            SimConfig(seed=0, similarity_threshold=-0.1)

    def test_negative_audience(self):
        with pytest.raises(ValidationError):
            SimConfig(seed=0, seed_audience=-1)


class TestPopulation:
    """Seeded population generation"""

    def test_initial_affect(self, small_config):
        world = generate_population(small_config)
        assert all(agent.affect_out == 50.0 for agent in world.agents.values())
        assert world.tick == 0

    def test_contiguous_groups(self):
        world = generate_population(SimConfig(seed=1, n_agents=7, n_groups=2))
        assert world.group_sizes() == {"0": 4, "1": 3}

    def test_same_seed_same_world(self, small_config):
        assert generate_population(small_config).model_dump_json() == generate_population(small_config).model_dump_json()

    def test_different_seed_differs(self, small_config):
        other = small_config.model_copy(update={"seed": small_config.seed + 1})
        assert generate_population(small_config) != generate_population(other)

    def test_zero_separation_means_coincide(self):
        rejections = 0
        for seed in range(50):
            world = generate_population(SimConfig(seed=seed, n_agents=40, faction_separation=0.0))
            a = [agent.opinion[0] for agent in world.agents.values() if agent.group == "0"]
            b = [agent.opinion[0] for agent in world.agents.values() if agent.group == "1"]
            if stats.ttest_ind(a, b).pvalue < 0.01:
                rejections += 1
        assert rejections <= 3

    def test_separation_recovered(self):
        world = generate_population(SimConfig(seed=3, n_agents=200, faction_separation=6.0, noise_scale=1.0))
        assert centroid_distance(world, "0", "1") == pytest.approx(6.0, abs=0.5)

    def test_group_means_spacing(self):
        means = group_means(SimConfig(seed=0, n_groups=4, faction_separation=2.0))
        neighbours = [np.linalg.norm(means[i] - means[(i + 1) % 4]) for i in range(4)]
        assert neighbours == pytest.approx([2.0] * 4)

    def test_sybil_count(self):
        world = generate_population(SimConfig(seed=2, n_agents=20, sybil_fraction=0.25))
        assert sum(agent.sybil for agent in world.agents.values()) == 5

    def test_panel(self, small_config):
        world = generate_population(small_config)
        assert len(world.panel) == small_config.panel_size
        assert all(len(pos) == small_config.opinion_dimension for pos in world.panel.values())

    def test_relabel_keeps_opinions(self, small_config):
        world = generate_population(small_config)
        swapped = relabel_groups(world, {"0": "1", "1": "0"})
        for aid, agent in world.agents.items():
            assert swapped.agents[aid].opinion == agent.opinion
            assert swapped.agents[aid].group != agent.group


class TestAgentBehaviour:
    """Voting and the updates that follow"""

    def test_calibration_anchor(self):
        assert agree_probability([0.0, 0.0], [0.0, 0.0], pass_probability=0.0) == pytest.approx(0.9)
        assert agree_probability([0.0, 0.0], [0.0, 0.0], pass_probability=0.1) == pytest.approx(0.81)

    def test_far_item(self):
        assert agree_probability([0.0], [1e3]) < 1e-12

    def test_empirical_rate_at_midpoint(self):
        """At distance equal to the logistic offset P(agree | not pass) is one half"""
        rng = np.random.default_rng(0)
        position = [AGREE_BIAS, 0.0]
        agent = AgentState(opinion=[0.0, 0.0], group="0")
        votes = [agent_vote(agent, position, rng) for _ in range(10_000)]
        rate = sum(v == VoteValue.AGREE for v in votes) / len(votes)
        assert rate == pytest.approx(0.5 * 0.9, abs=0.03)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError) as exc:
            agree_probability([0.0, 0.0], [0.0])
        assert exc.value.error_type == ErrorType.DIMENSION_MISMATCH

    def test_uniform_mapping(self):
        assert vote_from_uniform(0.5, 0.1, 0.05) == VoteValue.PASS
        assert vote_from_uniform(0.5, 0.1, 0.3) == VoteValue.AGREE
        assert vote_from_uniform(0.5, 0.1, 0.7) == VoteValue.DISAGREE

    def test_seeded_vote_repeats(self):
        agent = AgentState(opinion=[0.0], group="0")
        assert agent_vote(agent, [0.5], 42) == agent_vote(agent, [0.5], 42)

    def test_sybil_backs_sybil_items(self):
        agent = AgentState(opinion=[0.0], group="0", sybil=True)
        rng = np.random.default_rng(1)
        assert all(agent_vote(agent, [50.0], rng, sybil_item=True) == VoteValue.AGREE for _ in range(100))

    def test_agree_pulls_toward_item(self):
        assert update_opinion([0.0, 0.0], [1.0, 2.0], VoteValue.AGREE, 0.5) == pytest.approx([0.5, 1.0])

    def test_disagree_without_repulsion(self):
        assert update_opinion([0.0], [5.0], VoteValue.DISAGREE, 0.5) == [0.0]

    def test_repulsion_beyond_distance(self):
        assert update_opinion([0.0], [5.0], VoteValue.DISAGREE, 0.1, repulsion_beyond=2.0) == pytest.approx([-0.5])
        assert update_opinion([0.0], [1.0], VoteValue.DISAGREE, 0.1, repulsion_beyond=2.0) == [0.0]

    def test_pass_leaves_opinion(self):
        assert update_opinion([1.0], [3.0], VoteValue.PASS, 0.5) == [1.0]

    def test_affect_moves_on_cross_group_votes(self):
        assert update_affect(50.0, VoteValue.AGREE, True, 0.02) == pytest.approx(52.0)
        assert update_affect(50.0, VoteValue.DISAGREE, True, 0.02) == pytest.approx(48.0)
        assert update_affect(50.0, VoteValue.AGREE, False, 0.02) == 50.0
        assert update_affect(50.0, VoteValue.PASS, True, 0.02) == 50.0

    def test_affect_clamped(self):
        assert update_affect(99.0, VoteValue.AGREE, True, 0.05) == 100.0
        assert update_affect(1.0, VoteValue.DISAGREE, True, 0.05) == 0.0


class TestTickLoop:
    """One tick at a time"""

    def test_hand_traced_three_agent_tick(self):
        """Without an initial audience all candidates tie, so every agent sees the first item"""
        cfg = SimConfig(
            seed=5, n_agents=3, n_groups=2, items_per_tick=2, feed_size=1,
            opinion_step=0.5, affect_step=0.1, panel_size=2, seed_audience=0,
        )
        world = generate_population(cfg)
        items = create_items(world, cfg)
        first = sorted(items)[0]
        position = np.asarray(items[first].position)
        author_group = world.agents[items[first].author].group

        rng = generator(cfg.seed, 0, STREAM_VOTES)
        expected = {}
        for aid in sorted(world.agents):
            agent = world.agents[aid]
            u = rng.random()
            p = agree_probability(agent.opinion, position, cfg.pass_probability)
            value = vote_from_uniform(p, cfg.pass_probability, u)
            opinion = np.asarray(agent.opinion)
            if value == VoteValue.AGREE:
                opinion = opinion + 0.5 * (position - opinion)
            affect = 50.0
            if agent.group != author_group and value != VoteValue.PASS:
                affect += 10.0 if value == VoteValue.AGREE else -10.0
            expected[aid] = (value, opinion.tolist(), affect)

        nxt, feeds = advance(world, cfg)
        assert nxt.tick == 1
        assert [tf.feed.items() for tf in feeds] == [[first]] * 3
        for aid, (value, opinion, affect) in expected.items():
            assert nxt.votes.get(aid, first) == value
            assert nxt.agents[aid].opinion == pytest.approx(opinion)
            assert nxt.agents[aid].affect_out == pytest.approx(affect)
        assert len(nxt.history) == 3

    def test_input_world_untouched(self, small_config):
        world = generate_population(small_config)
        before = world.model_dump_json()
        step(world, small_config)
        assert world.model_dump_json() == before

    def test_single_agent_fixed_point(self):
        cfg = SimConfig(
            seed=0, n_agents=1, n_groups=1, items_per_tick=1, feed_size=1,
            item_moderation=0.0, item_noise=0.0, opinion_step=0.5, panel_size=2, seed_audience=0,
        )
        world = generate_population(cfg)
        nxt = step(world, cfg)
        assert nxt.agents["a0"].opinion == pytest.approx(world.agents["a0"].opinion)

    def test_initial_audience_per_group(self, small_config):
        world = generate_population(small_config)
        items = create_items(world, small_config)
        records = expose_new_items(world, items, small_config)
        for iid in items:
            voters = [person for person, item, _ in records if item == iid]
            assert len(voters) == len(set(voters))
            assert Counter(world.agents[p].group for p in voters) == {"0": 3, "1": 3}

    def test_audience_capped_by_group_size(self):
        cfg = SimConfig(seed=4, n_agents=5, items_per_tick=3, seed_audience=10, panel_size=2)
        world = generate_population(cfg)
        records = expose_new_items(world, create_items(world, cfg), cfg)
        assert len(records) == 5 * 3

    def test_audience_votes_recorded_without_moving_agents(self):
        """An audience covering everyone leaves no candidates, so nothing moves"""
        cfg = SimConfig(
            seed=3, n_agents=6, items_per_tick=2, feed_size=1, seed_audience=3,
            opinion_step=0.5, affect_step=0.3, panel_size=2,
        )
        world = generate_population(cfg)
        nxt, feeds = advance(world, cfg)
        assert feeds == []
        assert nxt.history == []
        assert nxt.votes.n_votes == 6 * 2
        for aid, agent in world.agents.items():
            assert nxt.agents[aid].opinion == agent.opinion
            assert nxt.agents[aid].affect_out == agent.affect_out

    def test_audience_seeded(self, small_config):
        world = generate_population(small_config)
        items = create_items(world, small_config)
        assert expose_new_items(world, items, small_config) == expose_new_items(world, items, small_config)

    def test_no_audience(self, small_config):
        cfg = small_config.model_copy(update={"seed_audience": 0})
        world = generate_population(cfg)
        assert expose_new_items(world, create_items(world, cfg), cfg) == []

    def test_candidates_exclude_voted_and_stale(self, small_config):
        world = generate_population(small_config)
        for _ in range(small_config.candidate_window + 1):
            world = step(world, small_config)
        viewer = sorted(world.agents)[0]
        pool = candidates(world, small_config, viewer)
        oldest = world.tick - small_config.candidate_window + 1
        assert all(world.items[i].created_tick >= oldest for i in pool)
        assert not any(world.votes.has_vote(viewer, i) for i in pool)

    def test_measure_reports_panel_metrics(self, small_config):
        report, prevalence = measure(generate_population(small_config), small_config)
        assert report.timestamp == 0
        assert {"modularity", "ei", "rwc", "rwc_se", "mean_affect"} <= set(report.values)
        assert prevalence == {"diverse_approval": 0.0, "cross_group_approval": 0.0}


class TestRun:
    """Full runs"""

    def test_zero_ticks(self, small_config):
        result = run(small_config.model_copy(update={"ticks": 0}))
        assert len(result.reports) == 1
        assert result.bridging is None
        assert result.feeds == []
        assert result.affect_series == [50.0]

    def test_deterministic(self, small_config):
        assert run(small_config).model_dump_json() == run(small_config).model_dump_json()

    def test_series_lengths(self, small_config):
        result = run(small_config)
        assert [r.timestamp for r in result.reports] == [0, 1, 2, 3]
        assert len(result.affect_series) == 4
        assert result.bridging.window == (0, 3)
        for name, delta in result.bridging.deltas.items():
            assert delta == result.reports[-1].values[name] - result.reports[0].values[name]

    def test_conservation(self, small_config):
        result = run(small_config)
        assert len(result.world.agents) == small_config.n_agents
        assert result.world.group_sizes() == generate_population(small_config).group_sizes()

    @pytest.mark.parametrize("seed", range(5))
    def test_affect_clamped_every_tick(self, small_config, seed):
        cfg = small_config.model_copy(update={"seed": seed, "affect_step": 0.3})
        result = run(cfg)
        assert all(0.0 <= a <= 100.0 for a in result.affect_series)
        assert all(0.0 <= agent.affect_out <= 100.0 for agent in result.world.agents.values())

    def test_frozen_dynamics(self, small_config):
        cfg = small_config.model_copy(update={"opinion_step": 0.0, "affect_step": 0.0})
        result = run(cfg)
        first = result.reports[0].values
        for r in result.reports[1:]:
            for name in STRUCTURAL_METRICS:
                assert r.values[name] == first[name]
        assert result.affect_series == [50.0] * (cfg.ticks + 1)

    def test_mirrored_trajectories(self):
        """Swapping group labels at initialization mirrors the whole run"""
        cfg = SimConfig(
            seed=11, n_agents=20, items_per_tick=4, feed_size=2, ticks=3,
            panel_size=8, rwc_method="exact", value_model=ValueModel.bridging(),
        )
        world = generate_population(cfg)
        mirrored = relabel_groups(world, {"0": "1", "1": "0"})
        for _ in range(cfg.ticks):
            world = step(world, cfg)
            mirrored = step(mirrored, cfg)
            for aid, agent in world.agents.items():
                assert mirrored.agents[aid].opinion == agent.opinion
                assert mirrored.agents[aid].affect_out == agent.affect_out
            a, _ = measure(world, cfg)
            b, _ = measure(mirrored, cfg)
            for name in STRUCTURAL_METRICS:
                assert b.values[name] == pytest.approx(a.values[name], abs=1e-9)

    def test_policy_override(self, small_config):
        result = run(small_config, policy=ValueModel.bridging())
        assert result.config.value_model.active_signals() == ["engagement", "gac"]
        assert all(len(tf.feed.allocations) <= small_config.feed_size for tf in result.feeds)

    def test_feeds_ranked_by_policy(self, small_config):
        result = run(small_config, policy=ValueModel.bridging())
        for tf in result.feeds:
            scores = [score_key(a.properties["score"], result.config.value_model) for a in tf.feed.allocations]
            assert scores == sorted(scores, reverse=True)


class TestExperiments:
    """Seed sweeps, paired comparisons and sybils"""

    def test_sweep_in_seed_order(self, small_config):
        results = run_sweep(small_config, [3, 1], max_workers=1)
        assert [r.config.seed for r in results] == [3, 1]

    def test_sweep_processes_match_sequential(self, small_config):
        cfg = small_config.model_copy(update={"ticks": 1})
        parallel = run_sweep(cfg, [0, 1], max_workers=2)
        sequential = run_sweep(cfg, [0, 1], max_workers=1)
        assert [r.model_dump_json() for r in parallel] == [r.model_dump_json() for r in sequential]

    def test_paired_comparison_shape(self, small_config):
        comparison = paired_comparison(
            small_config,
            ValueModel.engagement_only(),
            ValueModel.bridging(),
            seeds=[0, 1, 2],
            max_workers=1,
        )
        assert comparison.baseline == "engagement"
        assert comparison.treatment == "bridging"
        assert len(comparison.outcomes) == 6
        assert set(comparison.median_affect) == {"engagement", "bridging"}
        assert 0 <= comparison.rwc_lower_count <= 3
        for p in (comparison.rwc_sign_p, comparison.affect_sign_p):
            assert p is None or 0.0 <= p <= 1.0

    def test_policies_realize_different_feeds(self, compare_config):
        cfg = compare_config.model_copy(update={"ticks": 2})
        engagement = run(cfg, policy=ValueModel.engagement_only())
        bridging = run(cfg, policy=ValueModel.bridging())
        assert len(engagement.feeds) == len(bridging.feeds)
        differing = [
            a.feed.viewer for a, b in zip(engagement.feeds, bridging.feeds)
            if a.feed.items() != b.feed.items()
        ]
        assert differing

    def test_bridging_direction_over_twenty_seeds(self, compare_config):
        """Bridging lowers final RWC and raises final affect against engagement-only on paired seeds"""
        comparison = paired_comparison(
            compare_config,
            ValueModel.engagement_only(),
            ValueModel.bridging(),
            seeds=list(range(20)),
            max_workers=4,
        )
        assert comparison.median_rwc["bridging"] < comparison.median_rwc["engagement"]
        assert comparison.median_affect["bridging"] > comparison.median_affect["engagement"]
        assert comparison.rwc_sign_p is not None and comparison.rwc_sign_p < 0.05
        assert comparison.affect_sign_p is not None and comparison.affect_sign_p < 0.05

    def test_sybil_share(self, small_config):
        result = run(sybil_config(small_config, 0.25, policy=ValueModel.bridging()))
        assert result.sybil_gac_share is not None
        assert 0.0 <= result.sybil_gac_share <= 1.0
        assert sum(agent.sybil for agent in result.world.agents.values()) == 3

    def test_no_sybils_no_share(self, small_config):
        assert run(small_config).sybil_gac_share is None

    def test_sybil_config_validates(self, small_config):
        with pytest.raises(ValidationError):
            sybil_config(small_config, 1.5)
        assert math.isclose(sybil_config(small_config, 0.5).sybil_fraction, 0.5)
