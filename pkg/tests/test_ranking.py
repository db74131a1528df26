"""
Unit tests for the allocation process: engagement prediction, value-model
scoring and ranked feeds.
"""
import pytest
from pydantic import ValidationError

from app.io.serialization import read_model
from app.models import ValueModel
from app.ranking import RankingContext, predict_engagement, rank, score_allocation, score_key
from app.relation import build_vote_matrix
from app.utils.errors import ErrorType, InputError

from conftest import F1_LABELS, FIXTURES

F1_ITEMS = ["i_bridge", "i_partisan", "i_unpopular"]
F1M_ITEMS = F1_ITEMS + ["i_partisan_b"]


def value_model(name: str) -> ValueModel:
    return read_model(FIXTURES / "value_models" / f"{name}.json", ValueModel)


@pytest.fixture
def context(f1, f1_clustering):
    return RankingContext(f1, f1_clustering)


class TestPredictEngagement:
    """Own-group smoothed approval"""

    def test_f1_partisan(self, f1, f1_clustering):
        assert predict_engagement("u1", "i_partisan", f1, f1_clustering) == pytest.approx(0.8)
        assert predict_engagement("u4", "i_partisan", f1, f1_clustering) == pytest.approx(0.2)

    def test_f1_bridge(self, f1, f1_clustering):
        assert predict_engagement("u1", "i_bridge", f1, f1_clustering) == pytest.approx(0.6)

    def test_unseen_item_prior(self, f1, f1_clustering):
        assert predict_engagement("u1", "i_new", f1, f1_clustering) == 0.5

    def test_group_that_never_saw_item(self, f1_clustering):
        m = build_vote_matrix([("u1", "x", 1), ("u2", "x", 1), ("u4", "y", -1)])
        assert predict_engagement("u4", "x", m, f1_clustering) == 0.5

    def test_unknown_viewer(self, f1, f1_clustering):
        with pytest.raises(InputError) as exc:
            predict_engagement("stranger", "i_bridge", f1, f1_clustering)
        assert exc.value.error_type == ErrorType.UNKNOWN_VIEWER

    def test_context_agrees(self, f1, f1_clustering, context):
        for viewer in F1_LABELS:
            for item in F1_ITEMS + ["i_new"]:
                assert context.engagement(viewer, item) == pytest.approx(
                    predict_engagement(viewer, item, f1, f1_clustering)
                )


class TestScoreAllocation:
    """Weighted sums over signals"""

    def test_engagement_only_is_prediction(self, f1, f1_clustering, context):
        v = value_model("engagement")
        for item in F1_ITEMS:
            signals = context.viewer_signals("u1", item)
            assert score_allocation("u1", item, signals, v) == pytest.approx(
                predict_engagement("u1", item, f1, f1_clustering)
            )

    def test_bridging_sum(self, context):
        v = value_model("bridging")
        score = score_allocation("u1", "i_bridge", context.viewer_signals("u1", "i_bridge"), v)
        assert score == pytest.approx(0.96)

    def test_doubling_weights(self, context):
        v = value_model("bridging")
        for item in F1_ITEMS:
            signals = context.viewer_signals("u2", item)
            assert score_allocation("u2", item, signals, v.scaled(2.0)) == pytest.approx(
                2 * score_allocation("u2", item, signals, v)
            )

    def test_missing_signal(self, context):
        v = ValueModel(weights={"bimodality": 1.0})
        with pytest.raises(InputError) as exc:
            score_allocation("u1", "i_unpopular", context.viewer_signals("u1", "i_unpopular"), v)
        assert exc.value.error_type == ErrorType.MISSING_SIGNAL

    def test_unknown_signal_name(self):
        with pytest.raises(ValidationError) as exc:
            ValueModel(weights={"charisma": 1.0})
        assert "charisma" in str(exc.value)

    def test_misspelled_signal_beside_known(self):
        with pytest.raises(ValidationError):
            ValueModel(weights={"gac": 1.0, "enagement": 1.0})

    def test_zero_weight_signal_not_required(self, context):
        v = ValueModel(weights={"gac": 1.0, "bimodality": 0.0})
        signals = context.viewer_signals("u1", "i_unpopular")
        assert score_allocation("u1", "i_unpopular", signals, v) == pytest.approx(0.04)


class TestValueModel:
    """Value model validation"""

    def test_all_zero_weights(self):
        with pytest.raises(ValidationError):
            ValueModel(weights={"engagement": 0.0})

    def test_top_k_positive(self):
        with pytest.raises(ValidationError):
            ValueModel(weights={"engagement": 1.0}, top_k=0)

    def test_presets(self):
        assert ValueModel.engagement_only().active_signals() == ["engagement"]
        assert ValueModel.bridging().active_signals() == ["engagement", "gac"]


class TestRank:
    """Ranked feeds"""

    def test_engagement_prefers_in_group_partisan(self, context):
        feed = rank("u1", F1_ITEMS, context, value_model("engagement"))
        assert feed.items() == ["i_partisan", "i_bridge", "i_unpopular"]

    def test_gac_orders_bridge_first(self, context):
        v = value_model("gac_only")
        for viewer in F1_LABELS:
            feed = rank(viewer, F1_ITEMS, context, v)
            assert feed.items() == ["i_bridge", "i_partisan", "i_unpopular"]

    def test_bridging_orders_bridge_first(self, context):
        """Under engagement + gac, u1's partisan and bridge items both sum to 0.96"""
        v = value_model("bridging")
        for viewer in F1_LABELS:
            assert rank(viewer, F1_ITEMS, context, v).top() == "i_bridge"

    def test_exact_tie_resolved_by_item_id(self, context):
        feed = rank("u1", F1_ITEMS, context, value_model("bridging"))
        top, second = feed.allocations[:2]
        assert (top.object, second.object) == ("i_bridge", "i_partisan")
        assert top.properties["score"] == pytest.approx(second.properties["score"], abs=1e-12)

    def test_score_key_ignores_rounding_residue(self):
        v = value_model("bridging")
        assert score_key(0.8 + 0.16, v) == score_key(0.6 + 0.36, v)
        assert score_key(3.5 * 0.8 + 3.5 * 0.16, v.scaled(3.5)) == score_key(3.5 * 0.6 + 3.5 * 0.36, v.scaled(3.5))

    @pytest.mark.parametrize("factor", [0.001, 0.5, 3.5, 1000.0])
    def test_scaling_keeps_order_with_ties(self, context, factor):
        v = value_model("bridging")
        for viewer in F1_LABELS:
            assert rank(viewer, F1_ITEMS, context, v.scaled(factor)).items() == rank(viewer, F1_ITEMS, context, v).items()

    def test_bridging_contrast_every_viewer(self, f1m, f1_clustering):
        """Engagement puts the viewer's own partisan item first; consensus puts the bridge first"""
        ctx = RankingContext(f1m, f1_clustering)
        own_partisan = {"A": "i_partisan", "B": "i_partisan_b"}
        for viewer, group in F1_LABELS.items():
            assert rank(viewer, F1M_ITEMS, ctx, value_model("engagement")).top() == own_partisan[group]
            assert rank(viewer, F1M_ITEMS, ctx, value_model("bridging")).top() == "i_bridge"

    def test_tie_break_by_item_id(self, context):
        """u4 sees i_partisan and i_unpopular at 0.2 each"""
        feed = rank("u4", F1_ITEMS, context, value_model("engagement"))
        assert feed.items() == ["i_bridge", "i_partisan", "i_unpopular"]
        scores = [a.properties["score"] for a in feed.allocations]
        assert scores[1] == scores[2]

    def test_scores_non_increasing(self, context):
        v = value_model("bridging")
        feed = rank("u2", F1_ITEMS, context, v)
        scores = [score_key(a.properties["score"], v) for a in feed.allocations]
        assert scores == sorted(scores, reverse=True)

    def test_zero_bridging_weight_matches_engagement(self, context):
        with_zero = ValueModel(weights={"engagement": 1.0, "gac": 0.0, "diverse_approval": 0.0})
        for viewer in F1_LABELS:
            assert rank(viewer, F1_ITEMS, context, with_zero).items() == rank(
                viewer, F1_ITEMS, context, value_model("engagement")
            ).items()

    def test_single_candidate(self, context):
        feed = rank("u1", ["i_bridge"], context, value_model("bridging"))
        assert len(feed.allocations) == 1
        assert feed.allocations[0].slot == 1

    def test_top_k_truncates(self, context):
        feed = rank("u1", F1_ITEMS, context, ValueModel(weights={"gac": 1.0}, top_k=2))
        assert [a.slot for a in feed.allocations] == [1, 2]
        assert feed.items() == ["i_bridge", "i_partisan"]

    def test_properties_audit_trail(self, context):
        feed = rank("u1", F1_ITEMS, context, value_model("bridging"))
        top = feed.allocations[0]
        assert top.properties["viewer_group"] == "A"
        assert set(top.properties["signals"]) >= {"engagement", "gac", "diverse_approval", "mf_intercept"}
        assert top.properties["score"] == pytest.approx(
            top.properties["signals"]["engagement"] + top.properties["signals"]["gac"]
        )

    def test_unvoted_candidate_gets_prior(self, f1, f1_clustering):
        ctx = RankingContext(f1, f1_clustering, extra_items=["i_new"])
        feed = rank("u1", F1_ITEMS + ["i_new"], ctx, value_model("gac_only"))
        assert feed.items() == ["i_bridge", "i_new", "i_partisan", "i_unpopular"]

    def test_deterministic_serialization(self, context):
        v = value_model("bridging")
        first = rank("u5", F1_ITEMS, context, v).model_dump_json()
        second = rank("u5", list(reversed(F1_ITEMS)), context, v).model_dump_json()
        assert first == second

    def test_value_model_digest_differs(self, context):
        a = rank("u1", F1_ITEMS, context, value_model("bridging"))
        b = rank("u1", F1_ITEMS, context, value_model("engagement"))
        assert a.value_model_digest != b.value_model_digest

    def test_empty_candidates(self, context):
        with pytest.raises(InputError) as exc:
            rank("u1", [], context, value_model("bridging"))
        assert exc.value.error_type == ErrorType.EMPTY_INPUT

    def test_unknown_viewer(self, context):
        with pytest.raises(InputError) as exc:
            rank("stranger", F1_ITEMS, context, value_model("bridging"))
        assert exc.value.error_type == ErrorType.UNKNOWN_VIEWER
