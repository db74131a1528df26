"""Allocation process: engagement prediction, value-model scoring, ranked feeds."""
from app.ranking.engine import (
    RankingContext,
    predict_engagement,
    rank,
    score_allocation,
    score_key,
)

__all__ = ["RankingContext", "predict_engagement", "score_allocation", "score_key", "rank"]
