"""
Agent behaviour: distance-based voting and the opinion and affect updates
that follow a vote.
"""
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from app.config import AFFECT_MAX, AFFECT_MIN, AGREE_AT_OWN_POSITION, PASS_PROBABILITY
from app.models.simulation import AgentState
from app.models.votes import VoteValue
from app.utils.errors import ErrorType, InputError

# Logistic offset that puts P(agree | not pass) at the calibration anchor for d = 0
AGREE_BIAS = math.log(AGREE_AT_OWN_POSITION / (1.0 - AGREE_AT_OWN_POSITION))


def _distance(opinion: Sequence[float], position: Sequence[float]) -> float:
    if len(opinion) != len(position):
        raise InputError(
            ErrorType.DIMENSION_MISMATCH,
            f"Item has dimension {len(position)}, agent opinion has {len(opinion)}",
        )
    return float(np.linalg.norm(np.asarray(opinion) - np.asarray(position)))


def agree_probability(
    opinion: Sequence[float],
    position: Sequence[float],
    pass_probability: float = PASS_PROBABILITY,
) -> float:
    """
    (1 - p_pass) * logistic(bias - distance).

    The bias calibrates the conditional rate: P(agree | not pass) is 0.9 for an
    item at the agent's own position, so the unconditional value there is
    0.9 * (1 - p_pass), 0.81 at the default pass rate.
    """
    d = _distance(opinion, position)
    return (1.0 - pass_probability) * float(expit(AGREE_BIAS - d))


def vote_from_uniform(p_agree: float, p_pass: float, u: float) -> VoteValue:
    """Map one uniform draw to Pass / Agree / Disagree, in that order"""
    if u < p_pass:
        return VoteValue.PASS
    if u < p_pass + p_agree:
        return VoteValue.AGREE
    return VoteValue.DISAGREE


def agent_vote(
    agent: AgentState,
    position: Sequence[float],
    seed: Union[int, np.random.Generator],
    pass_probability: float = PASS_PROBABILITY,
    sybil_item: bool = False,
) -> VoteValue:
    """
    Sample an agent's vote on an item at `position`.

    Sybil agents always agree with sybil-authored items. One uniform draw is
    consumed either way.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p_agree = agree_probability(agent.opinion, position, pass_probability)
    u = float(rng.random())
    if agent.sybil and sybil_item:
        return VoteValue.AGREE
    return vote_from_uniform(p_agree, pass_probability, u)


def update_opinion(
    opinion: Sequence[float],
    position: Sequence[float],
    value: VoteValue,
    step: float,
    repulsion_beyond: Optional[float] = None,
) -> List[float]:
    """
    Agree pulls the opinion toward the item by `step` of the gap; with
    repulsion enabled a Disagree on an item farther than `repulsion_beyond`
    pushes it away by the same fraction.
    """
    o = np.asarray(opinion, dtype=float)
    gap = np.asarray(position, dtype=float) - o
    if value == VoteValue.AGREE:
        return (o + step * gap).tolist()
    if (
        value == VoteValue.DISAGREE
        and repulsion_beyond is not None
        and float(np.linalg.norm(gap)) > repulsion_beyond
    ):
        return (o - step * gap).tolist()
    return o.tolist()


def update_affect(affect: float, value: VoteValue, cross_group: bool, step: float) -> float:
    """Cross-group Agree warms by step*100, cross-group Disagree cools by it; clamped"""
    if not cross_group:
        return affect
    delta = step * (AFFECT_MAX - AFFECT_MIN)
    if value == VoteValue.AGREE:
        affect += delta
    elif value == VoteValue.DISAGREE:
        affect -= delta
    return min(max(affect, AFFECT_MIN), AFFECT_MAX)
