"""
Cross-divide credibility: people are credible when credible people from other
groups endorse what they write.

Endorsements count a voter's Agree votes on items authored by someone in a
different group. Each endorser spreads its credibility over the authors it
endorsed; scores are the damped fixed point of that transfer.
"""
import logging
from typing import Mapping, Optional

import numpy as np

from app.config import CREDIBILITY_DAMPING, CREDIBILITY_MAX_ITER, CREDIBILITY_TOL
from app.models.relations import Clustering
from app.models.signals import CredibilityScores
from app.models.votes import ItemId, PersonId, VoteMatrix, VoteValue
from app.utils.errors import ErrorType, InputError, NumericalError

logger = logging.getLogger(__name__)


def endorsement_matrix(
    m: VoteMatrix,
    c: Clustering,
    authorship: Mapping[ItemId, PersonId],
    people: list,
) -> np.ndarray:
    """E[v, u] = Agree votes of v on items authored by u, zero within a group"""
    index = {p: i for i, p in enumerate(people)}
    E = np.zeros((len(people), len(people)))
    for vote in m.votes:
        if vote.value != VoteValue.AGREE:
            continue
        author = authorship.get(vote.item)
        if author is None or author == vote.person:
            continue
        if c.labels[vote.person] == c.labels[author]:
            continue
        E[index[vote.person], index[author]] += 1.0
    return E


def credibility_scores(
    m: VoteMatrix,
    c: Clustering,
    alpha: float = CREDIBILITY_DAMPING,
    authorship: Optional[Mapping[ItemId, PersonId]] = None,
    tol: float = CREDIBILITY_TOL,
    max_iter: int = CREDIBILITY_MAX_ITER,
) -> CredibilityScores:
    """
    Power-iterate c <- alpha * T c + (1 - alpha) / n to a fixed point.

    T is the column-normalized transpose of the endorsement matrix; people who
    endorse nobody spread their mass uniformly so scores stay L1-normalized.
    """
    if authorship is None:
        raise InputError(ErrorType.NO_AUTHORSHIP, "Credibility needs an item -> author mapping")
    if not 0.0 < alpha < 1.0:
        raise InputError(ErrorType.INVALID_CONFIG, f"Damping alpha={alpha} must lie in (0, 1)")
    if c.k < 2:
        raise InputError(ErrorType.SINGLE_GROUP, "Credibility needs at least 2 groups")

    people = sorted(set(m.people) | {a for it, a in authorship.items() if m.has_item(it)})
    unlabeled = [p for p in people if p not in c.labels]
    if unlabeled:
        raise InputError(
            ErrorType.UNLABELED_PERSON,
            f"{len(unlabeled)} person(s) have no group, e.g. '{unlabeled[0]}'",
            details={"people": unlabeled[:10]},
        )

    n = len(people)
    E = endorsement_matrix(m, c, authorship, people)
    out_totals = E.sum(axis=1)
    transfer = np.zeros((n, n))
    for v in range(n):
        if out_totals[v] > 0:
            transfer[:, v] = E[v, :] / out_totals[v]
        else:
            transfer[:, v] = 1.0 / n

    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - alpha) / n
    residual = float("inf")
    for iteration in range(1, max_iter + 1):
        updated = alpha * transfer @ scores + teleport
        updated /= updated.sum()
        residual = float(np.abs(updated - scores).sum())
        scores = updated
        if residual < tol:
            logger.info("Credibility converged in %d iterations", iteration)
            return CredibilityScores(
                scores={p: float(scores[i]) for i, p in enumerate(people)},
                damping=alpha,
                iterations=iteration,
                residual=residual,
            )

    raise NumericalError(
        ErrorType.NON_CONVERGENCE,
        f"Credibility did not converge in {max_iter} iterations (residual {residual:.3e})",
        details={"residual": residual, "max_iter": max_iter},
    )
