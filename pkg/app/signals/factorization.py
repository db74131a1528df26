"""
Intercept + factor matrix factorization for diverse-approval scoring.

Approval is modelled as r_ui ~ mu + b_u + b_i + p_u . q_i with targets
Agree -> 1 and Disagree -> 0 (Pass is not a training target). The factor term
soaks up approval explained by viewpoint; the item intercept b_i keeps what
is left, which is approval shared across viewpoints.

Training is full-batch gradient descent with a per-parameter step normalized
by the parameter's observation count, so a fixed learning rate behaves the same
on small fixtures and large simulated populations.
"""
import logging
from typing import Tuple

import numpy as np

from app.config import MF_CONVERGENCE_TOL, MF_CONVERGENCE_WINDOW, MF_INIT_SCALE
from app.models.diagnostics import WarningType
from app.models.signals import MFHyperparams, MFModel
from app.models.votes import ItemId, VoteMatrix, VoteValue
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def training_triples(m: VoteMatrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(person_idx, item_idx, target) over non-pass votes, canonical order"""
    people = {p: i for i, p in enumerate(m.canonical_people())}
    items = {it: j for j, it in enumerate(m.canonical_items())}
    rows, cols, targets = [], [], []
    for vote in sorted(m.votes, key=lambda v: (v.person, v.item)):
        if vote.value == VoteValue.PASS:
            continue
        rows.append(people[vote.person])
        cols.append(items[vote.item])
        targets.append(1.0 if vote.value == VoteValue.AGREE else 0.0)
    return np.array(rows, dtype=int), np.array(cols, dtype=int), np.array(targets, dtype=float)


def _loss(res: np.ndarray, bu, bi, P, Q, h: MFHyperparams) -> float:
    return float(
        np.sum(res ** 2)
        + h.lambda_intercept * (np.sum(bu ** 2) + np.sum(bi ** 2))
        + h.lambda_factor * (np.sum(P ** 2) + np.sum(Q ** 2))
    )


def _converged(trace, tol: float, window: int) -> bool:
    if len(trace) <= window:
        return False
    tail = np.asarray(trace[-(window + 1):])
    scale = max(1.0, abs(float(tail[-1])))
    rises = np.diff(tail)
    return float(tail[0] - tail[-1]) <= tol * scale and float(rises.max()) <= tol * scale


def fit_matrix_factorization(m: VoteMatrix, h: MFHyperparams = MFHyperparams()) -> MFModel:
    """
    Fit the approval model by seeded gradient descent.

    Minimizes sum (r - mu - b_u - b_i - p_u.q_i)^2
      + lambda_intercept (|b_u|^2 + |b_i|^2) + lambda_factor (|p|^2 + |q|^2).
    After training, person and item intercepts are centred to mean 0 (the
    shift moves into mu). A stalled or still-moving loss is flagged, not raised.
    """
    u_idx, i_idx, r = training_triples(m)
    if r.size == 0:
        raise InputError(ErrorType.EMPTY_INPUT, "Matrix factorization needs at least one non-pass vote")

    people = m.canonical_people()
    items = m.canonical_items()
    n, n_items, f = len(people), len(items), h.factors

    rng = np.random.default_rng(h.seed)
    P = rng.normal(0.0, MF_INIT_SCALE, size=(n, f))
    Q = rng.normal(0.0, MF_INIT_SCALE, size=(n_items, f))
    mu = 0.0
    bu = np.zeros(n)
    bi = np.zeros(n_items)

    count_u = np.bincount(u_idx, minlength=n).astype(float)
    count_i = np.bincount(i_idx, minlength=n_items).astype(float)

    def step_scale(count: np.ndarray, reg: float) -> np.ndarray:
        denom = count + reg
        return 1.0 / np.where(denom > 0, denom, 1.0)

    scale_bu = step_scale(count_u, h.lambda_intercept)
    scale_bi = step_scale(count_i, h.lambda_intercept)
    scale_pu = step_scale(count_u, h.lambda_factor)[:, None]
    scale_qi = step_scale(count_i, h.lambda_factor)[:, None]
    lr = h.learning_rate

    trace = []
    for _ in range(h.epochs):
        pred = mu + bu[u_idx] + bi[i_idx] + np.einsum("ij,ij->i", P[u_idx], Q[i_idx])
        res = r - pred

        g_mu = -res.sum()
        g_bu = -np.bincount(u_idx, weights=res, minlength=n) + h.lambda_intercept * bu
        g_bi = -np.bincount(i_idx, weights=res, minlength=n_items) + h.lambda_intercept * bi
        g_P = np.zeros_like(P)
        g_Q = np.zeros_like(Q)
        if f:
            np.add.at(g_P, u_idx, -res[:, None] * Q[i_idx])
            np.add.at(g_Q, i_idx, -res[:, None] * P[u_idx])
            g_P += h.lambda_factor * P
            g_Q += h.lambda_factor * Q

        mu -= lr * g_mu / r.size
        bu = bu - lr * scale_bu * g_bu
        bi = bi - lr * scale_bi * g_bi
        P = P - lr * scale_pu * g_P
        Q = Q - lr * scale_qi * g_Q

        res = r - (mu + bu[u_idx] + bi[i_idx] + np.einsum("ij,ij->i", P[u_idx], Q[i_idx]))
        trace.append(_loss(res, bu, bi, P, Q, h))

    # Gauge fix over entities that have observations
    seen_u = count_u > 0
    seen_i = count_i > 0
    shift_u = float(bu[seen_u].mean())
    shift_i = float(bi[seen_i].mean())
    mu += shift_u + shift_i
    bu = np.where(seen_u, bu - shift_u, 0.0)
    bi = np.where(seen_i, bi - shift_i, 0.0)

    converged = _converged(trace, MF_CONVERGENCE_TOL, MF_CONVERGENCE_WINDOW)
    model = MFModel(
        mu=float(mu),
        person_intercepts={p: float(bu[k]) for k, p in enumerate(people)},
        item_intercepts={it: float(bi[k]) for k, it in enumerate(items)},
        person_factors={p: P[k].tolist() for k, p in enumerate(people)},
        item_factors={it: Q[k].tolist() for k, it in enumerate(items)},
        hyperparams=h,
        loss_trace=trace,
        converged=converged,
    )
    if not converged:
        model.add_warning(
            WarningType.NON_CONVERGENCE,
            f"Loss still changing over the last {MF_CONVERGENCE_WINDOW} epochs",
            severity="low",
            details={"final_loss": trace[-1], "epochs": h.epochs},
        )
        logger.warning("Matrix factorization did not converge in %d epochs", h.epochs)

    logger.info("MF fit: %d ratings, f=%d, final loss %.6f", r.size, f, trace[-1])
    return model


def mf_bridging_score(model: MFModel, item: ItemId) -> float:
    """Item intercept: approval not explained by viewpoint factors"""
    if item not in model.item_intercepts:
        raise InputError(ErrorType.UNKNOWN_ITEM, f"Unknown item '{item}'", details={"item": item})
    return model.item_intercepts[item]
