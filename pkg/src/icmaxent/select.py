"""Edge scores from fitted multipliers, and ROC evaluation.

A fitted model carries one multiplier pair per single-variable constraint
(the values at x_i = 0 and x_i = 1). Equal multipliers mean the constraint
adds no dependence of Y on X_i, so the relative difference

    theta = |l1 - l2| / max(|l1|, |l2|, |l1 - l2|, 1)

acts as an edge-presence score in [0, 1]. No default decision threshold is
imposed; quality is evaluated by sweeping theta, which is what the ROC
utilities here do.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConditionalModel, ConstraintKind
from .errors import AmbiguityError, DegenerateLabelsError, DomainError


@dataclass(frozen=True)
class ThetaScore:
    """Relative-difference score for one candidate cause."""

    var: int
    theta: float
    lambda_pair: tuple[float, float]

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError("theta must lie in [0, 1]")


@dataclass(frozen=True)
class RocCurve:
    """Threshold sweep of (FPR, TPR) points plus trapezoid AUC."""

    points: tuple[tuple[float, float, float], ...]
    auc: float


def theta(l1: float, l2: float) -> float:
    """Relative difference of a multiplier pair, clamped into [0, 1] by the max term."""
    if not (math.isfinite(l1) and math.isfinite(l2)):
        raise DomainError("theta requires finite multipliers")
    diff = abs(l1 - l2)
    return diff / max(abs(l1), abs(l2), diff, 1.0)


def score_all(model: ConditionalModel) -> list[ThetaScore]:
    """Score every variable carrying a single-variable constraint.

    The pair is (multiplier at x_i=0, multiplier at x_i=1) of the variable's
    conditional or interventional constraint. A variable with two competing
    single-variable constraints is ambiguous and raises; variables with none
    are skipped with a warning.
    """
    pair_source: dict[int, tuple[float, float]] = {}
    offset = 0
    for spec in model.constraints:
        width = 1 if spec.kind is ConstraintKind.MARGINAL else 1 << len(spec.scope)
        if spec.kind is not ConstraintKind.MARGINAL and len(spec.scope) == 1:
            var = spec.scope[0]
            if var in pair_source:
                raise AmbiguityError(
                    f"variable {var} has competing single-variable constraints; "
                    "the multiplier pairing is undefined"
                )
            # scope configs are ordered (0,), (1,)
            pair_source[var] = (float(model.lam[offset]), float(model.lam[offset + 1]))
        offset += width

    scores = []
    for var in range(model.n_causes):
        if var not in pair_source:
            warnings.warn(f"variable {var} has no single-variable constraint; skipped")
            continue
        l0, l1 = pair_source[var]
        scores.append(ThetaScore(var=var, theta=theta(l0, l1), lambda_pair=(l0, l1)))
    return scores


def roc(items: Sequence[tuple[float, bool]]) -> RocCurve:
    """ROC curve over (score, is_positive) items.

    Thresholds sweep the distinct scores from high to low; items sharing a
    score enter at the same step. Needs at least one positive and one
    negative label. AUC is the trapezoid area under the (FPR, TPR) polyline.
    """
    if not items:
        raise DomainError("cannot build a ROC from no items")
    scores = np.array([float(s) for s, _ in items])
    labels = np.array([bool(l) for _, l in items])
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelsError(
            f"ROC needs both label classes (got {n_pos} positives, {n_neg} negatives)"
        )
    order = np.argsort(-scores, kind="stable")
    scores, labels = scores[order], labels[order]

    points = [(math.inf, 0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < scores.size:
        thr = scores[i]
        while i < scores.size and scores[i] == thr:
            if labels[i]:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((float(thr), fp / n_neg, tp / n_pos))

    fpr = np.array([p[1] for p in points])
    tpr = np.array([p[2] for p in points])
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(points=tuple(points), auc=auc)
