"""Fitting the multiplier vector by squared-residual minimization.

The dual of the constrained entropy maximization is solved by driving the
model's expectations toward the empirical averages:

    lambda* = argmin ||targets - expectations(lambda)||^2

with a BFGS quasi-Newton run started from lambda = 0 (the uniform model) and
restarted from the current iterate while the residual norm stays above the
tolerance and the optimizer did not terminate successfully.

Every expectation is affine in the vector p1(x) = P(Y=1 | x), so the whole
residual map reduces to a constant plus a fixed weight matrix applied to p1;
the analytic gradient follows from d p1 / d lambda = p1 (1 - p1) times the
difference of sufficient statistics between y=1 and y=0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from . import _bits
from .core import (
    Config,
    ConditionalModel,
    ConstraintKind,
    ConstraintSpec,
    FitReport,
    GraphSpec,
    JointTable,
    _design,
    _statistic_arrays,
    conditional_entropy,
    conditional_expectation,
    interventional_expectation,
    lambda_manifest,
    marginal_expectation,
    marginalize,
    normalize,
    target_vector,
)
from .errors import DomainError, IdentifiabilityError, NumericError, PositivityError
from .identify import validate_constraints


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for :func:`fit`.

    ``tolerance`` applies to the sum of squared residuals; a run below it
    counts as converged. ``epsilon_smoothing`` is the default mass added by
    :func:`smooth_joint`. The initial multiplier vector is always zero.
    """

    tolerance: float = 0.01
    max_restarts: int = 10
    max_iterations: int = 500
    epsilon_smoothing: float = float(np.finfo(float).eps)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        if self.max_restarts < 1:
            raise DomainError("max_restarts must be at least 1")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")
        if self.epsilon_smoothing <= 0:
            raise DomainError("epsilon_smoothing must be positive")


def smooth_joint(p: JointTable, eps: float) -> JointTable:
    """Add ``eps`` to every cell and renormalize, making all entries positive."""
    if eps <= 0:
        raise DomainError("smoothing epsilon must be positive")
    raised = p.probs + eps
    return JointTable(p.n_causes, raised / raised.sum())


def merge_marginals_maxent(marginals: Sequence[float]) -> JointTable:
    """Joint of maximum entropy matching single-variable means: the product table."""
    marginals = [float(m) for m in marginals]
    if not marginals:
        raise DomainError("need at least one marginal")
    if any(not 0.0 < m < 1.0 for m in marginals):
        raise DomainError("marginal probabilities must lie strictly inside (0, 1)")
    d = len(marginals)
    idx = np.arange(1 << d)
    probs = np.ones(1 << d)
    for i, m in enumerate(marginals):
        probs *= np.where((idx >> i) & 1, m, 1.0 - m)
    return JointTable(d, probs)


# ---------------------------------------------------------------------------
# residual system
# ---------------------------------------------------------------------------


class _ResidualSystem:
    """Precomputed affine structure of the residual map for one fit.

    For each multiplier entry the model expectation is
    ``offset + weights @ p1``; residual = target - expectation. The weight
    rows depend only on the constraints and the joint table.
    """

    def __init__(self, constraints: Sequence[ConstraintSpec], p: JointTable):
        d = p.n_causes
        self.targets = target_vector(constraints)
        self.base0, self.base1 = _design(constraints, d)
        self.stat_diff = self.base1 - self.base0
        m = self.targets.size
        n = 1 << d
        self.weights = np.zeros((m, n))
        self.offsets = np.zeros(m)
        cache: dict[tuple[int, ...], JointTable] = {}
        for row, (i, cfg) in enumerate(lambda_manifest(constraints)):
            spec = constraints[i]
            if spec.kind is ConstraintKind.MARGINAL:
                f0, f1 = _statistic_arrays(spec.statistic, d)
                self.weights[row] = p.probs * (f1 - f0)
                self.offsets[row] = float(p.probs @ f0)
                continue
            scope = spec.scope
            match = _bits.matching_indices(d, scope, cfg)
            if spec.kind is ConstraintKind.CONDITIONAL:
                w = p.probs[match]
            else:
                keep = _bits.complement(d, spec.int_set)
                if keep not in cache:
                    cache[keep] = marginalize(p, keep)
                w = cache[keep].probs[_bits.subconfig_index(match, keep)]
            mass = float(w.sum())
            if mass <= 0.0:
                raise PositivityError(
                    f"constraint {i}: conditioning cell {cfg} has zero probability; "
                    "smooth the joint first"
                )
            self.weights[row, match] = w / mass

    def prob_y1(self, lam: np.ndarray) -> np.ndarray:
        return expit(lam @ self.stat_diff)

    def residuals(self, lam: np.ndarray) -> np.ndarray:
        return self.targets - self.offsets - self.weights @ self.prob_y1(lam)

    def value_and_grad(self, lam: np.ndarray) -> tuple[float, np.ndarray]:
        p1 = self.prob_y1(lam)
        r = self.targets - self.offsets - self.weights @ p1
        value = float(r @ r)
        if not np.isfinite(value):
            raise NumericError("objective became non-finite during optimization")
        jac = (self.weights * (p1 * (1.0 - p1))) @ self.stat_diff.T
        grad = -2.0 * (jac.T @ r)
        return value, grad


def assemble_residuals(
    lam: Sequence[float] | np.ndarray,
    constraints: Sequence[ConstraintSpec],
    p: JointTable,
    graph: GraphSpec,
    allow_unidentifiable: bool = False,
) -> np.ndarray:
    """Residual vector target - expectation, one entry per multiplier.

    Dispatches each entry to the matching expectation operator, so
    identifiability and positivity failures surface exactly as they would
    when evaluating the constraints one by one.
    """
    model = normalize(constraints, np.asarray(lam, dtype=float), p.n_causes)
    out = np.empty(len(lambda_manifest(constraints)))
    for row, (i, cfg) in enumerate(lambda_manifest(constraints)):
        spec = constraints[i]
        if spec.kind is ConstraintKind.MARGINAL:
            e = marginal_expectation(model, p, spec.statistic)
        elif spec.kind is ConstraintKind.CONDITIONAL:
            e = conditional_expectation(model, p, Config(spec.scope, cfg))
        else:
            scope = spec.scope
            int_vals = tuple(cfg[scope.index(v)] for v in spec.int_set)
            cond_vals = tuple(cfg[scope.index(v)] for v in spec.cond_set)
            e = interventional_expectation(
                model,
                p,
                Config(spec.int_set, int_vals),
                Config(spec.cond_set, cond_vals),
                graph,
                allow_unidentifiable=allow_unidentifiable,
            )
        out[row] = spec.targets[cfg] - e
    return out


def fit(
    constraints: Sequence[ConstraintSpec],
    p: JointTable,
    graph: GraphSpec,
    options: SolverOptions | None = None,
    allow_unidentifiable: bool = False,
) -> tuple[np.ndarray, ConditionalModel, FitReport]:
    """Fit multipliers to the constraint targets over the joint ``p``.

    Returns ``(lambda, model, report)``. Non-convergence after the restart
    budget is reported, not raised: the best multipliers seen are returned
    with ``converged=False``. Identical inputs produce identical multipliers
    (zero initialization, deterministic quasi-Newton updates).
    """
    opts = options or SolverOptions()
    constraints = tuple(constraints)
    if not allow_unidentifiable:
        refused = [
            v for v in validate_constraints(graph, constraints) if not v.admissible
        ]
        if refused:
            detail = "; ".join(f"do({v.var}): {v.reason}" for v in refused)
            raise IdentifiabilityError(
                f"refusing inadmissible interventional constraints ({detail}); "
                "pass allow_unidentifiable=True to override"
            )
    system = _ResidualSystem(constraints, p)
    lam = np.zeros(system.targets.size)
    if lam.size == 0:
        model = normalize(constraints, lam, p.n_causes)
        report = FitReport(0.0, 0, True, conditional_entropy(model, p))
        return lam, model, report

    best_lam = lam
    best_norm, _ = system.value_and_grad(lam)
    restarts = 0
    while True:
        res = minimize(
            system.value_and_grad,
            best_lam,
            jac=True,
            method="BFGS",
            options={"maxiter": opts.max_iterations},
        )
        norm = float(res.fun)
        if norm <= best_norm:
            best_norm, best_lam = norm, np.asarray(res.x, dtype=float)
        if best_norm < opts.tolerance or res.success or restarts >= opts.max_restarts:
            break
        restarts += 1

    model = normalize(constraints, best_lam, p.n_causes)
    report = FitReport(
        residual_norm=best_norm,
        restarts=restarts,
        converged=bool(best_norm < opts.tolerance),
        conditional_entropy=conditional_entropy(model, p),
    )
    return best_lam, model, report
