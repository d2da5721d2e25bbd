"""Smoothing, marginal merging, residual assembly, and the fit loop."""

import math

import numpy as np
import pytest

from icmaxent import (
    Config,
    ConstraintSpec,
    DomainError,
    GraphSpec,
    IdentifiabilityError,
    JointTable,
    NumericError,
    SolverOptions,
    assemble_residuals,
    conditional_entropy,
    eval_conditional,
    fit,
    merge_marginals_maxent,
    smooth_joint,
)
from icmaxent.solver import _ResidualSystem

from conftest import feasible_problem, random_positive_joint


# ---------------------------------------------------------------------------
# smoothing and merging
# ---------------------------------------------------------------------------


def test_smooth_keeps_positive_tables_close():
    p = JointTable(2, np.array([0.4, 0.1, 0.2, 0.3]))
    eps = 1e-9
    out = smooth_joint(p, eps)
    assert np.all(out.probs > 0)
    assert np.max(np.abs(out.probs - p.probs) / p.probs) <= 4 * eps / p.probs.min()


def test_smooth_zero_entry_exact_value():
    p = JointTable(2, np.array([0.5, 0.0, 0.25, 0.25]))
    out = smooth_joint(p, 1e-3)
    assert out.probs[1] == pytest.approx(1e-3 / (1 + 4e-3), abs=1e-15)


def test_smooth_degenerate_table_renormalizes():
    p = JointTable(2, np.array([0.0, 0.0, 1.0, 0.0]))
    out = smooth_joint(p, 1e-6)
    assert np.all(out.probs > 0)
    assert out.probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_smooth_requires_positive_eps():
    with pytest.raises(DomainError):
        smooth_joint(JointTable.uniform(1), 0.0)


def test_merge_uniform_marginals():
    out = merge_marginals_maxent([0.5, 0.5, 0.5])
    assert np.allclose(out.probs, 1 / 8)


def test_merge_product_values():
    out = merge_marginals_maxent([0.3, 0.6])
    # index order: (x1, x2) = (0,0), (1,0), (0,1), (1,1)
    assert np.allclose(out.probs, [0.28, 0.12, 0.42, 0.18])


def test_merge_entropy_is_sum_of_binary_entropies():
    rng = np.random.default_rng(3)
    ms = rng.uniform(0.1, 0.9, size=5)
    out = merge_marginals_maxent(ms)
    table_entropy = -float(np.sum(out.probs * np.log(out.probs)))
    h = lambda q: -(q * math.log(q) + (1 - q) * math.log(1 - q))
    assert table_entropy == pytest.approx(sum(h(q) for q in ms), abs=1e-10)


def test_merge_rejects_boundary_values():
    with pytest.raises(DomainError):
        merge_marginals_maxent([0.0, 0.5])


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


def test_residual_zero_lambda_halves():
    spec = ConstraintSpec.conditional((0,), {(0,): 0.5, (1,): 0.5})
    p = JointTable.uniform(1)
    r = assemble_residuals(np.zeros(2), [spec], p, GraphSpec(n_causes=1))
    assert np.allclose(r, 0.0, atol=1e-15)


def test_residual_zero_lambda_offset_target():
    spec = ConstraintSpec.conditional((0,), {(0,): 0.8, (1,): 0.8})
    p = JointTable.uniform(1)
    r = assemble_residuals(np.zeros(2), [spec], p, GraphSpec(n_causes=1))
    assert np.allclose(r, 0.3, atol=1e-15)


def test_residual_vector_hand_fixture():
    # one conditional constraint on x1 over two causes, handmade numbers
    spec = ConstraintSpec.conditional((0,), {(0,): 0.25, (1,): 0.75})
    p = JointTable(2, np.array([0.4, 0.1, 0.2, 0.3]))
    lam = np.array([0.5, -0.5])
    r = assemble_residuals(lam, [spec], p, GraphSpec(n_causes=2))
    # model: P(Y=1|x) = expit(lam at x0); independent of x1
    e0 = 1 / (1 + math.exp(-0.5))
    e1 = 1 / (1 + math.exp(0.5))
    assert r[0] == pytest.approx(0.25 - e0, abs=1e-12)
    assert r[1] == pytest.approx(0.75 - e1, abs=1e-12)


def test_residual_system_matches_operator_dispatch():
    rng = np.random.default_rng(31)
    constraints, p, g, _ = feasible_problem(rng, 3, with_marginal=True, interventional=True)
    lam = rng.normal(size=len(constraints) * 2 - 1)
    system = _ResidualSystem(constraints, p)
    assert np.allclose(
        system.residuals(lam), assemble_residuals(lam, constraints, p, g), atol=1e-12
    )


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------


def central_fd(fun, x, h=1e-5):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


def test_analytic_gradient_matches_central_differences():
    rng = np.random.default_rng(37)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        with_marg = bool(rng.integers(2))
        interventional = bool(rng.integers(2))
        constraints, p, g, _ = feasible_problem(
            rng, d, with_marginal=with_marg, interventional=interventional
        )
        system = _ResidualSystem(constraints, p)
        m = system.targets.size
        lam = rng.normal(scale=1.0, size=m)
        _, grad = system.value_and_grad(lam)
        fd = central_fd(lambda x: system.value_and_grad(x)[0], lam)
        denom = max(float(np.linalg.norm(fd)), 1e-12)
        assert float(np.linalg.norm(grad - fd)) / denom < 1e-5


def test_numeric_guard_raises_on_nan():
    rng = np.random.default_rng(41)
    constraints, p, _, _ = feasible_problem(rng, 1)
    system = _ResidualSystem(constraints, p)
    with pytest.raises(NumericError):
        system.value_and_grad(np.array([np.nan, 0.0]))


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def test_fit_single_cause_example():
    spec = ConstraintSpec.conditional((0,), {(0,): 0.2, (1,): 0.8})
    p = JointTable(1, np.array([0.5, 0.5]))
    lam, model, report = fit([spec], p, GraphSpec(n_causes=1))
    assert report.converged
    assert report.residual_norm < 0.01
    assert eval_conditional(model, Config.full(1, 0)) == pytest.approx(0.2, abs=1e-3)
    assert eval_conditional(model, Config.full(1, 1)) == pytest.approx(0.8, abs=1e-3)


def test_fit_uniform_targets_keep_zero_lambda():
    spec = ConstraintSpec.conditional((0,), {(0,): 0.5, (1,): 0.5})
    p = JointTable.uniform(1)
    lam, model, report = fit([spec], p, GraphSpec(n_causes=1))
    assert np.allclose(lam, 0.0)
    assert report.residual_norm == pytest.approx(0.0, abs=1e-20)
    assert report.converged


def test_fit_contradictory_targets_degrades_gracefully():
    constraints = [
        ConstraintSpec.marginal(0.9),
        ConstraintSpec.conditional((0,), {(0,): 0.1, (1,): 0.1}),
    ]
    p = JointTable(1, np.array([0.5, 0.5]))
    opts = SolverOptions(max_restarts=3)
    lam, model, report = fit(constraints, p, GraphSpec(n_causes=1), opts)
    assert not report.converged
    assert report.restarts <= opts.max_restarts
    assert np.all(np.isfinite(lam))
    assert report.residual_norm > opts.tolerance


def test_fit_feasible_recovery_small_batch():
    rng = np.random.default_rng(43)
    hits = 0
    for _ in range(20):
        d = int(rng.integers(1, 4))
        constraints, p, g, _ = feasible_problem(rng, d)
        _, _, report = fit(constraints, p, g)
        hits += report.converged
    assert hits >= 19


def test_fit_no_constraints_returns_uniform():
    p = random_positive_joint(np.random.default_rng(47), 2)
    lam, model, report = fit([], p, GraphSpec(n_causes=2))
    assert lam.size == 0
    assert report.converged
    assert report.residual_norm == 0.0
    assert eval_conditional(model, Config.full(2, 3)) == 0.5
    assert report.conditional_entropy == pytest.approx(math.log(2), abs=1e-12)


def test_fit_reports_entropy_of_result():
    rng = np.random.default_rng(53)
    constraints, p, g, _ = feasible_problem(rng, 2)
    _, model, report = fit(constraints, p, g)
    assert report.conditional_entropy == pytest.approx(
        conditional_entropy(model, p), abs=1e-15
    )


def test_fit_refuses_inadmissible_interventional():
    g = GraphSpec(n_causes=2, directed_edges=frozenset({(0, 1)}))
    spec = ConstraintSpec.interventional((0,), {(0,): 0.4, (1,): 0.6})
    p = JointTable.uniform(2)
    with pytest.raises(IdentifiabilityError):
        fit([spec], p, g)
    _, _, report = fit([spec], p, g, allow_unidentifiable=True)
    assert report.residual_norm >= 0.0


def test_fit_deterministic_bit_identical():
    rng1 = np.random.default_rng(59)
    rng2 = np.random.default_rng(59)
    c1, p1, g1, _ = feasible_problem(rng1, 3, with_marginal=True)
    c2, p2, g2, _ = feasible_problem(rng2, 3, with_marginal=True)
    lam1, _, _ = fit(c1, p1, g1)
    lam2, _, _ = fit(c2, p2, g2)
    assert lam1.tobytes() == lam2.tobytes()


def test_fit_norm_never_above_start():
    constraints = [
        ConstraintSpec.marginal(0.9),
        ConstraintSpec.conditional((0,), {(0,): 0.1, (1,): 0.1}),
    ]
    p = JointTable(1, np.array([0.5, 0.5]))
    start = float(np.sum(assemble_residuals(np.zeros(3), constraints, p, GraphSpec(n_causes=1)) ** 2))
    _, _, report = fit(constraints, p, GraphSpec(n_causes=1))
    assert report.residual_norm <= start


def test_solver_options_validation():
    with pytest.raises(DomainError):
        SolverOptions(tolerance=0.0)
    with pytest.raises(DomainError):
        SolverOptions(max_restarts=0)
