"""Model evaluation, conditioning, and expectation operators."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icmaxent import (
    CapacityError,
    Config,
    ConstraintSpec,
    DomainError,
    GraphSpec,
    InvalidModelError,
    JointTable,
    PositivityError,
    StatisticTable,
    condition_joint,
    conditional_entropy,
    conditional_expectation,
    eval_conditional,
    interventional_expectation,
    marginal_expectation,
    marginalize,
    model_from_table,
    normalize,
    y_statistic,
)
from icmaxent.core import ConditionalModel
from icmaxent.errors import IdentifiabilityError

import oracles


def product_table(marginal_ones):
    """Independent joint over len(marginal_ones) causes (little-endian)."""
    d = len(marginal_ones)
    probs = np.ones(1 << d)
    idx = np.arange(1 << d)
    for i, m in enumerate(marginal_ones):
        probs *= np.where((idx >> i) & 1, m, 1.0 - m)
    return JointTable(d, probs)


def edgeless(d):
    return GraphSpec(n_causes=d)


def two_conditional_fixture():
    constraints = [
        ConstraintSpec.conditional((0,), {(0,): 0.3, (1,): 0.7}),
        ConstraintSpec.conditional((1,), {(0,): 0.4, (1,): 0.6}),
    ]
    lam = np.array([0.2, -0.4, 0.8, -1.1])
    return constraints, lam


def random_fixture(rng, d):
    """Random constraints + multipliers over d causes, plus a random joint."""
    constraints = [ConstraintSpec.marginal(0.5)]
    for v in range(d):
        constraints.append(
            ConstraintSpec.conditional((v,), {(0,): rng.uniform(), (1,): rng.uniform()})
        )
    lam = rng.normal(scale=1.5, size=1 + 2 * d)
    probs = rng.uniform(0.05, 1.0, size=1 << d)
    probs /= probs.sum()
    return constraints, lam, JointTable(d, probs)


# ---------------------------------------------------------------------------
# eval_conditional / normalize
# ---------------------------------------------------------------------------


def test_zero_multipliers_give_uniform():
    constraints, _ = two_conditional_fixture()
    model = normalize(constraints, np.zeros(4), 2)
    for idx in range(4):
        assert eval_conditional(model, Config.full(2, idx)) == 0.5


@pytest.mark.parametrize("lam", [-2.0, -0.3, 0.7, 3.1])
def test_single_marginal_constraint_closed_form(lam):
    # closing the normalizer over y in {0,1} by hand: P(Y=1|x) = e^l / (1 + e^l)
    model = normalize([ConstraintSpec.marginal(0.5)], [lam], 3)
    expected = math.exp(lam) / (1.0 + math.exp(lam))
    for idx in range(8):
        assert eval_conditional(model, Config.full(3, idx)) == pytest.approx(expected, abs=1e-14)


def test_eval_matches_bruteforce_enumerator():
    constraints, lam = two_conditional_fixture()
    model = normalize(constraints, lam, 2)
    for idx in range(4):
        assignment = {0: idx & 1, 1: (idx >> 1) & 1}
        assert eval_conditional(model, Config.full(2, idx)) == pytest.approx(
            oracles.oracle_p_y1(constraints, lam, assignment), abs=1e-13
        )


def test_unnormalized_model_rejected():
    constraints, lam = two_conditional_fixture()
    bare = ConditionalModel(n_causes=2, constraints=tuple(constraints), lam=lam)
    with pytest.raises(InvalidModelError):
        eval_conditional(bare, Config.full(2, 0))


def test_eval_requires_full_assignment():
    model = normalize([], [], 2)
    with pytest.raises(DomainError):
        eval_conditional(model, Config((0,), (1,)))


def test_normalizer_zero_lambda_is_log_half():
    constraints, _ = two_conditional_fixture()
    model = normalize(constraints, np.zeros(4), 2)
    assert np.allclose(model.log_norm, -math.log(2.0), atol=1e-15)


def test_normalizer_single_marginal_unit_lambda():
    model = normalize([ConstraintSpec.marginal(0.5)], [1.0], 2)
    assert np.allclose(model.log_norm, -math.log(1.0 + math.e), atol=1e-15)


def test_normalization_invariant_random_lambda():
    rng = np.random.default_rng(7)
    constraints, _, _ = random_fixture(rng, 3)
    lam = rng.normal(size=7)
    model = normalize(constraints, lam, 3)
    p1 = model.prob_y1()
    total = np.exp(model.logits[0] + model.log_norm) + np.exp(model.logits[1] + model.log_norm)
    assert np.all(np.abs(total - 1.0) < 1e-12)
    assert np.all((p1 > 0) & (p1 < 1))


def test_normalize_capacity_ceiling():
    with pytest.raises(CapacityError):
        normalize([], [], 21)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-8, 8), min_size=4, max_size=4))
def test_normalization_invariant_property(lams):
    constraints, _ = two_conditional_fixture()
    model = normalize(constraints, np.array(lams), 2)
    total = np.exp(model.logits[0] + model.log_norm) + np.exp(model.logits[1] + model.log_norm)
    assert np.all(np.abs(total - 1.0) < 1e-12)


# ---------------------------------------------------------------------------
# condition_joint / marginalize
# ---------------------------------------------------------------------------


def test_condition_uniform_stays_uniform():
    p = JointTable.uniform(3)
    out = condition_joint(p, Config((1,), (0,)))
    assert out.n_causes == 2
    assert np.allclose(out.probs, 0.25)


def test_condition_product_table():
    p = product_table([0.3, 0.6])
    out = condition_joint(p, Config((0,), (1,)))
    assert out.probs[1] == pytest.approx(0.6, abs=1e-15)


def test_condition_correlated_fixture_hand_computed():
    # joint over (x1, x2): p00=0.4, p10=0.1, p01=0.2, p11=0.3
    p = JointTable(2, np.array([0.4, 0.1, 0.2, 0.3]))
    out = condition_joint(p, Config((0,), (1,)))
    # P(x2 | x1=1) = (0.1, 0.3) / 0.4
    assert np.allclose(out.probs, [0.25, 0.75])


def test_condition_zero_event_raises():
    p = JointTable(2, np.array([0.5, 0.0, 0.5, 0.0]))
    with pytest.raises(PositivityError):
        condition_joint(p, Config((0,), (1,)))


def test_marginalize_against_hand_sum():
    p = JointTable(2, np.array([0.4, 0.1, 0.2, 0.3]))
    out = marginalize(p, (1,))
    assert np.allclose(out.probs, [0.5, 0.5])


# ---------------------------------------------------------------------------
# expectations
# ---------------------------------------------------------------------------


def test_conditional_expectation_full_conditioning_equals_eval():
    constraints, lam = two_conditional_fixture()
    model = normalize(constraints, lam, 2)
    p = product_table([0.4, 0.5])
    for idx in range(4):
        c = Config.full(2, idx)
        assert conditional_expectation(model, p, c) == pytest.approx(
            eval_conditional(model, c), abs=1e-15
        )


def test_conditional_expectation_independent_fixture():
    model = model_from_table([0.1, 0.5, 0.3, 0.9])
    p = product_table([0.4, 0.5])
    assert conditional_expectation(model, p, Config((0,), (1,))) == pytest.approx(0.7, abs=1e-12)


def test_conditional_expectation_random_vs_bruteforce():
    rng = np.random.default_rng(11)
    constraints, lam, p = random_fixture(rng, 3)
    model = normalize(constraints, lam, 3)
    for vars, values in [((0,), (1,)), ((1, 2), (0, 1)), ((0, 1, 2), (1, 1, 0))]:
        got = conditional_expectation(model, p, Config(vars, values))
        want = oracles.oracle_conditional_expectation(
            constraints, lam, p.probs, 3, dict(zip(vars, values))
        )
        assert got == pytest.approx(want, abs=1e-12)


def test_interventional_single_cause_equals_conditional():
    model = model_from_table([0.2, 0.8])
    p = JointTable(1, np.array([0.35, 0.65]))
    g = edgeless(1)
    for v in (0, 1):
        c = Config((0,), (v,))
        assert interventional_expectation(model, p, c, Config.empty(), g) == pytest.approx(
            conditional_expectation(model, p, c), abs=1e-15
        )


def test_interventional_independent_fixture():
    model = model_from_table([0.1, 0.5, 0.3, 0.9])
    p = product_table([0.4, 0.5])
    got = interventional_expectation(model, p, Config((0,), (1,)), Config.empty(), edgeless(2))
    assert got == pytest.approx(0.7, abs=1e-12)


def test_interventional_random_vs_bruteforce():
    rng = np.random.default_rng(13)
    constraints, lam, p = random_fixture(rng, 3)
    model = normalize(constraints, lam, 3)
    g = edgeless(3)
    cases = [
        (Config((0,), (1,)), Config.empty()),
        (Config((1,), (0,)), Config((2,), (1,))),
        (Config((0, 2), (1, 0)), Config.empty()),
    ]
    for c_int, c_cond in cases:
        got = interventional_expectation(model, p, c_int, c_cond, g)
        want = oracles.oracle_interventional_expectation(
            constraints,
            lam,
            p.probs,
            3,
            dict(zip(c_int.vars, c_int.values)),
            dict(zip(c_cond.vars, c_cond.values)),
        )
        assert got == pytest.approx(want, abs=1e-12)


def test_interventional_gate_refuses_children():
    model = model_from_table([0.1, 0.5, 0.3, 0.9])
    p = product_table([0.4, 0.5])
    g = GraphSpec(n_causes=2, directed_edges=frozenset({(0, 1)}))
    with pytest.raises(IdentifiabilityError):
        interventional_expectation(model, p, Config((0,), (1,)), Config.empty(), g)
    # override lets the adjustment run anyway
    val = interventional_expectation(
        model, p, Config((0,), (1,)), Config.empty(), g, allow_unidentifiable=True
    )
    assert 0.0 <= val <= 1.0


def test_interventional_overlapping_sets_rejected():
    model = model_from_table([0.1, 0.5, 0.3, 0.9])
    p = product_table([0.4, 0.5])
    with pytest.raises(DomainError):
        interventional_expectation(model, p, Config((0,), (1,)), Config((0,), (0,)), edgeless(2))


def test_interventional_confounded_pair_matches_truncated_factorization():
    # U feeds the first two causes, both feed Y; the third cause is inert
    # padding so the effect's parent set stays a strict subset.
    from icmaxent import exact_joint_X, exact_query
    from icmaxent.synth import ScmInstance, StructureTemplate, _y_prob_table

    t = StructureTemplate(3, confounders=((0, 1),))
    scm = ScmInstance(
        t,
        u_probs=(0.35,),
        x_cpts=(np.array([0.2, 0.8]), np.array([0.3, 0.7]), np.array([0.5])),
        y_parents=(0, 1),
        y_cpt=np.array([0.15, 0.6, 0.45, 0.85]),
    )
    model = model_from_table(_y_prob_table(scm))
    p = exact_joint_X(scm)
    g = scm.graph.without_y_parents()
    for var in (0, 1):
        for val in (0, 1):
            c = Config((var,), (val,))
            got = interventional_expectation(model, p, c, Config.empty(), g)
            want = exact_query(scm, c, Config.empty())
            assert got == pytest.approx(want, abs=1e-12)
            # confounding makes naive conditioning biased, adjustment is not
            naive = conditional_expectation(model, p, c)
            assert abs(naive - want) > 1e-3


def test_do_equals_conditional_under_independence():
    rng = np.random.default_rng(17)
    g = edgeless(3)
    for _ in range(20):
        constraints, lam, _ = random_fixture(rng, 3)
        model = normalize(constraints, lam, 3)
        p = product_table(rng.uniform(0.1, 0.9, size=3))
        c = Config((1,), (rng.integers(2),))
        assert interventional_expectation(model, p, c, Config.empty(), g) == pytest.approx(
            conditional_expectation(model, p, c), abs=1e-10
        )


def test_marginal_expectation_constant_statistic():
    stat = StatisticTable((), {(0, ()): 1.0, (1, ()): 1.0})
    model = model_from_table([0.1, 0.5, 0.3, 0.9])
    p = product_table([0.4, 0.5])
    assert marginal_expectation(model, p, stat) == pytest.approx(1.0, abs=1e-12)


def test_marginal_expectation_uniform_y():
    constraints, _ = two_conditional_fixture()
    model = normalize(constraints, np.zeros(4), 2)
    p = product_table([0.3, 0.8])
    assert marginal_expectation(model, p, y_statistic()) == pytest.approx(0.5, abs=1e-12)


def test_marginal_expectation_random_vs_bruteforce():
    rng = np.random.default_rng(19)
    constraints, lam, p = random_fixture(rng, 3)
    model = normalize(constraints, lam, 3)
    stat = StatisticTable(
        (0, 2),
        {
            (y, cfg): float(rng.normal())
            for y in (0, 1)
            for cfg in [(0, 0), (0, 1), (1, 0), (1, 1)]
        },
    )
    got = marginal_expectation(model, p, stat)
    want = oracles.oracle_marginal_expectation(constraints, lam, p.probs, 3, stat)
    assert got == pytest.approx(want, abs=1e-12)


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------


def test_entropy_uniform_model_is_log_two():
    constraints, _ = two_conditional_fixture()
    model = normalize(constraints, np.zeros(4), 2)
    p = product_table([0.3, 0.8])
    assert conditional_entropy(model, p) == pytest.approx(math.log(2.0), abs=1e-14)


def test_entropy_deterministic_model_is_zero():
    spec = ConstraintSpec.conditional((0,), {(0,): 0.0, (1,): 1.0})
    model = normalize([spec], [-80.0, 80.0], 1)
    p = JointTable(1, np.array([0.5, 0.5]))
    assert conditional_entropy(model, p) == pytest.approx(0.0, abs=1e-12)


def test_entropy_random_vs_bruteforce():
    rng = np.random.default_rng(23)
    constraints, lam, p = random_fixture(rng, 3)
    model = normalize(constraints, lam, 3)
    got = conditional_entropy(model, p)
    want = oracles.oracle_conditional_entropy(constraints, lam, p.probs, 3)
    assert got == pytest.approx(want, abs=1e-12)
    assert 0.0 <= got <= math.log(2.0) + 1e-15


def test_marginal_multiplier_monotone_in_mean():
    # raising the multiplier of the Y statistic raises its expectation
    p = product_table([0.4, 0.7])
    means = []
    for lam in np.linspace(-2, 2, 9):
        model = normalize([ConstraintSpec.marginal(0.5)], [lam], 2)
        means.append(marginal_expectation(model, p, y_statistic()))
    assert all(b > a for a, b in zip(means, means[1:]))


# ---------------------------------------------------------------------------
# type validation
# ---------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(DomainError):
        Config((1, 0), (0, 1))
    with pytest.raises(DomainError):
        Config((0, 0), (0, 1))
    with pytest.raises(DomainError):
        Config((0,), (2,))


def test_graph_validation():
    with pytest.raises(DomainError):
        GraphSpec(n_causes=3, directed_edges=frozenset({(0, 1), (1, 2), (2, 0)}))
    with pytest.raises(DomainError):
        GraphSpec(n_causes=2, directed_edges=frozenset({(0, 5)}))
    g = GraphSpec(n_causes=3, confounder_edges=frozenset({(2, 0)}))
    assert (0, 2) in g.confounder_edges


def test_joint_table_validation():
    with pytest.raises(DomainError):
        JointTable(2, np.array([0.5, 0.5, 0.5, 0.5]))
    with pytest.raises(DomainError):
        JointTable(2, np.array([-0.1, 0.5, 0.3, 0.3]))
    with pytest.raises(DomainError):
        JointTable(2, np.array([1.0]))


def test_constraint_validation():
    with pytest.raises(DomainError):
        ConstraintSpec.conditional((0,), {(0,): 0.5})  # missing (1,)
    with pytest.raises(DomainError):
        ConstraintSpec.conditional((0,), {(0,): 1.5, (1,): 0.5})
    with pytest.raises(DomainError):
        ConstraintSpec.interventional((0,), {(0, 0): 0.5}, cond_set=(0,))


def test_model_from_table_round_trip():
    rng = np.random.default_rng(29)
    probs = rng.uniform(0.05, 0.95, size=8)
    model = model_from_table(probs)
    for idx in range(8):
        assert eval_conditional(model, Config.full(3, idx)) == pytest.approx(
            probs[idx], abs=1e-12
        )
