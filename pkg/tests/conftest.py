"""Shared fixture builders for the test suite."""

import numpy as np

from icmaxent import (
    Config,
    ConstraintSpec,
    GraphSpec,
    JointTable,
    conditional_expectation,
    interventional_expectation,
    marginal_expectation,
    model_from_table,
    y_statistic,
)


def random_positive_joint(rng, d):
    probs = rng.uniform(0.05, 1.0, size=1 << d)
    return JointTable(d, probs / probs.sum())


def feasible_problem(rng, d, with_marginal=False, interventional=False):
    """Constraints whose targets come from evaluating a random true model.

    Returns (constraints, joint, graph, truth_table). The targets are exact
    expectations of the true model, so a perfect fit has zero residual.
    """
    truth = rng.uniform(0.15, 0.85, size=1 << d)
    model = model_from_table(truth)
    p = random_positive_joint(rng, d)
    g = GraphSpec(n_causes=d)
    constraints = []
    for v in range(d):
        targets = {}
        for val in (0, 1):
            c = Config((v,), (val,))
            if interventional:
                targets[(val,)] = interventional_expectation(model, p, c, Config.empty(), g)
            else:
                targets[(val,)] = conditional_expectation(model, p, c)
        if interventional:
            constraints.append(ConstraintSpec.interventional((v,), targets))
        else:
            constraints.append(ConstraintSpec.conditional((v,), targets))
    if with_marginal:
        constraints.append(
            ConstraintSpec.marginal(marginal_expectation(model, p, y_statistic()))
        )
    return constraints, p, g, truth
