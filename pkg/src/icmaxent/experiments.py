"""The three synthetic studies behind the command line.

Each study samples ground-truth models, computes empirical averages from
simulated data, fits the conditional model, and emits flat result rows:

* ``setting1``: feature selection with interventional constraints for every
  cause versus conditional constraints for every cause, each under the exact
  joint of the causes and under the product joint merged from marginals.
* ``setting2``: feature selection when only k of the causes contribute
  interventional constraints (k sweeps 0..D; inadmissible causes never enter
  the interventional pool) with the exact joint given.
* ``joint``: estimating the two-variable interventional distribution of the
  first two causes from five different constraint menus.

Fitting never sees which causes are true parents: it works from a graph with
the ground truth stripped, and labels are attached to the rows afterwards.
Every row stream is deterministic in (seed, graph index); a graph whose
sampled data leaves an empirical conditioning cell empty is redrawn from the
next substream so result files keep their documented shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    Config,
    ConstraintKind,
    ConstraintSpec,
    GraphSpec,
    JointTable,
    interventional_expectation,
)
from .errors import DomainError, InsufficientDataError
from .identify import intervenable
from .select import score_all
from .solver import SolverOptions, fit, merge_marginals_maxent, smooth_joint
from .synth import (
    ConstraintTemplate,
    Dataset,
    ScmInstance,
    StructureTemplate,
    STRUCTURES,
    ancestral_sample,
    empirical_averages,
    exact_joint_X,
    exact_marginals,
    exact_query,
    sample_scm,
)

_MAX_REDRAWS = 5

SETTING1_HEADER = ("graph_id", "variable", "theta", "is_parent", "method", "px_mode", "converged")
SETTING2_HEADER = ("graph_id", "variable", "theta", "is_parent", "n_interventional", "converged")
JOINT_HEADER = ("graph_id", "scenario", "x1", "x2", "estimated", "true", "residual", "converged")


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs of the study drivers."""

    structure: str | StructureTemplate = "a"
    n_graphs: int = 200
    n_samples: int = 100
    seed: int = 0
    tolerance: float = 0.01
    max_restarts: int = 10

    def __post_init__(self):
        if self.n_graphs < 1:
            raise DomainError("need at least one graph")
        if self.n_samples < 1:
            raise DomainError("need at least one sample per dataset")

    def template(self) -> StructureTemplate:
        if isinstance(self.structure, StructureTemplate):
            return self.structure
        try:
            return STRUCTURES[self.structure]()
        except KeyError:
            raise DomainError(
                f"unknown structure {self.structure!r}; expected one of {sorted(STRUCTURES)}"
            ) from None

    def solver_options(self) -> SolverOptions:
        return SolverOptions(tolerance=self.tolerance, max_restarts=self.max_restarts)


def _graph_rng(seed: int, salt: int, graph_id: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt, graph_id, attempt])


def _var_name(i: int) -> str:
    return f"X{i + 1}"


# ---------------------------------------------------------------------------
# constraint builders (analyst side: never touch the ground-truth parents)
# ---------------------------------------------------------------------------


def _conditional_constraint(obs: Dataset, cond_set: tuple[int, ...]) -> ConstraintSpec:
    return empirical_averages(
        obs, ConstraintTemplate(ConstraintKind.CONDITIONAL, cond_set=cond_set)
    )


def _interventional_constraint(
    clamped: dict[int, list[Dataset]], var: int
) -> ConstraintSpec:
    return empirical_averages(
        clamped[var], ConstraintTemplate(ConstraintKind.INTERVENTIONAL, int_set=(var,))
    )


def _fit_scores(
    constraints: Sequence[ConstraintSpec],
    px: JointTable,
    graph: GraphSpec,
    options: SolverOptions,
    allow_unidentifiable: bool = False,
) -> tuple[dict[int, float], bool]:
    """Fit and reduce to per-variable theta scores (analyst stage)."""
    _, model, report = fit(
        constraints, px, graph, options, allow_unidentifiable=allow_unidentifiable
    )
    return {s.var: s.theta for s in score_all(model)}, report.converged


# ---------------------------------------------------------------------------
# world side: one sampled graph with its datasets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _World:
    """Everything sampled for one graph replicate."""

    scm: ScmInstance
    graph: GraphSpec  # ground truth stripped
    obs: Dataset
    clamped: dict[int, list[Dataset]]
    px_exact: JointTable
    px_marginals: JointTable


def _sample_world(
    template: StructureTemplate,
    n_samples: int,
    rng: np.random.Generator,
    eps: float,
    intervene_vars: Iterable[int],
) -> _World:
    scm = sample_scm(template, rng)
    obs = ancestral_sample(scm, n_samples, rng=rng)
    clamped: dict[int, list[Dataset]] = {}
    for i in sorted(intervene_vars):
        clamped[i] = [
            ancestral_sample(scm, n_samples, Config((i,), (v,)), rng=rng) for v in (0, 1)
        ]
    return _World(
        scm=scm,
        graph=scm.graph.without_y_parents(),
        obs=obs,
        clamped=clamped,
        px_exact=smooth_joint(exact_joint_X(scm), eps),
        px_marginals=smooth_joint(merge_marginals_maxent(exact_marginals(scm)), eps),
    )


def _world_with_redraws(config, salt, graph_id, intervene_vars, build_constraints):
    """Sample a world and its constraints, redrawing on empty data cells."""
    template = config.template()
    eps = config.solver_options().epsilon_smoothing
    for attempt in range(_MAX_REDRAWS):
        rng = _graph_rng(config.seed, salt, graph_id, attempt)
        world = _sample_world(template, config.n_samples, rng, eps, intervene_vars)
        try:
            return world, build_constraints(world, rng)
        except InsufficientDataError:
            continue
    raise InsufficientDataError(
        f"graph {graph_id}: empirical cells stayed empty after {_MAX_REDRAWS} redraws"
    )


# ---------------------------------------------------------------------------
# setting 1
# ---------------------------------------------------------------------------


def setting1_rows(config: ExperimentConfig) -> list[dict]:
    """Interventional-for-all versus conditional-for-all feature selection.

    Four pipelines per graph: constraint kind (interventional / conditional,
    all causes each) crossed with the cause joint handed to the solver (exact
    or merged from exact marginals). Unidentifiable atomic interventions are
    overridden rather than dropped, matching the all-causes protocol.
    """
    template = config.template()
    d = template.n_causes
    rows: list[dict] = []
    for g in range(config.n_graphs):
        def build(world, rng):
            cond = [_conditional_constraint(world.obs, (i,)) for i in range(d)]
            intv = [_interventional_constraint(world.clamped, i) for i in range(d)]
            return cond, intv

        world, (cond_constraints, int_constraints) = _world_with_redraws(
            config, salt=1, graph_id=g, intervene_vars=range(d), build_constraints=build
        )
        opts = config.solver_options()
        pipelines = {
            ("icmaxent", "exact"): (int_constraints, world.px_exact),
            ("icmaxent", "marginals"): (int_constraints, world.px_marginals),
            ("cmaxent", "exact"): (cond_constraints, world.px_exact),
            ("cmaxent", "marginals"): (cond_constraints, world.px_marginals),
        }
        parents = set(world.scm.y_parents)
        for (method, px_mode), (constraints, px) in pipelines.items():
            thetas, converged = _fit_scores(
                constraints, px, world.graph, opts, allow_unidentifiable=True
            )
            for var in range(d):
                rows.append(
                    {
                        "graph_id": g,
                        "variable": _var_name(var),
                        "theta": thetas[var],
                        "is_parent": int(var in parents),
                        "method": method,
                        "px_mode": px_mode,
                        "converged": int(converged),
                    }
                )
    return rows


# ---------------------------------------------------------------------------
# setting 2
# ---------------------------------------------------------------------------


def setting2_rows(config: ExperimentConfig) -> list[dict]:
    """Sweep the number of causes with interventional constraints (k = 0..D).

    The interventional pool holds only gate-admissible causes, lowest index
    first; requesting more than the pool provides falls back to conditional
    constraints for the remainder (the row still records the requested k).
    The cause joint is exact.
    """
    template = config.template()
    d = template.n_causes
    gate_graph = template.graph_spec()
    pool = [i for i in range(d) if intervenable(gate_graph, i).admissible]
    rows: list[dict] = []
    for g in range(config.n_graphs):
        def build(world, rng):
            cond = {i: _conditional_constraint(world.obs, (i,)) for i in range(d)}
            intv = {i: _interventional_constraint(world.clamped, i) for i in pool}
            return cond, intv

        world, (cond_by_var, int_by_var) = _world_with_redraws(
            config, salt=2, graph_id=g, intervene_vars=pool, build_constraints=build
        )
        opts = config.solver_options()
        parents = set(world.scm.y_parents)
        for k in range(d + 1):
            chosen = pool[: min(k, len(pool))]
            constraints = [
                int_by_var[i] if i in chosen else cond_by_var[i] for i in range(d)
            ]
            thetas, converged = _fit_scores(constraints, world.px_exact, world.graph, opts)
            for var in range(d):
                rows.append(
                    {
                        "graph_id": g,
                        "variable": _var_name(var),
                        "theta": thetas[var],
                        "is_parent": int(var in parents),
                        "n_interventional": k,
                        "converged": int(converged),
                    }
                )
    return rows


# ---------------------------------------------------------------------------
# joint interventional study
# ---------------------------------------------------------------------------

_JOINT_QUERY_VARS = (0, 1)


def joint_rows(config: ExperimentConfig) -> list[dict]:
    """Estimate P(Y=1 | do(X1, X2)) under five constraint menus.

    1. the conditional on a random cause pair plus single-variable
       interventional constraints for the remaining causes;
    2. only the pair conditional;
    3. single-variable interventional constraints for every cause;
    4. single-variable conditional constraints for every cause;
    5. no constraints at all (the uniform baseline).

    Estimates use back-door adjustment under the exact (smoothed) cause
    joint; the reference value comes from truncated factorization.
    """
    template = config.template()
    d = template.n_causes
    if d < 3:
        raise DomainError("the joint study needs at least three causes")
    rows: list[dict] = []
    for g in range(config.n_graphs):
        def build(world, rng):
            pair = tuple(sorted(rng.choice(d, size=2, replace=False).tolist()))
            pair_cond = _conditional_constraint(world.obs, pair)
            cond = {i: _conditional_constraint(world.obs, (i,)) for i in range(d)}
            intv = {i: _interventional_constraint(world.clamped, i) for i in range(d)}
            return pair, pair_cond, cond, intv

        world, (pair, pair_cond, cond_by_var, int_by_var) = _world_with_redraws(
            config, salt=3, graph_id=g, intervene_vars=range(d), build_constraints=build
        )
        opts = config.solver_options()
        scenarios = {
            1: [pair_cond] + [int_by_var[i] for i in range(d) if i not in pair],
            2: [pair_cond],
            3: [int_by_var[i] for i in range(d)],
            4: [cond_by_var[i] for i in range(d)],
            5: [],
        }
        for scenario, constraints in scenarios.items():
            _, model, report = fit(constraints, world.px_exact, world.graph, opts)
            for x2 in (0, 1):
                for x1 in (0, 1):
                    c_int = Config(_JOINT_QUERY_VARS, (x1, x2))
                    est = interventional_expectation(
                        model, world.px_exact, c_int, Config.empty(), world.graph
                    )
                    true = exact_query(world.scm, c_int, Config.empty())
                    rows.append(
                        {
                            "graph_id": g,
                            "scenario": scenario,
                            "x1": x1,
                            "x2": x2,
                            "estimated": est,
                            "true": true,
                            "residual": est - true,
                            "converged": int(report.converged),
                        }
                    )
    return rows
