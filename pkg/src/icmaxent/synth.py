"""Synthetic three-level structural causal models and exact oracles.

The generative layout has latent binary confounders U on top, D binary
potential causes X in the middle (confounded by the U's, optionally with
directed edges among themselves), and a binary effect Y at the bottom whose
parents are a random strict subset of the causes. All mechanisms are
Bernoulli with conditional probabilities drawn uniformly from [0.1, 0.9],
which keeps every configuration strictly positive.

Alongside ancestral sampling, the module provides exact answers computed by
full enumeration with truncated factorization; those serve as ground truth
for every interventional estimate in the benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _bits
from .core import Config, ConstraintKind, ConstraintSpec, GraphSpec, JointTable, StatisticTable
from .errors import DomainError, InsufficientDataError, PositivityError

_CPT_LOW, _CPT_HIGH = 0.1, 0.9


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureTemplate:
    """Wiring of a three-level layout: confounder groups and cause-level edges.

    Each entry of ``confounders`` lists the causes fed by one latent root.
    ``directed_edges`` are (parent, child) pairs among causes.
    """

    n_causes: int
    confounders: tuple[tuple[int, ...], ...] = ()
    directed_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        groups = tuple(tuple(sorted(int(v) for v in g)) for g in self.confounders)
        edges = tuple((int(a), int(b)) for a, b in self.directed_edges)
        object.__setattr__(self, "confounders", groups)
        object.__setattr__(self, "directed_edges", edges)
        for g in groups:
            if any(not 0 <= v < self.n_causes for v in g):
                raise DomainError("confounder group out of range")
        # validates ranges and acyclicity of the cause level
        self.graph_spec()

    @property
    def n_confounders(self) -> int:
        return len(self.confounders)

    def confounder_pairs(self) -> frozenset[tuple[int, int]]:
        pairs = set()
        for g in self.confounders:
            pairs.update(
                (a, b) for i, a in enumerate(g) for b in g[i + 1 :]
            )
        return frozenset(pairs)

    def graph_spec(self, y_parents: Sequence[int] | None = None) -> GraphSpec:
        return GraphSpec(
            n_causes=self.n_causes,
            directed_edges=frozenset(self.directed_edges),
            confounder_edges=self.confounder_pairs(),
            y_parents=tuple(y_parents) if y_parents is not None else None,
        )

    def u_parents_of(self, cause: int) -> tuple[int, ...]:
        return tuple(m for m, g in enumerate(self.confounders) if cause in g)

    def x_parents_of(self, cause: int) -> tuple[int, ...]:
        return tuple(sorted(a for a, b in self.directed_edges if b == cause))

    def topological_causes(self) -> tuple[int, ...]:
        order: list[int] = []
        pending = set(range(self.n_causes))
        while pending:
            ready = sorted(
                v for v in pending if all(a not in pending for a in self.x_parents_of(v))
            )
            if not ready:
                raise DomainError("cause-level edges contain a cycle")
            order.extend(ready)
            pending.difference_update(ready)
        return tuple(order)


def structure_a(n_causes: int = 5) -> StructureTemplate:
    """Two latent confounders covering disjoint halves of the causes."""
    split = (n_causes + 1) // 2
    return StructureTemplate(
        n_causes,
        confounders=(tuple(range(split)), tuple(range(split, n_causes))),
    )


def structure_b(n_causes: int = 5) -> StructureTemplate:
    """One latent confounder covering every cause."""
    return StructureTemplate(n_causes, confounders=(tuple(range(n_causes)),))


def structure_c(n_causes: int = 5) -> StructureTemplate:
    """Structure (a) plus a directed edge from the first cause to the second."""
    base = structure_a(n_causes)
    return StructureTemplate(n_causes, confounders=base.confounders, directed_edges=((0, 1),))


STRUCTURES = {"a": structure_a, "b": structure_b, "c": structure_c}


# ---------------------------------------------------------------------------
# sampled instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScmInstance:
    """One sampled ground-truth model over a :class:`StructureTemplate`.

    CPT rows are indexed little-endian over each variable's parent list,
    latent parents first then cause parents, both ascending. ``y_parents``
    is nonempty and a strict subset of the causes.
    """

    template: StructureTemplate
    u_probs: tuple[float, ...]
    x_cpts: tuple[np.ndarray, ...]
    y_parents: tuple[int, ...]
    y_cpt: np.ndarray

    def __post_init__(self):
        t = self.template
        if len(self.u_probs) != t.n_confounders:
            raise DomainError("one root probability per confounder required")
        if len(self.x_cpts) != t.n_causes:
            raise DomainError("one CPT per cause required")
        yp = tuple(sorted(int(v) for v in self.y_parents))
        object.__setattr__(self, "y_parents", yp)
        if not yp or len(yp) >= t.n_causes:
            raise DomainError("y_parents must be nonempty and a strict subset of the causes")
        for table in (*self.x_cpts, self.y_cpt, np.asarray(self.u_probs)):
            arr = np.asarray(table, dtype=float)
            if np.any(arr < _CPT_LOW - 1e-12) or np.any(arr > _CPT_HIGH + 1e-12):
                raise DomainError(f"CPT entries must lie in [{_CPT_LOW}, {_CPT_HIGH}]")
        for i, cpt in enumerate(self.x_cpts):
            n_par = len(t.u_parents_of(i)) + len(t.x_parents_of(i))
            if np.asarray(cpt).shape != (1 << n_par,):
                raise DomainError(f"cause {i} CPT has the wrong size")
        if np.asarray(self.y_cpt).shape != (1 << len(yp),):
            raise DomainError("effect CPT has the wrong size")

    @property
    def graph(self) -> GraphSpec:
        return self.template.graph_spec(self.y_parents)


def sample_scm(template: StructureTemplate, rng: int | np.random.Generator) -> ScmInstance:
    """Draw mechanisms for one instance; deterministic for a given seed.

    All conditional probabilities are Uniform(0.1, 0.9). The effect's parent
    set includes each cause independently with probability 1/2 and is
    redrawn until it is nonempty and misses at least one cause.
    """
    rng = np.random.default_rng(rng)
    t = template
    if t.n_causes < 2:
        raise DomainError("need at least two causes to draw a strict parent subset")
    u_probs = tuple(rng.uniform(_CPT_LOW, _CPT_HIGH, size=t.n_confounders).tolist())
    x_cpts = []
    for i in range(t.n_causes):
        n_par = len(t.u_parents_of(i)) + len(t.x_parents_of(i))
        x_cpts.append(rng.uniform(_CPT_LOW, _CPT_HIGH, size=1 << n_par))
    while True:
        mask = rng.random(t.n_causes) < 0.5
        if 1 <= int(mask.sum()) <= t.n_causes - 1:
            break
    y_parents = tuple(int(v) for v in np.flatnonzero(mask))
    y_cpt = rng.uniform(_CPT_LOW, _CPT_HIGH, size=1 << len(y_parents))
    return ScmInstance(t, u_probs, tuple(x_cpts), y_parents, y_cpt)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dataset:
    """Sampled records over the causes and the effect (latents never recorded)."""

    columns: tuple[str, ...]
    rows: np.ndarray
    intervention: Config | None = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int8)
        object.__setattr__(self, "rows", rows)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise DomainError("row width must match the column count")
        if self.intervention is not None:
            for v, val in zip(self.intervention.vars, self.intervention.values):
                if rows.size and not np.all(rows[:, v] == val):
                    raise DomainError(f"intervened column {v} must be constant at {val}")

    @property
    def n_causes(self) -> int:
        return len(self.columns) - 1

    def cause_matrix(self) -> np.ndarray:
        return self.rows[:, : self.n_causes]

    def effect(self) -> np.ndarray:
        return self.rows[:, -1]


def cause_columns(n_causes: int) -> tuple[str, ...]:
    return tuple(f"X{i + 1}" for i in range(n_causes)) + ("Y",)


def ancestral_sample(
    scm: ScmInstance,
    n: int,
    intervention: Config | None = None,
    *,
    rng: int | np.random.Generator,
) -> Dataset:
    """Forward-sample ``n`` records in topological order.

    Intervened causes are clamped to their values and their mechanisms
    skipped; everything downstream reacts through the usual parent lookups.
    Latent confounders are sampled but dropped from the output.
    """
    if n < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(rng)
    t = scm.template
    clamped: dict[int, int] = {}
    if intervention is not None:
        clamped = dict(zip(intervention.vars, intervention.values))
        if any(not 0 <= v < t.n_causes for v in clamped):
            raise DomainError("intervened variables out of range")

    u_cols = np.empty((n, t.n_confounders), dtype=np.int8)
    for m, pu in enumerate(scm.u_probs):
        u_cols[:, m] = rng.random(n) < pu

    x_cols = np.empty((n, t.n_causes), dtype=np.int8)
    for i in t.topological_causes():
        if i in clamped:
            x_cols[:, i] = clamped[i]
            continue
        pidx = np.zeros(n, dtype=np.int64)
        pos = 0
        for m in t.u_parents_of(i):
            pidx |= u_cols[:, m].astype(np.int64) << pos
            pos += 1
        for j in t.x_parents_of(i):
            pidx |= x_cols[:, j].astype(np.int64) << pos
            pos += 1
        x_cols[:, i] = rng.random(n) < np.asarray(scm.x_cpts[i])[pidx]

    pidx = np.zeros(n, dtype=np.int64)
    for pos, j in enumerate(scm.y_parents):
        pidx |= x_cols[:, j].astype(np.int64) << pos
    y_col = (rng.random(n) < np.asarray(scm.y_cpt)[pidx]).astype(np.int8)

    rows = np.column_stack([x_cols, y_col])
    return Dataset(cause_columns(t.n_causes), rows, intervention)


# ---------------------------------------------------------------------------
# empirical averages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintTemplate:
    """A constraint request without targets; filled in from data."""

    kind: ConstraintKind
    cond_set: tuple[int, ...] = ()
    int_set: tuple[int, ...] = ()
    statistic: StatisticTable | None = None


def empirical_averages(
    data: Dataset | Sequence[Dataset], template: ConstraintTemplate
) -> ConstraintSpec:
    """Per-configuration sample means of the effect, shaped as a constraint.

    Marginal and conditional templates read one dataset. Interventional
    templates read one clamped dataset per configuration of the intervened
    set (each dataset's ``intervention`` must match exactly). An empty
    conditioning cell raises :class:`InsufficientDataError`.
    """
    kind = ConstraintKind(template.kind)
    if kind is ConstraintKind.INTERVENTIONAL:
        return _interventional_averages(data, template)
    if not isinstance(data, Dataset):
        raise DomainError("marginal/conditional templates take a single dataset")
    y = data.effect().astype(float)
    if kind is ConstraintKind.MARGINAL:
        stat = template.statistic
        if stat is None:
            return ConstraintSpec.marginal(float(y.mean()))
        x = data.cause_matrix()
        vals = np.array(
            [
                stat.values[(int(yy), tuple(int(x[r, v]) for v in stat.scope))]
                for r, yy in enumerate(data.effect())
            ]
        )
        return ConstraintSpec.marginal(float(vals.mean()), statistic=stat)
    targets = {}
    for cfg in _bits.enumerate_configs(template.cond_set):
        rows = _matching_rows(data, template.cond_set, cfg)
        if not rows.any():
            raise InsufficientDataError(
                f"no observations with vars {template.cond_set} at {cfg}"
            )
        targets[cfg] = float(y[rows].mean())
    return ConstraintSpec.conditional(template.cond_set, targets)


def _matching_rows(ds: Dataset, vars: tuple[int, ...], cfg: tuple[int, ...]) -> np.ndarray:
    keep = np.ones(ds.rows.shape[0], dtype=bool)
    for v, val in zip(vars, cfg):
        keep &= ds.rows[:, v] == val
    return keep


def _interventional_averages(
    data: Dataset | Sequence[Dataset], template: ConstraintTemplate
) -> ConstraintSpec:
    if isinstance(data, Dataset):
        data = [data]
    by_cfg: dict[tuple[int, ...], Dataset] = {}
    for ds in data:
        if ds.intervention is None or ds.intervention.vars != template.int_set:
            raise DomainError(
                f"interventional template over {template.int_set} needs datasets "
                "clamped on exactly that set"
            )
        key = ds.intervention.values
        if key in by_cfg:
            raise DomainError(f"duplicate dataset for intervention config {key}")
        by_cfg[key] = ds
    missing = [c for c in _bits.enumerate_configs(template.int_set) if c not in by_cfg]
    if missing:
        raise DomainError(f"missing clamped datasets for configs {missing}")

    scope = tuple(sorted(template.int_set + template.cond_set))
    targets = {}
    for cfg in _bits.enumerate_configs(scope):
        int_vals = tuple(cfg[scope.index(v)] for v in template.int_set)
        cond_vals = tuple(cfg[scope.index(v)] for v in template.cond_set)
        ds = by_cfg[int_vals]
        rows = _matching_rows(ds, template.cond_set, cond_vals)
        if not rows.any():
            raise InsufficientDataError(
                f"no records with vars {template.cond_set} at {cond_vals} "
                f"under do({template.int_set}={int_vals})"
            )
        targets[cfg] = float(ds.effect()[rows].astype(float).mean())
    return ConstraintSpec.interventional(template.int_set, targets, template.cond_set)


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------


def _do_joint_x(scm: ScmInstance, clamped: Mapping[int, int]) -> np.ndarray:
    """P(x) with the clamped causes' mechanisms removed (latents summed out)."""
    t = scm.template
    d = t.n_causes
    x_idx = np.arange(1 << d)
    total = np.zeros(1 << d)
    for u_idx in range(1 << t.n_confounders):
        u_weight = 1.0
        for m, pu in enumerate(scm.u_probs):
            u_weight *= pu if (u_idx >> m) & 1 else 1.0 - pu
        factor = np.full(1 << d, u_weight)
        for i in range(d):
            xi = (x_idx >> i) & 1
            if i in clamped:
                factor *= xi == clamped[i]
                continue
            pidx = np.zeros(1 << d, dtype=np.int64)
            pos = 0
            for m in t.u_parents_of(i):
                pidx |= ((u_idx >> m) & 1) << pos
                pos += 1
            for j in t.x_parents_of(i):
                pidx |= ((x_idx >> j) & 1) << pos
                pos += 1
            p1 = np.asarray(scm.x_cpts[i])[pidx]
            factor *= np.where(xi, p1, 1.0 - p1)
        total += factor
    return total


def _y_prob_table(scm: ScmInstance) -> np.ndarray:
    """P(Y=1 | x) for every cause configuration."""
    d = scm.template.n_causes
    x_idx = np.arange(1 << d)
    pidx = np.zeros(1 << d, dtype=np.int64)
    for pos, j in enumerate(scm.y_parents):
        pidx |= ((x_idx >> j) & 1) << pos
    return np.asarray(scm.y_cpt)[pidx]


def exact_joint_X(scm: ScmInstance) -> JointTable:
    """Observational P(X) with the latent confounders marginalized out exactly."""
    return JointTable(scm.template.n_causes, _do_joint_x(scm, {}))


def exact_marginals(scm: ScmInstance) -> tuple[float, ...]:
    """Observational P(X_i = 1) for every cause."""
    p = exact_joint_X(scm)
    idx = np.arange(p.probs.size)
    return tuple(
        float(p.probs[(idx >> i) & 1 == 1].sum()) for i in range(p.n_causes)
    )


def exact_query(scm: ScmInstance, c_int: Config, c_cond: Config) -> float:
    """Ground-truth P(Y=1 | do(c_int), c_cond) by truncated factorization."""
    if set(c_int.vars) & set(c_cond.vars):
        raise DomainError("intervened and conditioned sets must be disjoint")
    clamped = dict(zip(c_int.vars, c_int.values))
    joint_do = _do_joint_x(scm, clamped)
    match = _bits.matching_indices(scm.template.n_causes, c_cond.vars, c_cond.values)
    weights = joint_do[match]
    mass = float(weights.sum())
    if mass <= 0.0:
        raise PositivityError("conditioning event has zero probability under the intervention")
    return float(_y_prob_table(scm)[match] @ weights / mass)
