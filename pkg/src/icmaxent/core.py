"""Domain types and exact evaluation of the conditional exponential family.

The model class is the maximum-conditional-entropy solution for a binary
effect Y given D binary potential causes X: a log-linear form

    P(y | x) = exp( sum of active multiplier terms + beta(x) )

with one Lagrange multiplier per (constraint, target-configuration) pair and
a per-configuration log-normalizer beta(x). A constraint's multiplier for
configuration ``c`` is active at ``x`` exactly when ``x`` restricted to the
constraint's scope equals ``c``; marginal constraints are always active and
contribute their statistic value instead.

Everything here is exact enumeration over the 2**D cause configurations
(dense tables, variable 0 in the least significant bit), which is what makes
the expectation operators and their tests exactly checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import expit, logit, xlogy

from . import _bits
from .errors import (
    CapacityError,
    DomainError,
    IdentifiabilityError,
    InvalidModelError,
    PositivityError,
)

#: Dense-table ceiling: 2**20 configurations is the largest joint we enumerate.
MAX_CAUSES = 20

#: Tolerance on sum(P(x)) when validating a joint table.
_JOINT_SUM_TOL = 1e-9


# ---------------------------------------------------------------------------
# configurations and graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    """An assignment of binary values to a sorted subset of cause variables.

    ``vars`` must be strictly increasing variable indices; ``values`` holds
    one 0/1 value per listed variable.
    """

    vars: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        vars = tuple(int(v) for v in self.vars)
        values = tuple(int(x) for x in self.values)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "values", values)
        if len(vars) != len(values):
            raise DomainError("Config needs one value per variable")
        if any(b < a for a, b in zip(vars, vars[1:])) or len(set(vars)) != len(vars):
            raise DomainError("Config variables must be strictly increasing")
        if any(v < 0 for v in vars):
            raise DomainError("variable indices must be non-negative")
        if any(x not in (0, 1) for x in values):
            raise DomainError("values must be binary")

    @classmethod
    def empty(cls) -> "Config":
        return cls((), ())

    @classmethod
    def full(cls, n_causes: int, index: int) -> "Config":
        """The complete assignment encoded by a dense-table index."""
        vars = tuple(range(n_causes))
        values = tuple((index >> i) & 1 for i in range(n_causes))
        return cls(vars, values)

    def index(self) -> int:
        """Bit pattern of this assignment (values placed at their variable bits)."""
        return _bits.bits_of(self.vars, self.values)

    def union(self, other: "Config") -> "Config":
        """Combined assignment; variable sets must be disjoint."""
        if set(self.vars) & set(other.vars):
            raise DomainError("cannot union overlapping configs")
        merged = sorted(zip(self.vars + other.vars, self.values + other.values))
        return Config(tuple(v for v, _ in merged), tuple(x for _, x in merged))


@dataclass(frozen=True)
class GraphSpec:
    """Known structure among the potential causes.

    ``directed_edges`` are (parent, child) pairs among causes and must be
    acyclic. ``confounder_edges`` are unordered cause pairs sharing a latent
    common parent. The effect Y is an implicit sink: it never appears as a
    source, and no latent confounder touches it. ``y_parents`` is ground
    truth carried along for synthetic benchmarks only; no inference code may
    rely on it.
    """

    n_causes: int
    directed_edges: frozenset[tuple[int, int]] = frozenset()
    confounder_edges: frozenset[tuple[int, int]] = frozenset()
    y_parents: tuple[int, ...] | None = None

    def __post_init__(self):
        d = int(self.n_causes)
        if d < 1:
            raise DomainError("need at least one cause")
        directed = frozenset((int(a), int(b)) for a, b in self.directed_edges)
        conf = frozenset(tuple(sorted((int(a), int(b)))) for a, b in self.confounder_edges)
        object.__setattr__(self, "n_causes", d)
        object.__setattr__(self, "directed_edges", directed)
        object.__setattr__(self, "confounder_edges", conf)
        for a, b in directed | conf:
            if not (0 <= a < d and 0 <= b < d):
                raise DomainError(f"edge ({a},{b}) out of range for {d} causes")
            if a == b:
                raise DomainError("self-loops are not allowed")
        if self.y_parents is not None:
            yp = tuple(sorted(int(v) for v in self.y_parents))
            if any(not 0 <= v < d for v in yp):
                raise DomainError("y_parents out of range")
            object.__setattr__(self, "y_parents", yp)
        self._check_acyclic(d, directed)

    @staticmethod
    def _check_acyclic(d: int, edges: frozenset[tuple[int, int]]) -> None:
        indeg = [0] * d
        children: list[list[int]] = [[] for _ in range(d)]
        for a, b in edges:
            children[a].append(b)
            indeg[b] += 1
        queue = [v for v in range(d) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for c in children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        if seen != d:
            raise DomainError("directed part of the graph has a cycle")

    def children_of(self, var: int) -> tuple[int, ...]:
        return tuple(sorted(b for a, b in self.directed_edges if a == var))

    def without_y_parents(self) -> "GraphSpec":
        """Copy safe to hand to fitting code (ground truth stripped)."""
        if self.y_parents is None:
            return self
        return GraphSpec(self.n_causes, self.directed_edges, self.confounder_edges, None)


# ---------------------------------------------------------------------------
# probability tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointTable:
    """Dense P(X) over all 2**n_causes configurations.

    Entry ``i`` is the probability of the configuration whose bit ``v`` is
    the value of variable ``v`` (variable 0 = least significant bit).
    """

    n_causes: int
    probs: np.ndarray

    def __post_init__(self):
        d = int(self.n_causes)
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "n_causes", d)
        object.__setattr__(self, "probs", probs)
        if d < 0 or d > MAX_CAUSES:
            raise CapacityError(f"{d} causes outside supported range [0, {MAX_CAUSES}]")
        if probs.shape != (1 << d,):
            raise DomainError(f"table needs {1 << d} entries, got {probs.shape}")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise DomainError("probabilities must be finite and non-negative")
        if abs(float(probs.sum()) - 1.0) > _JOINT_SUM_TOL:
            raise DomainError("probabilities must sum to 1")

    @classmethod
    def uniform(cls, n_causes: int) -> "JointTable":
        n = 1 << n_causes
        return cls(n_causes, np.full(n, 1.0 / n))

    def prob_of(self, c: Config) -> float:
        """Probability of the event described by ``c`` (marginal if partial)."""
        return float(self.probs[_bits.matching_indices(self.n_causes, c.vars, c.values)].sum())


def marginalize(p: JointTable, keep: Sequence[int]) -> JointTable:
    """Marginal table over the sorted subset ``keep`` (reindexed from 0)."""
    keep = tuple(sorted(int(v) for v in keep))
    if any(not 0 <= v < p.n_causes for v in keep):
        raise DomainError("keep set out of range")
    sub = _bits.subconfig_index(np.arange(p.probs.size), keep)
    out = np.bincount(sub, weights=p.probs, minlength=1 << len(keep))
    return JointTable(len(keep), out)


def condition_joint(p: JointTable, c: Config) -> JointTable:
    """P of the complementary variables given the event ``c``.

    The result is a table over the causes not mentioned in ``c`` (reindexed
    from 0, original order preserved). Conditioning on a zero-probability
    event raises :class:`PositivityError`; smooth the table first if zeros
    are possible.
    """
    if any(not 0 <= v < p.n_causes for v in c.vars):
        raise DomainError("conditioning variables out of range")
    match = _bits.matching_indices(p.n_causes, c.vars, c.values)
    mass = float(p.probs[match].sum())
    if mass <= 0.0:
        raise PositivityError(
            f"conditioning event {c.values} on vars {c.vars} has zero probability; "
            "positivity (P(x) > 0 for all x) is required - smooth the joint first"
        )
    comp = _bits.complement(p.n_causes, c.vars)
    # ascending matching indices enumerate the complement little-endian
    return JointTable(len(comp), p.probs[match] / mass)


# ---------------------------------------------------------------------------
# statistics and constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StatisticTable:
    """A real-valued statistic f(y, x_S) over a sorted cause subset S.

    ``values`` maps ``(y, values_tuple)`` to the statistic value, where
    ``values_tuple`` assigns one 0/1 value per scope variable in ascending
    order; all ``2 * 2**len(scope)`` inputs must be present.
    """

    scope: tuple[int, ...]
    values: Mapping[tuple[int, tuple[int, ...]], float]

    def __post_init__(self):
        scope = tuple(int(v) for v in self.scope)
        object.__setattr__(self, "scope", scope)
        if any(b <= a for a, b in zip(scope, scope[1:])):
            raise DomainError("statistic scope must be strictly increasing")
        expected = {(y, cfg) for y in (0, 1) for cfg in _bits.enumerate_configs(scope)}
        if set(self.values.keys()) != expected:
            raise DomainError("statistic must be defined for all (y, config) inputs")
        object.__setattr__(self, "values", dict(self.values))


def y_statistic() -> StatisticTable:
    """The default statistic f(y, .) = y (scope-free)."""
    return StatisticTable((), {(0, ()): 0.0, (1, ()): 1.0})


class ConstraintKind(str, Enum):
    MARGINAL = "marginal"
    CONDITIONAL = "conditional"
    INTERVENTIONAL = "interventional"


@dataclass(frozen=True)
class ConstraintSpec:
    """One empirical-average constraint.

    * ``marginal``: a single scalar target for E[f(Y, X_S)] under the joint;
      carries an explicit statistic (default: the Y indicator).
    * ``conditional``: targets E[Y | x_{cond_set} = c] for every configuration
      ``c`` of ``cond_set``.
    * ``interventional``: targets E[Y | do(x_{int_set}), x_{cond_set}] for
      every configuration of ``int_set + cond_set`` (disjoint sets).

    ``targets`` is keyed by the value tuple over the constraint's scope in
    ascending variable order; the scope is ``cond_set`` for conditionals,
    the sorted union for interventionals, and empty for marginals.
    """

    kind: ConstraintKind
    cond_set: tuple[int, ...] = ()
    int_set: tuple[int, ...] = ()
    targets: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    statistic: StatisticTable | None = None

    def __post_init__(self):
        kind = ConstraintKind(self.kind)
        cond = tuple(sorted(int(v) for v in self.cond_set))
        intv = tuple(sorted(int(v) for v in self.int_set))
        targets = {tuple(int(x) for x in k): float(v) for k, v in self.targets.items()}
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "cond_set", cond)
        object.__setattr__(self, "int_set", intv)
        object.__setattr__(self, "targets", targets)
        if len(set(cond)) != len(cond) or len(set(intv)) != len(intv):
            raise DomainError("constraint variable sets must not repeat variables")
        if set(cond) & set(intv):
            raise DomainError("int_set and cond_set must be disjoint")
        if kind is ConstraintKind.MARGINAL:
            if cond or intv:
                raise DomainError("marginal constraints take no conditioning sets")
            if set(targets.keys()) != {()}:
                raise DomainError("marginal constraints have exactly one scalar target")
            if self.statistic is None:
                object.__setattr__(self, "statistic", y_statistic())
        else:
            if self.statistic is not None:
                raise DomainError("only marginal constraints carry an explicit statistic")
            if kind is ConstraintKind.CONDITIONAL:
                if intv or not cond:
                    raise DomainError("conditional constraints need a nonempty cond_set only")
            else:
                if not intv:
                    raise DomainError("interventional constraints need a nonempty int_set")
            expected = set(_bits.enumerate_configs(self.scope))
            if set(targets.keys()) != expected:
                raise DomainError("targets must cover every configuration of the scope")
            if any(not 0.0 <= v <= 1.0 for v in targets.values()):
                raise DomainError("conditional/interventional targets must lie in [0, 1]")

    @property
    def scope(self) -> tuple[int, ...]:
        """Variables whose configuration selects the active multiplier."""
        if self.kind is ConstraintKind.MARGINAL:
            return ()
        return tuple(sorted(self.cond_set + self.int_set))

    @classmethod
    def marginal(cls, value: float, statistic: StatisticTable | None = None) -> "ConstraintSpec":
        return cls(ConstraintKind.MARGINAL, targets={(): value}, statistic=statistic)

    @classmethod
    def conditional(
        cls, cond_set: Sequence[int], targets: Mapping[tuple[int, ...], float]
    ) -> "ConstraintSpec":
        return cls(ConstraintKind.CONDITIONAL, cond_set=tuple(cond_set), targets=targets)

    @classmethod
    def interventional(
        cls,
        int_set: Sequence[int],
        targets: Mapping[tuple[int, ...], float],
        cond_set: Sequence[int] = (),
    ) -> "ConstraintSpec":
        return cls(
            ConstraintKind.INTERVENTIONAL,
            cond_set=tuple(cond_set),
            int_set=tuple(int_set),
            targets=targets,
        )


def lambda_manifest(constraints: Sequence[ConstraintSpec]) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Fixed ordering of the multiplier vector.

    Entries run over constraints in declaration order, and within each
    constraint over its scope configurations in lexicographic order (all
    zeros first, last scope variable varying fastest). Marginal constraints
    contribute a single entry with the empty configuration.
    """
    manifest: list[tuple[int, tuple[int, ...]]] = []
    for i, spec in enumerate(constraints):
        if spec.kind is ConstraintKind.MARGINAL:
            manifest.append((i, ()))
        else:
            manifest.extend((i, cfg) for cfg in _bits.enumerate_configs(spec.scope))
    return tuple(manifest)


def target_vector(constraints: Sequence[ConstraintSpec]) -> np.ndarray:
    """Empirical-average targets flattened in multiplier order."""
    return np.array(
        [constraints[i].targets[cfg] for i, cfg in lambda_manifest(constraints)], dtype=float
    )


def _statistic_arrays(stat: StatisticTable, n_causes: int) -> tuple[np.ndarray, np.ndarray]:
    """Statistic values per full configuration, for y=0 and y=1."""
    sub = _bits.subconfig_index(np.arange(1 << n_causes), stat.scope)
    table = np.empty((2, 1 << len(stat.scope)))
    for (y, cfg), v in stat.values.items():
        table[y, _bits.bits_of(range(len(cfg)), cfg)] = v
    return table[0, sub], table[1, sub]


def _design(
    constraints: Sequence[ConstraintSpec], n_causes: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-multiplier sufficient statistics over all configurations.

    Returns ``(base0, base1)`` of shape (n_multipliers, 2**n_causes): entry
    ``[m, x]`` is the statistic value multiplying lambda_m in the log-linear
    exponent when Y = 0 resp. Y = 1 at cause configuration ``x``.
    """
    n = 1 << n_causes
    manifest = lambda_manifest(constraints)
    base0 = np.zeros((len(manifest), n))
    base1 = np.zeros((len(manifest), n))
    idx = np.arange(n)
    for m, (i, cfg) in enumerate(manifest):
        spec = constraints[i]
        if spec.kind is ConstraintKind.MARGINAL:
            assert spec.statistic is not None
            f0, f1 = _statistic_arrays(spec.statistic, n_causes)
            base0[m] = f0
            base1[m] = f1
        else:
            scope = spec.scope
            if any(v >= n_causes for v in scope):
                raise DomainError("constraint scope exceeds the number of causes")
            active = (idx & _bits.mask_of(scope)) == _bits.bits_of(scope, cfg)
            # default statistic f(y, .) = y: only the y=1 row is nonzero
            base1[m, active] = 1.0
    return base0, base1


# ---------------------------------------------------------------------------
# the conditional model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalModel:
    """A normalized conditional distribution P(Y=1 | x) in log-linear form.

    ``lam`` follows :func:`lambda_manifest` ordering, ``log_norm`` holds
    beta(x) for every configuration, and ``logits`` caches the two exponent
    rows (y=0, y=1). Build instances with :func:`normalize`.
    """

    n_causes: int
    constraints: tuple[ConstraintSpec, ...]
    lam: np.ndarray
    log_norm: np.ndarray | None = None
    logits: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "lam", np.asarray(self.lam, dtype=float))
        expected = len(lambda_manifest(self.constraints))
        if self.lam.shape != (expected,):
            raise DomainError(f"lambda must have {expected} entries, got {self.lam.shape}")

    def _require_normalized(self) -> np.ndarray:
        if self.log_norm is None or self.logits is None:
            raise InvalidModelError("model has no populated normalizer; call normalize()")
        if self.log_norm.shape != (1 << self.n_causes,):
            raise InvalidModelError("normalizer table has the wrong size")
        return self.logits

    def prob_y1(self) -> np.ndarray:
        """P(Y=1 | x) for every configuration ``x`` (dense vector)."""
        logits = self._require_normalized()
        return expit(logits[1] - logits[0])


def normalize(
    constraints: Sequence[ConstraintSpec],
    lam: Sequence[float] | np.ndarray,
    n_causes: int,
    max_causes: int = MAX_CAUSES,
) -> ConditionalModel:
    """Compute beta(x) by enumeration and return the normalized model.

    beta(x) = -log sum_y exp(active terms at (y, x)), so that the two
    conditional probabilities at each x sum to one.
    """
    if n_causes < 1:
        raise DomainError("need at least one cause")
    if n_causes > max_causes:
        raise CapacityError(
            f"{n_causes} causes exceeds the enumeration ceiling of {max_causes}"
        )
    lam = np.asarray(lam, dtype=float)
    base0, base1 = _design(constraints, n_causes)
    if lam.shape != (base0.shape[0],):
        raise DomainError(f"lambda must have {base0.shape[0]} entries, got {lam.shape}")
    logits = np.stack([lam @ base0, lam @ base1])
    log_norm = -np.logaddexp(logits[0], logits[1])
    return ConditionalModel(
        n_causes=n_causes,
        constraints=tuple(constraints),
        lam=lam,
        log_norm=log_norm,
        logits=logits,
    )


def model_from_table(probs: Sequence[float] | np.ndarray) -> ConditionalModel:
    """Model reproducing an explicit P(Y=1 | x) table (entries in (0, 1)).

    Encoded as one conditional constraint over all causes, multiplier
    logit(p) per configuration; handy for tests and for wrapping exact
    ground-truth conditionals.
    """
    probs = np.asarray(probs, dtype=float)
    n = probs.size
    d = int(n).bit_length() - 1
    if n != 1 << d or d < 1:
        raise DomainError("table length must be a power of two with at least one cause")
    if np.any(probs <= 0.0) or np.any(probs >= 1.0):
        raise DomainError("table entries must lie strictly inside (0, 1)")
    scope = tuple(range(d))
    targets = {cfg: float(probs[_bits.bits_of(scope, cfg)]) for cfg in _bits.enumerate_configs(scope)}
    spec = ConstraintSpec.conditional(scope, targets)
    lam = np.array([logit(targets[cfg]) for cfg in _bits.enumerate_configs(scope)])
    return normalize([spec], lam, d)


# ---------------------------------------------------------------------------
# expectations
# ---------------------------------------------------------------------------


def eval_conditional(model: ConditionalModel, x: Config) -> float:
    """P(Y=1 | x) for a complete cause assignment ``x``."""
    model._require_normalized()
    if x.vars != tuple(range(model.n_causes)):
        raise DomainError("eval_conditional needs a full assignment of all causes")
    return float(model.prob_y1()[x.index()])


def conditional_expectation(model: ConditionalModel, p: JointTable, c: Config) -> float:
    """E[Y | x_{c.vars} = c.values] under the model and the joint ``p``.

    Averages P(Y=1 | c, x_rest) over P(x_rest | c); with ``c`` covering all
    causes this reduces to :func:`eval_conditional`.
    """
    _check_compatible(model, p)
    match = _bits.matching_indices(p.n_causes, c.vars, c.values)
    return _weighted_mean(model.prob_y1()[match], p.probs[match])


def interventional_expectation(
    model: ConditionalModel,
    p: JointTable,
    c_int: Config,
    c_cond: Config,
    graph: GraphSpec,
    allow_unidentifiable: bool = False,
) -> float:
    """E[Y | do(x_{int}), x_{cond}] via back-door adjustment.

    With R the causes outside both sets, returns
    ``sum_{x_R} P(Y=1 | c_int, c_cond, x_R) * P(x_R | c_cond)`` where the
    adjustment weights marginalize the intervened variables out of ``p``.
    The intervened set must pass the identifiability gate for ``graph``
    unless ``allow_unidentifiable`` is set.
    """
    from .identify import intervenable_set

    _check_compatible(model, p)
    if set(c_int.vars) & set(c_cond.vars):
        raise DomainError("intervened and conditioned sets must be disjoint")
    verdict = intervenable_set(graph, c_int.vars)
    if not verdict.admissible and not allow_unidentifiable:
        raise IdentifiabilityError(
            f"do({verdict.var}) is not identifiable from the given structure "
            f"({verdict.reason}); pass allow_unidentifiable=True to override"
        )
    joint_cfg = c_int.union(c_cond)
    match = _bits.matching_indices(p.n_causes, joint_cfg.vars, joint_cfg.values)
    # adjustment weight for x_R: P(x_R, c_cond) with int vars marginalized out
    keep = _bits.complement(p.n_causes, c_int.vars)
    kept_joint = marginalize(p, keep)
    weights = kept_joint.probs[_bits.subconfig_index(match, keep)]
    return _weighted_mean(model.prob_y1()[match], weights)


def _weighted_mean(p1: np.ndarray, weights: np.ndarray) -> float:
    """Normalized weighted mean, centered so a uniform model yields exactly 0.5."""
    mass = float(weights.sum())
    if mass <= 0.0:
        raise PositivityError(
            "conditioning event has zero probability; smooth the joint first"
        )
    return 0.5 + float((p1 - 0.5) @ weights) / mass


def marginal_expectation(
    model: ConditionalModel, p: JointTable, statistic: StatisticTable
) -> float:
    """E[f(Y, X_S)] under P(y | x) P(x)."""
    _check_compatible(model, p)
    f0, f1 = _statistic_arrays(statistic, p.n_causes)
    p1 = model.prob_y1()
    return float(p.probs @ (p1 * f1 + (1.0 - p1) * f0))


def conditional_entropy(model: ConditionalModel, p: JointTable) -> float:
    """Shannon conditional entropy H(Y | X) in nats (zero-probability terms vanish)."""
    _check_compatible(model, p)
    p1 = model.prob_y1()
    per_x = -(xlogy(p1, p1) + xlogy(1.0 - p1, 1.0 - p1))
    return float(p.probs @ per_x)


def _check_compatible(model: ConditionalModel, p: JointTable) -> None:
    model._require_normalized()
    if model.n_causes != p.n_causes:
        raise DomainError(
            f"model over {model.n_causes} causes cannot use a joint over {p.n_causes}"
        )


# ---------------------------------------------------------------------------
# fit report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitReport:
    """Outcome of one solver run: achieved residual norm and bookkeeping."""

    residual_norm: float
    restarts: int
    converged: bool
    conditional_entropy: float

    def __post_init__(self):
        if self.residual_norm < 0:
            raise DomainError("residual norm cannot be negative")
        if self.restarts < 0:
            raise DomainError("restart count cannot be negative")
