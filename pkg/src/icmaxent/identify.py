"""Admissibility of interventional constraints from the cause-level structure.

An atomic intervention do(X_j) is identifiable from observational quantities
whenever X_j has no directed children among the other causes (its only
potential child is the effect itself); the remaining causes then form a
valid back-door adjustment set. Latent confounders among the causes do not
block this, because by assumption none of them touches the effect.

The set-wise rule extends this: clamping a whole set S is admissible when
every directed child of a member of S is itself inside S, since clamping
removes those internal edges from the generative process. This extension is
validated empirically against truncated-factorization ground truth in the
test suite rather than derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import ConstraintKind, ConstraintSpec, GraphSpec
from .errors import DomainError


@dataclass(frozen=True)
class IdentifiabilityVerdict:
    """Gate decision for one intervened variable or variable set."""

    var: tuple[int, ...]
    admissible: bool
    adjustment_set: tuple[int, ...]
    reason: str

    def __post_init__(self):
        if self.admissible and set(self.adjustment_set) & set(self.var):
            raise DomainError("adjustment set must exclude the intervened variables")


def intervenable(graph: GraphSpec, j: int) -> IdentifiabilityVerdict:
    """Can do(X_j) be expressed through observational quantities?

    Admissible iff X_j has no directed children among the causes; the
    adjustment set is every other cause. Confounder edges at X_j are
    irrelevant to the decision.
    """
    if not 0 <= j < graph.n_causes:
        raise DomainError(f"variable {j} out of range for {graph.n_causes} causes")
    return intervenable_set(graph, (j,))


def intervenable_set(graph: GraphSpec, s: Sequence[int]) -> IdentifiabilityVerdict:
    """Set-wise gate: admissible iff no member has a directed child outside ``s``.

    Children inside ``s`` are harmless because the whole set is clamped
    together; the adjustment set is all causes outside ``s``.
    """
    members = tuple(sorted(set(int(v) for v in s)))
    if not members:
        raise DomainError("intervened set must be nonempty")
    if any(not 0 <= v < graph.n_causes for v in members):
        raise DomainError(f"intervened set {members} out of range")
    inside = set(members)
    adjustment = tuple(v for v in range(graph.n_causes) if v not in inside)
    blocking = sorted(
        (a, b) for a, b in graph.directed_edges if a in inside and b not in inside
    )
    if blocking:
        return IdentifiabilityVerdict(
            var=members,
            admissible=False,
            adjustment_set=(),
            reason="directed-children-outside-set:" + ",".join(f"{a}->{b}" for a, b in blocking),
        )
    return IdentifiabilityVerdict(
        var=members,
        admissible=True,
        adjustment_set=adjustment,
        reason="no-directed-children-outside-set",
    )


def validate_constraints(
    graph: GraphSpec, constraints: Sequence[ConstraintSpec]
) -> list[IdentifiabilityVerdict]:
    """One verdict per constraint; non-interventional kinds are always admissible."""
    verdicts = []
    for spec in constraints:
        if spec.kind is ConstraintKind.INTERVENTIONAL:
            verdicts.append(intervenable_set(graph, spec.int_set))
        else:
            verdicts.append(
                IdentifiabilityVerdict(
                    var=(),
                    admissible=True,
                    adjustment_set=(),
                    reason="observational",
                )
            )
    return verdicts
