"""Maximum-entropy conditional models over binary causes.

Fits exponential-family conditionals P(Y | X) from mixtures of marginal,
conditional, and interventional empirical averages, decides which
interventional constraints are identifiable from the cause-level structure,
scores candidate causal edges from the fitted multipliers, and reproduces
the synthetic benchmarks end to end (see the ``icmaxent`` command line).
"""

from .core import (
    Config,
    ConditionalModel,
    ConstraintKind,
    ConstraintSpec,
    FitReport,
    GraphSpec,
    JointTable,
    MAX_CAUSES,
    StatisticTable,
    condition_joint,
    conditional_entropy,
    conditional_expectation,
    eval_conditional,
    interventional_expectation,
    lambda_manifest,
    marginal_expectation,
    marginalize,
    model_from_table,
    normalize,
    target_vector,
    y_statistic,
)
from .errors import (
    AmbiguityError,
    CapacityError,
    DegenerateLabelsError,
    DomainError,
    IcmaxentError,
    IdentifiabilityError,
    InsufficientDataError,
    InvalidModelError,
    NumericError,
    PositivityError,
    SchemaError,
)
from .identify import IdentifiabilityVerdict, intervenable, intervenable_set, validate_constraints
from .select import RocCurve, ThetaScore, roc, score_all, theta
from .solver import SolverOptions, assemble_residuals, fit, merge_marginals_maxent, smooth_joint
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
    structure_a,
    structure_b,
    structure_c,
)

__all__ = [name for name in dir() if not name.startswith("_")]
