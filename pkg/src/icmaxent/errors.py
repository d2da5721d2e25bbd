"""Exception hierarchy shared across the package.

Every error raised by the public API derives from :class:`IcmaxentError`, so
callers can catch one base class. Subclasses carry the failure semantics
(positivity violations, identifiability refusals, capacity limits, ...).
"""

from __future__ import annotations


class IcmaxentError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(IcmaxentError, ValueError):
    """An argument is outside its documented domain (wrong range, shape, ...)."""


class CapacityError(IcmaxentError):
    """The number of causes exceeds the dense-enumeration ceiling."""


class PositivityError(IcmaxentError):
    """A conditioning event has probability zero.

    All conditional operations require the positivity assumption
    P(x) > 0 for every configuration; apply epsilon smoothing to the
    joint table before conditioning on events that may have zero mass.
    """


class InvalidModelError(IcmaxentError):
    """A conditional model is structurally unusable (e.g. missing normalizer)."""


class IdentifiabilityError(IcmaxentError):
    """An interventional quantity was requested for an inadmissible set."""


class AmbiguityError(IcmaxentError):
    """A variable carries competing single-variable constraints."""


class DegenerateLabelsError(IcmaxentError):
    """ROC input contains only positive or only negative labels."""


class InsufficientDataError(IcmaxentError):
    """An empirical average could not be formed (empty conditioning cell)."""


class NumericError(IcmaxentError):
    """A numeric failure (NaN/inf) occurred inside the optimizer."""


class SchemaError(IcmaxentError):
    """An input file does not match the documented schema."""
