"""Bit-level helpers for dense tables over binary variables.

Conventions used everywhere in the package:

* A full configuration of ``d`` binary variables is an integer index in
  ``[0, 2**d)`` where variable ``i`` occupies bit ``i`` (variable 0 is the
  least significant bit).
* A sub-configuration over a sorted variable subset ``vars`` is a tuple of
  0/1 values, one per variable, in ascending variable order.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np


def mask_of(vars: Sequence[int]) -> int:
    """Bit mask with a 1 at every position in ``vars``."""
    m = 0
    for v in vars:
        m |= 1 << v
    return m


def bits_of(vars: Sequence[int], values: Sequence[int]) -> int:
    """Pack ``values`` (aligned with sorted ``vars``) into their bit positions."""
    b = 0
    for v, x in zip(vars, values):
        if x:
            b |= 1 << v
    return b


def value_of(index: int, var: int) -> int:
    """Value of ``var`` inside the full-configuration ``index``."""
    return (index >> var) & 1


def enumerate_configs(vars: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All value tuples over ``vars`` in lexicographic order.

    ``(0,...,0)`` first, last variable varying fastest; this is the ordering
    used for multiplier vectors and constraint targets.
    """
    yield from product((0, 1), repeat=len(vars))


def matching_indices(n_vars: int, vars: Sequence[int], values: Sequence[int]) -> np.ndarray:
    """Ascending full-configuration indices whose restriction to ``vars`` is ``values``."""
    idx = np.arange(1 << n_vars)
    if not vars:
        return idx
    mask = mask_of(vars)
    bits = bits_of(vars, values)
    return idx[(idx & mask) == bits]


def subconfig_index(indices: np.ndarray, vars: Sequence[int]) -> np.ndarray:
    """Little-endian packed index of ``vars``' bits for each full index.

    Position ``i`` of the packed result corresponds to the ``i``-th smallest
    variable in ``vars``, so ascending full indices with fixed complementary
    bits map to ascending packed indices.
    """
    out = np.zeros(indices.shape, dtype=np.int64)
    for i, v in enumerate(vars):
        out |= ((indices >> v) & 1) << i
    return out


def complement(n_vars: int, vars: Iterable[int]) -> tuple[int, ...]:
    """Sorted variables in ``[0, n_vars)`` not contained in ``vars``."""
    excluded = set(vars)
    return tuple(v for v in range(n_vars) if v not in excluded)
