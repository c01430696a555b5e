"""Lower-bound datasets and the query classifiers used to audit crawls against them.

The categorical construction is written with 0-based values ``0..U-1`` and
shifted by :data:`CATEGORICAL_SHIFT` into the ``1..U`` codes every other
module uses; attribute labels keep the 0-based names.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .core import AttributeSpec, ConfigurationError, ContractViolation, Dataset, Query, Schema

__all__ = [
    "CATEGORICAL_SHIFT",
    "NumericHardParams",
    "CategoricalHardParams",
    "gen_numeric_hard",
    "gen_categorical_hard",
    "non_diagonal_points",
    "is_diverse",
    "is_monotonic",
    "bichromatic_set",
    "numeric_floor",
    "CoverageAudit",
    "audit_numeric_coverage",
    "audit_categorical_coverage",
]

CATEGORICAL_SHIFT = 1
BICHROMATIC_CAP = 1 << 20


@dataclass(frozen=True)
class NumericHardParams:
    k: int
    d: int
    m: int

    def __post_init__(self):
        if min(self.k, self.d, self.m) < 1:
            raise ConfigurationError("k, d, m must be positive")
        if self.d > self.k:
            raise ConfigurationError(f"need d <= k, got d={self.d}, k={self.k}")

    @property
    def n(self) -> int:
        return self.m * (self.k + self.d)


@dataclass(frozen=True)
class CategoricalHardParams:
    k: int
    U: int

    def __post_init__(self):
        if self.U < 3 or self.k < 3:
            raise ConfigurationError(f"need U >= 3 and k >= 3, got U={self.U}, k={self.k}")

    @property
    def d(self) -> int:
        return 2 * self.k

    @property
    def n(self) -> int:
        return self.d * self.U

    def premise_holds(self) -> bool:
        """Whether ``d * U**2 <= 2**(d/4)``, the size premise of the lower bound."""
        return self.d * self.U**2 <= 2 ** (self.d / 4)


def gen_numeric_hard(p: NumericHardParams, seed: int = 0) -> Dataset:
    """``m`` groups on ``[1, m+1]^d``: ``k`` tuples at ``(i,..,i)`` plus one per attribute bumped to ``i+1``."""
    rows = []
    for i in range(1, p.m + 1):
        rows.extend([(i,) * p.d] * p.k)
        for j in range(p.d):
            row = [i] * p.d
            row[j] = i + 1
            rows.append(tuple(row))
    schema = Schema(tuple(AttributeSpec.numeric(f"A{j + 1}", 1, p.m + 1) for j in range(p.d)))
    return Dataset.from_rows(schema, rows, seed=seed)


def non_diagonal_points(p: NumericHardParams) -> list[tuple[int, ...]]:
    pts = []
    for i in range(1, p.m + 1):
        for j in range(p.d):
            row = [i] * p.d
            row[j] = i + 1
            pts.append(tuple(row))
    return pts


def numeric_floor(p: NumericHardParams) -> int:
    """Queries any correct crawler must spend on :func:`gen_numeric_hard`."""
    return p.d * p.m


def gen_categorical_hard(p: CategoricalHardParams, seed: int = 0) -> Dataset:
    """``U`` groups of ``d = 2k`` tuples; in group ``i`` the ``j``-th tuple has ``(i+1) mod U`` on ``A_j``."""
    if not p.premise_holds():
        warnings.warn(
            f"d*U^2 = {p.d * p.U**2} exceeds 2^(d/4) = {2 ** (p.d / 4):.1f}; "
            "the instance is still usable for the brute-force checks",
            stacklevel=2,
        )
    rows = []
    for i in range(p.U):
        for j in range(p.d):
            row = [i] * p.d
            row[j] = (i + 1) % p.U
            rows.append(tuple(v + CATEGORICAL_SHIFT for v in row))
    labels = [str(v) for v in range(p.U)]
    schema = Schema(tuple(AttributeSpec.categorical(f"A{j + 1}", p.U, labels) for j in range(p.d)))
    return Dataset.from_rows(schema, rows, seed=seed)


def _constants(q: Query | Iterable) -> list[int]:
    preds = q.preds if isinstance(q, Query) else tuple(q)
    out = []
    for p in preds:
        if isinstance(p, tuple):
            raise ContractViolation("diverse/monotonic classification applies to categorical queries only")
        if p is not None:
            out.append(p)
    return out


def is_diverse(q: Query) -> bool:
    """At least two constant predicates with different constants."""
    return len(set(_constants(q))) >= 2


def is_monotonic(q: Query) -> bool:
    """At least two constant predicates, all with the same constant."""
    cs = _constants(q)
    return len(cs) >= 2 and len(set(cs)) == 1


def bichromatic_set(x: int, y: int, d: int, U: int, *, base: int = 0, cap: int = BICHROMATIC_CAP) -> set[tuple[int, ...]]:
    """Points using only ``x`` and ``y``, minus the two constant points.

    Values are taken in ``base..base+U-1``.  Refuses when ``2**d`` exceeds
    ``cap``.
    """
    if x == y:
        raise ContractViolation("bichromatic set needs two different values")
    for v in (x, y):
        if not base <= v < base + U:
            raise ContractViolation(f"value {v} outside {base}..{base + U - 1}")
    if 2**d > cap:
        raise ContractViolation(f"2^{d} points exceeds the enumeration cap {cap}")
    pts = set(itertools.product((x, y), repeat=d))
    pts.discard((x,) * d)
    pts.discard((y,) * d)
    return pts


class CoverageAudit(NamedTuple):
    """Outcome of a post-hoc coverage audit over a query log.

    ``uncovered`` lists points no resolved query covers; ``shared`` lists
    ``(log index, points)`` for resolved queries covering more than one audited
    point (only the numeric audit fills it).
    """

    uncovered: list
    shared: list

    @property
    def ok(self) -> bool:
        return not self.uncovered and not self.shared


def _resolved(log) -> list[tuple[int, Query]]:
    return [(i, e.query) for i, e in enumerate(log) if not e.overflowed]


def audit_numeric_coverage(log, p: NumericHardParams) -> CoverageAudit:
    """Every non-diagonal point needs its own resolved query."""
    pts = non_diagonal_points(p)
    arr = np.array(pts, dtype=np.int64)
    covered = np.zeros(len(pts), dtype=bool)
    shared = []
    for idx, q in _resolved(log):
        hit = q.mask(arr)
        if hit.sum() > 1:
            shared.append((idx, [pts[j] for j in np.flatnonzero(hit)]))
        covered |= hit
    return CoverageAudit([pts[j] for j in np.flatnonzero(~covered)], shared)


def audit_categorical_coverage(log, schema: Schema, *, cap: int = BICHROMATIC_CAP) -> CoverageAudit:
    """Every point of the (categorical) data space must lie in some resolved query."""
    sizes = [a.size for a in schema.attributes]
    total = math.prod(sizes)
    if total > cap:
        raise ContractViolation(f"{total} points exceeds the enumeration cap {cap}")
    grid = np.array(list(itertools.product(*[range(1, s + 1) for s in sizes])), dtype=np.int64)
    covered = np.zeros(len(grid), dtype=bool)
    for _, q in _resolved(log):
        covered |= q.mask(grid)
    return CoverageAudit([tuple(int(v) for v in grid[j]) for j in np.flatnonzero(~covered)], [])
