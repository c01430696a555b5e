"""Schema, tuples, queries and predicate evaluation.

Every other module speaks in these terms.  Values are plain Python ints at the
API surface and ``int64`` numpy arrays inside the dataset.  Categorical
attributes take values ``1..U``; a categorical predicate is either an ``int``
constant or :data:`WILDCARD` (``None``).  A numeric predicate is an inclusive
``(x, y)`` pair.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "WILDCARD",
    "NUMERIC",
    "CATEGORICAL",
    "ContractViolation",
    "ConfigurationError",
    "UnsolvableInstance",
    "AttributeSpec",
    "Schema",
    "Query",
    "Dataset",
    "matches",
    "full_space_query",
    "normalize_attributes",
]

WILDCARD = None
NUMERIC = "numeric"
CATEGORICAL = "categorical"

INT64_MIN = int(np.iinfo(np.int64).min)
INT64_MAX = int(np.iinfo(np.int64).max)


class ContractViolation(ValueError):
    """A caller broke a precondition (bad query, schema mismatch, ...)."""


class ConfigurationError(ValueError):
    """A crawler or server was configured with unusable parameters."""


class UnsolvableInstance(RuntimeError):
    """A query pinned to a single point still overflows.

    That point holds more than ``k`` identical tuples, so no crawler can ever
    certify it has seen all of them.
    """

    def __init__(self, point: Sequence[int], count: int | None = None):
        self.point = tuple(int(v) for v in point)
        self.count = count
        msg = f"point {self.point} overflows"
        if count is not None:
            msg += f" ({count} tuples)"
        super().__init__(msg)


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute: numeric with inclusive ``[lo, hi]`` or categorical ``1..U``.

    ``labels`` optionally holds the original categorical strings, where
    ``labels[c - 1]`` is the label of code ``c``.
    """

    name: str
    kind: str
    lo: int = 1
    hi: int = 1
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ContractViolation(f"unknown attribute kind {self.kind!r}")
        if not (INT64_MIN <= self.lo <= self.hi <= INT64_MAX):
            raise ContractViolation(f"{self.name}: need lo <= hi within int64, got [{self.lo}, {self.hi}]")
        if self.kind == CATEGORICAL:
            if self.lo != 1:
                raise ContractViolation(f"{self.name}: categorical codes start at 1")
            if self.labels is not None and len(self.labels) != self.hi:
                raise ContractViolation(f"{self.name}: {len(self.labels)} labels for domain size {self.hi}")

    @classmethod
    def numeric(cls, name: str, lo: int, hi: int) -> "AttributeSpec":
        return cls(name, NUMERIC, int(lo), int(hi))

    @classmethod
    def categorical(cls, name: str, size: int, labels: Sequence[str] | None = None) -> "AttributeSpec":
        if size < 1:
            raise ContractViolation(f"{name}: domain size must be >= 1")
        return cls(name, CATEGORICAL, 1, int(size), tuple(labels) if labels is not None else None)

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @property
    def is_categorical(self) -> bool:
        return self.kind == CATEGORICAL

    @property
    def size(self) -> int:
        """Number of values in the domain (``U`` for categorical)."""
        return self.hi - self.lo + 1

    def code(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise ContractViolation(f"{self.name}: unknown label {label!r}") from None

    def label(self, code: int) -> str:
        if self.labels is None:
            return str(code)
        return self.labels[code - 1]


def normalize_attributes(attributes: Sequence[AttributeSpec]) -> tuple[list[AttributeSpec], list[int]]:
    """Stable-reorder so categorical attributes come first.

    Returns the reordered list and ``perm`` with ``new[i] = old[perm[i]]``.
    """
    perm = [i for i, a in enumerate(attributes) if a.is_categorical]
    perm += [i for i, a in enumerate(attributes) if a.is_numeric]
    return [attributes[i] for i in perm], perm


@dataclass(frozen=True)
class Schema:
    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ContractViolation("schema needs at least one attribute")
        kinds = [a.kind for a in self.attributes]
        if CATEGORICAL in kinds[self.cat:]:
            raise ContractViolation("categorical attributes must precede numeric ones; use normalize_attributes")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ContractViolation("duplicate attribute names")

    @property
    def d(self) -> int:
        return len(self.attributes)

    @property
    def cat(self) -> int:
        n = 0
        for a in self.attributes:
            if not a.is_categorical:
                break
            n += 1
        return n

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    @property
    def numeric_indices(self) -> range:
        return range(self.cat, self.d)

    @property
    def is_numeric(self) -> bool:
        return self.cat == 0

    @property
    def is_categorical(self) -> bool:
        return self.cat == self.d

    @property
    def is_mixed(self) -> bool:
        return 0 < self.cat < self.d

    def domain_sizes(self) -> list[int]:
        """``U_i`` of the categorical prefix."""
        return [a.size for a in self.attributes[: self.cat]]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __getitem__(self, i: int) -> AttributeSpec:
        return self.attributes[i]

    def __len__(self) -> int:
        return self.d


@dataclass(frozen=True)
class Query:
    """One predicate per attribute.

    A numeric predicate is an inclusive ``(x, y)`` tuple; a categorical one is
    an ``int`` constant or ``WILDCARD``.  Numeric-only queries double as the
    axis-parallel boxes the numeric crawlers split.
    """

    preds: tuple

    def __post_init__(self):
        preds = []
        for p in self.preds:
            if p is None:
                preds.append(None)
            elif isinstance(p, (tuple, list)):
                x, y = p
                preds.append((int(x), int(y)))
            else:
                preds.append(int(p))
        object.__setattr__(self, "preds", tuple(preds))

    def __len__(self) -> int:
        return len(self.preds)

    def __getitem__(self, i: int):
        return self.preds[i]

    def replace(self, i: int, pred) -> "Query":
        preds = list(self.preds)
        preds[i] = pred
        return Query(tuple(preds))

    def extent(self, i: int) -> tuple[int, int]:
        """Inclusive range a tuple's ``i``-th value must fall in (numeric or constant)."""
        p = self.preds[i]
        if p is None:
            return (INT64_MIN, INT64_MAX)
        if isinstance(p, tuple):
            return p
        return (p, p)

    def exhausted(self, i: int) -> bool:
        p = self.preds[i]
        if p is None:
            return False
        if isinstance(p, tuple):
            return p[0] == p[1]
        return True

    def constants(self) -> list[tuple[int, int]]:
        """``(attribute, constant)`` for every categorical non-wildcard predicate."""
        return [(i, p) for i, p in enumerate(self.preds) if isinstance(p, int)]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        ext = [self.extent(i) for i in range(len(self.preds))]
        lo = np.array([e[0] for e in ext], dtype=np.int64)
        hi = np.array([e[1] for e in ext], dtype=np.int64)
        return lo, hi

    def mask(self, values: np.ndarray) -> np.ndarray:
        """Boolean row mask of ``values`` (shape ``(n, d)``) matching this query."""
        if values.ndim != 2 or values.shape[1] != len(self.preds):
            raise ContractViolation(f"query has {len(self.preds)} predicates, data has shape {values.shape}")
        lo, hi = self.bounds()
        return np.all((values >= lo) & (values <= hi), axis=1)

    def validate(self, schema: Schema) -> None:
        if len(self.preds) != schema.d:
            raise ContractViolation(f"query has {len(self.preds)} predicates for a {schema.d}-attribute schema")
        for a, p in zip(schema.attributes, self.preds):
            if a.is_numeric:
                if not isinstance(p, tuple):
                    raise ContractViolation(f"{a.name}: numeric attribute needs an interval, got {p!r}")
                x, y = p
                if x > y:
                    raise ContractViolation(f"{a.name}: empty interval [{x}, {y}]")
                if x < a.lo or y > a.hi:
                    raise ContractViolation(f"{a.name}: [{x}, {y}] outside [{a.lo}, {a.hi}]")
            else:
                if isinstance(p, tuple):
                    raise ContractViolation(f"{a.name}: categorical attribute takes a constant or wildcard")
                if p is not None and not 1 <= p <= a.size:
                    raise ContractViolation(f"{a.name}: constant {p} outside 1..{a.size}")

    def to_json(self) -> list:
        return [list(p) if isinstance(p, tuple) else p for p in self.preds]

    @classmethod
    def from_json(cls, preds: Iterable) -> "Query":
        return cls(tuple(tuple(p) if isinstance(p, list) else p for p in preds))

    def __str__(self) -> str:
        parts = []
        for i, p in enumerate(self.preds, 1):
            if p is None:
                parts.append(f"A{i}=*")
            elif isinstance(p, tuple):
                parts.append(f"A{i} in [{p[0]},{p[1]}]")
            else:
                parts.append(f"A{i}={p}")
        return "(" + ", ".join(parts) + ")"


def matches(q: Query, t: Sequence[int]) -> bool:
    if len(q.preds) != len(t):
        raise ContractViolation(f"query has {len(q.preds)} predicates, tuple has {len(t)} values")
    for p, v in zip(q.preds, t):
        if p is None:
            continue
        if isinstance(p, tuple):
            if not p[0] <= v <= p[1]:
                return False
        elif v != p:
            return False
    return True


def full_space_query(schema: Schema) -> Query:
    return Query(tuple((a.lo, a.hi) if a.is_numeric else WILDCARD for a in schema.attributes))


@dataclass(frozen=True, eq=False)
class Dataset:
    """A bag of tuples with server-private ids and priorities.

    Higher priority wins when the server truncates an overflowing result.
    When ``priorities`` is omitted a seeded random permutation of ``0..n-1``
    is used.
    """

    schema: Schema
    values: np.ndarray
    ids: np.ndarray = field(default=None)
    priorities: np.ndarray = field(default=None)
    seed: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, self.schema.d)
        if values.ndim != 2 or values.shape[1] != self.schema.d:
            raise ContractViolation(f"values of shape {values.shape} do not fit a {self.schema.d}-attribute schema")
        n = values.shape[0]
        ids = np.arange(n, dtype=np.int64) if self.ids is None else np.asarray(self.ids, dtype=np.int64)
        if self.priorities is None:
            pri = np.random.default_rng(self.seed).permutation(n).astype(np.int64)
        else:
            pri = np.asarray(self.priorities, dtype=np.int64)
        if ids.shape != (n,) or pri.shape != (n,):
            raise ContractViolation("ids and priorities need one entry per tuple")
        if len(np.unique(ids)) != n:
            raise ContractViolation("tuple ids must be distinct")
        if len(np.unique(pri)) != n:
            raise ContractViolation("priorities must be distinct")
        lo = np.array([a.lo for a in self.schema.attributes], dtype=np.int64)
        hi = np.array([a.hi for a in self.schema.attributes], dtype=np.int64)
        bad = np.flatnonzero(~np.all((values >= lo) & (values <= hi), axis=1))
        if bad.size:
            raise ContractViolation(f"tuple {tuple(values[bad[0]])} lies outside the schema domain")
        for arr in (values, ids, pri):
            arr.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "priorities", pri)

    @classmethod
    def from_rows(cls, schema: Schema, rows: Iterable[Sequence[int]], **kw) -> "Dataset":
        rows = [tuple(r) for r in rows]
        return cls(schema, np.array(rows, dtype=np.int64).reshape(len(rows), schema.d), **kw)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self) -> int:
        return self.n

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.values]

    def multiset(self) -> Counter:
        return Counter(self.tuples())

    def filter(self, q: Query) -> list[tuple[int, ...]]:
        """Brute-force ``q(D)`` as value vectors."""
        return [tuple(int(v) for v in row) for row in self.values[q.mask(self.values)]]

    def subset(self, rows: np.ndarray) -> "Dataset":
        """Rows selected by index or mask, keeping ids and priorities."""
        return Dataset(self.schema, self.values[rows], self.ids[rows], self.priorities[rows])

    def project(self, names: Sequence[str]) -> "Dataset":
        """Keep only the named attributes (categorical first, otherwise in the given order)."""
        cols = [self.schema.index(nm) for nm in names]
        attrs, perm = normalize_attributes([self.schema[c] for c in cols])
        cols = [cols[p] for p in perm]
        return Dataset(Schema(tuple(attrs)), self.values[:, cols], self.ids, self.priorities)
