"""Simulated top-k hidden-database server with query accounting."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import IO, NamedTuple

import numpy as np

from .core import ConfigurationError, Dataset, Query

__all__ = [
    "ServerConfig",
    "QueryResponse",
    "LogEntry",
    "Violation",
    "ServerSession",
    "validate_instance",
    "read_query_log",
]


@dataclass(frozen=True)
class ServerConfig:
    """``seed``, when set, replaces the dataset's priorities with a fresh seeded permutation."""

    k: int
    seed: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class QueryResponse:
    """What a crawler sees: value vectors (descending priority) and the overflow flag."""

    tuples: tuple[tuple[int, ...], ...]
    overflowed: bool

    @property
    def resolved(self) -> bool:
        return not self.overflowed

    def __len__(self) -> int:
        return len(self.tuples)


class LogEntry(NamedTuple):
    query: Query
    overflowed: bool
    returned_count: int


class Violation(NamedTuple):
    point: tuple[int, ...]
    count: int


def validate_instance(dataset: Dataset, k: int) -> Violation | None:
    """``None`` if no point holds more than ``k`` tuples, else the worst point.

    Ties between equally crowded points go to the lexicographically smallest.
    """
    if dataset.n == 0:
        return None
    points, counts = np.unique(dataset.values, axis=0, return_counts=True)
    worst = int(np.argmax(counts))
    if counts[worst] <= k:
        return None
    return Violation(tuple(int(v) for v in points[worst]), int(counts[worst]))


class ServerSession:
    """One crawl against one dataset.

    Records are kept sorted by descending priority so the top-k of any query
    is simply its first ``k`` matches.  ``retrieved_ids`` only ever grows from
    resolved responses.
    """

    def __init__(self, dataset: Dataset, config: ServerConfig | int):
        if isinstance(config, int):
            config = ServerConfig(config)
        self.dataset = dataset
        self.config = config
        self.schema = dataset.schema
        priorities = dataset.priorities
        if config.seed is not None:
            priorities = np.random.default_rng(config.seed).permutation(dataset.n)
        self.priorities = priorities
        order = np.argsort(-priorities, kind="stable")
        self._values = dataset.values[order]
        self._ids = dataset.ids[order]
        self.query_log: list[LogEntry] = []
        self.retrieved_ids: set[int] = set()
        self._progress: list[int] = []

    @property
    def k(self) -> int:
        return self.config.k

    def answer(self, q: Query) -> QueryResponse:
        q.validate(self.schema)
        hits = np.flatnonzero(q.mask(self._values))
        overflowed = hits.size > self.k
        top = hits[: self.k]
        tuples = tuple(tuple(int(v) for v in row) for row in self._values[top])
        if not overflowed:
            self.retrieved_ids.update(int(i) for i in self._ids[top])
        self.query_log.append(LogEntry(q, overflowed, len(tuples)))
        self._progress.append(len(self.retrieved_ids))
        return QueryResponse(tuples, overflowed)

    def cost(self) -> int:
        return len(self.query_log)

    def progressiveness(self) -> list[tuple[int, int]]:
        """``(queries issued, distinct tuples seen in resolved responses)`` after each query."""
        return [(i + 1, c) for i, c in enumerate(self._progress)]

    def resolved_queries(self) -> list[Query]:
        return [e.query for e in self.query_log if not e.overflowed]

    def multiplicity(self, point) -> int:
        """Harness-side lookup of how many tuples sit at ``point``."""
        return int(np.all(self._values == np.asarray(point, dtype=np.int64), axis=1).sum())

    def export_log(self, fp: IO[str]) -> None:
        """Write the query log as JSON lines ``{index, predicates, overflowed, returned_count}``."""
        for i, e in enumerate(self.query_log):
            rec = {
                "index": i,
                "predicates": e.query.to_json(),
                "overflowed": e.overflowed,
                "returned_count": e.returned_count,
            }
            fp.write(json.dumps(rec) + "\n")

    def summary(self) -> Counter:
        return Counter("overflow" if e.overflowed else "resolved" for e in self.query_log)


def read_query_log(fp: IO[str]) -> list[LogEntry]:
    out = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        out.append(LogEntry(Query.from_json(rec["predicates"]), bool(rec["overflowed"]), int(rec["returned_count"])))
    return out
