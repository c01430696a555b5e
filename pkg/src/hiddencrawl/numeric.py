"""Splits, the binary-shrink baseline and rank-shrink for numeric subspaces.

A box is a :class:`~hiddencrawl.core.Query` whose numeric predicates are
intervals.  Categorical predicates, if any, must already be pinned to
constants (the hybrid crawler does that before handing a box over).

Both crawlers walk their recursion with an explicit stack, children in
left-to-right order, so a run is a deterministic function of the server's
responses.
"""
from __future__ import annotations

from typing import Callable, NamedTuple

from .core import ConfigurationError, ContractViolation, Query, UnsolvableInstance, full_space_query
from .server import ServerSession

__all__ = ["Box", "SplitOutcome", "split2", "split3", "binary_shrink", "rank_shrink", "pivot"]

Box = Query
Validity = Callable[[Query], bool]


class SplitOutcome(NamedTuple):
    """Children of a split; ``mid`` is ``None`` for a 2-way split.

    A 3-way split drops ``left``/``right`` when the pivot sits on the lower or
    upper end of the extent.
    """

    left: Box | None
    mid: Box | None
    right: Box | None

    @property
    def three_way(self) -> bool:
        return self.mid is not None

    def children(self) -> list[Box]:
        return [c for c in self if c is not None]


def _interval(b: Box, attr: int) -> tuple[int, int]:
    p = b[attr]
    if not isinstance(p, tuple):
        raise ContractViolation(f"attribute {attr} of {b} is not a numeric extent")
    return p


def split2(b: Box, attr: int, x: int) -> SplitOutcome:
    x1, x2 = _interval(b, attr)
    if x1 == x2:
        raise ContractViolation(f"attribute {attr} is exhausted on {b}")
    if not x1 < x <= x2:
        raise ContractViolation(f"2-way split point {x} must lie in ({x1}, {x2}]")
    return SplitOutcome(b.replace(attr, (x1, x - 1)), None, b.replace(attr, (x, x2)))


def split3(b: Box, attr: int, x: int) -> SplitOutcome:
    x1, x2 = _interval(b, attr)
    if not x1 <= x <= x2:
        raise ContractViolation(f"3-way split point {x} outside [{x1}, {x2}]")
    left = b.replace(attr, (x1, x - 1)) if x > x1 else None
    right = b.replace(attr, (x + 1, x2)) if x < x2 else None
    return SplitOutcome(left, b.replace(attr, (x, x)), right)


def _check_box(session: ServerSession, b: Box) -> None:
    b.validate(session.schema)
    if any(p is None for p in b.preds):
        raise ContractViolation("numeric crawlers need every categorical predicate pinned to a constant")


def _first_open(b: Box, attrs) -> int | None:
    for i in attrs:
        if not b.exhausted(i):
            return i
    return None


def binary_shrink(
    session: ServerSession,
    box: Box | None = None,
    *,
    valid: Validity | None = None,
) -> list[tuple[int, ...]]:
    """Crawl ``box`` by halving the lowest-index open attribute until queries resolve."""
    schema = session.schema
    box = full_space_query(schema) if box is None else box
    _check_box(session, box)
    numeric = schema.numeric_indices
    out: list[tuple[int, ...]] = []
    stack = [box]
    while stack:
        b = stack.pop()
        if valid is not None and not valid(b):
            continue
        resp = session.answer(b)
        if resp.resolved:
            out.extend(resp.tuples)
            continue
        attr = _first_open(b, numeric)
        if attr is None:
            point = [b.extent(i)[0] for i in range(len(b))]
            raise UnsolvableInstance(point, session.multiplicity(point))
        x1, x2 = b[attr]
        x = -((-(x1 + x2)) // 2)  # ceil((x1 + x2) / 2)
        s = split2(b, attr, x)
        stack.append(s.right)
        stack.append(s.left)
    return out


def pivot(returned, attr: int, k: int) -> tuple[int, int]:
    """Pivot value ``x`` and its multiplicity ``c`` among an overflowing response.

    ``x`` is the value of the ``ceil(k/2)``-th tuple (1-based) after a stable
    ascending sort on ``attr``, so ties keep the server's priority order.
    """
    ranked = sorted(returned, key=lambda t: t[attr])
    x = ranked[-(-k // 2) - 1][attr]
    c = sum(1 for t in returned if t[attr] == x)
    return x, c


def rank_shrink(
    session: ServerSession,
    box: Box | None = None,
    attr: int | None = None,
    *,
    valid: Validity | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """Crawl ``box`` with rank-based 2-way/3-way splits, attribute by attribute.

    Splitting always happens on the first numeric attribute at or after
    ``attr`` that is not exhausted; once it is exhausted the box is crawled as
    a lower-dimensional problem on the next attribute.  The middle slab of a
    3-way split is issued once: that query is also the first query of its
    lower-dimensional subproblem.

    ``trace``, if given, receives one ``(kind, box, attr, x, c, returned)``
    record per split with ``kind`` in ``{"2-way", "3-way"}``.
    """
    schema = session.schema
    k = session.k
    if k < 4:
        raise ConfigurationError(f"rank-shrink needs k >= 4, got k={k}")
    box = full_space_query(schema) if box is None else box
    _check_box(session, box)
    start = schema.cat if attr is None else attr
    if start not in schema.numeric_indices:
        raise ContractViolation(f"attribute {start} is not numeric")
    if _first_open(box, range(schema.cat, start)) is not None:
        raise ContractViolation(f"numeric attributes before {start} must be exhausted on {box}")
    attrs = range(start, schema.d)
    out: list[tuple[int, ...]] = []
    stack = [box]
    while stack:
        b = stack.pop()
        if valid is not None and not valid(b):
            continue
        resp = session.answer(b)
        if resp.resolved:
            out.extend(resp.tuples)
            continue
        a = _first_open(b, attrs)
        if a is None:
            point = [b.extent(i)[0] for i in range(len(b))]
            raise UnsolvableInstance(point, session.multiplicity(point))
        x, c = pivot(resp.tuples, a, k)
        if c <= k // 4:
            s = split2(b, a, x)
        else:
            s = split3(b, a, x)
        if trace is not None:
            trace.append(("3-way" if s.three_way else "2-way", b, a, x, c, resp.tuples))
        stack.extend(reversed(s.children()))
    return out
