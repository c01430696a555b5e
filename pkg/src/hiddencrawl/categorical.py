"""Data-space-tree crawlers for categorical attributes: DFS, slice-cover and lazy-slice-cover.

A tree node at level ``l`` fixes the first ``l`` categorical attributes to
constants and leaves the rest as wildcards; any numeric attributes are pinned
to their full declared range, which is how the hybrid crawler emulates a purely
categorical server.  Attribute indices are 0-based throughout.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from .core import WILDCARD, ContractViolation, Query, Schema, UnsolvableInstance, matches
from .server import ServerSession

__all__ = ["TreeNode", "SliceTable", "dfs", "extended_dfs", "slice_cover", "lazy_slice_cover"]

Validity = Callable[[Query], bool]
LeafHandler = Callable[["TreeNode"], list]


@dataclass(frozen=True)
class TreeNode:
    constants: tuple[int, ...] = ()

    @property
    def level(self) -> int:
        return len(self.constants)

    def child(self, c: int) -> "TreeNode":
        return TreeNode(self.constants + (c,))

    def query(self, schema: Schema) -> Query:
        preds = []
        for i, a in enumerate(schema.attributes):
            if a.is_numeric:
                preds.append((a.lo, a.hi))
            elif i < self.level:
                preds.append(self.constants[i])
            else:
                preds.append(WILDCARD)
        return Query(tuple(preds))

    def __str__(self) -> str:
        return "root" if not self.constants else "/".join(map(str, self.constants))


def slice_query(schema: Schema, attr: int, c: int) -> Query:
    preds = [(a.lo, a.hi) if a.is_numeric else WILDCARD for a in schema.attributes]
    preds[attr] = c
    return Query(tuple(preds))


class SliceTable:
    """Cache of slice-query outcomes keyed by ``(attr, constant)``.

    A resolved slice stores its result bag; an overflowing slice stores only
    ``None``.  A missing key is issued to the server on first lookup, so an
    eager table is just one where :meth:`fill` ran first.
    """

    def __init__(self, session: ServerSession, *, valid: Validity | None = None):
        self.session = session
        self.valid = valid
        self._entries: dict[tuple[int, int], tuple | None] = {}

    def __contains__(self, key) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, attr: int, c: int) -> tuple | None:
        key = (attr, c)
        if key not in self._entries:
            q = slice_query(self.session.schema, attr, c)
            if self.valid is not None and not self.valid(q):
                self._entries[key] = ()
            else:
                resp = self.session.answer(q)
                self._entries[key] = None if resp.overflowed else resp.tuples
        return self._entries[key]

    def fill(self) -> None:
        schema = self.session.schema
        for attr in range(schema.cat):
            for c in range(1, schema[attr].size + 1):
                self.get(attr, c)

    def dump(self) -> dict:
        """``{"A<i>=<c>": "overflow" | resolved count}`` with 1-based attribute numbers."""
        out = {}
        for (attr, c), entry in sorted(self._entries.items()):
            out[f"A{attr + 1}={c}"] = "overflow" if entry is None else len(entry)
        return out

    def dumps(self) -> str:
        return json.dumps(self.dump(), indent=2)


def _require_categorical(schema: Schema) -> None:
    if not schema.is_categorical:
        raise ContractViolation("this crawler needs a purely categorical schema")


def dfs(
    session: ServerSession,
    *,
    valid: Validity | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """Depth-first walk of the data space tree, one query per visited node."""
    schema = session.schema
    _require_categorical(schema)
    out: list[tuple[int, ...]] = []
    stack = [TreeNode()]
    while stack:
        u = stack.pop()
        q = u.query(schema)
        if valid is not None and not valid(q):
            continue
        resp = session.answer(q)
        if resp.resolved:
            out.extend(resp.tuples)
            if trace is not None:
                trace.append(("resolved", u, resp.tuples))
            continue
        if u.level == schema.cat:
            raise UnsolvableInstance(u.constants, session.multiplicity(u.constants))
        if trace is not None:
            trace.append(("internal", u))
        stack.extend(u.child(c) for c in range(schema[u.level].size, 0, -1))
    return out


def extended_dfs(
    session: ServerSession,
    node: TreeNode,
    table: SliceTable,
    *,
    valid: Validity | None = None,
    on_leaf: LeafHandler | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """All tuples matching ``node.query``, answering from ``table`` where possible.

    A level-1 node is a slice query, so it is never issued: the table already
    says whether it overflowed.  The root is never issued either; whether it
    overflows follows from its children's slices.  Nodes at level 2 and
    deeper are issued only when their own slice overflowed.

    ``on_leaf`` takes over the nodes at the bottom level (``schema.cat``)
    whose slice overflowed, instead of issuing them; without it such a node
    must be a single overflowing point.
    """
    schema = session.schema
    cat = schema.cat
    out: list[tuple[int, ...]] = []
    stack = [node]
    while stack:
        u = stack.pop()
        q = u.query(schema)
        if valid is not None and not valid(q):
            continue
        if u.level >= 1:
            entry = table.get(u.level - 1, u.constants[-1])
            if entry is not None:
                local = [t for t in entry if matches(q, t)]
                out.extend(local)
                if trace is not None:
                    trace.append(("local", u, tuple(local)))
                continue
        if u.level == cat and on_leaf is not None:
            found = on_leaf(u)
            out.extend(found)
            if trace is not None:
                trace.append(("leaf", u, tuple(found)))
            continue
        if u.level >= 2:
            resp = session.answer(q)
            if resp.resolved:
                out.extend(resp.tuples)
                if trace is not None:
                    trace.append(("resolved", u, resp.tuples))
                continue
        if u.level == cat:
            raise UnsolvableInstance(u.constants, session.multiplicity(u.constants))
        if trace is not None:
            trace.append(("internal", u))
        stack.extend(u.child(c) for c in range(schema[u.level].size, 0, -1))
    return out


def slice_cover(
    session: ServerSession,
    *,
    valid: Validity | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """Issue every slice query up front, then run extended DFS from the root."""
    _require_categorical(session.schema)
    table = SliceTable(session, valid=valid)
    table.fill()
    return extended_dfs(session, TreeNode(), table, valid=valid, trace=trace)


def lazy_slice_cover(
    session: ServerSession,
    *,
    valid: Validity | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """Slice-cover with slice queries issued only when first consulted."""
    _require_categorical(session.schema)
    table = SliceTable(session, valid=valid)
    return extended_dfs(session, TreeNode(), table, valid=valid, trace=trace)
