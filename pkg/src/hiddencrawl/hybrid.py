"""Mixed schemas: lazy-slice-cover over the categorical prefix, rank-shrink below each leaf."""
from __future__ import annotations

from typing import Callable

from .categorical import SliceTable, TreeNode, extended_dfs, lazy_slice_cover
from .core import ConfigurationError, Query
from .numeric import rank_shrink
from .server import ServerSession

__all__ = ["hybrid", "leaf_box"]


def leaf_box(session: ServerSession, node: TreeNode) -> Query:
    """The numeric subspace under a categorical point: constants pinned, full numeric extents."""
    return node.query(session.schema)


def hybrid(
    session: ServerSession,
    *,
    valid: Callable[[Query], bool] | None = None,
    trace: list | None = None,
) -> list[tuple[int, ...]]:
    """Crawl a mixed schema in one session.

    Degenerates to plain rank-shrink without categorical attributes and to
    lazy-slice-cover without numeric ones.  ``trace`` receives the
    categorical traversal records plus one ``("leaf-cost", node, queries,
    tuples)`` record per rank-shrink subcrawl.
    """
    schema = session.schema
    if session.k < 4 and schema.cat < schema.d:
        raise ConfigurationError(f"hybrid needs k >= 4 for its numeric phase, got k={session.k}")
    if schema.cat == 0:
        return rank_shrink(session, valid=valid)
    if schema.cat == schema.d:
        return lazy_slice_cover(session, valid=valid, trace=trace)

    def crawl_leaf(node: TreeNode) -> list[tuple[int, ...]]:
        before = session.cost()
        found = rank_shrink(session, leaf_box(session, node), schema.cat, valid=valid)
        if trace is not None:
            trace.append(("leaf-cost", node, session.cost() - before, len(found)))
        return found

    table = SliceTable(session, valid=valid)
    return extended_dfs(session, TreeNode(), table, valid=valid, on_leaf=crawl_leaf, trace=trace)
