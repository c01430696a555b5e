import math

import numpy as np
import pytest

from hiddencrawl import (
    AttributeSpec,
    ConfigurationError,
    Dataset,
    Schema,
    ServerSession,
    UnsolvableInstance,
    hybrid,
    lazy_slice_cover,
    rank_shrink,
)
from hiddencrawl.harness import verify_reconstruction
from hiddencrawl.synthetic import random_dataset, random_schema


def _mixed_schema():
    return Schema((
        AttributeSpec.categorical("C1", 3),
        AttributeSpec.categorical("C2", 4),
        AttributeSpec.numeric("N1", 0, 99),
        AttributeSpec.numeric("N2", 0, 99),
    ))


def _hybrid_bound(ds, k, trace):
    schema = ds.schema
    sizes = schema.domain_sizes()[: schema.cat]
    nk = math.ceil(ds.n / k)
    num_d = schema.d - schema.cat
    leaves = 0
    for rec in trace:
        if rec[0] == "leaf-cost":
            n_u = rec[3]
            leaves += 20 * num_d * math.ceil(n_u / k) + 1
    return sum(sizes) + nk * sum(min(u, nk) for u in sizes) + leaves


def test_pinned_cost():
    ds = random_dataset(_mixed_schema(), 200, 8, seed=11)
    s = ServerSession(ds, 8)
    trace = []
    out = hybrid(s, trace=trace)
    assert verify_reconstruction(out, ds)
    assert s.cost() == 77
    assert s.cost() <= _hybrid_bound(ds, 8, trace)


def test_leaf_subcrawls_are_disjoint():
    ds = random_dataset(_mixed_schema(), 400, 4, seed=2)
    trace = []
    out = hybrid(ServerSession(ds, 4), trace=trace)
    assert verify_reconstruction(out, ds)
    leaves = [rec[1].constants for rec in trace if rec[0] == "leaf-cost"]
    assert leaves and len(leaves) == len(set(leaves))
    assert all(len(c) == 2 for c in leaves)


def test_leaf_queries_pin_every_categorical():
    ds = random_dataset(_mixed_schema(), 400, 4, seed=2)
    s = ServerSession(ds, 4)
    hybrid(s)
    for e in s.query_log:
        cats = e.query.preds[:2]
        nums = e.query.preds[2:]
        if nums != ((0, 99), (0, 99)):
            assert all(c is not None for c in cats)


def test_degenerates_to_lazy_slice_cover(grid_dataset):
    a, b = ServerSession(grid_dataset, 3), ServerSession(grid_dataset, 3)
    hybrid(a)
    lazy_slice_cover(b)
    assert [e.query for e in a.query_log] == [e.query for e in b.query_log]


def test_degenerates_to_rank_shrink(line_dataset):
    a, b = ServerSession(line_dataset, 4), ServerSession(line_dataset, 4)
    hybrid(a)
    rank_shrink(b)
    assert [e.query for e in a.query_log] == [e.query for e in b.query_log]


def test_small_k_rejected_with_numeric_part():
    ds = random_dataset(_mixed_schema(), 50, 3, seed=0)
    with pytest.raises(ConfigurationError):
        hybrid(ServerSession(ds, 3))


def test_point_overflow_raises():
    schema = _mixed_schema()
    ds = Dataset.from_rows(schema, [(1, 2, 5, 5)] * 5 + [(2, 1, 0, 0)])
    with pytest.raises(UnsolvableInstance) as ei:
        hybrid(ServerSession(ds, 4))
    assert ei.value.point == (1, 2, 5, 5)


@pytest.mark.parametrize("seed", range(10))
def test_random_mixed(seed):
    rng = np.random.default_rng(seed)
    schema = random_schema(rng, 1 + seed % 3, 1 + seed % 2)
    k = [4, 8, 16][seed % 3]
    ds = random_dataset(schema, 500, k, seed=seed)
    s = ServerSession(ds, k)
    trace = []
    assert verify_reconstruction(hybrid(s, trace=trace), ds)
    assert s.cost() <= _hybrid_bound(ds, k, trace)
