"""Rank-shrink on a single numeric attribute, step by step."""
# %%
from hiddencrawl import (
    AttributeSpec, Dataset, Schema, ServerSession, binary_shrink, full_space_query, rank_shrink,
)

schema = Schema((AttributeSpec.numeric("price", -1000, 1000),))
values = [10, 20, 30, 40, 50, 55, 55, 55]
ds = Dataset.from_rows(schema, [(v,) for v in values], priorities=[5, 4, 0, 10, 3, 9, 8, 7])

# %% the server only ever shows 4 tuples per query
session = ServerSession(ds, 4)
r = session.answer(full_space_query(schema))
print("full line ->", sorted(r.tuples), "overflow" if r.overflowed else "resolved")

# %% crawl and watch the splits
session = ServerSession(ds, 4)
trace = []
got = rank_shrink(session, trace=trace)
for kind, box, attr, x, c, returned in trace:
    print(f"{kind:6} {box}  pivot={x}  ties={c}")
for i, e in enumerate(session.query_log, 1):
    print(f"q{i}: {e.query}  {'overflow' if e.overflowed else 'resolved'} ({e.returned_count})")

assert sorted(got) == sorted(ds.tuples())
print("rank-shrink cost:", session.cost())

# %% the naive midpoint split for comparison
session = ServerSession(ds, 4)
binary_shrink(session)
print("binary-shrink cost:", session.cost())
