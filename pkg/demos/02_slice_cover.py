"""Three ways to crawl a categorical space: plain DFS, slice-cover, and its lazy variant."""
# %%
from hiddencrawl import AttributeSpec, Dataset, Schema, ServerSession, SliceTable, dfs, lazy_slice_cover, slice_cover

schema = Schema((AttributeSpec.categorical("A1", 4), AttributeSpec.categorical("A2", 4)))
rows = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 4), (3, 1), (3, 2), (3, 3), (3, 3), (4, 2)]
ds = Dataset.from_rows(schema, rows)
k = 3

# %% the slice table: one query per (attribute, value)
s = ServerSession(ds, k)
table = SliceTable(s)
table.fill()
print(table.dumps())

# %% costs side by side
for crawl in (dfs, slice_cover, lazy_slice_cover):
    s = ServerSession(ds, k)
    out = crawl(s)
    assert sorted(out) == sorted(rows)
    print(f"{crawl.__name__:17} {s.cost():3d} queries")

# %% where DFS spends its queries
s = ServerSession(ds, k)
trace = []
dfs(s, trace=trace)
for rec in trace:
    print(rec[0], rec[1])
