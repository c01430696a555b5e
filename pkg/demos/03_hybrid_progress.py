"""Hybrid crawl of a mixed schema and its progressiveness curve."""
# %%
import numpy as np

from hiddencrawl import RunConfig, run
from hiddencrawl.harness import write_curve_csv
from hiddencrawl.synthetic import adult_like

ds = adult_like(seed=0)
print(ds.schema.names)
print("categorical prefix:", ds.schema.cat, "of", ds.schema.d, "attributes; n =", ds.n)

# %%
report = run(RunConfig("hybrid", 256), ds)
print("queries:", report.total_queries, "verified:", report.reconstruction_verified)

# %% tuples extracted vs queries spent, in fractions
curve = np.array(report.curve_fractions())
for q in (0.1, 0.25, 0.5, 0.75, 1.0):
    i = np.searchsorted(curve[:, 0], q)
    print(f"{q:5.0%} of queries -> {curve[i, 1]:6.1%} of tuples")

# %% dump for plotting elsewhere
write_curve_csv(report, "hybrid_curve.csv")
print("wrote hybrid_curve.csv")
