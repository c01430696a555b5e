"""Cost trends on the Adult-shaped surrogate: k, n, and the categorical algorithms."""
# %%
import numpy as np

from hiddencrawl import RunConfig, run, validate_instance
from hiddencrawl.synthetic import ADULT_CATEGORICAL, ADULT_NUMERIC, adult_like

ds = adult_like(seed=0)
numeric = [name for name, *_ in ADULT_NUMERIC]
categorical = [name for name, _ in ADULT_CATEGORICAL]

# %% cost roughly halves as k doubles
prev = None
for k in (64, 128, 256, 512, 1024):
    cost = run(RunConfig("rank-shrink", k, project=numeric), ds).total_queries
    ratio = f"{cost / prev:.3f}" if prev else "-"
    print(f"k={k:5}  rank-shrink={cost:5}  ratio={ratio}")
    prev = cost

# %% cost grows linearly with n
pts = []
for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
    r = run(RunConfig("rank-shrink", 256, seed=7, project=numeric, sample=frac), ds)
    pts.append((r.n, r.total_queries))
n, cost = np.array(pts, dtype=float).T
slope, icept = np.polyfit(n, cost, 1)
r2 = 1 - ((cost - (slope * n + icept)) ** 2).sum() / ((cost - cost.mean()) ** 2).sum()
print(f"cost ~ {slope:.4f} * n + {icept:.1f}   R^2 = {r2:.4f}")

# %% categorical projection: only valid once k exceeds the busiest point
proj = ds.project(categorical)
print("busiest point:", validate_instance(proj, 1))
for k in (512, 1024):
    row = {a: run(RunConfig(a, k), proj).total_queries for a in ("lazy-slice-cover", "dfs", "slice-cover")}
    print(k, row)
