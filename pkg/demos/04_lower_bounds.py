"""Hard instances: every crawler must pay for them, and the audits say why."""
# %%
import warnings

from hiddencrawl import ServerSession, rank_shrink, slice_cover
from hiddencrawl.hard import (
    CategoricalHardParams,
    NumericHardParams,
    audit_categorical_coverage,
    audit_numeric_coverage,
    gen_categorical_hard,
    gen_numeric_hard,
    numeric_floor,
)

# %% numeric: m stacks of k identical tuples, each with d singleton neighbours
for k, d, m in [(4, 2, 5), (8, 3, 10), (16, 4, 8)]:
    p = NumericHardParams(k, d, m)
    s = ServerSession(gen_numeric_hard(p), k)
    rank_shrink(s)
    audit = audit_numeric_coverage(s.query_log, p)
    print(f"k={k:2} d={d} m={m:2}  floor={numeric_floor(p):3}  cost={s.cost():4}  uncovered={len(audit.uncovered)}")

# %% categorical: d = 2k attributes, one off-diagonal value per tuple
with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # the size premise fails at this scale; the instance is still valid
    ds = gen_categorical_hard(CategoricalHardParams(3, 4))
s = ServerSession(ds, 3)
slice_cover(s)
print("categorical hard, n =", ds.n, "cost =", s.cost(),
      "fully covered:", audit_categorical_coverage(s.query_log, ds.schema).ok)
