"""Seeded synthetic datasets: random schemas for property tests and an Adult-shaped surrogate.

The surrogate copies the attribute names, order and categorical domain sizes
of the UCI Adult census table and imitates its marginals (a spike at 40 work
hours, mostly-zero capital gain/loss, a near-unique sampling weight).  It is
*not* the real data; costs measured on it only reproduce trends.
"""
from __future__ import annotations

import numpy as np

from .core import AttributeSpec, Dataset, Schema

__all__ = [
    "cap_multiplicity",
    "random_schema",
    "random_dataset",
    "adult_like",
    "ADULT_CATEGORICAL",
    "ADULT_NUMERIC",
]

ADULT_CATEGORICAL = [
    ("SEX", 2),
    ("RACE", 5),
    ("REL", 6),
    ("EDU", 6),
    ("MARITAL", 7),
    ("WRK-CLASS", 8),
    ("OCC", 14),
    ("COUNTRY", 41),
]
ADULT_NUMERIC = [
    ("EDU-NUM", 1, 16),
    ("AGE", 17, 90),
    ("WRK-HR", 1, 99),
    ("CAP-LOSS", 0, 4356),
    ("CAP-GAIN", 0, 99999),
    ("FNALWGT", 12285, 1484705),
]


def cap_multiplicity(values: np.ndarray, k: int) -> np.ndarray:
    """Row mask keeping at most ``k`` copies of every distinct row (first ones win)."""
    if len(values) == 0:
        return np.zeros(0, dtype=bool)
    _, inverse = np.unique(values, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind="stable")
    sorted_inv = inverse[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sorted_inv)) + 1]
    rank = np.arange(len(order)) - np.repeat(starts, np.diff(np.r_[starts, len(order)]))
    keep = np.zeros(len(values), dtype=bool)
    keep[order[rank < k]] = True
    return keep


def random_schema(rng: np.random.Generator, n_cat: int, n_num: int, *, max_U: int = 6) -> Schema:
    attrs = [AttributeSpec.categorical(f"C{i + 1}", int(rng.integers(2, max_U + 1))) for i in range(n_cat)]
    for i in range(n_num):
        lo = int(rng.integers(-50, 51))
        width = int(rng.choice([0, 3, 15, 200, 10**6, 10**12]))
        attrs.append(AttributeSpec.numeric(f"N{i + 1}", lo, lo + width))
    return Schema(tuple(attrs))


def _column(rng: np.random.Generator, a: AttributeSpec, n: int) -> np.ndarray:
    if a.is_categorical:
        weights = rng.dirichlet(np.full(a.size, 0.7))
        return rng.choice(np.arange(1, a.size + 1), size=n, p=weights)
    # mixture of a few hot values (forces 3-way splits) and uniform spread
    hot = rng.integers(a.lo, a.hi, size=4, endpoint=True)
    spread = rng.integers(a.lo, a.hi, size=n, endpoint=True)
    pick_hot = rng.random(n) < rng.uniform(0.0, 0.6)
    return np.where(pick_hot, rng.choice(hot, size=n), spread)


def random_dataset(schema: Schema, n: int, k: int, seed: int = 0) -> Dataset:
    """Up to ``n`` random tuples, trimmed so no point holds more than ``k``."""
    rng = np.random.default_rng(seed)
    values = np.column_stack([_column(rng, a, n) for a in schema.attributes]).astype(np.int64)
    values = values.reshape(n, schema.d)
    values = values[cap_multiplicity(values, k)]
    return Dataset(schema, values, seed=seed)


def _pick(rng, probs, size):
    probs = np.asarray(probs, dtype=float)
    return rng.choice(np.arange(1, len(probs) + 1), size=size, p=probs / probs.sum())


def adult_like(n: int = 45222, seed: int = 0) -> Dataset:
    """Adult-shaped mixed dataset: 8 categorical then 6 numeric attributes."""
    rng = np.random.default_rng(seed)
    rel = _pick(rng, [0.41, 0.26, 0.15, 0.11, 0.05, 0.03], n)
    sex = np.where(rel == 1, 1, np.where(rel == 5, 2, _pick(rng, [0.45, 0.55], n)))
    race = _pick(rng, [0.86, 0.09, 0.03, 0.01, 0.01], n)
    edu = _pick(rng, [0.32, 0.22, 0.17, 0.12, 0.10, 0.07], n)
    marital = np.where(
        (rel == 1) | (rel == 5),
        1,
        np.where(rel == 3, _pick(rng, [0.02, 0.93, 0.03, 0.01, 0.005, 0.005, 0.0005], n),
                 _pick(rng, [0.03, 0.50, 0.30, 0.07, 0.07, 0.02, 0.001], n)),
    )
    wrk = _pick(rng, [0.74, 0.08, 0.07, 0.04, 0.035, 0.03, 0.0005, 0.0003], n)
    occ = _pick(rng, [0.13, 0.13, 0.13, 0.12, 0.12, 0.11, 0.07, 0.05, 0.05, 0.04, 0.03, 0.03, 0.005, 0.0003], n)
    country_tail = 0.07 / np.arange(1, 40) ** 1.1
    country = _pick(rng, np.r_[0.91, 0.02, country_tail / country_tail.sum() * 0.07], n)

    edu_num_by_cat = {1: [9], 2: [10], 3: [13], 4: [14, 15, 16], 5: [11, 12], 6: list(range(1, 9))}
    edu_num = np.array([rng.choice(edu_num_by_cat[int(e)]) for e in edu])
    age = np.clip(17 + rng.gamma(3.0, 7.2, n), 17, 90).astype(np.int64)
    hours = np.where(rng.random(n) < 0.47, 40, np.clip(rng.normal(40, 13, n), 1, 99)).astype(np.int64)
    loss_pool = np.clip(rng.normal(1900, 350, 90), 155, 4356).astype(np.int64)
    cap_loss = np.where(rng.random(n) < 0.953, 0, rng.choice(loss_pool, n))
    gain_pool = np.clip(rng.lognormal(np.log(7000), 0.8, 120), 114, 99998).astype(np.int64)
    gain = rng.choice(gain_pool, n)
    gain = np.where(rng.random(n) < 0.06, 99999, gain)
    cap_gain = np.where(rng.random(n) < 0.917, 0, gain)
    fnlwgt = np.clip(rng.lognormal(np.log(178000), 0.5, n), 12285, 1484705).astype(np.int64)

    cols = [sex, race, rel, edu, marital, wrk, occ, country, edu_num, age, hours, cap_loss, cap_gain, fnlwgt]
    attrs = [AttributeSpec.categorical(name, size) for name, size in ADULT_CATEGORICAL]
    attrs += [AttributeSpec.numeric(name, lo, hi) for name, lo, hi in ADULT_NUMERIC]
    values = np.column_stack(cols).astype(np.int64)
    return Dataset(Schema(tuple(attrs)), values, seed=seed)
