"""Dataset ingestion, crawl runs, sweeps and report emission."""
from __future__ import annotations

import csv
import json
import logging
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import hard, synthetic
from .categorical import dfs, lazy_slice_cover, slice_cover
from .core import (
    AttributeSpec,
    ConfigurationError,
    ContractViolation,
    Dataset,
    Schema,
    UnsolvableInstance,
    normalize_attributes,
)
from .hybrid import hybrid
from .numeric import binary_shrink, rank_shrink
from .server import ServerConfig, ServerSession, validate_instance

__all__ = [
    "ALGORITHMS",
    "RunConfig",
    "CrawlReport",
    "IngestError",
    "ingest_csv",
    "write_csv",
    "make_dataset",
    "prepare_dataset",
    "run",
    "sweep",
    "write_sweep_csv",
    "verify_reconstruction",
    "write_curve_csv",
]

log = logging.getLogger(__name__)

ALGORITHMS: dict[str, Callable[[ServerSession], list]] = {
    "binary-shrink": binary_shrink,
    "rank-shrink": rank_shrink,
    "dfs": dfs,
    "slice-cover": slice_cover,
    "lazy-slice-cover": lazy_slice_cover,
    "hybrid": hybrid,
}
NUMERIC_ALGORITHMS = {"binary-shrink", "rank-shrink"}
CATEGORICAL_ALGORITHMS = {"dfs", "slice-cover", "lazy-slice-cover"}


class IngestError(ValueError):
    pass


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------


def _load_decl(decl) -> dict:
    if isinstance(decl, (str, Path)):
        with open(decl) as fp:
            return json.load(fp)
    return decl


def ingest_csv(path, decl, *, seed: int = 0) -> Dataset:
    """Read a CSV whose header names the declared attributes.

    ``decl`` (a dict or a JSON path) lists ``attributes`` in crawl order, each
    ``{"name", "kind": "numeric" | "categorical"}`` plus optional ``lo``/``hi``
    (default: observed min/max) or ``values`` (default: sorted observed
    labels).  Categorical attributes are moved in front of numeric ones,
    keeping relative order.
    """
    decl = _load_decl(decl)
    specs = decl["attributes"]
    names = [s["name"] for s in specs]
    with open(path, newline="") as fp:
        reader = csv.reader(fp)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if sorted(header) != sorted(names):
            raise IngestError(f"{path}: header {header} does not match declared attributes {names}")
        cols = [header.index(nm) for nm in names]
        raw = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise IngestError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            raw.append([row[c].strip() for c in cols])
    if not raw:
        raise IngestError(f"{path}: no data rows")

    attrs: list[AttributeSpec] = []
    columns = []
    for j, s in enumerate(specs):
        cells = [r[j] for r in raw]
        if s["kind"] == "numeric":
            col = []
            for lineno, cell in enumerate(cells, start=2):
                try:
                    col.append(int(cell))
                except ValueError:
                    raise IngestError(f"{path}:{lineno}: {s['name']} value {cell!r} is not an integer") from None
            lo = s.get("lo", min(col))
            hi = s.get("hi", max(col))
            attrs.append(AttributeSpec.numeric(s["name"], lo, hi))
            columns.append(col)
        elif s["kind"] == "categorical":
            labels = list(s["values"]) if "values" in s else sorted(set(cells))
            index = {lab: i + 1 for i, lab in enumerate(labels)}
            col = []
            for lineno, cell in enumerate(cells, start=2):
                if cell not in index:
                    raise IngestError(f"{path}:{lineno}: {s['name']} label {cell!r} not in declared values")
                col.append(index[cell])
            attrs.append(AttributeSpec.categorical(s["name"], len(labels), labels))
            columns.append(col)
        else:
            raise IngestError(f"attribute {s['name']}: unknown kind {s['kind']!r}")
    attrs, perm = normalize_attributes(attrs)
    values = np.array([columns[p] for p in perm], dtype=np.int64).T
    try:
        return Dataset(Schema(tuple(attrs)), values, seed=seed)
    except ContractViolation as exc:
        raise IngestError(f"{path}: {exc}") from None


def schema_decl(schema: Schema) -> dict:
    out = []
    for a in schema.attributes:
        if a.is_numeric:
            out.append({"name": a.name, "kind": "numeric", "lo": a.lo, "hi": a.hi})
        else:
            labels = list(a.labels) if a.labels is not None else [str(c) for c in range(1, a.size + 1)]
            out.append({"name": a.name, "kind": "categorical", "values": labels})
    return {"attributes": out}


def write_csv(dataset: Dataset, path, schema_path=None) -> None:
    """Write ``dataset`` (labels for categorical values) and optionally its schema declaration."""
    schema = dataset.schema
    with open(path, "w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(schema.names)
        for row in dataset.values:
            w.writerow([a.label(int(v)) if a.is_categorical else int(v) for a, v in zip(schema.attributes, row)])
    if schema_path is not None:
        with open(schema_path, "w") as fp:
            json.dump(schema_decl(schema), fp, indent=2)


def _parse_spec(spec: str) -> tuple[str, dict]:
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        params[key.strip()] = float(val) if "." in val else int(val)
    return name.strip(), params


def make_dataset(spec: str, seed: int = 0) -> Dataset:
    """Build a dataset from a generator spec such as ``numeric-hard:k=4,d=2,m=5``.

    Known generators: ``numeric-hard`` (k, d, m), ``categorical-hard`` (k, U),
    ``random`` (n, cat, num, cap, U) and ``adult`` (n).
    """
    name, p = _parse_spec(spec)
    if name == "numeric-hard":
        return hard.gen_numeric_hard(hard.NumericHardParams(p["k"], p["d"], p["m"]), seed=seed)
    if name == "categorical-hard":
        return hard.gen_categorical_hard(hard.CategoricalHardParams(p["k"], p["U"]), seed=seed)
    if name == "random":
        rng = np.random.default_rng(seed)
        schema = synthetic.random_schema(rng, p.get("cat", 0), p.get("num", 2), max_U=p.get("U", 6))
        n = p.get("n", 200)
        return synthetic.random_dataset(schema, n, p.get("cap", n), seed=seed)
    if name == "adult":
        return synthetic.adult_like(p.get("n", 45222), seed=seed)
    raise ConfigurationError(f"unknown generator {name!r}")


# --------------------------------------------------------------------------
# runs
# --------------------------------------------------------------------------


@dataclass
class RunConfig:
    algorithm: str
    k: int
    seed: int = 0
    data: str | None = None
    schema: str | None = None
    generator: str | None = None
    project: list[str] | None = None
    sample: float | None = None
    skip_validation: bool = False
    out: str | None = None
    log_out: str | None = None
    curve_out: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if self.sample is not None and not 0 < self.sample <= 1:
            raise ConfigurationError("sample must be a probability in (0, 1]")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)


@dataclass
class CrawlReport:
    algorithm: str
    k: int
    n: int
    d: int
    cat: int
    total_queries: int = 0
    resolved_queries: int = 0
    overflowed_queries: int = 0
    reconstruction_verified: bool = False
    wall_time: float = 0.0
    n_fraction: float = 1.0
    progressiveness: list = field(default_factory=list)
    violation: dict | None = None
    error: str | None = None

    def to_json(self, *, curve: bool = True) -> dict:
        out = asdict(self)
        if not curve:
            out.pop("progressiveness")
        return out

    def curve_fractions(self) -> list[tuple[float, float]]:
        """Progressiveness as ``(fraction of queries, fraction of tuples)``, starting at the origin."""
        if not self.total_queries:
            return [(0.0, 0.0)]
        n = max(self.n, 1)
        return [(0.0, 0.0)] + [(q / self.total_queries, t / n) for q, t in self.progressiveness]


def verify_reconstruction(crawled: Iterable[Sequence[int]], dataset: Dataset) -> bool:
    return Counter(tuple(int(v) for v in t) for t in crawled) == dataset.multiset()


def _check_compatible(algorithm: str, schema: Schema) -> None:
    if algorithm in NUMERIC_ALGORITHMS and not schema.is_numeric:
        raise ConfigurationError(f"{algorithm} needs a purely numeric schema")
    if algorithm in CATEGORICAL_ALGORITHMS and not schema.is_categorical:
        raise ConfigurationError(f"{algorithm} needs a purely categorical schema")
    if algorithm == "hybrid" and not schema.is_mixed:
        raise ConfigurationError("hybrid needs a mixed schema")


def prepare_dataset(config: RunConfig, dataset: Dataset | None = None) -> Dataset:
    """Load or generate the dataset, then apply projection and Bernoulli sampling."""
    if dataset is None:
        if config.generator:
            dataset = make_dataset(config.generator, seed=config.seed)
        elif config.data:
            if not config.schema:
                raise ConfigurationError("a CSV dataset needs a schema declaration")
            dataset = ingest_csv(config.data, config.schema, seed=config.seed)
        else:
            raise ConfigurationError("config names neither a data file nor a generator")
    if config.project:
        dataset = dataset.project(config.project)
    if config.sample is not None and config.sample < 1:
        keep = np.random.default_rng(config.seed).random(dataset.n) < config.sample
        dataset = dataset.subset(keep)
    return dataset


def run(config: RunConfig, dataset: Dataset | None = None) -> CrawlReport:
    """Crawl one dataset and check the output against it.

    An instance with more than ``k`` tuples at a point is reported, not
    crawled, unless ``skip_validation`` is set; then the crawler's
    :class:`UnsolvableInstance` is reported instead.
    """
    dataset = prepare_dataset(config, dataset)
    schema = dataset.schema
    _check_compatible(config.algorithm, schema)
    report = CrawlReport(config.algorithm, config.k, dataset.n, schema.d, schema.cat,
                         n_fraction=config.sample if config.sample is not None else 1.0)
    if not config.skip_validation:
        v = validate_instance(dataset, config.k)
        if v is not None:
            report.violation = {"point": list(v.point), "count": v.count}
            report.error = f"{v.count} tuples at point {v.point} exceed k={config.k}"
            log.warning("not crawling: %s", report.error)
            _emit(config, report, None)
            return report
    session = ServerSession(dataset, ServerConfig(config.k))
    t0 = time.perf_counter()
    try:
        crawled = ALGORITHMS[config.algorithm](session)
    except UnsolvableInstance as exc:
        report.violation = {"point": list(exc.point), "count": exc.count}
        report.error = str(exc)
        crawled = None
    report.wall_time = time.perf_counter() - t0
    summary = session.summary()
    report.total_queries = session.cost()
    report.resolved_queries = summary["resolved"]
    report.overflowed_queries = summary["overflow"]
    report.progressiveness = session.progressiveness()
    if crawled is not None:
        report.reconstruction_verified = verify_reconstruction(crawled, dataset)
        if not report.reconstruction_verified:
            report.error = "crawled bag differs from the dataset"
    _emit(config, report, session)
    return report


def write_curve_csv(report: CrawlReport, path) -> None:
    with open(path, "w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(["query_fraction", "tuple_fraction"])
        for qf, tf in report.curve_fractions():
            w.writerow([f"{qf:.6f}", f"{tf:.6f}"])


def _emit(config: RunConfig, report: CrawlReport, session: ServerSession | None) -> None:
    if config.out:
        with open(config.out, "w") as fp:
            json.dump(report.to_json(), fp, indent=2)
    if config.log_out and session is not None:
        with open(config.log_out, "w") as fp:
            session.export_log(fp)
    if config.curve_out:
        write_curve_csv(report, config.curve_out)


SWEEP_COLUMNS = ["algorithm", "k", "d", "n", "n_fraction", "cost", "verified", "error"]


def sweep(configs: Iterable[RunConfig], datasets: dict | None = None) -> list[CrawlReport]:
    """Run each config on a fresh session; failures are recorded and the sweep continues.

    ``datasets`` optionally maps a config's ``generator`` string to a prebuilt
    dataset so large generators are not rebuilt per run.
    """
    reports = []
    for cfg in configs:
        pre = (datasets or {}).get(cfg.generator) if cfg.generator else None
        try:
            reports.append(run(cfg, pre))
        except (ConfigurationError, ContractViolation, IngestError) as exc:
            log.error("run %s failed: %s", cfg, exc)
            reports.append(CrawlReport(cfg.algorithm, cfg.k, 0, 0, 0, error=str(exc)))
    return reports


def write_sweep_csv(reports: Sequence[CrawlReport], path) -> None:
    with open(path, "w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(SWEEP_COLUMNS)
        for r in reports:
            w.writerow([r.algorithm, r.k, r.d, r.n, r.n_fraction, r.total_queries,
                        int(r.reconstruction_verified), r.error or ""])


def load_sweep_file(path) -> list[RunConfig]:
    """``{"defaults": {...}, "runs": [{...}, ...]}`` or a bare list of run dicts."""
    with open(path) as fp:
        doc = json.load(fp)
    if isinstance(doc, list):
        doc = {"runs": doc}
    defaults = doc.get("defaults", {})
    return [RunConfig.from_dict({**defaults, **r}) for r in doc.get("runs", [])]
