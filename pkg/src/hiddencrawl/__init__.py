"""Query-optimal crawlers for top-k hidden databases, with a simulated server to run them against."""

from .categorical import SliceTable, TreeNode, dfs, extended_dfs, lazy_slice_cover, slice_cover
from .core import (
    WILDCARD,
    AttributeSpec,
    ConfigurationError,
    ContractViolation,
    Dataset,
    Query,
    Schema,
    UnsolvableInstance,
    full_space_query,
    matches,
    normalize_attributes,
)
from .harness import CrawlReport, RunConfig, ingest_csv, run, sweep, verify_reconstruction
from .hybrid import hybrid
from .numeric import binary_shrink, rank_shrink, split2, split3
from .server import QueryResponse, ServerConfig, ServerSession, validate_instance

__version__ = "0.1.0"

__all__ = [
    "WILDCARD",
    "AttributeSpec",
    "ConfigurationError",
    "ContractViolation",
    "CrawlReport",
    "Dataset",
    "Query",
    "QueryResponse",
    "RunConfig",
    "Schema",
    "ServerConfig",
    "ServerSession",
    "SliceTable",
    "TreeNode",
    "UnsolvableInstance",
    "binary_shrink",
    "dfs",
    "extended_dfs",
    "full_space_query",
    "hybrid",
    "ingest_csv",
    "lazy_slice_cover",
    "matches",
    "normalize_attributes",
    "rank_shrink",
    "run",
    "slice_cover",
    "split2",
    "split3",
    "sweep",
    "validate_instance",
    "verify_reconstruction",
]
