import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hiddencrawl import AttributeSpec, Dataset, Schema  # noqa: E402

# Eight tuples on one numeric attribute, three stacked at 55.  The priorities
# make the server return {40, 55, 55, 55} for the full line and
# {10, 20, 40, 50} for [-1000, 54].
LINE_VALUES = [10, 20, 30, 40, 50, 55, 55, 55]
LINE_PRIORITIES = [5, 4, 0, 10, 3, 9, 8, 7]

# A 4x4 categorical grid with ten tuples; at k=3 two A1 slices overflow.
GRID_ROWS = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 4), (3, 1), (3, 2), (3, 3), (3, 3), (4, 2)]

# Ten tuples on a plane, k=4.  Three of the top-4 share A1=80 so the
# root 3-way splits there; the A1=80 line holds 5 tuples with distinct A2.
PLANE_ROWS = [
    (10, 50), (30, 20), (40, 70), (60, 40), (70, 90),
    (80, 10), (80, 30), (80, 50), (80, 70), (80, 90),
]
PLANE_PRIORITIES = [1, 5, 6, 10, 4, 2, 9, 8, 7, 3]


@pytest.fixture
def line_dataset():
    schema = Schema((AttributeSpec.numeric("A1", -1000, 1000),))
    return Dataset.from_rows(schema, [(v,) for v in LINE_VALUES], priorities=LINE_PRIORITIES)


@pytest.fixture
def grid_dataset():
    schema = Schema((AttributeSpec.categorical("A1", 4), AttributeSpec.categorical("A2", 4)))
    return Dataset.from_rows(schema, GRID_ROWS)


@pytest.fixture
def plane_dataset():
    schema = Schema((AttributeSpec.numeric("A1", 0, 100), AttributeSpec.numeric("A2", 0, 100)))
    return Dataset.from_rows(schema, PLANE_ROWS, priorities=PLANE_PRIORITIES)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    status = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_ac" not in nodeid:
                continue
            name = nodeid.split("::")[-1].split("[")[0]
            if outcome != "passed":
                status[name] = "FAIL"
            elif rep.when == "call":
                status.setdefault(name, "PASS")
            # parametrized cases fold into one line per criterion
    if not status:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(status):
        terminalreporter.write_line(f"{status[name]}  {name}")
