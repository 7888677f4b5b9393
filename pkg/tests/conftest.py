import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TWO_BLOBS = np.array([(0, 0), (0.1, 0.1), (0.2, 0.0), (10, 10), (10.1, 10.1)])


@pytest.fixture
def two_blobs():
    return TWO_BLOBS.copy()


@st.composite
def point_sets(draw, max_n=60, dims=st.integers(1, 3), lattice=None):
    """Point arrays, sometimes snapped to a lattice so boundaries and duplicates occur."""
    d = draw(dims)
    n = draw(st.integers(1, max_n))
    elems = st.floats(-50, 50, allow_nan=False, allow_infinity=False, width=64)
    pts = draw(arrays(np.float64, (n, d), elements=elems))
    snap = draw(st.booleans()) if lattice is None else lattice
    if snap:
        pts = np.round(pts * 4) / 4
    return pts


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL/SKIP line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::test_criterion" not in rep.nodeid:
                continue
            if rep.when != "call" and not (outcome == "skipped" or rep.failed):
                continue
            detail = dict(rep.user_properties).get("detail", "")
            if outcome == "skipped" and isinstance(rep.longrepr, tuple):
                detail = rep.longrepr[2].removeprefix("Skipped: ")
            name = rep.nodeid.split("::")[-1]
            rows.append((name, {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome],
                         detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in sorted(rows):
        terminalreporter.write_line(f"{status:4}  {name}  {detail}".rstrip())
