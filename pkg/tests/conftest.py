import numpy as np
import pytest
from hypothesis import strategies as st

from discrete_clt.dist_core import IntDist

_acceptance_lines: list[tuple[str, bool, str]] = []


def random_dist(rng: np.random.Generator, max_points: int = 8, lo_range=(-5, 5), holes=True) -> IntDist:
    """Random finite law with at least two support points."""
    k = int(rng.integers(2, max_points + 1))
    w = rng.random(k) + 0.05
    if holes and k > 2:
        w[rng.random(k) < 0.2] = 0.0
        w[0] = max(w[0], 0.1)
        w[-1] = max(w[-1], 0.1)
    return IntDist(int(rng.integers(*lo_range)), w / w.sum())


@st.composite
def int_dists(draw, max_points=10, min_points=1):
    offset = draw(st.integers(-20, 20))
    w = draw(
        st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=min_points, max_size=max_points).filter(
            lambda v: sum(v) > 1e-3
        )
    )
    w = np.array(w)
    return IntDist(offset, w / w.sum())


@pytest.fixture
def record_criterion():
    """Store a one-line verdict shown in the terminal summary."""

    def record(label: str, ok: bool, detail: str = ""):
        _acceptance_lines.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _acceptance_lines:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
