import numpy as np
import pytest
from hypothesis import settings, strategies as st

from nonarch.ffield import default_field
from nonarch.laurent import Series

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_Q = (2, 3, 4, 5, 7, 8, 9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=(2, 3, 4))
def field(request):
    return default_field(request.param)


@st.composite
def series(draw, q=2, v_min=-4, max_len=12, exact=None, integral=False):
    """Random series over F_q; exact or known modulo some X^P."""
    f = default_field(q)
    lo = 0 if integral else v_min
    start = draw(st.integers(lo, lo + 4))
    codes = draw(st.lists(st.integers(0, f.q - 1), min_size=0, max_size=max_len))
    is_exact = draw(st.booleans()) if exact is None else exact
    prec = None if is_exact else start + len(codes) + draw(st.integers(0, 3))
    return Series._raw(f, start, codes, prec)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    record = {}
    yield record
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    status = "FAIL" if failed or not record.get("ok", False) else "PASS"
    ACCEPTANCE_LINES.append(
        f"criterion {record.get('id', '?'):>2}: {status}  {record.get('name', request.node.name)}"
        f"  ({record.get('elapsed', float('nan')):.3f} s, limit {record.get('limit', '?')} s)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
