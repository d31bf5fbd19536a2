import numpy as np
import pytest
from hypothesis import assume, strategies as st

from mcimbias.params import ParameterPoint, is_valid

ACCEPTANCE_LINES: list[str] = []

probs = st.floats(min_value=0.01, max_value=0.99)
rrs = st.floats(min_value=np.log(0.2), max_value=np.log(5.0)).map(np.exp)
p_miss = st.floats(min_value=0.0, max_value=0.9)


@st.composite
def valid_points(draw):
    point = ParameterPoint(draw(probs), draw(probs), draw(p_miss), draw(rrs), draw(rrs))
    assume(is_valid(point))
    return point


def random_valid_points(rng: np.random.Generator, k: int, rr_max: float = 5.0) -> list[ParameterPoint]:
    out = []
    while len(out) < k:
        pt = ParameterPoint(
            p_e=rng.uniform(0.01, 0.9),
            p_c=rng.uniform(0.01, 0.9),
            p_miss=rng.uniform(0.0, 0.6),
            rr_c=float(np.exp(rng.uniform(np.log(0.2), np.log(rr_max)))),
            rr_ec=float(np.exp(rng.uniform(np.log(0.2), np.log(5.0)))),
        )
        if is_valid(pt):
            out.append(pt)
    return out


@pytest.fixture(scope="session")
def default_records():
    from mcimbias.sweep import default_grid, enumerate_valid

    return enumerate_valid(default_grid())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
