import math

import numpy as np
import pytest
from hypothesis import strategies as st

from nonclassical.state import QubitState


@st.composite
def qubit_states(draw, min_p=0.0, max_p=1.0):
    p = draw(st.floats(min_p, max_p, allow_nan=False))
    r = draw(st.floats(0.0, 1.0))
    phi = draw(st.floats(0.0, 2 * math.pi))
    return QubitState(p, r * math.sqrt(p * (1 - p)) * complex(math.cos(phi), math.sin(phi)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_arrays(rng, n):
    p = rng.random(n)
    x = rng.random(n) * np.sqrt(p * (1 - p)) * np.exp(2j * np.pi * rng.random(n))
    return p, x


# acceptance criteria report one line each at the end of the run
ACCEPTANCE = {}


def record(n, ok, detail):
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {detail}")
