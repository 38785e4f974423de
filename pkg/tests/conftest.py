import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilcert.linalg import Matrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.fractions(min_value=-8, max_value=8, max_denominator=7)


@st.composite
def int_matrices(draw, n=None, lo=-4, hi=4, max_n=4):
    n = draw(st.integers(1, max_n)) if n is None else n
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))
    return Matrix(rows)


@st.composite
def int_polys(draw, max_degree=6, bound=9):
    deg = draw(st.integers(1, max_degree))
    coeffs = draw(st.lists(st.integers(-bound, bound), min_size=deg, max_size=deg))
    lead = draw(st.integers(1, bound)) * draw(st.sampled_from((1, -1)))
    return coeffs + [lead]


@pytest.fixture
def rng():
    return random.Random(20240601)


def frac(s) -> Fraction:
    return Fraction(s)


# --- acceptance summary ----------------------------------------------------------

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        status, line = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"AC{n} {status}: {line}")
