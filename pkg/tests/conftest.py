"""Independent oracles and instance generators shared by the test suite.

Nothing here imports the code under test except for the plain data types.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from degenrec import DegenerateRoots


def brute_terms(a, u, n_max):
    """Plain loop over the recurrence; independent of iterate_terms."""
    seq = list(u)
    while len(seq) <= n_max:
        seq.append(a[0] * seq[-1] + a[1] * seq[-2] + a[2] * seq[-3])
    return seq[: n_max + 1]


def gauss_solve(matrix, rhs):
    """Gauss-Jordan elimination over Fractions; returns None if singular."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def gauss_inverse(matrix):
    cols = [gauss_solve(matrix, [int(i == j) for i in range(3)]) for j in range(3)]
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _rational(rng, lo_num, hi_num, den):
    return Fraction(rng.randint(lo_num, hi_num), den)


def random_roots(rng, max_ratio=None):
    """Rational roots with 0 < |lambda2| < lambda3 <= 5."""
    while True:
        d3 = rng.randint(1, 6)
        l3 = Fraction(rng.randint(1, 5 * d3), d3)
        d2 = rng.randint(1, 6)
        bound = l3 * d2
        k = rng.randint(-int(bound), int(bound))
        l2 = Fraction(k, d2)
        if l2 == 0 or not -l3 < l2 < l3:
            continue
        if max_ratio is not None and abs(l2) / l3 > max_ratio:
            continue
        return DegenerateRoots(l2, l3)


def random_u(rng):
    d = rng.randint(1, 4)
    return tuple(_rational(rng, -10 * d, 10 * d, d) for _ in range(3))


def random_instances(seed, count, max_ratio=None):
    rng = random.Random(seed)
    return [(random_roots(rng, max_ratio), random_u(rng)) for _ in range(count)]


@pytest.fixture(scope="session")
def instances():
    return random_instances(20261018, 200)


small_fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@st.composite
def degenerate_roots(draw, max_ratio=None):
    l3 = draw(st.fractions(min_value=Fraction(1, 8), max_value=5, max_denominator=12))
    l2 = draw(
        st.fractions(min_value=-l3, max_value=l3, max_denominator=12).filter(
            lambda x: x != 0
            and -l3 < x < l3
            and (max_ratio is None or abs(x) / l3 <= Fraction(max_ratio))
        )
    )
    return DegenerateRoots(l2, l3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in sorted(RESULTS.items()):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  [{detail}]")
