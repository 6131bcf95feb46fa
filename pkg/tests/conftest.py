from fractions import Fraction

import pytest
from hypothesis import strategies as st

from nullseq import FiniteCyclic, NullSeq, Product, R, T
from nullseq.monothetic import build_generator

GROUPS = [T, FiniteCyclic(5), FiniteCyclic(12), R, Product((T, T)), Product((T, FiniteCyclic(3)))]


def fractions(max_den=60):
    return st.builds(Fraction, st.integers(-10 * max_den, 10 * max_den), st.integers(1, max_den))


def values(group):
    if isinstance(group, Product):
        return st.tuples(*(values(f) for f in group.factors))
    if isinstance(group, FiniteCyclic):
        return st.integers(-3 * group.order, 3 * group.order)
    return fractions()


def elements(group):
    return values(group).map(group)


def null_seqs(group, max_len=6, tail=False):
    tails = st.builds(Fraction, st.integers(0, 5), st.integers(1, 100)) if tail else st.just(0)
    return st.builds(lambda vs, t: NullSeq(group, vs, t),
                     st.lists(values(group), max_size=max_len), tails)


@pytest.fixture(scope="session")
def trace3():
    return build_generator(3)


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
