from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullseq import DescriptorMismatch, FiniteCyclic, NullSeq, Product, R, T, d, nu_embed, prefix_project, project
from nullseq.sequences import Interval, seq_neg, seq_scalar_mul, zero_seq

from .conftest import GROUPS, elements, null_seqs


def seq(*vals, tail=0, group=T):
    return NullSeq(group, [F(v) for v in vals], F(tail))


def test_metric_examples():
    assert d(nu_embed(2, T(F(1, 4))), zero_seq(T)) == Interval(F(1, 4), F(1, 4))
    x = seq(F(1, 3), F(1, 8))
    assert d(x, x) == Interval(0, 0)
    y = seq(0, F(1, 8), tail=F(1, 100))
    assert d(x, y) == Interval(F(1, 3), F(1, 3))


def test_tail_widens_interval():
    x = seq(F(1, 5))
    y = seq(tail=F(1, 10))
    iv = d(x, y)
    assert iv.lo == F(1, 10) and iv.hi == F(3, 10)


def test_embedding_and_projection():
    x = nu_embed(3, T(F(1, 2)))
    assert x.values == (0, 0, F(1, 2)) and x.tail == 0
    assert nu_embed(1, T()) == zero_seq(T)
    a = T(F(2, 7))
    assert project(3, nu_embed(3, a)) == a
    y = seq(F(1, 3), F(1, 8))
    assert project(2, y) == T(F(1, 8))
    assert project(99, y).is_zero()
    assert prefix_project(2, seq(F(1, 3), F(1, 8), F(1, 9))) == (T(F(1, 3)), T(F(1, 8)))
    with pytest.raises(ValueError):
        nu_embed(0, a)


def test_arithmetic_examples():
    assert nu_embed(1, T(F(1, 4))) + nu_embed(2, T(F(1, 4))) == seq(F(1, 4), F(1, 4))
    x = seq(F(1, 3), F(2, 5), tail=F(1, 50))
    s = x + seq_neg(x)
    assert all(v == 0 for v in s.values) and s.tail == F(2, 50)
    assert seq_scalar_mul(3, nu_embed(1, T(F(2, 7)))) == nu_embed(1, T(F(6, 7)))


def test_trailing_zeros_do_not_matter():
    assert seq(F(1, 2), 0, 0) == seq(F(1, 2))
    assert seq(F(1, 2), 0, tail=F(1, 9)) != seq(F(1, 2), tail=F(1, 9))


def test_mismatch_refused():
    with pytest.raises(DescriptorMismatch):
        d(seq(0), NullSeq(FiniteCyclic(3), [1], 0))


def test_negative_tail_refused():
    with pytest.raises(ValueError):
        seq(0, tail=-1)


@pytest.mark.parametrize("text", ["[T: 1/3, 1/8 | tail<=1/100]", "[Z5: 1, 4 | tail<=0]",
                                  "[T^2: (1/3,1/4) | tail<=0]", "[R: | tail<=0]"])
def test_text_round_trip(text):
    x = NullSeq.parse(text)
    assert NullSeq.parse(str(x)) == x
    assert NullSeq.from_dict(x.to_dict()) == x


@pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.text())
@given(data=st.data())
def test_metric_is_brute_force_sup(group, data):
    x = data.draw(null_seqs(group))
    y = data.draw(null_seqs(group))
    n = max(x.length, y.length)
    want = max([group.dist(x.coordinate(i), y.coordinate(i)) for i in range(1, n + 1)], default=F(0))
    assert d(x, y) == Interval(want, want)


@pytest.mark.parametrize("group", [T, R, Product((T, FiniteCyclic(3)))], ids=lambda g: g.text())
@given(data=st.data())
def test_metric_axioms(group, data):
    x, y, z = (data.draw(null_seqs(group)) for _ in range(3))
    dxy = d(x, y).lo
    assert dxy == d(y, x).lo
    assert (dxy == 0) == (x == y)
    assert d(x, z).lo <= dxy + d(y, z).lo
    assert d(x + z, y + z) == d(x, y)


@given(data=st.data(), n=st.integers(1, 8))
def test_embedding_is_isometric(data, n):
    a, b = data.draw(elements(T)), data.draw(elements(T))
    assert d(nu_embed(n, a), nu_embed(n, b)).lo == T.dist(a.value, b.value)


def _completion(x, n, draw):
    """A concrete finitely supported sequence consistent with ``x`` up to length ``n``."""
    extra = []
    for _ in range(max(0, n - x.length)):
        num = draw(st.integers(-x.tail.numerator * 4, x.tail.numerator * 4)) if x.tail else 0
        extra.append(F(num, 4 * x.tail.denominator) if x.tail else F(0))
    return NullSeq(T, list(x.values) + extra, 0)


@given(data=st.data())
def test_interval_encloses_every_completion(data):
    x = data.draw(null_seqs(T, tail=True))
    y = data.draw(null_seqs(T, tail=True))
    n = max(x.length, y.length) + 2
    cx, cy = _completion(x, n, data.draw), _completion(y, n, data.draw)
    assert d(cx, cy).lo in d(x, y)


@given(data=st.data())
def test_sum_encloses_every_completion(data):
    x = data.draw(null_seqs(T, tail=True))
    y = data.draw(null_seqs(T, tail=True))
    n = max(x.length, y.length) + 2
    cx, cy = _completion(x, n, data.draw), _completion(y, n, data.draw)
    s = x + y
    cs = cx + cy
    for i in range(1, n + 1):
        if i <= s.length:
            assert T.dist(cs.coordinate(i), s.coordinate(i)) == 0
        else:
            assert T.norm(cs.coordinate(i)) <= s.tail


@given(data=st.data(), k=st.integers(-9, 9))
def test_scalar_matches_repeated_addition(data, k):
    x = data.draw(null_seqs(T))
    acc = zero_seq(T)
    for _ in range(abs(k)):
        acc = acc + (x if k > 0 else -x)
    assert k * x == acc
