from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullseq import NullSeq, T, d, nu_embed
from nullseq.separation import (
    Cover,
    DiscreteWitness,
    compactness_check,
    dichotomy,
    dichotomy_from_dict,
    distance,
    extract_uniformly_discrete,
    is_null_sequence_of_sets,
    max_separated,
    verify_dichotomy,
)

from .conftest import elements, null_seqs


def pts(*vals):
    return [T(F(v)) for v in vals]


def test_greedy_example():
    out = max_separated(pts(0, F(1, 10), F(1, 5), F(1, 2)), F(3, 20))
    assert out == pts(0, F(1, 5), F(1, 2))
    assert max_separated([], F(1, 3)) == []
    assert max_separated(pts(F(1, 7)), F(1, 3)) == pts(F(1, 7))


@given(points=st.lists(elements(T), max_size=25), u=st.sampled_from([F(1, 20), F(1, 7), F(1, 3)]))
def test_greedy_is_maximal_and_separated(points, u):
    kept = max_separated(points, u)
    assert all(distance(a, b) >= u for i, a in enumerate(kept) for b in kept[i + 1:])
    assert all(any(distance(p, k) < u for k in kept) for p in points)


def test_grid_cover():
    grid = [T(F(k, 200)) for k in range(200)]
    res = dichotomy(grid, F(1, 10), 50)
    assert isinstance(res, Cover)
    assert len(res.centers) <= 11
    assert verify_dichotomy(res)


def test_discrete_witness_on_embedded_points():
    points = [nu_embed(n, T(F(1, 3))) for n in range(1, 21)]
    res = dichotomy(points, F(1, 3), 10)
    assert isinstance(res, DiscreteWitness)
    assert len(res.points) == 11
    assert all(d(a, b).lo == F(1, 3) for i, a in enumerate(res.points) for b in res.points[i + 1:])
    assert verify_dichotomy(res)


def test_single_point_and_empty_input():
    res = dichotomy(pts(F(2, 5)), F(1, 9), 3)
    assert isinstance(res, Cover) and len(res.centers) == 1
    empty = dichotomy([], F(1, 9), 3)
    assert isinstance(empty, Cover) and empty.centers == ()


def test_dichotomy_rejects_bad_arguments():
    with pytest.raises(ValueError):
        dichotomy(pts(0), 0, 3)
    with pytest.raises(ValueError):
        dichotomy(pts(0), F(1, 2), 0)


@given(points=st.lists(elements(T), max_size=30), threshold=st.integers(1, 8))
def test_verdict_round_trip(points, threshold):
    res = dichotomy(points, F(1, 8), threshold)
    assert verify_dichotomy(res)
    back = dichotomy_from_dict(res.to_dict())
    assert back == res
    assert back.to_dict()["scope"] == "finite-sample"


def test_tampered_witness_fails():
    res = dichotomy(pts(*[F(k, 10) for k in range(10)]), F(1, 10), 3)
    bad = DiscreteWitness(res.points[:-1] + (res.points[0],), res.separation, res.threshold, 0)
    assert not verify_dichotomy(bad)


def test_extraction_examples():
    rows = [nu_embed(n, T(F(1, 2))) for n in range(1, 11)]
    got = extract_uniformly_discrete(rows, F(1, 2), 5)
    assert len(got) == 5
    assert all(d(a, b).lo >= F(1, 4) for i, a in enumerate(got) for b in got[i + 1:])
    zeros = [NullSeq(T, [0, 0], 0)] * 4
    assert extract_uniformly_discrete(zeros, F(1, 2), 1) is None
    assert extract_uniformly_discrete(rows[:1], F(1, 2), 2) is None


def test_extraction_needs_exact_rows():
    with pytest.raises(ValueError):
        extract_uniformly_discrete([NullSeq(T, [F(1, 2)], F(1, 9))], F(1, 2), 1)


@given(rows=st.lists(null_seqs(T, max_len=8), min_size=1, max_size=12),
       u=st.sampled_from([F(1, 5), F(1, 3), F(1, 2)]), want=st.integers(1, 4))
def test_extraction_excludes_cover(rows, u, want):
    got = extract_uniformly_discrete(rows, u, want)
    if got is None:
        return
    assert all(d(a, b).lo >= u / 2 for i, a in enumerate(got) for b in got[i + 1:])
    res = dichotomy(got, u / 2, want - 1) if want > 1 else None
    if res is not None:
        assert isinstance(res, DiscreteWitness)


def test_null_sequence_of_sets_examples():
    sets = [[T(F(1, n + 2))] for n in range(1, 11)]
    assert is_null_sequence_of_sets(sets, F(1, 5)) == 4
    assert is_null_sequence_of_sets([[T()]] * 5, F(1, 5)) == 1
    assert is_null_sequence_of_sets([[T(F(1, 3))]] * 5, F(1, 4)) is None


def test_compactness_examples():
    per = [[T(), T(F(1, 2 ** n))] for n in range(1, 12)]
    v = compactness_check(per, [F(1, 2), F(1, 4), F(1, 8)])
    assert v.compact and v.indices == (2, 3, 4)
    bad = compactness_check([[T(), T(F(1, 3))]] * 6, [F(1, 4)])
    assert not bad.compact and bad.failing_radius == F(1, 4)
    assert compactness_check([[T()]] * 4, [F(1, 2), F(1, 9)]).compact
    assert type(v).from_dict(v.to_dict()) == v
