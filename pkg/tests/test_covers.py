import math

import pytest
from hypothesis import given, settings, strategies as st

from cubekit.covers import (
    CoverSpec,
    CoverSpecError,
    compare_with_generic,
    cover_ktheory,
    double_cover_matrices,
    exact_g,
    parse_spec,
    predicted_snf,
)
from cubekit.groups import parse_group


@st.composite
def specs(draw, k=None):
    k = k or draw(st.integers(3, 5))
    tags = draw(st.lists(st.tuples(st.sampled_from("TD"), st.integers(2, 7)), min_size=k, max_size=k))
    if all(t == "D" for t, _ in tags):
        tags[0] = ("T", tags[0][1])
    return CoverSpec(tuple(tags))


def test_figure_matrices():
    with pytest.warns(UserWarning, match="hypothesis"):
        s = parse_spec("D:2,T:1,T:1")
    m = double_cover_matrices(s)
    assert [m.dense(i).tolist() for i in range(3)] == [[[4, 0], [0, 4]], [[0, 2], [2, 0]], [[0, 2], [2, 0]]]


def test_substitution():
    m = double_cover_matrices(parse_spec("T:2,D:3,D:3"))
    assert [m.dense(i).tolist() for i in range(3)] == [[[0, 4], [4, 0]], [[6, 0], [0, 6]], [[6, 0], [0, 6]]]


def test_spec_errors():
    with pytest.raises(CoverSpecError, match="at least one"):
        parse_spec("D:2,D:3")
    with pytest.raises(CoverSpecError):
        parse_spec("X:2")
    with pytest.raises(CoverSpecError):
        parse_spec("T:0")
    with pytest.raises(CoverSpecError):
        parse_spec("T2")


def test_g_five_prediction():
    s = parse_spec("T:2,D:3,D:3")
    assert s.a == (-15, -5, -5) and s.g == 5
    pred = predicted_snf(s)
    assert pred.divisors[1] == {1: 2, 5: 2}
    assert compare_with_generic(s).ok


def test_g_one():
    s = parse_spec("T:2,D:2,D:4")
    assert s.a == (-15, -3, -7) and s.g == 1
    cmp_ = compare_with_generic(s)
    assert cmp_.ok
    assert all(set(d) == {1} for d in cmp_.computed_divisors)
    assert cover_ktheory(s).trivial


def test_rank_formula_k4():
    assert predicted_snf(parse_spec("T:2,D:3,D:3,D:3")).ranks == [2, 6, 6, 2]


def test_k3_ktheory():
    rep = cover_ktheory(parse_spec("T:2,D:3,D:3"))
    assert rep.k1 == "(Z/5)^2" and rep.k0_order == 25
    assert str(rep.sequences[0]) == "0 -> Z/5 -> K_0 -> Z/5 -> 0"


def test_k4_sequences():
    s = parse_spec("T:2,D:2,D:5,D:8")  # a = -15, -3, -9, -15
    rep = cover_ktheory(s)
    assert rep.g == 3
    assert rep.homologies[1] == parse_group("(Z/3)^3") == rep.homologies[2]
    assert rep.homologies[3] == parse_group("Z/3")
    assert str(rep.sequences[0]) == "0 -> (Z/3)/G_0 -> K_0 -> (Z/3)^3 -> 0"
    assert str(rep.sequences[1]) == "0 -> ((Z/3)^3)/G_2 -> K_1 -> G_3 ⊆ Z/3 -> 0"


def test_printed_g_fails_with_two_t_parameters():
    s = parse_spec("T:2,T:3,D:3")
    assert s.g == 5 and exact_g(s) == 1
    assert not compare_with_generic(s).ok
    assert compare_with_generic(s, exact_g(s)).ok


@settings(max_examples=40, deadline=None)
@given(specs())
def test_exact_g_prediction_matches_generic(s):
    assert compare_with_generic(s, exact_g(s)).ok


@settings(max_examples=40, deadline=None)
@given(specs())
def test_printed_g_holds_with_one_t_parameter(s):
    ts = {v for t, v in s.tags if t == "T"}
    assert s.g % exact_g(s) == 0
    if len(ts) == 1:
        assert exact_g(s) == s.g
        assert compare_with_generic(s).ok


@settings(max_examples=30, deadline=None)
@given(specs())
def test_rank_claim(s):
    cmp_ = compare_with_generic(s)
    assert cmp_.computed_ranks == [2 * math.comb(s.k - 1, i - 1) for i in range(1, s.k + 1)]
