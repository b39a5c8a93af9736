import pytest
from hypothesis import given, strategies as st

from cubekit.groups import AbelianGroup, invariant_factors, parse_group


def test_invariant_factors():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([4, 12, 2, 2]) == (2, 2, 4, 12)
    assert invariant_factors([2, 4, 3]) == (2, 12)
    assert invariant_factors([]) == ()


@given(st.lists(st.integers(2, 60), max_size=6))
def test_factors_preserve_order_and_chain(orders):
    f = invariant_factors(orders)
    prod_a = 1
    for x in orders:
        prod_a *= x
    prod_b = 1
    for x in f:
        prod_b *= x
    assert prod_a == prod_b
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))


@given(st.integers(0, 30), st.lists(st.integers(2, 40), max_size=5))
def test_text_round_trip(rank, orders):
    g = AbelianGroup.from_cyclic(rank, orders)
    assert parse_group(str(g)) == g


@pytest.mark.parametrize("text,rank,tors", [
    ("Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2", 21, (2,) * 6 + (4, 4, 12, 12)),
    ("Z⊕Z/5", 1, (5,)),
    ("0", 0, ()),
    ("Z/2^3", 0, (2, 2, 2)),
])
def test_parse(text, rank, tors):
    g = parse_group(text)
    assert g.free_rank == rank and g.torsion == tors


def test_rejects_bad_chain_and_text():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    with pytest.raises(ValueError):
        parse_group("Q^2")
    with pytest.raises(ValueError):
        parse_group("Z/0")


def test_sum_and_parts():
    g = AbelianGroup.from_cyclic(2, [4]) + AbelianGroup.from_cyclic(1, [6])
    assert str(g) == "Z^3 + Z/2 + Z/12"
    assert g.torsion_order == 24
    assert g.primary_decomposition() == {2: [2, 4], 3: [3]}
    assert str(AbelianGroup()) == "0" and AbelianGroup().is_trivial
