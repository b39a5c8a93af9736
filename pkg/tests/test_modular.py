import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cubekit.homology import homology_groups
from cubekit.modular import (
    local_valuations,
    primes_up_to,
    rank_mod,
    rational_rank,
    smith_normal_form_modular,
    unit_echelon,
)
from cubekit.snf import smith_normal_form

SMALL = primes_up_to(50)


def smooth(d):
    for p in SMALL:
        while d % p == 0:
            d //= p
    return d == 1


mats = arrays(np.int64, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(-6, 6))


@settings(max_examples=150, deadline=None)
@given(mats)
def test_agrees_with_exact_when_torsion_is_small(a):
    exact = smith_normal_form(a).diagonal
    if all(smooth(abs(d)) for d in exact if d):
        assert smith_normal_form_modular(a, 50).diagonal == exact


@settings(max_examples=60, deadline=None)
@given(mats, st.sampled_from([2, 3, 5, 7, 30, 2 ** 20, 2097143]))
def test_unit_rank_bounded_by_rational_rank(a, mod):
    r = smith_normal_form(a).rank
    got, rest = unit_echelon(a, mod)
    assert got <= r
    assert rest.shape[0] <= a.shape[0] - got


def test_large_torsion_prime_is_out_of_scope():
    a = np.diag([1, 2, 101])
    assert smith_normal_form(a).diagonal == [1, 1, 202]
    assert smith_normal_form_modular(a, 50).diagonal == [1, 1, 2]
    assert smith_normal_form_modular(a, 101).diagonal == [1, 1, 202]
    assert smith_normal_form_modular(a, 50).prime_bound == 50


def test_local_valuations():
    a = np.diag([2, 4, 12, 0])
    assert local_valuations(a, 2, 3) == {1: 1, 2: 2}
    assert local_valuations(a, 3, 3) == {0: 2, 1: 1}
    assert local_valuations(a, 5, 3) == {0: 3}


def test_precision_exhausted():
    a = np.array([[2 ** 22]])
    with pytest.raises(ArithmeticError):
        local_valuations(a, 2, 1)


def test_composite_screen_falls_back_to_single_primes():
    # no entry is a unit mod 6, so the screen sees rank 0 and each prime is tried
    a = np.array([[2, 3], [0, 3]])
    assert rank_mod(a, 6) == 0
    assert (rank_mod(a, 2), rank_mod(a, 3)) == (1, 1)
    assert rational_rank(a) == 2
    assert smith_normal_form_modular(a, 5).diagonal == [1, 6]


def test_fixture_homology_modular(get_pipeline):
    pl = get_pipeline("gamma234")
    h = homology_groups(pl.complex, method="modular", prime_bound=30)
    assert h.groups == pl.homology.groups
    assert h.prime_bound == 30
    assert h.to_dict()["torsion_primes_up_to"] == 30
    assert "torsion_primes_up_to" not in pl.homology.to_dict()


def test_modular_has_no_transforms(get_pipeline):
    with pytest.raises(ValueError):
        homology_groups(get_pipeline("F2^3").complex, transforms_for=(1,), method="modular")
