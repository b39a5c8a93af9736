import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cubekit.rank_graph import (
    AdjacencyMatrices,
    adjacency_matrices,
    check_uce,
    connectivity_aperiodicity,
    read_matrix_text,
    validate_k_graph,
    write_matrix_text,
)

NAMES = ["gamma357", "gamma234", "F2^3", "F3^3", "F2^4"]


@pytest.mark.parametrize("name", NAMES)
def test_fixture_is_k_graph(get_pipeline, name):
    pl = get_pipeline(name)
    rep = validate_k_graph(pl.mats, uce_sample=300, seed=1, p=pl.p)
    assert rep.is_k_graph
    assert rep.column_sums_pass and rep.row_sums_equal_size_minus_one
    assert rep.row_three_pass
    assert rep.connected and rep.aperiodic


@pytest.mark.parametrize("name", ["gamma357", "F2^3"])
def test_exhaustive_uce(get_pipeline, name):
    rep = check_uce(get_pipeline(name).mats, "all")
    assert rep.passed and rep.mode == "all"


def test_printed_base_criterion_is_empty_on_gamma357(get_pipeline):
    pl = get_pipeline("gamma357")
    printed = adjacency_matrices(pl.cubes, pl.p, printed_mp=True)
    assert printed.mats[0].nnz == 0
    assert pl.mats.mats[0].nnz == 192 * 3


@pytest.mark.parametrize("name", ["F2^3", "F3^3"])
def test_printed_base_criterion_agrees_on_free_products(get_pipeline, name):
    pl = get_pipeline(name)
    printed = adjacency_matrices(pl.cubes, pl.p, printed_mp=True)
    assert (printed.mats[0] != pl.mats.mats[0]).nnz == 0


def test_uce_sampling_is_seeded(get_pipeline):
    m = get_pipeline("gamma234").mats
    a, b = check_uce(m, 50, seed=3), check_uce(m, 50, seed=3)
    assert a.to_dict() == b.to_dict()


def test_non_commuting_family_is_rejected():
    a = np.array([[0, 1], [1, 0]])
    b = np.array([[1, 1], [0, 1]])
    rep = validate_k_graph(AdjacencyMatrices.from_dense([a, b]))
    assert not rep.commutation_pass and not rep.is_k_graph


def test_large_products_fail_zero_one():
    a = np.ones((3, 3), dtype=int)
    rep = validate_k_graph(AdjacencyMatrices.from_dense([a, a]))
    assert not rep.zero_one_pass


def test_permutation_keeps_validity(get_pipeline):
    m = get_pipeline("F2^3").mats
    perm = np.random.default_rng(0).permutation(m.n)
    rep = validate_k_graph(m.permuted(perm), uce_sample=100)
    assert rep.is_k_graph


def test_disconnected_graph_detected():
    a = sp.identity(4, dtype=np.int64, format="csr")
    flags = connectivity_aperiodicity(AdjacencyMatrices([a, a]))
    assert not flags["connected"] and flags["components"] == 4


@settings(max_examples=25, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=st.integers(-50, 50)))
def test_matrix_text_round_trip(tmp_path_factory, a):
    path = tmp_path_factory.mktemp("m") / "a.txt"
    write_matrix_text(path, a)
    assert np.array_equal(read_matrix_text(path), a)
