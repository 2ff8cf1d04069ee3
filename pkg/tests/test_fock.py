import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncbohr import words as W
from ncbohr.errors import ValidationError
from ncbohr.fock import (
    CoeffSeries,
    FockRep,
    assemble,
    flip_unitary,
    graded_row_norm,
    left_creation,
    qstar_q,
    right_creation,
    sparse_assemble,
    symmetric_basis,
    symmetric_compress,
    word_operator,
)


def creation_by_dictionary(n, L, i):
    """Independent construction: index words explicitly and map beta -> i beta."""
    words = [t for k in range(L + 1) for t in sorted(itertools.product(range(1, n + 1), repeat=k))]
    pos = {w: j for j, w in enumerate(words)}
    m = np.zeros((len(words), len(words)))
    for w in words:
        if len(w) < L:
            m[pos[(i,) + w], pos[w]] = 1.0
    return m


@pytest.mark.parametrize("n,L", [(1, 4), (2, 3), (3, 2)])
def test_creation_matches_dictionary_construction(n, L):
    rep = FockRep(n, L)
    for i in range(1, n + 1):
        np.testing.assert_array_equal(left_creation(rep, i), creation_by_dictionary(n, L, i))


def test_creation_relations_below_top_level():
    rep = FockRep(2, 3)
    s = [left_creation(rep, i) for i in (1, 2)]
    keep = W.basis_size(2, 2)
    for i in range(2):
        for j in range(2):
            prod = (s[i].T @ s[j])[:keep, :keep]
            np.testing.assert_array_equal(prod, np.eye(keep) if i == j else np.zeros((keep, keep)))
    # row contraction: S_1 S_1^* + S_2 S_2^* is the projection off the vacuum
    total = s[0] @ s[0].T + s[1] @ s[1].T
    np.testing.assert_array_equal(total, np.diag([0.0] + [1.0] * (rep.dim - 1)))


def test_word_operator_is_product_of_generators():
    rep = FockRep(2, 4)
    a = W.Word((2, 1, 1), 2)
    s1, s2 = left_creation(rep, 1), left_creation(rep, 2)
    np.testing.assert_array_equal(word_operator(rep, a), s2 @ s1 @ s1)


def test_flip_conjugates_left_to_right_creation():
    rep = FockRep(2, 3)
    f = flip_unitary(rep)
    np.testing.assert_array_equal(f @ f, np.eye(rep.dim))
    for i in (1, 2):
        np.testing.assert_array_equal(f @ left_creation(rep, i) @ f, right_creation(rep, i))
    a = W.Word((1, 2), 2)
    np.testing.assert_array_equal(f @ word_operator(rep, a) @ f, word_operator(rep, a, right=True))


def test_left_and_right_creations_commute():
    rep = FockRep(2, 3)
    for i in (1, 2):
        for j in (1, 2):
            li, rj = left_creation(rep, i), right_creation(rep, j)
            np.testing.assert_array_equal(li @ rj, rj @ li)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_graded_slice_norm_is_euclidean(n, k, seed):
    rng = np.random.default_rng(seed)
    coeffs = {w.letters: complex(*rng.standard_normal(2)) for w in W.enumerate_words(n, k)}
    series = CoeffSeries.from_scalars(n, "holomorphic", coeffs)
    norm = np.linalg.norm(assemble(series, FockRep(n, k)), 2)
    expected = np.sqrt(sum(abs(c) ** 2 for c in coeffs.values()))
    assert abs(norm - expected) <= 1e-10 * max(1.0, expected)
    assert abs(graded_row_norm(series, k) - expected) <= 1e-12 * max(1.0, expected)


def test_operator_graded_norm_uses_gram_sum():
    rng = np.random.default_rng(3)
    terms = {w: rng.standard_normal((2, 2)) for w in W.enumerate_words(2, 2)}
    series = CoeffSeries(2, "holomorphic", 2, terms)
    norm = np.linalg.norm(assemble(series, FockRep(2, 2)), 2)
    assert abs(norm - graded_row_norm(series, 2)) < 1e-10


def test_harmonic_assembly_is_selfadjoint_and_banded():
    series = CoeffSeries.from_scalars(1, "harmonic", {(): 2.0, (1,): 1.0})
    h = assemble(series, FockRep(1, 3), 0.5)
    expected = 2 * np.eye(4) + 0.5 * (np.eye(4, k=1) + np.eye(4, k=-1))
    np.testing.assert_allclose(h, expected)


def test_tensor_order_puts_coefficients_inside():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    series = CoeffSeries(1, "holomorphic", 2, {W.Word((1,), 1): a})
    rep = FockRep(1, 2)
    np.testing.assert_allclose(assemble(series, rep), np.kron(left_creation(rep, 1), a))


def test_fejer_instance_expansion():
    band = qstar_q({W.identity(1): np.eye(1), W.Word((1,), 1): np.eye(1)}, 1, 1)
    assert {w.letters: complex(a[0, 0]) for w, a in band.items()} == {(): 2, (1,): 1}


def test_single_word_q_has_no_off_diagonal_terms():
    band = qstar_q({W.Word((2, 1), 2): 3 * np.eye(1)}, 2, 1)
    assert list(band) == [W.identity(2)]
    assert band[W.identity(2)][0, 0] == 9


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_qstar_q_matches_assembled_product(n, degree, seed):
    rng = np.random.default_rng(seed)
    d = 2
    q = {w: rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for w in W.words_up_to(n, degree)}
    L = 2 * degree
    rep = FockRep(n, L)
    qm = assemble(CoeffSeries(n, "holomorphic", d, q), rep)
    h = assemble(CoeffSeries(n, "harmonic", d, qstar_q(q, n, d)), rep)
    keep = W.basis_size(n, L - degree) * d
    np.testing.assert_allclose((qm.conj().T @ qm)[:keep, :keep], h[:keep, :keep], atol=1e-11)


def test_symmetric_basis_is_isometry_onto_fixed_vectors():
    rep = FockRep(2, 3)
    v, labels = symmetric_basis(rep)
    np.testing.assert_allclose(v.T @ v, np.eye(len(labels)), atol=1e-14)
    assert len(labels) == sum(k + 1 for k in range(4))
    x = np.random.default_rng(0).standard_normal((rep.dim, rep.dim))
    np.testing.assert_allclose(symmetric_compress(rep, x), v.T @ x @ v)


def test_degree_above_level_warns_and_drops_terms():
    series = CoeffSeries.from_scalars(1, "holomorphic", {(1, 1, 1): 1.0})
    with pytest.warns(UserWarning):
        m = assemble(series, FockRep(1, 2))
    assert not m.any()


def test_validation_errors():
    with pytest.raises(ValidationError):
        CoeffSeries(1, "analytic", 1, {})
    with pytest.raises(ValidationError):
        CoeffSeries.from_scalars(1, "harmonic", {(): 1j})
    with pytest.raises(ValidationError):
        CoeffSeries(1, "holomorphic", 2, {W.identity(1): np.eye(3)})
    with pytest.raises(ValidationError):
        assemble(CoeffSeries.from_scalars(1, "holomorphic", {(): 1.0}), FockRep(1, 2), 1.5)


def test_dense_cap_is_configurable(monkeypatch):
    monkeypatch.setenv("NCBOHR_MAX_DIM", "10")
    with pytest.raises(ValidationError):
        left_creation(FockRep(2, 3), 1)
    monkeypatch.setenv("NCBOHR_MAX_DIM", "not-a-number")
    with pytest.raises(ValidationError):
        left_creation(FockRep(1, 1), 1)


@pytest.mark.parametrize("kind", ["holomorphic", "harmonic"])
def test_sparse_assembly_matches_dense(kind):
    rng = np.random.default_rng(5)
    terms = {w: rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for w in W.words_up_to(2, 2)}
    if kind == "harmonic":
        terms[W.identity(2)] = terms[W.identity(2)] + terms[W.identity(2)].conj().T
    series = CoeffSeries(2, kind, 2, terms)
    rep = FockRep(2, 3)
    np.testing.assert_allclose(sparse_assemble(series, rep, 0.6).toarray(), assemble(series, rep, 0.6), atol=1e-15)
