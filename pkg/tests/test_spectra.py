import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncbohr.errors import ValidationError
from ncbohr.spectra import (
    euclidean_joint_radius,
    graded_numerical_radius,
    joint_numerical_radius,
    joint_operator,
    joint_radius_estimate,
    lambda_max,
    numerical_radius,
    psd_check,
    psd_sqrt,
    row_norm,
    column_norm,
    stabilized_joint_radius,
)


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def numerical_radius_by_scan(t, points=20000):
    """Oracle: dense theta scan of lambda_max(Re e^{i theta} T), no refinement."""
    best = 0.0
    for th in np.linspace(0, 2 * np.pi, points, endpoint=False):
        h = np.exp(1j * th) * t
        best = max(best, np.linalg.eigvalsh((h + h.conj().T) / 2)[-1])
    return best


@pytest.mark.parametrize("m", range(2, 13))
def test_jordan_block_numerical_radius(m):
    assert abs(numerical_radius(np.eye(m, k=1)).value - math.cos(math.pi / (m + 1))) <= 1e-8


def test_normal_matrix_uses_spectral_radius():
    u = np.linalg.qr(random_matrix(np.random.default_rng(0), 4))[0]
    t = u @ np.diag([1, -2j, 0.5, 3]) @ u.conj().T
    assert numerical_radius(t).value == pytest.approx(3.0, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_numerical_radius_agrees_with_dense_scan(d, seed):
    t = random_matrix(np.random.default_rng(seed), d)
    w = numerical_radius(t).value
    scan = numerical_radius_by_scan(t)
    assert scan <= w + 1e-9
    assert w - scan <= 1e-5 * max(1.0, w)
    # classical bounds ||T||/2 <= w <= ||T||
    n = np.linalg.norm(t, 2)
    assert n / 2 - 1e-12 <= w <= n + 1e-12


def test_psd_verdicts_use_scaled_threshold():
    assert psd_check(np.diag([1.0, 0.0])).is_psd
    assert not psd_check(np.diag([1.0, -1e-3])).is_psd
    v = psd_check(np.diag([1e6, -1e-4]))
    assert v.is_psd and v.threshold == pytest.approx(1e-3)
    with pytest.raises(ValidationError):
        psd_check(np.zeros((2, 3)))


def test_psd_sqrt_squares_back():
    g = random_matrix(np.random.default_rng(1), 3)
    p = g @ g.conj().T
    r = psd_sqrt(p)
    np.testing.assert_allclose(r @ r, p, atol=1e-10)


@pytest.mark.parametrize("L", [1, 2, 5, 20, 300])
def test_joint_radius_of_single_shift_is_jordan_value(L):
    w = graded_numerical_radius(joint_operator([np.eye(1)], L))
    assert w == pytest.approx(math.cos(math.pi / (L + 2)), abs=1e-12)


def test_sparse_and_dense_joint_radius_agree():
    rng = np.random.default_rng(2)
    xs = [random_matrix(rng, 2) for _ in range(2)]
    op = joint_operator(xs, 7)
    assert op.shape[0] > 256
    dense = lambda_max((op.toarray() + op.toarray().conj().T) / 2)
    assert graded_numerical_radius(op) == pytest.approx(dense, abs=1e-10)


def test_graded_radius_equals_numerical_radius():
    rng = np.random.default_rng(4)
    op = joint_operator([random_matrix(rng, 2), random_matrix(rng, 2)], 2).toarray()
    assert graded_numerical_radius(op) == pytest.approx(numerical_radius(op).value, abs=1e-7)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_joint_radius_sandwich_and_monotonicity(n, d, seed):
    rng = np.random.default_rng(seed)
    xs = [random_matrix(rng, d) for _ in range(n)]
    rn = row_norm(xs)
    prev = 0.0
    for L in (1, 2, 3):
        w = joint_numerical_radius(xs, L).value
        assert 0.5 * rn - 1e-9 <= w <= rn + 1e-9
        assert w >= prev - 1e-10
        prev = w
    assert joint_numerical_radius(xs, 1).value == pytest.approx(0.5 * rn, abs=1e-10)
    # w_L increases to w from below, so only the row norm bounds w_e at a finite level
    we = euclidean_joint_radius(xs, restarts=8).value
    assert we <= rn + 1e-10


def test_euclidean_radius_exceeds_finite_levels_for_scalars():
    xs = [np.array([[0.6]]), np.array([[0.8j]])]
    we = euclidean_joint_radius(xs).value
    assert we == pytest.approx(1.0, abs=1e-12)
    assert joint_numerical_radius(xs, 3).value == pytest.approx(math.cos(math.pi / 5), abs=1e-12)


def test_scalar_tuple_radius_is_euclidean_norm():
    est = joint_radius_estimate([np.array([[3.0]]), np.array([[4j]])])
    assert est.value == 5.0 and est.stabilized


def test_stabilized_radius_reports_level():
    est = stabilized_joint_radius([np.eye(1)], tol=1e-3, max_level=40)
    assert est.level <= 40
    assert est.value == pytest.approx(math.cos(math.pi / (est.level + 2)), abs=1e-12)


def test_row_and_column_norms():
    xs = [np.array([[1.0, 0], [0, 0]]), np.array([[0, 1.0], [0, 0]])]
    assert row_norm(xs) == pytest.approx(math.sqrt(2))
    assert column_norm(xs) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        row_norm([])


def test_single_matrix_radius_is_the_matrix_numerical_radius():
    x = random_matrix(np.random.default_rng(6), 2)
    est = joint_radius_estimate([x])
    assert est.value == numerical_radius(x).value and est.stabilized
    # truncated values increase towards it
    levels = [graded_numerical_radius(joint_operator([x], L)) for L in (5, 50, 400)]
    assert levels[0] < levels[1] < levels[2] <= est.value + 1e-12


def test_zero_operator_radius_is_zero():
    assert graded_numerical_radius(joint_operator([np.zeros((2, 2))] * 2, 8)) == 0.0
