import numpy as np
import pytest

from ncbohr.errors import HypothesisError, ValidationError
from ncbohr.fock import CoeffSeries
from ncbohr.harness import generators as G
from ncbohr.inequalities import CERTIFIED, check_dominance, harmonic_compare


def harmonic(n, coeffs):
    return CoeffSeries.from_scalars(n, "harmonic", coeffs)


def test_equal_series_force_exact_equality():
    a, b, cert = G.generate_dominated_pair(2, 2, seed=4, zero_gap=True)
    report = harmonic_compare(a, b, certificate=cert)
    assert report.passed
    assert "B_0 = A_0: dominance forces A = B" in report.notices
    eq = report.margins[0]
    assert eq.lhs == 0.0 and eq.slack == 0.0


def test_fejer_gap_at_n1():
    a = harmonic(1, {(): 0.3, (1,): 0.1})
    b = a.combine(harmonic(1, {(): 2.0, (1,): 1.0}))
    report = harmonic_compare(a, b, m=2, L=6)
    assert report.passed
    gram = next(m for m in report.margins if m.name.startswith("Gram of B - A"))
    assert gram.slack == pytest.approx(4.0 - 1.0)  # lambda_min(||C_0|| C_0 - sum C^*C)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("d", [1, 2])
def test_random_dominated_pairs(seed, d):
    a, b, cert = G.generate_dominated_pair(2, 2, seed, d=d)
    hyp = check_dominance(a, b, certificate=cert)
    assert hyp.verdict == CERTIFIED
    assert harmonic_compare(a, b, hypothesis=hyp).passed
    report = harmonic_compare(a, b, m=3, hypothesis=hyp, max_level=4)
    assert report.passed
    assert any(m.name.startswith("joint radius transfer at r=") for m in report.margins)


def test_reversed_pair_is_rejected():
    a, b, cert = G.generate_dominated_pair(1, 2, seed=0)
    with pytest.raises(HypothesisError):
        harmonic_compare(b, a, L=4)


def test_shape_and_band_validation():
    a = harmonic(1, {(): 1.0})
    with pytest.raises(ValidationError):
        harmonic_compare(a, harmonic(2, {(): 1.0}))
    b = harmonic(1, {(): 3.0, (1, 1): 0.1})
    with pytest.raises(ValidationError):
        harmonic_compare(a, b, m=2)


def test_degree_one_scalar_transfer_values():
    a = harmonic(2, {(): 0.0})
    b = harmonic(2, {(): 2.0, (1,): 0.5, (2,): 0.5j})
    report = harmonic_compare(a, b, m=2)
    assert report.passed
    w = next(m for m in report.margins if m.name == "joint radius of B - A, k=1")
    assert w.lhs == pytest.approx(np.sqrt(0.5), abs=1e-15)
    assert w.rhs == pytest.approx(2.0 * 0.5, abs=1e-15)
