import numpy as np
import pytest

from cxorder import measure as M
from cxorder import oracle
from cxorder import quadrature as Q
from cxorder.ordering import Witness
from cxorder.oracle import TestFunction

MID = Q.builtin("midpoint").measure
TRAP = Q.builtin("trapezoid").measure
UNI = Q.builtin("uniform").measure


def test_test_function_evaluation():
    f = TestFunction(2, knots=(0.0,), spline_weights=(2.0,), poly_coeffs=(1.0, -1.0))
    np.testing.assert_allclose(f(np.array([-1.0, 0.5])), [2.0, 1.0])
    assert f.kind == "mixture"


def test_test_function_rejects_non_convex_parts():
    with pytest.raises(ValueError):
        TestFunction(2, knots=(0.0,), spline_weights=(-1.0,))
    with pytest.raises(ValueError):
        TestFunction(1, poly_coeffs=(0.0, 0.0, 1.0))


def test_expectation_uses_moments_and_truncated_moments():
    f = TestFunction(2, knots=(0.0,), spline_weights=(1.0,), poly_coeffs=(0.0, 0.0, 3.0))
    # int over [-1, 1] of (t_+**2 + 3 t**2) dt / 2 = 1/6 + 1
    assert oracle.expectation(f, UNI) == pytest.approx(1 / 6 + 1)


def test_from_witness():
    f = oracle.from_witness(Witness("monomial", 2, -1), 2)
    assert f.poly_coeffs == (0.0, 0.0, -1.0)
    g = oracle.from_witness(Witness("spline", 0.25), 3)
    assert g.knots == (0.25,) and g.order == 3


def test_confirms_a_real_violation_only():
    f = TestFunction(1, poly_coeffs=(0.0, 0.0))
    assert not oracle.confirms_violation(f, MID, UNI)
    # x -> x**2 is convex and the midpoint underestimates it.
    g = TestFunction(2, poly_coeffs=(0.0, 0.0, 1.0))
    assert oracle.confirms_violation(g, UNI, MID)


def test_grid_condition_on_hermite_hadamard():
    assert oracle.grid_condition_check(MID, UNI, 1)
    assert oracle.grid_condition_check(UNI, TRAP, 1)
    assert not oracle.grid_condition_check(TRAP, MID, 1)
    assert oracle.grid_condition_margin(MID, TRAP, 2) == float("-inf")
    with pytest.raises(ValueError):
        oracle.grid_condition_check(MID, UNI, 1, grid_size=50)


def test_random_suite_is_quiet_on_ordered_pairs():
    cheb = Q.builtin("chebyshev3").measure
    lob = Q.builtin("lobatto4").measure
    assert oracle.random_nconvex_suite(cheb, lob, 3, trials=2000) == 0
    assert oracle.random_nconvex_suite(lob, cheb, 3, trials=2000) > 0


def test_random_suite_is_reproducible_and_counts_extras():
    a = oracle.random_nconvex_suite(TRAP, MID, 1, trials=500, seed=7)
    b = oracle.random_nconvex_suite(TRAP, MID, 1, trials=500, seed=7)
    assert a == b
    extra = TestFunction(2, poly_coeffs=(0.0, 0.0, 1.0))
    assert oracle.random_nconvex_suite(MID, UNI, 2, trials=10, extra=[extra]) >= 0
    assert oracle.random_nconvex_suite(UNI, MID, 2, trials=10, extra=[extra]) >= 1


def test_random_suite_samples_are_n_convex():
    knots, weights, coeffs = oracle.sample_functions((-1.0, 1.0), 2, 50, seed=1)
    assert knots.shape == weights.shape == (50, oracle.DEFAULT_KNOTS)
    assert coeffs.shape == (50, 3)
    assert np.all(weights >= 0)
    assert np.all((knots >= -1) & (knots <= 1))


def test_oracle_does_not_depend_on_support_orientation():
    shifted = M.pushforward_affine(UNI, 3.0, 10.0)
    mid = M.pushforward_affine(MID, 3.0, 10.0)
    assert oracle.grid_condition_check(mid, shifted, 1)
    assert oracle.random_nconvex_suite(mid, shifted, 1, trials=500) == 0
