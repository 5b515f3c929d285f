import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakborn.contextual import (
    WEAK,
    CvParams,
    assignment,
    check_initial_condition,
    check_product_rule,
    check_sum_rule,
    contextual_value_general,
    contextual_values,
    find_product_rule_violation,
    w_operator,
    weak_value,
)
from weakborn.errors import DegenerateDenominator, DimensionMismatch, NotInSubalgebra
from weakborn.hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Context,
    computational_context,
    haar_random_context,
    orthonormal_completion,
    random_hermitian,
    random_state,
)

from conftest import plus_minus

seeds = st.integers(0, 2**32 - 1)
complexes = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def _draw(seed, n):
    rng = np.random.default_rng(seed)
    return rng, random_state(n, rng), random_state(n, rng)


def test_cvparams_rejects_zero():
    with pytest.raises(ValueError):
        CvParams(0, 0)


def test_w_operator_examples():
    e0, e1 = np.array([1, 0]), np.array([0, 1])
    np.testing.assert_array_equal(w_operator(e0, e0, CvParams(1, 0)).entries, [[1, 0], [0, 0]])
    np.testing.assert_array_equal(w_operator(e0, e1, CvParams(0, 1)).entries, [[0, 0], [1, 0]])
    plus, _ = plus_minus()
    w = w_operator(e0, plus, CvParams(1, 1))
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(w.entries, [[2 * s, s], [s, 0]], atol=1e-15)
    assert w.is_hermitian
    assert abs(np.trace(w.entries) - np.sqrt(2)) < 1e-15


@given(seeds, st.integers(2, 6), complexes, complexes)
def test_trace_form(seed, n, a, b):
    # Contextual value equals Tr[W A] / Tr[W].
    if abs(a) + abs(b) < 1e-3:
        return
    rng, psi, omega = _draw(seed, n)
    A = random_hermitian(n, rng)
    p = CvParams(a, b)
    W = w_operator(psi, omega, p).entries
    if abs(np.trace(W)) < 1e-6:
        return
    expected = np.trace(W @ A.entries) / np.trace(W)
    assert abs(contextual_value_general(A, psi, omega, p) - expected) < 1e-9 * max(1, abs(expected))


def test_contextual_value_identity_is_one(rng):
    psi, omega = random_state(4, rng), random_state(4, rng)
    for p in (WEAK, CvParams(1, 1), CvParams(0.3, -2j), CvParams(0, 1)):
        assert abs(contextual_value_general(np.eye(4), psi, omega, p) - 1) < 1e-12


def test_sigma_x_plus_state():
    plus, minus = plus_minus()
    assert abs(contextual_value_general(SIGMA_X, [1, 0], plus, WEAK) - 1) < 1e-15
    assert abs(weak_value(SIGMA_X, [1, 0], plus) - 1) < 1e-15
    assert abs(weak_value(SIGMA_X, [1, 0], minus) + 1) < 1e-15


def test_weak_value_anomaly():
    alpha = 0.7
    psi = np.array([1, 1]) / np.sqrt(2)
    omega = np.array([np.cos(alpha), -np.sin(alpha)])
    got = weak_value(SIGMA_Z, psi, omega)
    # (cos a + sin a)/(cos a - sin a) = tan(pi/4 + a)
    assert abs(got - np.tan(np.pi / 4 + alpha)) < 1e-10
    assert abs(got) > 1


def test_weak_value_orthogonal_raises():
    with pytest.raises(DegenerateDenominator):
        weak_value(SIGMA_Z, [1, 0], [0, 1])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        weak_value(np.eye(3), [1, 0], [1, 0])


@given(seeds, st.integers(2, 6))
def test_weak_value_is_b_zero_case(seed, n):
    rng, psi, omega = _draw(seed, n)
    A = random_hermitian(n, rng)
    assert abs(weak_value(A, psi, omega) - contextual_value_general(A, psi, omega, CvParams(1, 0))) < 1e-13


@given(seeds, st.integers(2, 6), complexes, complexes, complexes)
def test_linearity(seed, n, alpha, beta, b):
    rng, psi, omega = _draw(seed, n)
    A, B = random_hermitian(n, rng), random_hermitian(n, rng)
    p = CvParams(1, b)
    try:
        lhs = contextual_value_general(alpha * A.entries + beta * B.entries, psi, omega, p)
        rhs = (alpha * contextual_value_general(A, psi, omega, p)
               + beta * contextual_value_general(B, psi, omega, p))
    except DegenerateDenominator:
        return
    assert abs(lhs - rhs) < 1e-12 * max(1, abs(lhs), abs(rhs))


def test_sum_rule_sigma_x_sigma_y(rng):
    # sigma_x + sigma_y has eigenvalues +-sqrt2, so eigenvalue assignments fail the sum rule.
    assert np.allclose(sorted(np.linalg.eigvalsh((SIGMA_X + SIGMA_Y).entries)), [-np.sqrt(2), np.sqrt(2)])
    for _ in range(20):
        psi, omega = random_state(2, rng), random_state(2, rng)
        assert check_sum_rule(SIGMA_X, SIGMA_Y, psi, omega) < 1e-12
        assert check_sum_rule(SIGMA_X, SIGMA_Y, psi, omega, CvParams(1, 0.5j)) < 1e-12


def test_sum_rule_zero_operator(rng):
    psi, omega = random_state(3, rng), random_state(3, rng)
    assert check_sum_rule(random_hermitian(3, rng), np.zeros((3, 3)), psi, omega) == 0


def test_sum_rule_random_5x5():
    worst = 0.0
    for seed in range(100):
        rng, psi, omega = _draw(seed, 5)
        worst = max(worst, check_sum_rule(random_hermitian(5, rng), random_hermitian(5, rng), psi, omega))
    assert worst < 1e-12


def test_product_rule_diagonal_example():
    ctx = computational_context(2)
    T = np.diag([2.0, 3.0])
    psi = np.array([0.6, 0.8])
    assert check_product_rule(T, T, ctx, psi, 0) < 1e-15


def test_product_rule_identity_factor(rng):
    ctx = haar_random_context(3, 4)
    T = ctx.diagonal_operator(rng.standard_normal(3))
    psi = random_state(3, rng)
    for p in (WEAK, CvParams(1, 1), CvParams(2, -1j)):
        assert check_product_rule(T, np.eye(3), ctx, psi, 1, p) < 1e-12


def test_product_rule_weak_random():
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        ctx = haar_random_context(4, seed)
        T = ctx.diagonal_operator(rng.standard_normal(4))
        S = ctx.diagonal_operator(rng.standard_normal(4))
        worst = max(worst, check_product_rule(T, S, ctx, random_state(4, rng), seed % 4))
    assert worst < 1e-10


def test_product_rule_holds_for_any_b():
    # T|w> = t_w|w> makes both terms of the value proportional to t_w, so the
    # product rule holds for every (a, b); no violation can be found.
    search = find_product_rule_violation(dim=3, p=CvParams(1, 1), n_draws=100, seed=0)
    assert not search.found
    assert search.max_residual < 1e-10


def test_product_rule_rejects_non_diagonal():
    with pytest.raises(NotInSubalgebra):
        check_product_rule(SIGMA_X, SIGMA_Z, computational_context(2), [0.6, 0.8], 0)


@given(seeds, st.integers(2, 6), complexes)
def test_initial_condition(seed, n, b):
    _, psi, omega = _draw(seed, n)
    try:
        assert check_initial_condition(psi, omega, CvParams(1, b)) < 1e-12
    except DegenerateDenominator:
        pass


@given(seeds, st.integers(2, 6))
def test_eigenvalue_consistency(seed, n):
    rng, psi, _ = _draw(seed, n)
    ctx = haar_random_context(n, seed)
    ev = rng.standard_normal(n)
    A = ctx.diagonal_operator(ev)
    vals = contextual_values(A, psi, ctx)
    assert np.max(np.abs(vals - ev)) < 1e-12


def test_assignment_excludes_orthogonal():
    asg = assignment(SIGMA_X, [1, 0], computational_context(2))
    assert asg.retained == (0,)
    assert set(asg.excluded) == {1}


def test_assignment_generic_retains_all(rng):
    asg = assignment(random_hermitian(5, rng), random_state(5, rng), haar_random_context(5, 1))
    assert asg.retained == tuple(range(5))
    assert asg.excluded == {}


def test_assignment_near_degenerate():
    a = 1e-13
    ctx = Context(np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]]))
    asg = assignment(SIGMA_Z, [1, 0], ctx)
    assert asg.retained == (0,)
    assert 1 in asg.excluded


def test_assignment_matches_scalar_path(rng):
    ctx = haar_random_context(4, 9)
    A, psi = random_hermitian(4, rng), random_state(4, rng)
    p = CvParams(1, 0.4 - 0.2j)
    asg = assignment(A, psi, ctx, p)
    for i, v in asg.as_dict().items():
        assert abs(v - contextual_value_general(A, psi, ctx.matrix[:, i], p)) < 1e-12


def test_contextual_values_complex_in_general(rng):
    vals = contextual_values(random_hermitian(3, rng), random_state(3, rng), haar_random_context(3, 2))
    assert np.max(np.abs(vals.imag)) > 1e-3
