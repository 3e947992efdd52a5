import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcube.algebra import Observable, bell_projector, op_norm, pauli_matrix, psd_margin, schatten_norm
from qcube.calculus import (
    SubsetMask,
    alpha_gradient,
    carre_du_champ,
    cond_expectation,
    cond_expectation_fourier,
    derivative,
    derivative_dense,
    fourier_weights,
    influence,
    log_ratio,
    log_ratio_clamped,
    riesz_transform,
    semigroup_apply,
    semigroup_apply_dense,
    site_gradient_sq,
    v_functional,
    variance,
    variance_stats,
)
from qcube.constants import gradient_compare

from conftest import random_op

seeds = st.integers(0, 2**31)
small_n = st.integers(1, 4)


def test_partial_trace_examples():
    P = bell_projector(2)
    assert cond_expectation(P, {0}).allclose(Observable.identity(2) / 4)
    assert cond_expectation(Observable.identity(3), {1}).allclose(Observable.identity(3))
    A = random_op(3, 1)
    assert cond_expectation(A, {0, 1, 2}).allclose(Observable.scalar(3, A.trace()))


@settings(max_examples=30, deadline=None)
@given(small_n, seeds, st.data())
def test_partial_trace_dense_matches_fourier(n, seed, data):
    A = random_op(n, seed)
    J = data.draw(st.sets(st.integers(0, n - 1)))
    assert cond_expectation(A, J).allclose(cond_expectation_fourier(A, J), atol=1e-12)
    assert derivative(A, J).allclose(derivative_dense(A, J), atol=1e-12)


def test_derivative_examples():
    s1 = pauli_matrix((1,))
    assert derivative(s1, {0}).allclose(s1)
    assert derivative(Observable.identity(1), {0}).allclose(Observable.scalar(1, 0))
    P = bell_projector(2)
    assert derivative(P, {0}).allclose(P - Observable.identity(2) / 4)


@settings(max_examples=20, deadline=None)
@given(small_n, seeds, st.data())
def test_derivative_norm_bound(n, seed, data):
    A = random_op(n, seed)
    J = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    assert op_norm(derivative(A, J)) <= 2 ** len(J) * op_norm(A) + 1e-12


def test_semigroup_examples():
    s = pauli_matrix((1, 3))
    assert semigroup_apply(s, 0.3).allclose(s * math.exp(-0.6))
    A = random_op(3, 4)
    assert semigroup_apply(A, 0.0).allclose(A)
    for n in (1, 2, 3, 4):
        A = random_op(n, 10 + n)
        gap = semigroup_apply(A, 50.0) - Observable.scalar(n, A.trace())
        assert op_norm(gap) <= 1e-10
    with pytest.raises(ValueError):
        semigroup_apply(A, -1.0)


@settings(max_examples=20, deadline=None)
@given(small_n, seeds, st.floats(0, 3), st.floats(0, 3))
def test_semigroup_dense_and_group_law(n, seed, s, t):
    A = random_op(n, seed)
    assert semigroup_apply(A, t).allclose(semigroup_apply_dense(A, t), atol=1e-12)
    assert semigroup_apply(semigroup_apply(A, s), t).allclose(semigroup_apply(A, s + t), atol=1e-12)


def test_variance_examples():
    P = bell_projector(2)
    var, var1, gamma1 = variance_stats(P, 0)
    assert var == pytest.approx(3 / 16)
    assert var1.allclose(Observable.identity(2) * (3 / 16))
    assert variance(pauli_matrix((2, 0))) == pytest.approx(1)
    assert variance(Observable.identity(2)) == 0
    assert psd_margin(gamma1) >= -1e-14


def test_alpha_gradient():
    A = random_op(3, 2)
    for j in range(3):
        assert site_gradient_sq(A, j, 0.5).allclose(carre_du_champ(A, j), atol=1e-12)
    bundle = alpha_gradient(Observable.scalar(2, 0.4), 0.3)
    assert all(op_norm(g) == 0 for g in bundle.per_site)
    assert op_norm(bundle.total_sq) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), seeds, st.floats(0, 1), st.floats(0, 0.99))
def test_gradient_comparison(n, seed, alpha, beta):
    A = random_op(n, seed)
    b = gradient_compare(alpha, beta)
    for j in range(n):
        gap = site_gradient_sq(A, j, alpha) - site_gradient_sq(A, j, beta) * b
        assert psd_margin(gap) >= -1e-10


def test_influence_examples():
    for s in [(1, 0, 3), (0, 2, 0)]:
        A = pauli_matrix(s)
        for j in range(3):
            assert influence(A, {j}, 2) == pytest.approx(1.0 if s[j] else 0.0)
    assert influence(bell_projector(2), {0}, 1) == pytest.approx(3 / 8)


@settings(max_examples=20, deadline=None)
@given(small_n, seeds, st.floats(1, 2), st.floats(0, 2), st.data())
def test_influence_decay(n, seed, p, t, data):
    A = random_op(n, seed)
    J = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    before = influence(A, J, p) ** (1 / p)
    after = influence(semigroup_apply(A, t), J, p) ** (1 / p)
    assert after <= math.exp(-len(J) * t) * before * (1 + 1e-10) + 1e-14


def test_v_functional_examples():
    s = pauli_matrix((1, 2, 0))
    assert v_functional(s, {0}) == pytest.approx(0.5)
    assert v_functional(Observable.identity(2), {0, 1}) == 0


@settings(max_examples=25, deadline=None)
@given(small_n, seeds)
def test_v_sum_equals_variance(n, seed):
    A = random_op(n, seed)
    total = sum(v_functional(A, {j}) for j in range(n))
    assert total == pytest.approx(variance(A), abs=1e-10)
    for j in range(n):
        R = riesz_transform(A, {j})
        assert schatten_norm(R, 2) ** 2 == pytest.approx(v_functional(A, {j}), abs=1e-12)


def test_v_quadrature_matches_fourier():
    for n, seed in [(2, 0), (3, 1)]:
        A = random_op(n, seed)
        for J in ({0}, {0, 1}):
            assert v_functional(A, J, "quadrature") == pytest.approx(v_functional(A, J), abs=1e-6)


def test_riesz_examples():
    assert op_norm(riesz_transform(Observable.identity(2), {0})) == 0
    xx = pauli_matrix((1, 1))
    R = riesz_transform(xx, {0})
    assert R.allclose(xx / math.sqrt(2))
    assert schatten_norm(R, 2) ** 2 == pytest.approx(0.5)


def test_fourier_weights():
    w = fourier_weights(pauli_matrix((1, 3, 0)))
    assert np.allclose(w.exact, [0, 0, 1, 0])
    w = fourier_weights(bell_projector(2))
    assert np.allclose(w.exact, [1 / 16, 0, 3 / 16])
    A = random_op(3, 9)
    assert fourier_weights(A).at_least(1) == pytest.approx(variance(A))


def test_log_ratio():
    assert log_ratio(pauli_matrix((1, 2)), 1.5) == pytest.approx(0, abs=1e-12)
    A = random_op(2, 5)
    assert log_ratio(A * 3.7, 1.2) == pytest.approx(log_ratio(A, 1.2))
    # a small multiple of a rank-one projector has tiny 1-norm relative to its variance
    P = bell_projector(3) * 0.01
    assert log_ratio(P, 1.0) > 0
    with pytest.raises(ValueError):
        log_ratio(Observable.identity(2), 1.5)
    with pytest.raises(ValueError):
        log_ratio(A, 2.0)
    assert log_ratio_clamped(A, 1.0) >= 0


def test_subset_mask_validation():
    assert tuple(SubsetMask.of(3, {2, 0}).sorted()) == (0, 2)
    with pytest.raises(ValueError):
        SubsetMask.of(2, {5})
