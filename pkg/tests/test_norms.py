import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opweak.errors import InputError
from opweak.norms import (
    check_singular_inequalities,
    direct_sum_weak_bound,
    m1inf_norm,
    operator_norm,
    schatten_norm,
    sigma2_dilate,
    singular_values,
    trace_norm,
    weak_l1_norm,
)
from opweak.sampling import ginibre, haar_unitary, make_rng, sample_gue


def test_singular_values_examples():
    np.testing.assert_allclose(singular_values(np.diag([3.0, -1.0, 2.0])), [3.0, 2.0, 1.0])
    skew = np.array([[0.0, 2.0], [-2.0, 0.0]])
    np.testing.assert_allclose(singular_values(skew), [2.0, 2.0])
    assert trace_norm(skew) == pytest.approx(4.0)
    assert trace_norm(np.diag([3.0, -1.0, 2.0])) == pytest.approx(6.0)
    assert schatten_norm(np.eye(4), 2) == pytest.approx(2.0)
    assert operator_norm(np.diag([3.0, -1.0, 2.0])) == pytest.approx(3.0)


def test_singular_values_match_lapack():
    for seed in range(5):
        m = ginibre(9, seed)
        np.testing.assert_allclose(singular_values(m), np.linalg.svd(m, compute_uv=False), atol=1e-12)
    rect = make_rng(3).standard_normal((4, 7))
    np.testing.assert_allclose(singular_values(rect), np.linalg.svd(rect, compute_uv=False), atol=1e-12)


def test_small_singular_values_of_hermitian_are_accurate():
    w = haar_unitary(6, 1)
    lam = np.array([1.0, 1e-9, -1e-12, 0.5, -0.25, 1e-15])
    a = (w * lam) @ w.conj().T
    a = (a + a.conj().T) / 2
    np.testing.assert_allclose(singular_values(a), np.sort(np.abs(lam))[::-1], atol=1e-15)


def test_weak_and_m1inf_examples():
    assert weak_l1_norm(np.diag([1.0, 0.5, 1.0 / 3.0])) == pytest.approx(1.0)
    assert weak_l1_norm(np.zeros((3, 3))) == 0.0
    assert m1inf_norm(np.diag([1.0, 0.5])) == pytest.approx(1.0 / math.log(2.0))
    assert m1inf_norm(np.zeros((2, 2))) == 0.0


def test_sigma2_dilate():
    np.testing.assert_array_equal(sigma2_dilate((3.0, 1.0)), [3.0, 3.0, 1.0, 1.0])
    assert sigma2_dilate(()).size == 0


def test_schatten_exponent_below_one_raises():
    with pytest.raises(InputError):
        schatten_norm(np.eye(2), 0.5)


def test_schatten_limits():
    m = ginibre(6, 4)
    assert schatten_norm(m, math.inf) == pytest.approx(operator_norm(m))
    assert schatten_norm(m, 2) == pytest.approx(np.linalg.norm(m))


def test_singular_inequalities_examples():
    assert check_singular_inequalities(np.eye(3), np.eye(3)).passed
    a, b = ginibre(8, make_rng(2, 0)), ginibre(8, make_rng(2, 1))
    assert check_singular_inequalities(a, b).passed
    rep = check_singular_inequalities(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert rep.passed
    np.testing.assert_allclose(singular_values(np.eye(2)), [1.0, 1.0])


def test_singular_inequalities_shape_mismatch():
    with pytest.raises(InputError):
        check_singular_inequalities(np.eye(2), np.eye(3))


def test_direct_sum_examples():
    rep = direct_sum_weak_bound([np.diag([1.0]), np.diag([1.0])])
    assert rep.data["lhs"] == pytest.approx(2.0)
    assert rep.data["rhs"] == pytest.approx(2.0)
    assert rep.passed
    single = direct_sum_weak_bound([np.diag([3.0, 1.0])])
    assert single.data["lhs"] == pytest.approx(single.data["rhs"])
    rng = make_rng(9)
    assert direct_sum_weak_bound([ginibre(4, rng) for _ in range(5)]).passed


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_unitary_invariance(n, seed):
    rng = make_rng(seed)
    m = ginibre(n, rng)
    u, v = haar_unitary(n, rng), haar_unitary(n, rng)
    np.testing.assert_allclose(singular_values(u @ m @ v), singular_values(m), atol=1e-11 * max(1.0, operator_norm(m)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.floats(-100, 100).filter(lambda t: abs(t) > 1e-3))
def test_homogeneity(n, seed, t):
    m = ginibre(n, seed)
    assert weak_l1_norm(t * m) == pytest.approx(abs(t) * weak_l1_norm(m), rel=1e-11)
    assert trace_norm(t * m) == pytest.approx(abs(t) * trace_norm(m), rel=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_norm_ordering_and_holder(n, seed):
    rng = make_rng(seed)
    a, b = ginibre(n, rng), ginibre(n, rng)
    assert operator_norm(a) <= weak_l1_norm(a) * (1 + 1e-12)
    assert weak_l1_norm(a) <= trace_norm(a) * (1 + 1e-12)
    assert trace_norm(a @ b) <= trace_norm(a) * operator_norm(b) * (1 + 1e-10)
    assert trace_norm(a @ b) <= schatten_norm(a, 2) * schatten_norm(b, 2) * (1 + 1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_singular_inequalities_property(n, seed):
    rng = make_rng(seed)
    assert check_singular_inequalities(sample_gue(n, rng), ginibre(n, rng)).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.floats(1.01, 50.0))
def test_schatten_monotone_in_p(n, seed, p):
    m = ginibre(n, seed)
    top = trace_norm(m) * (1 + 1e-12)
    assert operator_norm(m) <= schatten_norm(m, p) * (1 + 1e-12) <= top * (1 + 1e-12)


def test_quasi_triangle_ratio_recorded_and_bounded():
    from opweak.suites import run_norms

    res = run_norms(seed=1, trials=60, max_n=12)
    assert res.passed
    assert 0 < res.data["max_quasi_triangle_ratio"] <= 2 + 1e-9
