import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opweak.absdiff import certified_abs_diff_bound
from opweak.davies import (
    DiscreteMeasure,
    PiecewiseConstantMeasure,
    apply_function,
    davies_bound_check,
    discretization_report,
    discretize,
    distorted_variation,
    dv_brute_force,
    dv_closed_form,
    eval_function,
    measure_from_json,
    measure_to_json,
    weighted_weak_sum_bound,
)
from opweak.errors import InputError
from opweak.matcore import abs_matrix
from opweak.sampling import make_rng, sample_gue
from opweak.suites import random_measure

DELTA0 = DiscreteMeasure((0.0,), (1.0,))
DIPOLE = DiscreteMeasure((0.0, 1.0), (1.0, -1.0))


def test_eval_function_examples():
    t = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(eval_function(DELTA0, t), np.abs(t))
    assert eval_function(DIPOLE, 0.5) == pytest.approx(0.0)


def test_density_evaluation_matches_quadrature():
    nu = PiecewiseConstantMeasure((0.0, 0.3), (2.0, -1.0))
    s = (np.arange(200000) + 0.5) / 200000
    dens = np.where(s < 0.3, 2.0, -1.0)
    for t in (-0.5, 0.1, 0.3, 0.8, 1.7):
        assert eval_function(nu, t) == pytest.approx(np.mean(dens * np.abs(t - s)), abs=1e-8)


def test_apply_function():
    a = sample_gue(6, 1)
    fa, gap = apply_function(DELTA0, a)
    np.testing.assert_allclose(fa, abs_matrix(a), atol=1e-13)
    fd, _ = apply_function(DIPOLE, np.diag([-1.0, 0.5, 2.0]))
    np.testing.assert_allclose(fd, np.diag([-1.0, 0.0, 1.0]), atol=1e-14)
    _, gap = apply_function(random_measure(make_rng(13)), sample_gue(8, 13))
    assert gap <= 1e-10 * 10


def test_dv_examples():
    assert distorted_variation(DELTA0) == (1.0, 1.0)
    assert distorted_variation(DIPOLE) == (3.0, 3.0)
    assert dv_closed_form(DiscreteMeasure((0.0, 1.0), (4.0, 1.0))) == 6.0
    assert dv_brute_force(DiscreteMeasure((0.0, 1.0), (4.0, 1.0))) == 6.0
    dens = PiecewiseConstantMeasure((0.0,), (1.0,))
    assert distorted_variation(dens) == (math.inf, None)


def test_dv_over_cap_skips_oracle():
    nu = DiscreteMeasure(tuple(np.arange(20) / 20), tuple(np.ones(20)))
    closed, brute = distorted_variation(nu)
    assert brute is None and closed == float(2**20 - 1)
    with pytest.raises(InputError):
        dv_brute_force(nu)


def test_shift_invariance():
    nu = random_measure(make_rng(4))
    assert dv_closed_form(nu.shifted(0.37)) == dv_closed_form(nu)
    t = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(eval_function(nu.shifted(0.37), t + 0.37), eval_function(nu, t), atol=1e-12)


def test_discretize_examples():
    on_grid = discretize(DiscreteMeasure((0.3,), (1.0,)), 10)
    assert on_grid.atoms == (0.3,) and on_grid.weights == (1.0,)
    uniform = discretize(PiecewiseConstantMeasure((0.0,), (1.0,)), 2)
    assert uniform.atoms == (0.0, 0.5)
    np.testing.assert_allclose(uniform.weights, [0.5, 0.5])
    with pytest.raises(InputError):
        discretize(DiscreteMeasure((1.5,), (1.0,)), 4)


@pytest.mark.parametrize("m", [4, 16])
def test_discretization_reports(m):
    assert discretization_report(DiscreteMeasure((0.1, 0.45, 0.9), (1.0, -2.0, 0.5)), m).passed
    assert discretization_report(PiecewiseConstantMeasure((0.0, 0.25), (1.0, -3.0)), m).passed


def test_weighted_sum_examples():
    single = weighted_weak_sum_bound([sample_gue(4, 1)])
    assert single.passed
    rep = weighted_weak_sum_bound([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert rep.data["lhs"] == pytest.approx(2.0) and rep.data["rhs"] == pytest.approx(6.0)
    rng = make_rng(17)
    assert weighted_weak_sum_bound([sample_gue(5, rng) for _ in range(8)]).passed
    with pytest.raises(InputError):
        weighted_weak_sum_bound([])


def test_delta_zero_reduces_to_absolute_value_bound():
    rng = make_rng(5)
    a, b = sample_gue(6, rng), sample_gue(6, rng)
    rep = davies_bound_check(DELTA0, a, b)
    cert = certified_abs_diff_bound(a, b)
    assert rep.passed
    assert rep.data["lhs"] == pytest.approx(cert.lhs, rel=1e-12)
    assert rep.data["max_term_ratio"] == pytest.approx(cert.ratio, rel=1e-12)


def test_davies_bound_examples():
    a = sample_gue(4, 2)
    same = davies_bound_check(DIPOLE, a, a)
    assert same.passed and same.data["lhs"] == pytest.approx(0.0, abs=1e-12)
    rng = make_rng(21)
    a = sample_gue(8, rng)
    b = a + 0.1 * sample_gue(8, rng)
    assert davies_bound_check(DIPOLE, a, (b + b.conj().T) / 2).passed


def test_measure_json():
    nu = random_measure(make_rng(3))
    assert measure_from_json(measure_to_json(nu)) == nu
    dens = PiecewiseConstantMeasure((0.0, 0.5), (1.0, 2.0))
    assert measure_from_json(measure_to_json(dens)) == dens


@pytest.mark.parametrize("doc", [{}, {"atoms": [0.0]}, {"atoms": [1.0, 0.0], "weights": [1, 1]},
                                 {"atoms": [0.0], "weights": [0.0]}, {"breaks": [0.5, 0.2], "densities": [1, 1]}])
def test_bad_measures(doc):
    with pytest.raises(InputError):
        measure_from_json(doc)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dv_closed_form_matches_brute_force(seed):
    nu = random_measure(make_rng(seed))
    closed, brute = distorted_variation(nu)
    assert closed == brute
    assert nu.total_variation <= closed


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_davies_bound_property(n, seed):
    rng = make_rng(seed)
    nu = random_measure(rng, max_atoms=3)
    a = sample_gue(n, rng)
    b = a + 0.3 * sample_gue(n, rng)
    assert davies_bound_check(nu, a, (b + b.conj().T) / 2).passed
