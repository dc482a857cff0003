from fractions import Fraction
from functools import partial

import numpy as np
import pytest

from se3ad.basis import Basis
from se3ad.derivatives import hessian_seeded, rel_frobenius
from se3ad.errors import DomainError
from se3ad.nll import NLLProblem, PriorSpec, nll_grad, nll_value
from se3ad.oracles import (
    FD_GRAD_STEP,
    FD_VALUE_STEP,
    ad_traced_gradient,
    ad_value_hessian,
    bernoulli_coefficients,
    bernoulli_jr_inv_se3,
    bernoulli_numbers,
    fd_hessian_of_gradient,
    fd_hessian_of_value,
    naive_seeded_hessian,
)
from se3ad.se3 import compose, exp_se3, jr_inv_se3

SWEEP = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


def test_fd_value_hessian_of_quadratic(rng):
    m = rng.normal(size=(6, 6))
    m = m + m.T
    h = fd_hessian_of_value(lambda x: 0.5 * x @ m @ x, 1e-3, point=rng.normal(size=6))
    assert np.abs(h - m).max() < 1e-8
    assert np.array_equal(h, h.T)


def test_fd_gradient_hessian_of_linear(rng):
    m = rng.normal(size=(6, 6))
    h = fd_hessian_of_gradient(lambda x: m @ x, 1e-3)
    assert np.abs(h - m).max() < 1e-12


@pytest.mark.parametrize("fn", [fd_hessian_of_value, fd_hessian_of_gradient])
def test_step_must_be_positive(fn):
    with pytest.raises(ValueError):
        fn(lambda x: x, 0.0)


def test_default_steps():
    assert (FD_VALUE_STEP, FD_GRAD_STEP) == (1e-4, 1e-6)


def test_value_fd_error_is_v_shaped(bench_problem):
    _, ref = ad_value_hessian(bench_problem)
    errs = [rel_frobenius(fd_hessian_of_value(bench_problem, h), ref) for h in SWEEP]
    k = int(np.argmin(errs))
    assert 0 < k < len(SWEEP) - 1, errs
    assert errs[0] > 10 * errs[k] and errs[-1] > 10 * errs[k]


def test_gradient_fd_error_is_v_shaped(bench_problem):
    _, ref = ad_value_hessian(bench_problem)
    g = partial(ad_traced_gradient, bench_problem)
    errs = [rel_frobenius(fd_hessian_of_gradient(g, h), ref) for h in SWEEP]
    k = int(np.argmin(errs))
    assert 0 < k < len(SWEEP) - 1, errs
    assert errs[0] > 10 * errs[k] and errs[-1] > 2 * errs[k]


def test_traced_and_analytical_gradients_agree(bench_problem, backend, rng):
    for pt in (np.zeros(6), rng.normal(size=6) * 0.05):
        a = ad_traced_gradient(bench_problem, pt, backend=backend)
        b = nll_grad(bench_problem, pt)
        assert np.abs(a - b).max() <= 1e-12 * np.abs(b).max()


def test_fd_rows_of_traced_and_analytical_gradient_agree(bench_problem):
    row2 = fd_hessian_of_gradient(partial(ad_traced_gradient, bench_problem), 1e-4)
    row3 = fd_hessian_of_gradient(lambda d: nll_grad(bench_problem, d), 1e-4)
    assert rel_frobenius(row2, row3) < 1e-9


def test_value_hessian_prior_only_equals_information(rng):
    pose = exp_se3(rng.normal(size=6) * 0.3)
    info = np.diag([9.0, 8, 7, 3, 2, 1])
    prob = NLLProblem(pose, PriorSpec(pose, info))
    g, h = ad_value_hessian(prob)
    assert np.array_equal(g, np.zeros(6))
    assert np.abs(h - info).max() < 1e-13


def test_naive_value_trace_is_finite(bench_problem):
    g, h = ad_value_hessian(bench_problem, basis=Basis.NAIVE)
    assert np.all(np.isfinite(h))
    _, ref = ad_value_hessian(bench_problem)
    assert rel_frobenius(h, ref) < 1e-12


def test_naive_seeded_hessian_reports_nans(bench_problem):
    rep = naive_seeded_hessian(bench_problem)
    assert rep.has_nan
    assert rep.nan_count == int(np.isnan(rep.hess).sum()) > 0
    assert all(np.isnan(rep.hess[i, j]) for i, j in rep.nan_entries)


def test_naive_and_fused_agree_away_from_zero(rng):
    # base pose offset from the prior so the prior residual sits at |xi| = 0.5,
    # and evaluation away from delta = 0
    prior = exp_se3(rng.normal(size=6) * 0.3)
    xi = rng.normal(size=6)
    xi *= 0.5 / np.linalg.norm(xi)
    prob = NLLProblem(compose(prior, exp_se3(-xi)), PriorSpec(prior, np.eye(6) * 4))
    pt = np.full(6, 0.02)
    fused = hessian_seeded(prob, point=pt).hess
    rep = naive_seeded_hessian(prob, point=pt)
    assert not rep.has_nan
    assert np.abs(rep.hess - fused).max() < 1e-12 * np.abs(fused).max()


def test_bernoulli_numbers():
    b = bernoulli_numbers(8)
    assert b[:5] == (Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30))
    assert b[6] == Fraction(1, 42) and b[8] == Fraction(-1, 30)


def test_bernoulli_coefficients():
    c = bernoulli_coefficients(4)
    assert c == (Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0), Fraction(-1, 720))


def test_bernoulli_series_at_zero():
    assert np.array_equal(bernoulli_jr_inv_se3(np.zeros(6)), np.eye(6))


def test_bernoulli_series_cross_check(rng):
    xi = rng.normal(size=6)
    xi *= 0.3 / np.linalg.norm(xi)
    assert np.abs(bernoulli_jr_inv_se3(xi) - jr_inv_se3(xi)).max() < 1e-9


def test_bernoulli_series_converges_with_terms(rng):
    xi = rng.normal(size=6)
    xi *= 0.5 / np.linalg.norm(xi)
    exact = jr_inv_se3(xi)
    errs = [np.abs(bernoulli_jr_inv_se3(xi, n) - exact).max() for n in (2, 4, 8, 12)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-12


def test_bernoulli_domain():
    with pytest.raises(DomainError):
        bernoulli_jr_inv_se3(np.full(6, 1.0))
    with pytest.raises(ValueError):
        bernoulli_jr_inv_se3(np.zeros(6), -1)


def test_fd_value_on_problem_uses_value(bench_problem):
    # independent of nll_grad: perturbing the value perturbs the FD Hessian
    h1 = fd_hessian_of_value(bench_problem, 1e-3)
    h2 = fd_hessian_of_value(lambda d: nll_value(bench_problem, d) + d @ d, 1e-3)
    assert np.allclose(h2 - h1, 2 * np.eye(6), atol=1e-6)
