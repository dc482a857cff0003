import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from se3ad import scalars as sc
from se3ad.basis import Basis, MARGIN
from se3ad.errors import DomainError
from se3ad.so3 import (
    d_jr_inv_so3,
    e_mat,
    exp_so3,
    hat,
    jr_inv_so3,
    jr_so3,
    log_so3,
    s_mat,
    v_inv_so3,
    v_so3,
    vee,
)
from se3ad.verify import check_so3, random_omega

E3 = np.eye(3)


def rodrigues(w):
    """Theta-form Rodrigues formula, written independently of the basis."""
    th = math.sqrt(w @ w)
    k = hat(w / th)
    return np.eye(3) + math.sin(th) * k + (1 - math.cos(th)) * (k @ k)


def test_hat_examples(rng):
    assert np.allclose(hat(E3[0]) @ E3[1], E3[2])
    assert np.array_equal(hat(np.zeros(3)), np.zeros((3, 3)))
    v, w = rng.normal(size=3), rng.normal(size=3)
    assert np.array_equal(hat(v).T, -hat(v))
    assert np.allclose(hat(v) @ w, np.cross(v, w), atol=1e-15)
    assert np.array_equal(vee(hat(v)), v)


def test_hat_of_duals_is_object_array():
    m = hat(sc.seed_identity(1)[:3])
    assert m.dtype == object
    assert m[2, 1].grad[0] == 1.0


def test_exp_examples():
    assert np.array_equal(exp_so3(np.zeros(3)), np.eye(3))
    r = exp_so3(np.array([math.pi / 2, 0, 0]))
    assert np.allclose(r @ E3[1], E3[2], atol=1e-15)
    w = np.array([0.3, -0.2, 0.1])
    assert np.allclose(exp_so3(w), rodrigues(w), atol=1e-15, rtol=0)


@pytest.mark.parametrize("basis", list(Basis))
def test_exp_is_rotation(rng, basis):
    for w in random_omega(rng, 1e-8, 3.0, 50):
        r = exp_so3(w, basis)
        assert np.abs(r.T @ r - np.eye(3)).max() < 1e-12
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)


def test_log_examples(rng):
    assert np.array_equal(log_so3(np.eye(3)), np.zeros(3))
    for w in random_omega(rng, 1e-6, 3.0, 100):
        assert np.abs(log_so3(exp_so3(w)) - w).max() < 1e-10


def test_log_tiny_angle_relative_error():
    w = np.array([1e-9, -5e-10, 3e-10])
    r = rodrigues(w)
    assert np.linalg.norm(log_so3(r) - w) / np.linalg.norm(w) < 1e-6


def test_log_near_pi_is_domain_error():
    w = np.array([0.0, 0.0, math.pi - MARGIN / 10])
    r = rodrigues(w)
    with pytest.raises(DomainError):
        log_so3(r)


def test_exp_outside_chart_is_domain_error():
    with pytest.raises(DomainError):
        exp_so3(np.array([0.0, 0.0, math.pi]))


def test_jacobian_products(rng):
    assert np.array_equal(jr_so3(np.zeros(3)), np.eye(3))
    assert np.array_equal(jr_inv_so3(np.zeros(3)), np.eye(3))
    for w in random_omega(rng, 1e-6, 3.0, 100):
        assert np.abs(jr_so3(w) @ jr_inv_so3(w) - np.eye(3)).max() < 1e-12
        assert np.abs(v_so3(w) @ v_inv_so3(w) - np.eye(3)).max() < 1e-12


def test_left_jacobian_is_transposed_right(rng):
    for w in random_omega(rng, 1e-3, 3.0, 20):
        assert np.allclose(v_so3(w), jr_so3(w).T, atol=1e-15)
        assert np.allclose(jr_so3(w), jr_so3(-w).T, atol=1e-15)


def test_s_mat_is_derivative_of_hat_squared(rng):
    w = rng.normal(size=3)
    h = 1e-6
    for m in range(3):
        e = np.zeros(3)
        e[m] = h
        fd = (hat(w + e) @ hat(w + e) - hat(w - e) @ hat(w - e)) / (2 * h)
        assert np.allclose(s_mat(w, m), fd, atol=1e-9)
        alt = np.outer(E3[m], w) + np.outer(w, E3[m]) - 2 * w[m] * np.eye(3)
        assert np.allclose(s_mat(w, m), alt, atol=1e-15)


@pytest.mark.parametrize("m", range(3))
def test_d_jr_inv_at_zero(m):
    d = d_jr_inv_so3(np.zeros(3), m)
    ref = 0.5 * e_mat(m) + s_mat(np.zeros(3), m) / 12.0
    assert np.array_equal(d, ref)
    assert np.array_equal(d, 0.5 * e_mat(m))  # S_m vanishes at the origin


@pytest.mark.parametrize("basis", list(Basis))
def test_d_jr_inv_vs_fd(rng, basis):
    h = 1e-5
    for w in random_omega(rng, 1e-3, 3.0, 30):
        for m in range(3):
            e = np.zeros(3)
            e[m] = h
            fd = (jr_inv_so3(w + e) - jr_inv_so3(w - e)) / (2 * h)
            assert np.abs(fd - d_jr_inv_so3(w, m, basis)).max() < 1e-7


def test_jr_inv_custom_rule_matches_plain_ad(rng):
    # the tangent rule and differentiating the closed form must agree
    from se3ad.so3 import _jr_inv_value

    for order in (1, 2):
        pt = np.concatenate([rng.normal(size=3) * 0.4, np.zeros(3)])
        d = sc.seed_identity(order, pt)[:3]
        a, b = jr_inv_so3(d), _jr_inv_value(d, Basis.FUSED)
        for x, y in zip(a.flat, b.flat):
            if order == 1:
                assert np.allclose(x.grad, y.grad, atol=1e-15)
            else:
                for k in range(6):
                    assert np.allclose(x.grad[k].grad, y.grad[k].grad, atol=1e-14)


@pytest.mark.parametrize("order", [1, 2])
def test_seeded_origin_fused_is_finite(order, backend):
    d = sc.seed_identity(order, backend=backend)[:3]
    assert sc.isfinite_all(jr_inv_so3(d))
    assert sc.isfinite_all(exp_so3(d))
    assert sc.isfinite_all(log_so3(exp_so3(d)))
    for m in range(3):
        assert sc.isfinite_all(d_jr_inv_so3(d, m))


def test_seeded_origin_naive_has_nan(backend):
    d = sc.seed_identity(1, backend=backend)[:3]
    assert not sc.isfinite_all(jr_inv_so3(d, Basis.NAIVE))


def test_naive_away_from_origin_matches_fused():
    d = sc.seed_identity(1, [0.3, 0.2, -0.1, 0, 0, 0])[:3]
    a, b = jr_inv_so3(d, Basis.NAIVE), jr_inv_so3(d)
    for x, y in zip(a.flat, b.flat):
        assert np.allclose(x.grad, y.grad, atol=1e-13)


def test_invariant_suite():
    for c in check_so3(np.random.default_rng(7)):
        assert c.passed, c.line()


omegas = arrays(np.float64, 3, elements=st.floats(-1.7, 1.7))


@settings(max_examples=100, deadline=None)
@given(omegas)
def test_exp_log_roundtrip_hypothesis(w):
    if np.linalg.norm(w) >= math.pi - 0.1:
        w = w * 0.5
    assert np.abs(log_so3(exp_so3(w)) - w).max() < 1e-9
