"""SE(3) primitives, generic over the scalar type.

Poses are stored as ``(R, p)`` rather than 4x4 matrices. Tangent vectors use
the rotation-first order ``xi = [w; t]`` and right perturbations
``T -> T Exp(delta)``.
"""

from dataclasses import dataclass

import numpy as np

from . import scalars as sc
from .scalars import mm
from .basis import Basis, evaluate
from .so3 import (
    _s_mat,
    contract_tangents,
    dot3,
    e_mat,
    exp_so3,
    hat,
    jr_inv_so3,
    jr_so3,
    log_so3,
    s_mat,
    sq_angle,
    v_inv_so3,
    v_so3,
)


@dataclass(frozen=True, eq=False)
class Pose3:
    """Rigid transform ``x -> R x + p``."""

    R: np.ndarray
    p: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    def matrix(self):
        """4x4 homogeneous matrix (float poses only)."""
        m = np.eye(4)
        m[:3, :3] = self.R
        m[:3, 3] = self.p
        return m


def exp_se3(xi, basis=Basis.FUSED):
    xi = np.asarray(xi)
    omega, t = xi[:3], xi[3:]
    return Pose3(exp_so3(omega, basis), mm(v_so3(omega, basis), t))


def log_se3(pose, basis=Basis.FUSED):
    omega = log_so3(pose.R, basis)
    t = mm(v_inv_so3(omega, basis), pose.p)
    return np.concatenate([omega, t])


def compose(t1, t2):
    return Pose3(mm(t1.R, t2.R), mm(t1.R, t2.p) + t1.p)


def inverse(pose):
    rt = pose.R.T
    return Pose3(rt, -mm(rt, pose.p))


def act(pose, x):
    return mm(pose.R, np.asarray(x)) + pose.p


def j_act(pose, x):
    """Point-action Jacobian ``(-R [x]x | R)`` under right perturbation."""
    return np.hstack([-mm(pose.R, hat(np.asarray(x))), pose.R])


def adjoint(pose):
    r = pose.R
    z = np.zeros((3, 3))
    return np.block([[r, z], [mm(hat(pose.p), r), r]])


def ad_se3(xi):
    """Algebra adjoint ``[[w^, 0], [t^, w^]]``."""
    xi = np.asarray(xi)
    w, t = hat(xi[:3]), hat(xi[3:])
    return np.block([[w, np.zeros((3, 3))], [t, w]])


def _h_mat(w_hat, t_hat):
    return mm(w_hat, t_hat) + mm(t_hat, w_hat)


def _q_tilde_value(omega, t, basis):
    w = hat(omega)
    return _q_tilde(evaluate(sq_angle(omega), basis), w, mm(w, w), omega, t)


def _q_tilde(b, w, w2, omega, t):
    th = hat(t)
    alpha = dot3(omega, t) * b.beta_bar
    return 0.5 * th + b.d * _h_mat(w, th) + alpha * w2


def q_tilde_r(omega, t, basis=Basis.FUSED):
    """Lower-left block of the inverse SE(3) right Jacobian.

    ``t^/2 + D(s) H + alpha w^2`` with ``H = w^ t^ + t^ w^`` and
    ``alpha = (w . t) beta_bar(s)``. Linear in ``t``; dual inputs take the
    tangent rule through :func:`d_q_tilde_r`.
    """
    omega, t = np.asarray(omega), np.asarray(t)
    like = sc.proto(np.concatenate([omega, t]))
    if like is None:
        return _q_tilde_value(omega, t, basis)
    w0, dw = sc.split(omega, like)
    t0, dt = sc.split(t, like)
    q0 = q_tilde_r(w0, t0, basis)
    b = evaluate(sq_angle(w0), basis)
    w = hat(w0)
    w2 = mm(w, w)
    tensors = [_d_q_tilde(b, w, w2, w0, t0, m, basis) for m in range(3)]
    dq = contract_tangents(tensors, dw)
    # Q~ is linear in t, so the t-payload enters through Q~ itself
    return sc.join(like, q0, [d + _q_tilde(b, w, w2, w0, dt[k]) for k, d in enumerate(dq)])


def d_q_tilde_r(omega, t, m, basis=Basis.FUSED):
    """Derivative of :func:`q_tilde_r` along ``w_m`` (``t`` held fixed).

    Fused: ``D~ w_m H + D H_m + alpha_m w^2 + alpha S_m`` with
    ``alpha_m = t_m beta_bar + 2 w_m (w . t) beta_bar_s``. The naive variant
    forms the s-derivatives as ``f'(t) * (w_m / t)`` factor pairs.
    """
    omega, t = np.asarray(omega), np.asarray(t)
    w = hat(omega)
    return _d_q_tilde(evaluate(sq_angle(omega), basis), w, mm(w, w), omega, t, m, basis)


def _d_q_tilde(b, w, w2, omega, t, m, basis):
    th = hat(t)
    e = e_mat(m)
    wt = dot3(omega, t)
    if basis is Basis.NAIVE:
        ratio = sc.quotient(omega[m], b.theta)
        d_coeff = b.d_prime * ratio
        alpha_m = t[m] * b.beta_bar + wt * b.beta_bar_prime * ratio
    else:
        d_coeff = b.d_tilde * omega[m]
        alpha_m = t[m] * b.beta_bar + 2.0 * omega[m] * wt * b.beta_bar_s
    alpha = wt * b.beta_bar
    return (
        d_coeff * _h_mat(w, th)
        + b.d * _h_mat(e, th)
        + alpha_m * w2
        + alpha * _s_mat(w, m)
    )


def jr_inv_se3(xi, basis=Basis.FUSED):
    xi = np.asarray(xi)
    omega, t = xi[:3], xi[3:]
    ji = jr_inv_so3(omega, basis)
    z = np.zeros((3, 3))
    return np.block([[ji, z], [q_tilde_r(omega, t, basis), ji]])


def jr_se3(xi, basis=Basis.FUSED):
    """Right Jacobian; its coupling block is ``Q_r = -J_r Q~_r J_r``."""
    xi = np.asarray(xi)
    omega, t = xi[:3], xi[3:]
    jr = jr_so3(omega, basis)
    qr = -mm(mm(jr, q_tilde_r(omega, t, basis)), jr)
    z = np.zeros((3, 3))
    return np.block([[jr, z], [qr, jr]])
