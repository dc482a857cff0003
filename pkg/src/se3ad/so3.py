"""SO(3) primitives, generic over the scalar type.

Vectors and matrices are numpy arrays; entries are floats, ``Dual6`` or
``NestedDual6``. Every function accepts any of them.

``jr_inv_so3`` carries its own tangent rule: when the input is dual, the
payload is pushed through the closed-form derivative tensor
:func:`d_jr_inv_so3` evaluated one level down. With the fused basis that
tensor is smooth at the origin; with the naive basis it contains the
``D'(t) * w_m / t`` factor pair and produces NaN at ``w = 0``.
"""

import numpy as np

from . import scalars as sc
from .scalars import mm
from .basis import MARGIN, Basis, evaluate, horner
from .errors import DomainError

_EYE = np.eye(3)


def _obj(rows):
    out = np.array(rows, dtype=object)
    return sc._demote(out)


def hat(v):
    if isinstance(v, np.ndarray) and v.dtype != object:
        return np.array(
            [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]], dtype=float
        )
    return _obj(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def vee(m):
    return _obj([m[2, 1], m[0, 2], m[1, 0]])


def dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def sq_angle(omega):
    return dot3(omega, omega)


def exp_so3(omega, basis=Basis.FUSED):
    omega = np.asarray(omega)
    b = evaluate(sq_angle(omega), basis)
    w = hat(omega)
    return _EYE + b.a * w + b.b * mm(w, w)


def jr_so3(omega, basis=Basis.FUSED):
    omega = np.asarray(omega)
    b = evaluate(sq_angle(omega), basis)
    w = hat(omega)
    return _EYE - b.b * w + b.c * mm(w, w)


def v_so3(omega, basis=Basis.FUSED):
    """Left Jacobian, the translation factor of the SE(3) exponential."""
    omega = np.asarray(omega)
    b = evaluate(sq_angle(omega), basis)
    w = hat(omega)
    return _EYE + b.b * w + b.c * mm(w, w)


def v_inv_so3(omega, basis=Basis.FUSED):
    omega = np.asarray(omega)
    b = evaluate(sq_angle(omega), basis)
    w = hat(omega)
    return _EYE - 0.5 * w + b.d * mm(w, w)


def _jr_inv_value(omega, basis):
    b = evaluate(sq_angle(omega), basis)
    w = hat(omega)
    return _EYE + 0.5 * w + b.d * mm(w, w)


def jr_inv_so3(omega, basis=Basis.FUSED):
    """Inverse right Jacobian ``I + w^/2 + D(s) w^2``."""
    omega = np.asarray(omega)
    like = sc.proto(omega)
    if like is None:
        return _jr_inv_value(omega, basis)
    w0, dw = sc.split(omega, like)
    j0 = jr_inv_so3(w0, basis)
    b = evaluate(sq_angle(w0), basis)
    w = hat(w0)
    w2 = mm(w, w)
    tensors = [_d_jr_inv(b, w, w2, w0, m, basis) for m in range(3)]
    return sc.join(like, j0, contract_tangents(tensors, dw))


def contract_tangents(tensors, dw):
    """``[sum_m tensors[m] * dw[k][m] for k]``: push payloads through a derivative."""
    return [
        tensors[0] * dw[k][0] + tensors[1] * dw[k][1] + tensors[2] * dw[k][2]
        for k in range(sc.WIDTH)
    ]


_E_MATS = tuple(hat(_EYE[m]) for m in range(3))


def e_mat(m):
    """``[e_m]x``, the hat of the m-th unit vector."""
    return _E_MATS[m].copy()


def _s_mat(w, m):
    e = _E_MATS[m]
    return mm(e, w) + mm(w, e)


def s_mat(omega, m):
    """``S_m = d(w^2)/dw_m = E_m w^ + w^ E_m``."""
    return _s_mat(hat(np.asarray(omega)), m)


def d_jr_inv_so3(omega, m, basis=Basis.FUSED):
    """Derivative of :func:`jr_inv_so3` along ``w_m``.

    Fused: ``E_m / 2 + D~(s) w_m w^2 + D(s) S_m`` with ``D~ = 2 dD/ds``.
    Naive: the same with ``D~ w_m`` replaced by ``D'(t) * (w_m / t)``.
    """
    omega = np.asarray(omega)
    w = hat(omega)
    return _d_jr_inv(evaluate(sq_angle(omega), basis), w, mm(w, w), omega, m, basis)


def _d_jr_inv(b, w, w2, omega, m, basis):
    if basis is Basis.NAIVE:
        coeff = b.d_prime * sc.quotient(omega[m], b.theta)
    else:
        coeff = b.d_tilde * omega[m]
    return 0.5 * _E_MATS[m] + coeff * w2 + b.d * _s_mat(w, m)


# Series for t / sin(t) in sigma = sin(t)^2, valid for cos(t) > 0.
_ASIN_SERIES = (1.0, 1.0 / 6.0, 3.0 / 40.0, 5.0 / 112.0, 35.0 / 1152.0,
                63.0 / 2816.0, 231.0 / 13312.0, 143.0 / 10240.0)
_LOG_SMALL = 1e-2


def log_so3(rot, basis=Basis.FUSED):
    """Principal logarithm via the antisymmetric part of ``R``.

    ``w = vee(R - R^T)/2 = sin(t) * axis`` and ``t / sin(t)`` is taken from a
    series in ``sin(t)^2`` near the identity (no square root) and from
    ``atan2`` elsewhere.
    """
    rot = np.asarray(rot)
    cos_t = (rot[0, 0] + rot[1, 1] + rot[2, 2] - 1.0) * 0.5
    if sc.real(cos_t) <= np.cos(np.pi - MARGIN):
        raise DomainError("rotation angle at or beyond the chart limit")
    w = vee(rot - rot.T) * 0.5
    sigma = dot3(w, w)
    if basis is Basis.NAIVE:
        if sc.real(sigma) == 0.0:
            return w
        sin_t = sc.sqrt(sigma)
        return w * (sc.atan2(sin_t, cos_t) / sin_t)
    if sc.real(sigma) < _LOG_SMALL and sc.real(cos_t) > 0.0:
        return w * horner(_ASIN_SERIES, sigma)
    sin_t = sc.sqrt(sigma)
    return w * (sc.atan2(sin_t, cos_t) / sin_t)
