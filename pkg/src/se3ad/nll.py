"""Robust PnP negative log-likelihood and its analytical gradient.

The objective at the right perturbation ``delta`` of the base pose ``T_bar``
is::

    f(delta) = 1/2 xi^T Omega_p xi + sum_i rho(|L_i (pi(R x_i + p) - z_i)|^2)

with ``T = T_bar Exp(delta)``, ``xi = Log(T^-1 T_prior)`` and the
pseudo-Huber kernel ``rho``. :func:`nll_grad` is a single code path that
works for floats, ``Dual6`` and ``NestedDual6``, so seeding it yields the
gradient, the exact Hessian, or the third-order tensor.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from . import scalars as sc
from .scalars import mm
from .basis import Basis
from .errors import DepthError
from .se3 import (
    Pose3,
    act,
    adjoint,
    compose,
    exp_se3,
    inverse,
    j_act,
    jr_inv_se3,
    jr_se3,
    log_se3,
)

DEPTH_MIN = 1e-6


@dataclass(frozen=True)
class Intrinsics:
    fx: float = 500.0
    fy: float = 500.0
    cx: float = 320.0
    cy: float = 240.0

    def project(self, u):
        _check_depth(u)
        inv_z = 1.0 / u[2]
        return np.array(
            [self.fx * u[0] * inv_z + self.cx, self.fy * u[1] * inv_z + self.cy],
            dtype=_dtype(u),
        )


@dataclass(frozen=True, eq=False)
class Observation:
    """One landmark measurement.

    ``whitening`` is upper-triangular ``L`` with ``L^T L`` equal to the
    measurement information; ``kappa`` is the kernel scale in whitened units.
    """

    landmark: np.ndarray
    z: np.ndarray
    whitening: np.ndarray = field(default_factory=lambda: np.eye(2))
    kappa: float = 1.0

    def __post_init__(self):
        lw = np.asarray(self.whitening, dtype=float)
        if lw.shape != (2, 2) or lw[1, 0] != 0.0 or np.any(np.diag(lw) <= 0.0):
            raise ValueError("whitening must be upper-triangular with positive diagonal")
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        object.__setattr__(self, "landmark", np.asarray(self.landmark, dtype=float))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        object.__setattr__(self, "whitening", lw)

    @classmethod
    def from_information(cls, landmark, z, info, kappa=1.0):
        """Build from a 2x2 information matrix (``L = chol(info)^T``)."""
        return cls(landmark, z, np.linalg.cholesky(np.asarray(info, float)).T, kappa)


@dataclass(frozen=True, eq=False)
class PriorSpec:
    t_prior: Pose3
    info: np.ndarray

    def __post_init__(self):
        info = np.asarray(self.info, dtype=float)
        if info.shape != (6, 6):
            raise ValueError("prior information must be 6x6")
        if np.abs(info - info.T).max() > 1e-12 * max(1.0, np.abs(info).max()):
            raise ValueError("prior information must be symmetric")
        if np.linalg.eigvalsh(info).min() <= 0.0:
            raise ValueError("prior information must be positive definite")
        object.__setattr__(self, "info", info)


@dataclass(frozen=True, eq=False)
class NLLProblem:
    t_bar: Pose3
    prior: PriorSpec
    obs: Tuple[Observation, ...] = ()
    intrinsics: Intrinsics = Intrinsics()

    def __post_init__(self):
        object.__setattr__(self, "obs", tuple(self.obs))

    def without_data(self):
        return NLLProblem(self.t_bar, self.prior, (), self.intrinsics)


def _dtype(arr):
    return object if sc.proto(arr) is not None else float


def _check_depth(u):
    depth = sc.real(u[2])
    if not depth > DEPTH_MIN:
        raise DepthError(f"point depth {depth!r} is not above {DEPTH_MIN}")


def pseudo_huber(s, kappa=1.0):
    """``kappa^2 (sqrt(1 + s/kappa^2) - 1)`` of a squared residual norm.

    Evaluated as ``s / (sqrt(1 + s/kappa^2) + 1)``, which avoids the
    cancellation of the textbook form for small ``s``.
    """
    return s / (sc.sqrt(1.0 + s / (kappa * kappa)) + 1.0)


def pseudo_huber_weight(s, kappa=1.0):
    """Residual weight ``1/sqrt(1 + s/kappa^2)``.

    The gradient of ``rho(|r|^2)`` with respect to ``r`` is ``weight * r``;
    the weight equals one at ``s = 0``.
    """
    return 1.0 / sc.sqrt(1.0 + s / (kappa * kappa))


def _whitened_residual(obs, u, intrinsics):
    e = intrinsics.project(u) - obs.z
    return mm(obs.whitening, e)


def observation_cost(obs, u, intrinsics):
    r = _whitened_residual(obs, u, intrinsics)
    return pseudo_huber(r[0] * r[0] + r[1] * r[1], obs.kappa)


def below_seam_gradient(obs, u, intrinsics):
    """Euclidean gradient of :func:`observation_cost` with respect to ``u``.

    Written as an explicit chain rule through projection, whitening and the
    kernel, in whatever scalar type ``u`` carries.
    """
    _check_depth(u)
    inv_z = 1.0 / u[2]
    a, b = u[0] * inv_z, u[1] * inv_z
    f = intrinsics
    e = np.array([f.fx * a + f.cx - obs.z[0], f.fy * b + f.cy - obs.z[1]], dtype=_dtype(u))
    r = mm(obs.whitening, e)
    w = pseudo_huber_weight(r[0] * r[0] + r[1] * r[1], obs.kappa)
    g = mm(obs.whitening.T, r * w)  # d rho / d pi
    gx, gy = g[0] * (f.fx * inv_z), g[1] * (f.fy * inv_z)
    return np.array([gx, gy, -(gx * a + gy * b)], dtype=_dtype(u))


def perturbed_pose(problem, delta, basis=Basis.FUSED):
    return compose(problem.t_bar, exp_se3(np.asarray(delta), basis))


def prior_residual(problem, pose, basis=Basis.FUSED):
    g = compose(inverse(pose), problem.prior.t_prior)
    return g, log_se3(g, basis)


def nll_value(problem, delta, basis=Basis.FUSED):
    """Objective at ``T_bar Exp(delta)``; scalar-generic."""
    pose = perturbed_pose(problem, delta, basis)
    _, xi = prior_residual(problem, pose, basis)
    total = 0.5 * mm(xi, mm(problem.prior.info, xi))
    for obs in problem.obs:
        total = total + observation_cost(obs, act(pose, obs.landmark), problem.intrinsics)
    return total


def nll_grad(problem, delta, basis=Basis.FUSED):
    """Analytical gradient of :func:`nll_value` with respect to ``delta``.

    The body gradient is accumulated on the pose itself: the prior seam
    lifts ``Omega_p xi`` through ``Jr(xi)^-T`` and the adjoint of ``G^-1``,
    each landmark lifts its below-seam gradient through the point-action
    Jacobian. The final ``Jr(delta)^T`` maps the body gradient back to
    ``delta``.
    """
    delta = np.asarray(delta)
    pose = perturbed_pose(problem, delta, basis)
    g_err, xi = prior_residual(problem, pose, basis)
    lifted = mm(jr_inv_se3(xi, basis).T, mm(problem.prior.info, xi))
    g_body = -mm(adjoint(inverse(g_err)).T, lifted)
    for obs in problem.obs:
        u = act(pose, obs.landmark)
        q = below_seam_gradient(obs, u, problem.intrinsics)
        g_body = g_body + mm(j_act(pose, obs.landmark).T, q)
    return mm(jr_se3(delta, basis).T, g_body)
