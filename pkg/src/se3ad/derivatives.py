"""Gradient, Hessian and third-order tensor from one gradient body.

A gradient callable ``grad(delta) -> 6-vector`` is evaluated on seeded
scalars: ``Dual6`` seeds give ``H[i][j] = dg_i/d delta_j`` and
``NestedDual6`` seeds give ``t3[i][j][k] = d^2 g_i / d delta_j d delta_k``.
"""

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import scalars as sc
from .basis import Basis
from .errors import NonFiniteDerivativeError
from .nll import NLLProblem, nll_grad

W = sc.WIDTH


@dataclass(frozen=True)
class HessianResult:
    grad: np.ndarray
    hess: np.ndarray

    @property
    def symmetry_defect(self):
        """``|H - H^T|_F / |H|_F`` (zero for an exactly symmetric Hessian)."""
        return _sym_defect(self.hess)


@dataclass(frozen=True)
class ThirdOrderResult:
    grad: np.ndarray
    hess: np.ndarray
    t3: np.ndarray

    @property
    def symmetry_defect(self):
        return _sym_defect(self.hess)

    @property
    def t3_symmetry_defect(self):
        """Largest ``|t3[i][j][k] - t3[i][k][j]|`` relative to ``max |t3|``."""
        scale = np.abs(self.t3).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.t3 - self.t3.transpose(0, 2, 1)).max() / scale)


def _sym_defect(h):
    norm = np.linalg.norm(h)
    return 0.0 if norm == 0.0 else float(np.linalg.norm(h - h.T) / norm)


def _grad_fn(source, basis):
    if isinstance(source, NLLProblem):
        return partial(nll_grad, source, basis=basis)
    if callable(source):
        return source
    raise TypeError(f"expected an NLLProblem or a gradient callable, got {type(source)!r}")


def _raise_if_nan(*arrays, what):
    bad = [a for a in arrays if not np.all(np.isfinite(a))]
    if bad:
        raise NonFiniteDerivativeError(f"non-finite entries in the {what}", values=arrays)


def extract_first(out):
    """Values and first-order slots of a vector of ``Dual6``."""
    vals = np.array([_val(y) for y in out], dtype=float)
    jac = np.array([[_slot(y, j) for j in range(W)] for y in out], dtype=float)
    return vals, jac


def _val(y):
    return float(y.val) if sc.is_dual(y) else float(y)


def _slot(y, j):
    return float(y.grad[j]) if sc.is_dual(y) else 0.0


def seeded_hessian_raw(source, point=None, basis=Basis.FUSED, backend=None):
    """Gradient and ``dg/d delta`` from one ``Dual6`` pass, NaNs left in place."""
    out = _grad_fn(source, basis)(sc.seed_identity(1, point, backend))
    return extract_first(out)


def hessian_seeded(source, point=None, basis=Basis.FUSED, backend=None):
    """Exact Hessian from a single ``Dual6`` evaluation of the gradient.

    ``source`` is an :class:`NLLProblem` (its analytical gradient is used) or
    any callable mapping a 6-vector to a 6-vector. Non-finite entries raise
    :class:`NonFiniteDerivativeError`; the Hessian is not symmetrized.
    """
    grad, hess = seeded_hessian_raw(source, point, basis, backend)
    _raise_if_nan(grad, hess, what="seeded Hessian")
    return HessianResult(grad, hess)


def extract_second(out):
    """Value, first- and second-order slots of a vector of ``NestedDual6``."""
    n = len(out)
    vals = np.zeros(n)
    jac = np.zeros((n, W))
    t3 = np.zeros((n, W, W))
    for i, y in enumerate(out):
        if not sc.is_dual(y):
            vals[i] = float(y)
            continue
        inner = y.val
        vals[i] = float(inner.val)
        jac[i] = inner.grad
        for k in range(W):
            gk = y.grad[k]
            if sc.is_dual(gk):
                t3[i, k] = gk.grad
    return vals, jac, t3


def third_order_nested(source, point=None, basis=Basis.FUSED, backend=None):
    """Gradient, Hessian and third-order tensor from one ``NestedDual6`` pass."""
    out = _grad_fn(source, basis)(sc.seed_identity(2, point, backend))
    grad, hess, t3 = extract_second(out)
    _raise_if_nan(grad, hess, t3, what="nested derivatives")
    return ThirdOrderResult(grad, hess, t3)


def rel_frobenius(a, b):
    """``|a - b|_F / |b|_F``; NaN if either contains NaN."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        return math.nan
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
