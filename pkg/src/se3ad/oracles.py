"""Reference derivative paths used only to validate the analytical ones.

None of these call :func:`se3ad.nll.nll_grad` except where a gradient
callable is passed in explicitly (finite differences of a gradient, and the
naive-basis seeded run).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from math import comb, factorial

import numpy as np

from . import scalars as sc
from .basis import Basis
from .derivatives import extract_first, extract_second, seeded_hessian_raw
from .errors import DomainError
from .nll import NLLProblem, nll_value
from .se3 import ad_se3

W = sc.WIDTH
FD_VALUE_STEP = 1e-4
FD_GRAD_STEP = 1e-6
BERNOULLI_MAX_NORM = 1.5


def _value_fn(source, basis):
    if isinstance(source, NLLProblem):
        return partial(nll_value, source, basis=basis)
    return source


def fd_hessian_of_value(source, step=FD_VALUE_STEP, point=None, basis=Basis.FUSED):
    """Central second differences of a scalar function of a 6-vector."""
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    f = _value_fn(source, basis)
    x0 = np.zeros(W) if point is None else np.asarray(point, float)
    e = np.eye(W) * step
    f0 = float(f(x0))
    h = np.empty((W, W))
    for i in range(W):
        h[i, i] = (float(f(x0 + e[i])) - 2.0 * f0 + float(f(x0 - e[i]))) / step**2
        for j in range(i):
            v = (
                float(f(x0 + e[i] + e[j]))
                - float(f(x0 + e[i] - e[j]))
                - float(f(x0 - e[i] + e[j]))
                + float(f(x0 - e[i] - e[j]))
            ) / (4.0 * step**2)
            h[i, j] = h[j, i] = v
    return h


def fd_hessian_of_gradient(grad_fn, step=FD_GRAD_STEP, point=None):
    """Central differences of a 6-vector gradient; column ``j`` is ``dg/d delta_j``."""
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    x0 = np.zeros(W) if point is None else np.asarray(point, float)
    h = np.empty((W, W))
    for j in range(W):
        e = np.zeros(W)
        e[j] = step
        gp = np.asarray(grad_fn(x0 + e), float)
        gm = np.asarray(grad_fn(x0 - e), float)
        h[:, j] = (gp - gm) / (2.0 * step)
    return h


def ad_traced_gradient(problem, point=None, basis=Basis.FUSED, backend=None):
    """Gradient of the objective by ``Dual6`` seeding of the value itself."""
    y = nll_value(problem, sc.seed_identity(1, point, backend), basis)
    _, jac = extract_first(np.array([y], dtype=object))
    return jac[0]


def ad_value_hessian(problem, point=None, basis=Basis.FUSED, backend=None):
    """Gradient and Hessian by ``NestedDual6`` seeding of the value.

    With the fused basis this is the reference Hessian every other path is
    compared against.
    """
    y = nll_value(problem, sc.seed_identity(2, point, backend), basis)
    _, grad, hess = extract_second(np.array([y], dtype=object))
    return grad[0], hess[0]


@dataclass(frozen=True)
class NaNReport:
    grad: np.ndarray
    hess: np.ndarray
    nan_entries: tuple

    @property
    def nan_count(self):
        return len(self.nan_entries)

    @property
    def has_nan(self):
        return bool(self.nan_entries)


def naive_seeded_hessian(problem, point=None, backend=None):
    """Seeded ``Dual6`` Hessian of the analytical gradient on the naive basis.

    NaNs are the expected observation at ``w = 0`` and are reported, not
    raised.
    """
    grad, hess = seeded_hessian_raw(problem, point, Basis.NAIVE, backend)
    bad = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(~np.isfinite(hess))))
    return NaNReport(grad, hess, bad)


@lru_cache(maxsize=None)
def bernoulli_numbers(n):
    """``B_0 .. B_n`` as fractions, with ``B_1 = -1/2``."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_coefficients(n_terms):
    """Coefficients of ``ad^k`` for ``k = 0..n_terms`` in the inverse right Jacobian."""
    b = bernoulli_numbers(n_terms)
    # the series is sum_k B_k/k! (-ad)^k
    return tuple((-1) ** k * b[k] / factorial(k) for k in range(n_terms + 1))


def bernoulli_jr_inv_se3(xi, n_terms=8):
    """Truncated ad-series ``sum_{k<=n_terms} c_k ad_xi^k`` (float input)."""
    xi = np.asarray(xi, float)
    if n_terms < 0:
        raise ValueError("n_terms must be nonnegative")
    norm = float(np.linalg.norm(xi))
    if norm > BERNOULLI_MAX_NORM:
        raise DomainError(f"|xi| = {norm!r} exceeds the series limit {BERNOULLI_MAX_NORM}")
    ad = ad_se3(xi).astype(float)
    out = np.zeros((W, W))
    power = np.eye(W)
    for c in bernoulli_coefficients(n_terms):
        out += float(c) * power
        power = power @ ad
    return out
