"""Scalar function basis for the SO(3)/SE(3) closed forms.

All functions are parameterized by the squared angle ``s = w . w``::

    A = sin(t)/t            B = (1 - cos t)/t^2      C = (t - sin t)/t^3
    D = (1 - (t/2) cot(t/2)) / t^2
    D~ = beta_bar = 2 dD/ds        beta_bar_s = d(beta_bar)/ds

with ``t = sqrt(s)``. :func:`eval_basis` is the s-native form: below
``SMALL_S`` every value is a polynomial in ``s`` so no square root or
division by ``t`` is ever evaluated and seeded duals differentiate cleanly
through the origin. :func:`eval_basis_naive_theta` is the conventional
``t``-based form kept for failure demonstrations.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Any

from . import scalars as sc
from .errors import DomainError

# Taylor branch below this squared angle. At s = 0.25 the degree-6 series is
# exact to ~1e-17 and the closed forms keep AD second derivatives of
# beta_bar_s to ~1e-11; a smaller switch point starves the closed forms.
SMALL_S = 0.25
TAYLOR_DEGREE = 6
# radians kept clear of the rotation-chart boundary
MARGIN = 1e-6
S_MAX = (math.pi - MARGIN) ** 2


def _taylor(coeffs):
    return tuple(float(c) for c in coeffs[: TAYLOR_DEGREE + 1])


# Exact rational coefficients in s; D's tail comes from the Bernoulli numbers
# of t/2 cot(t/2). beta_bar and beta_bar_s are 2 dD/ds and its derivative.
_A = [F((-1) ** k, math.factorial(2 * k + 1)) for k in range(10)]
_B = [F((-1) ** k, math.factorial(2 * k + 2)) for k in range(10)]
_C = [F((-1) ** k, math.factorial(2 * k + 3)) for k in range(10)]
_D = [
    F(1, 12), F(1, 720), F(1, 30240), F(1, 1209600), F(1, 47900160),
    F(691, 1307674368000), F(1, 74724249600), F(3617, 10670622842880000),
    F(43867, 5109094217170944000),
]
_BB = [2 * (k + 1) * _D[k + 1] for k in range(len(_D) - 1)]
_BBS = [(k + 1) * _BB[k + 1] for k in range(len(_BB) - 1)]

TAYLOR_A = _taylor(_A)
TAYLOR_B = _taylor(_B)
TAYLOR_C = _taylor(_C)
TAYLOR_D = _taylor(_D)
TAYLOR_BETA_BAR = _taylor(_BB)
TAYLOR_BETA_BAR_S = _taylor(_BBS)


def horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


class Basis(enum.Enum):
    """Which scalar-basis implementation the primitives evaluate."""

    FUSED = "fused"
    NAIVE = "naive"


@dataclass(frozen=True)
class SBasisEval:
    s: Any
    a: Any
    b: Any
    c: Any
    d: Any
    d_tilde: Any
    beta_bar: Any
    beta_bar_s: Any


@dataclass(frozen=True)
class NaiveBasisEval(SBasisEval):
    """Naive evaluation; also exposes the unfused t-derivatives.

    ``d_prime`` is dD/dt and ``beta_bar_prime`` is d(beta_bar)/dt; the naive
    derivative tensors multiply them by ``w_m / t`` as separate factors.
    """

    theta: Any = 0.0
    d_prime: Any = 0.0
    beta_bar_prime: Any = 0.0


def check_domain(s):
    v = sc.real(s)
    if v != v:
        raise DomainError("squared angle is NaN")
    if v < 0.0:
        raise DomainError(f"squared angle must be nonnegative, got {v!r}")
    if v >= S_MAX:
        raise DomainError(
            f"rotation angle {math.sqrt(v)!r} is at or beyond the chart limit "
            f"pi - {MARGIN}"
        )


def eval_basis(s):
    """Evaluate the s-native basis at squared angle ``s`` (any scalar type)."""
    check_domain(s)
    if sc.real(s) < SMALL_S:
        return taylor_branch(s)
    return closed_branch(s)


def taylor_branch(s):
    """Polynomial branch; accurate for ``s`` below ``SMALL_S``."""
    bb = horner(TAYLOR_BETA_BAR, s)
    return SBasisEval(
        s=s,
        a=horner(TAYLOR_A, s),
        b=horner(TAYLOR_B, s),
        c=horner(TAYLOR_C, s),
        d=horner(TAYLOR_D, s),
        d_tilde=bb,
        beta_bar=bb,
        beta_bar_s=horner(TAYLOR_BETA_BAR_S, s),
    )


def closed_branch(s):
    """Trigonometric branch; needs ``s > 0`` and loses digits as ``s -> 0``."""
    t = sc.sqrt(s)
    half = sc.sin(t * 0.5)
    a = sc.sin(t) / t
    b = 2.0 * half * half / s
    c = (1.0 - a) / s
    d = (1.0 - a / (2.0 * b)) / s
    beta_bar = (c / (2.0 * b) - 2.0 * d) / s
    # d/ds of B, C from their t-forms; dD/ds = beta_bar / 2
    b_s = (a - 2.0 * b) / (2.0 * s)
    c_s = (b - 3.0 * c) / (2.0 * s)
    beta_s = (c_s * b - c * b_s) / (2.0 * b * b) - beta_bar
    beta_bar_s = (beta_s - beta_bar) / s
    return SBasisEval(s, a, b, c, d, beta_bar, beta_bar, beta_bar_s)


def eval_basis_naive_theta(s):
    """Conventional t-based basis: ``t = sqrt(s)`` and t-quotient forms.

    Plain zero takes an explicit ``t = 0`` special case with the limiting
    constants. Away from the origin the values match :func:`eval_basis`.
    """
    check_domain(s)
    if sc.real(s) == 0.0:
        return NaiveBasisEval(
            s=s, a=1.0, b=0.5, c=1.0 / 6.0, d=1.0 / 12.0,
            d_tilde=1.0 / 360.0, beta_bar=1.0 / 360.0, beta_bar_s=1.0 / 7560.0,
            theta=0.0, d_prime=0.0, beta_bar_prime=0.0,
        )
    t = sc.sqrt(s)
    t2 = t * t
    if sc.real(s) < SMALL_S:
        a = horner(TAYLOR_A, t2)
        b = horner(TAYLOR_B, t2)
        c = horner(TAYLOR_C, t2)
        d = horner(TAYLOR_D, t2)
        beta_bar = horner(TAYLOR_BETA_BAR, t2)
        # dD/dt = t * beta_bar(t^2);  d(beta_bar)/dt = 2 t beta_bar_s(t^2)
        d_prime = t * beta_bar
        beta_bar_prime = 2.0 * t * horner(TAYLOR_BETA_BAR_S, t2)
    else:
        sn, cs = sc.sin(t), sc.cos(t)
        a = sn / t
        b = (1.0 - cs) / t2
        c = (t - sn) / (t2 * t)
        half = t * 0.5
        cot_term = half * sc.cos(half) / sc.sin(half)
        d = (1.0 - cot_term) / t2
        beta_bar = (c / (2.0 * b) - 2.0 * d) / t2
        b_t = (a - 2.0 * b) / t
        c_t = (b - 3.0 * c) / t
        f_t = (
            -0.5 * sc.cos(half) / sc.sin(half)
            + 0.25 * t / (sc.sin(half) * sc.sin(half))
        )
        d_prime = f_t / t2 - 2.0 * d / t
        beta_t = (c_t * b - c * b_t) / (2.0 * b * b) - 2.0 * d_prime
        beta_bar_prime = beta_t / t2 - 2.0 * beta_bar / t
    return NaiveBasisEval(
        s=s, a=a, b=b, c=c, d=d,
        d_tilde=sc.quotient(d_prime, t),
        beta_bar=beta_bar,
        beta_bar_s=sc.quotient(beta_bar_prime, 2.0 * t),
        theta=t, d_prime=d_prime, beta_bar_prime=beta_bar_prime,
    )


def evaluate(s, basis=Basis.FUSED):
    if basis is Basis.NAIVE:
        return eval_basis_naive_theta(s)
    return eval_basis(s)
