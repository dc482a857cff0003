"""Scalar contract and forward-mode scalar types.

Every geometric primitive in this package is written against a small scalar
contract: ring arithmetic, division, literals, ordering on the value part,
and the elementary functions below. Three scalar families satisfy it:

* plain floats (``float``, ``numpy.float64``),
* :class:`Dual6`, a dual number with a six-slot gradient payload,
* :class:`NestedDual6`, a dual whose slots are ``Dual6`` (second order).

The dual types come from the compiled ``_dual_ext`` module when it is
importable and from the pure-Python ``_dual_py`` module otherwise. Set
``SE3AD_BACKEND=python`` to force the fallback.
"""

import math
import os

import numpy as np

from . import _dual_py
from .errors import DomainError

WIDTH = 6


def _load_backend():
    wanted = os.environ.get("SE3AD_BACKEND", "auto").lower()
    if wanted not in ("auto", "cython", "python"):
        raise ImportError(f"unknown SE3AD_BACKEND={wanted!r}")
    if wanted != "python":
        try:
            from . import _dual_ext
        except ImportError:
            if wanted == "cython":
                raise
        else:
            return "cython", _dual_ext
    return "python", _dual_py


BACKEND, _impl = _load_backend()
Dual6 = _impl.Dual6
NestedDual6 = _impl.NestedDual6

# both backends are always importable; the tests and the backend benchmark
# address them explicitly
BACKENDS = {"python": _dual_py}
try:
    from . import _dual_ext as _ext

    BACKENDS["cython"] = _ext
except ImportError:  # pragma: no cover - depends on the build
    pass

_DUAL_TYPES = tuple(
    t for m in BACKENDS.values() for t in (m.Dual6, m.NestedDual6)
)


def is_dual(x):
    return isinstance(x, _DUAL_TYPES)


def real(x):
    """Value part of ``x`` as a float, stripping every nesting level."""
    while isinstance(x, _DUAL_TYPES):
        x = x.val
    return float(x)


def sin(x):
    return x.sin() if isinstance(x, _DUAL_TYPES) else math.sin(x)


def cos(x):
    return x.cos() if isinstance(x, _DUAL_TYPES) else math.cos(x)


def sqrt(x):
    if isinstance(x, _DUAL_TYPES):
        return x.sqrt()
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def atan2(y, x):
    if isinstance(y, _DUAL_TYPES):
        return y.atan2(x)
    if isinstance(x, _DUAL_TYPES):
        return type(x)(y).atan2(x)
    return math.atan2(y, x)


def recip(x):
    if isinstance(x, _DUAL_TYPES):
        return x.recip()
    if x == 0.0:
        raise DomainError("reciprocal of zero value")
    return 1.0 / x


def quotient(a, b):
    """``a / b`` with IEEE semantics for plain floats (``0/0`` is NaN)."""
    if isinstance(a, _DUAL_TYPES) or isinstance(b, _DUAL_TYPES):
        return a / b
    a, b = float(a), float(b)
    try:
        return a / b
    except ZeroDivisionError:
        if a != a or a == 0.0:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)


def _lift_inner(like, c):
    if isinstance(like.val, _DUAL_TYPES):
        return type(like.val)(c)
    return c


def elementary(fn, x):
    """Apply one of the contract's elementary functions by name."""
    try:
        f = _ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return f(x)


_ELEMENTARY = {"sin": sin, "cos": cos, "sqrt": sqrt, "recip": recip}


def seed_identity(order=1, point=None, backend=None):
    """Six seeded scalars ``delta = point + I * eps``.

    ``order=1`` returns ``Dual6`` values with slot ``m`` of element ``m`` set
    to one. ``order=2`` returns ``NestedDual6`` values seeded identically at
    both nesting levels, so a function evaluated on them exposes gradient,
    Hessian and (for a vector-valued function) the second derivative of each
    component.
    """
    impl = _impl if backend is None else BACKENDS[backend]
    point = np.zeros(WIDTH) if point is None else np.asarray(point, dtype=float)
    eye = np.eye(WIDTH)
    if order == 1:
        return np.array(
            [impl.Dual6(point[m], eye[m]) for m in range(WIDTH)], dtype=object
        )
    if order == 2:
        zero = np.zeros(WIDTH)
        return np.array(
            [
                impl.NestedDual6(
                    impl.Dual6(point[m], eye[m]),
                    [impl.Dual6(eye[m][k], zero) for k in range(WIDTH)],
                )
                for m in range(WIDTH)
            ],
            dtype=object,
        )
    raise ValueError(f"seed order must be 1 or 2, got {order!r}")


# array helpers used by the generic primitives


def proto(arr):
    """First dual element of ``arr`` (any shape), or ``None`` if all plain."""
    for x in np.asarray(arr, dtype=object).flat:
        if isinstance(x, _DUAL_TYPES):
            return x
    return None


def split(arr, like):
    """Split an array of duals of type ``type(like)`` into value and payloads.

    Plain entries are treated as constants. Returns ``(values, [d_0..d_5])``
    where every payload array has the shape of ``arr``.
    """
    arr = np.asarray(arr, dtype=object)
    kind = type(like)
    zero = _lift_inner(like, 0.0)
    vals = np.empty(arr.shape, dtype=object)
    payload = [np.empty(arr.shape, dtype=object) for _ in range(WIDTH)]
    for idx, x in np.ndenumerate(arr):
        if type(x) is kind:
            vals[idx] = x.val
            for k, g in enumerate(x.grad):
                payload[k][idx] = g
        elif isinstance(x, _DUAL_TYPES):
            raise TypeError(f"cannot mix {kind.__name__} and {type(x).__name__}")
        else:
            vals[idx] = _lift_inner(like, x)
            for k in range(WIDTH):
                payload[k][idx] = zero
    return _demote(vals), [_demote(p) for p in payload]


def join(like, vals, payload):
    """Inverse of :func:`split`: assemble duals of type ``type(like)``."""
    kind = type(like)
    vals = np.asarray(vals, dtype=object)
    out = np.empty(vals.shape, dtype=object)
    for idx, v in np.ndenumerate(vals):
        out[idx] = kind(v, [p[idx] for p in payload])
    return out


def mm(a, b):
    """Matrix product summed strictly left to right over the inner index.

    Object-dtype ``@`` already accumulates in that order; float64 ``@`` may
    block or fuse the sums. Using one order for both keeps the value part of
    a dual evaluation bit-identical to the plain-float evaluation.
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype == object or b.dtype == object:
        return a @ b
    a2 = a[None, :] if a.ndim == 1 else a
    b2 = b[:, None] if b.ndim == 1 else b
    # reducing a non-contiguous axis adds the slices in index order
    acc = (a2[:, :, None] * b2[None, :, :]).sum(axis=1)
    if a.ndim == 1:
        acc = acc[0]
    if b.ndim == 1:
        acc = acc[..., 0]
    return acc


def _demote(arr):
    # plain-float arrays go back to float64 so the inner evaluation is fast
    if arr.size and all(isinstance(x, (float, int)) for x in arr.flat):
        return arr.astype(float)
    return arr


def real_array(arr):
    return np.vectorize(real, otypes=[float])(np.asarray(arr, dtype=object))


def isfinite_all(arr):
    """True when every value and payload slot at every level is finite."""
    for x in np.asarray(arr, dtype=object).flat:
        if not _finite(x):
            return False
    return True


def _finite(x):
    if isinstance(x, _DUAL_TYPES):
        return _finite(x.val) and all(_finite(g) for g in x.grad)
    return math.isfinite(x)
