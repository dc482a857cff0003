"""Pure-Python forward-mode scalars.

A single truncated dual class is written over an arbitrary inner scalar, so
``Dual6`` is a dual over floats and ``NestedDual6`` is a dual over
``Dual6``. Both carry a fixed six-slot payload.

Division follows IEEE semantics (``0/0`` gives NaN) instead of raising, so
removable singularities evaluated in the wrong form stay observable.
"""

import math

import numpy as np

from .errors import DomainError

WIDTH = 6
_REAL = (float, int, np.floating, np.integer)


def _fdiv(a, b):
    try:
        return a / b
    except ZeroDivisionError:
        a = float(a)
        if a != a or a == 0.0:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)


def _sin(x):
    return x.sin() if isinstance(x, _Dual) else math.sin(x)


def _cos(x):
    return x.cos() if isinstance(x, _Dual) else math.cos(x)


def _sqrt(x):
    if isinstance(x, _Dual):
        return x.sqrt()
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def _atan2(y, x):
    if isinstance(y, _Dual):
        return y.atan2(x)
    if isinstance(x, _Dual):
        return x._lift(y).atan2(x)
    return math.atan2(y, x)


def _real(x):
    while isinstance(x, _Dual):
        x = x.val
    return x


class _Dual:
    """Truncated first-order dual ``val + sum_k grad[k] * eps_k``."""

    __slots__ = ("val", "grad")
    _inner_zero = 0.0

    def _new(self, val, grad):
        out = object.__new__(type(self))
        out.val = val
        out.grad = grad
        return out

    def _lift(self, c):
        return self._new(self._coerce_inner(c), (self._inner_zero,) * WIDTH)

    @classmethod
    def _coerce_inner(cls, v):
        return float(v)

    def _other(self, other):
        if type(other) is type(self):
            return other
        if isinstance(other, _Dual):
            raise TypeError(
                f"cannot mix {type(self).__name__} and {type(other).__name__}"
            )
        if isinstance(other, _REAL):
            return None
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._new(self.val + other, self.grad)
        return self._new(
            self.val + o.val, tuple(a + b for a, b in zip(self.grad, o.grad))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._new(self.val - other, self.grad)
        return self._new(
            self.val - o.val, tuple(a - b for a, b in zip(self.grad, o.grad))
        )

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._new(other - self.val, tuple(-g for g in self.grad))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._new(self.val * other, tuple(g * other for g in self.grad))
        av, bv = self.val, o.val
        return self._new(
            av * bv, tuple(av * bg + ag * bv for ag, bg in zip(self.grad, o.grad))
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._new(
                _fdiv(self.val, other), tuple(_fdiv(g, other) for g in self.grad)
            )
        bv = o.val
        q = _fdiv(self.val, bv)
        return self._new(
            q, tuple(_fdiv(ag - q * bg, bv) for ag, bg in zip(self.grad, o.grad))
        )

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._lift(other) / self

    def __neg__(self):
        return self._new(-self.val, tuple(-g for g in self.grad))

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if _real(self) < 0.0 else self

    # ordering looks at the value part only

    def __lt__(self, other):
        return _real(self) < _real(other)

    def __le__(self, other):
        return _real(self) <= _real(other)

    def __gt__(self, other):
        return _real(self) > _real(other)

    def __ge__(self, other):
        return _real(self) >= _real(other)

    def __float__(self):
        raise TypeError(
            f"implicit float() of {type(self).__name__} would drop its payload; "
            "use se3ad.scalars.real()"
        )

    # elementary functions

    def _chain(self, fval, fprime):
        return self._new(fval, tuple(fprime * g for g in self.grad))

    def sin(self):
        return self._chain(_sin(self.val), _cos(self.val))

    def cos(self):
        return self._chain(_cos(self.val), -_sin(self.val))

    def sqrt(self):
        if _real(self.val) < 0.0:
            raise DomainError(f"sqrt of negative value {_real(self.val)!r}")
        r = _sqrt(self.val)
        return self._chain(r, _fdiv(0.5, r))

    def recip(self):
        if _real(self.val) == 0.0:
            raise DomainError("reciprocal of zero value")
        return 1.0 / self

    def atan2(self, x):
        """``atan2(self, x)`` with ``self`` as the ordinate."""
        o = self._other(x)
        if o is NotImplemented:
            raise TypeError(f"unsupported atan2 operand {type(x).__name__}")
        if o is None:
            o = self._lift(x)
        yv, xv = self.val, o.val
        r2 = xv * xv + yv * yv
        return self._new(
            _atan2(yv, xv),
            tuple(_fdiv(xv * yg - yv * xg, r2) for yg, xg in zip(self.grad, o.grad)),
        )

    def __repr__(self):
        return f"{type(self).__name__}({self.val!r}, {list(self.grad)!r})"


class Dual6(_Dual):
    """Dual over floats with a six-slot gradient payload."""

    __slots__ = ()

    def __init__(self, val=0.0, grad=None):
        self.val = float(val)
        if grad is None:
            self.grad = (0.0,) * WIDTH
        else:
            grad = tuple(float(g) for g in grad)
            if len(grad) != WIDTH:
                raise ValueError(f"Dual6 payload needs {WIDTH} slots, got {len(grad)}")
            self.grad = grad


class NestedDual6(_Dual):
    """Dual over :class:`Dual6`: value, gradient and 6x6 second-order slots."""

    __slots__ = ()
    _inner_zero = Dual6(0.0)

    @classmethod
    def _coerce_inner(cls, v):
        if isinstance(v, Dual6):
            return v
        if isinstance(v, _Dual):
            raise TypeError(f"NestedDual6 slots must be Dual6, got {type(v).__name__}")
        return Dual6(v)

    def __init__(self, val=0.0, grad=None):
        self.val = self._coerce_inner(val)
        if grad is None:
            self.grad = (self._inner_zero,) * WIDTH
        else:
            grad = tuple(self._coerce_inner(g) for g in grad)
            if len(grad) != WIDTH:
                raise ValueError(
                    f"NestedDual6 payload needs {WIDTH} slots, got {len(grad)}"
                )
            self.grad = grad
