# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled forward-mode scalars with flat fixed-width storage.

Mirrors the pure-Python ``_dual_py`` module: same constructors, attributes,
operator set and IEEE division semantics.

``NestedDual6`` stores a 7x7 block ``c``: ``c[0][0]`` is the value,
``c[0][j]`` the inner (first seeding level) slots, ``c[i][0]`` the outer slots
and ``c[i][j]`` the mixed second-order slots.
"""

from libc.math cimport sin as c_sin, cos as c_cos, sqrt as c_sqrt, atan2 as c_atan2

import numpy as np

from .errors import DomainError

cdef enum:
    W = 6
    N = 7

cdef tuple _REAL = (float, int, np.floating, np.integer)


cdef inline bint _is_real(object x):
    return isinstance(x, _REAL)


cdef inline Dual6 _d6():
    return Dual6.__new__(Dual6)


cdef inline NestedDual6 _n6():
    return NestedDual6.__new__(NestedDual6)


cdef class Dual6:
    """Dual over doubles with a six-slot gradient payload."""

    cdef public double v
    cdef double g[W]

    def __init__(self, val=0.0, grad=None):
        cdef int k
        self.v = float(val)
        if grad is None:
            for k in range(W):
                self.g[k] = 0.0
        else:
            grad = tuple(grad)
            if len(grad) != W:
                raise ValueError(f"Dual6 payload needs {W} slots, got {len(grad)}")
            for k in range(W):
                self.g[k] = float(grad[k])

    @property
    def val(self):
        return self.v

    @property
    def grad(self):
        return (self.g[0], self.g[1], self.g[2], self.g[3], self.g[4], self.g[5])

    def __reduce__(self):
        return (Dual6, (self.v, self.grad))

    def __add__(self, other):
        cdef Dual6 a = self, b, r
        cdef int k
        cdef double c
        if type(other) is Dual6:
            b = other
            r = _d6()
            r.v = a.v + b.v
            for k in range(W):
                r.g[k] = a.g[k] + b.g[k]
            return r
        if _is_real(other):
            c = other
            r = _d6()
            r.v = a.v + c
            for k in range(W):
                r.g[k] = a.g[k]
            return r
        if type(other) is NestedDual6:
            raise TypeError("cannot mix Dual6 and NestedDual6")
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef Dual6 a = self, b, r
        cdef int k
        cdef double c
        if type(other) is Dual6:
            b = other
            r = _d6()
            r.v = a.v - b.v
            for k in range(W):
                r.g[k] = a.g[k] - b.g[k]
            return r
        if _is_real(other):
            c = other
            r = _d6()
            r.v = a.v - c
            for k in range(W):
                r.g[k] = a.g[k]
            return r
        if type(other) is NestedDual6:
            raise TypeError("cannot mix Dual6 and NestedDual6")
        return NotImplemented

    def __rsub__(self, other):
        cdef Dual6 a = self, r
        cdef int k
        cdef double c
        if _is_real(other):
            c = other
            r = _d6()
            r.v = c - a.v
            for k in range(W):
                r.g[k] = -a.g[k]
            return r
        return NotImplemented

    def __mul__(self, other):
        cdef Dual6 a = self, b, r
        cdef int k
        cdef double c
        if type(other) is Dual6:
            b = other
            r = _d6()
            r.v = a.v * b.v
            for k in range(W):
                r.g[k] = a.v * b.g[k] + a.g[k] * b.v
            return r
        if _is_real(other):
            c = other
            r = _d6()
            r.v = a.v * c
            for k in range(W):
                r.g[k] = a.g[k] * c
            return r
        if type(other) is NestedDual6:
            raise TypeError("cannot mix Dual6 and NestedDual6")
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        cdef Dual6 a = self, b, r
        cdef int k
        cdef double c, q
        if type(other) is Dual6:
            b = other
            r = _d6()
            q = a.v / b.v
            r.v = q
            for k in range(W):
                r.g[k] = (a.g[k] - q * b.g[k]) / b.v
            return r
        if _is_real(other):
            c = other
            r = _d6()
            r.v = a.v / c
            for k in range(W):
                r.g[k] = a.g[k] / c
            return r
        if type(other) is NestedDual6:
            raise TypeError("cannot mix Dual6 and NestedDual6")
        return NotImplemented

    def __rtruediv__(self, other):
        cdef Dual6 a = self, r
        cdef int k
        cdef double c, q
        if _is_real(other):
            c = other
            r = _d6()
            q = c / a.v
            r.v = q
            for k in range(W):
                r.g[k] = (0.0 - q * a.g[k]) / a.v
            return r
        return NotImplemented

    def __neg__(self):
        cdef Dual6 r = _d6()
        cdef int k
        r.v = -self.v
        for k in range(W):
            r.g[k] = -self.g[k]
        return r

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.v < 0.0 else self

    def __lt__(self, other):
        return self.v < _real(other)

    def __le__(self, other):
        return self.v <= _real(other)

    def __gt__(self, other):
        return self.v > _real(other)

    def __ge__(self, other):
        return self.v >= _real(other)

    def __float__(self):
        raise TypeError(
            "implicit float() of Dual6 would drop its payload; use se3ad.scalars.real()"
        )

    cdef Dual6 _chain(self, double fv, double fp):
        cdef Dual6 r = _d6()
        cdef int k
        r.v = fv
        for k in range(W):
            r.g[k] = fp * self.g[k]
        return r

    def sin(self):
        return self._chain(c_sin(self.v), c_cos(self.v))

    def cos(self):
        return self._chain(c_cos(self.v), -c_sin(self.v))

    def sqrt(self):
        cdef double r
        if self.v < 0.0:
            raise DomainError(f"sqrt of negative value {self.v!r}")
        r = c_sqrt(self.v)
        return self._chain(r, 0.5 / r)

    def recip(self):
        if self.v == 0.0:
            raise DomainError("reciprocal of zero value")
        return 1.0 / self

    def atan2(self, x):
        """``atan2(self, x)`` with ``self`` as the ordinate."""
        cdef Dual6 y = self, xd, r
        cdef int k
        cdef double r2
        if type(x) is Dual6:
            xd = x
        elif _is_real(x):
            xd = Dual6(x)
        else:
            raise TypeError(f"unsupported atan2 operand {type(x).__name__}")
        r = _d6()
        r.v = c_atan2(y.v, xd.v)
        r2 = xd.v * xd.v + y.v * y.v
        for k in range(W):
            r.g[k] = (xd.v * y.g[k] - y.v * xd.g[k]) / r2
        return r

    def __repr__(self):
        return f"Dual6({self.v!r}, {list(self.grad)!r})"


cdef double _real(object x) except? -1.0:
    if type(x) is Dual6:
        return (<Dual6>x).v
    if type(x) is NestedDual6:
        return (<NestedDual6>x).c[0][0]
    return x


cdef class NestedDual6:
    """Dual over :class:`Dual6`: value, gradient and 6x6 second-order slots."""

    cdef double c[N][N]

    def __init__(self, val=0.0, grad=None):
        cdef int i, j
        cdef Dual6 d
        for i in range(N):
            for j in range(N):
                self.c[i][j] = 0.0
        d = _as_d6(val)
        self.c[0][0] = d.v
        for j in range(W):
            self.c[0][j + 1] = d.g[j]
        if grad is not None:
            grad = tuple(grad)
            if len(grad) != W:
                raise ValueError(f"NestedDual6 payload needs {W} slots, got {len(grad)}")
            for i in range(W):
                d = _as_d6(grad[i])
                self.c[i + 1][0] = d.v
                for j in range(W):
                    self.c[i + 1][j + 1] = d.g[j]

    @property
    def val(self):
        cdef Dual6 d = _d6()
        cdef int j
        d.v = self.c[0][0]
        for j in range(W):
            d.g[j] = self.c[0][j + 1]
        return d

    @property
    def grad(self):
        cdef list out = []
        cdef Dual6 d
        cdef int i, j
        for i in range(1, N):
            d = _d6()
            d.v = self.c[i][0]
            for j in range(W):
                d.g[j] = self.c[i][j + 1]
            out.append(d)
        return tuple(out)

    def __reduce__(self):
        return (NestedDual6, (self.val, self.grad))

    cdef NestedDual6 _const(self, double c):
        cdef NestedDual6 r = _n6()
        cdef int i, j
        for i in range(N):
            for j in range(N):
                r.c[i][j] = 0.0
        r.c[0][0] = c
        return r

    def __add__(self, other):
        cdef NestedDual6 a = self, b, r
        cdef int i, j
        if type(other) is NestedDual6:
            b = other
            r = _n6()
            for i in range(N):
                for j in range(N):
                    r.c[i][j] = a.c[i][j] + b.c[i][j]
            return r
        if _is_real(other):
            r = _n6()
            r.c = a.c
            r.c[0][0] = a.c[0][0] + <double>other
            return r
        if type(other) is Dual6:
            raise TypeError("cannot mix NestedDual6 and Dual6")
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef NestedDual6 a = self, b, r
        cdef int i, j
        if type(other) is NestedDual6:
            b = other
            r = _n6()
            for i in range(N):
                for j in range(N):
                    r.c[i][j] = a.c[i][j] - b.c[i][j]
            return r
        if _is_real(other):
            r = _n6()
            r.c = a.c
            r.c[0][0] = a.c[0][0] - <double>other
            return r
        if type(other) is Dual6:
            raise TypeError("cannot mix NestedDual6 and Dual6")
        return NotImplemented

    def __rsub__(self, other):
        cdef NestedDual6 a = self, r
        cdef int i, j
        if _is_real(other):
            r = _n6()
            for i in range(N):
                for j in range(N):
                    r.c[i][j] = -a.c[i][j]
            r.c[0][0] = <double>other - a.c[0][0]
            return r
        return NotImplemented

    def __mul__(self, other):
        cdef NestedDual6 a = self, b, r
        cdef int i, j
        cdef double s
        if type(other) is NestedDual6:
            b = other
            r = _n6()
            _nmul(a, b, r)
            return r
        if _is_real(other):
            s = other
            r = _n6()
            for i in range(N):
                for j in range(N):
                    r.c[i][j] = a.c[i][j] * s
            return r
        if type(other) is Dual6:
            raise TypeError("cannot mix NestedDual6 and Dual6")
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        cdef NestedDual6 a = self, r
        cdef int i, j
        cdef double s
        if type(other) is NestedDual6:
            r = _n6()
            _ndiv(a, <NestedDual6>other, r)
            return r
        if _is_real(other):
            s = other
            r = _n6()
            for i in range(N):
                for j in range(N):
                    r.c[i][j] = a.c[i][j] / s
            return r
        if type(other) is Dual6:
            raise TypeError("cannot mix NestedDual6 and Dual6")
        return NotImplemented

    def __rtruediv__(self, other):
        cdef NestedDual6 r
        if _is_real(other):
            r = _n6()
            _ndiv(self._const(other), self, r)
            return r
        return NotImplemented

    cdef NestedDual6 _apply(self, double f0, double f1, double f2):
        # f(a) to second order: value, first slots via f1, mixed slots via f1, f2
        cdef NestedDual6 r = _n6()
        cdef int i, j
        r.c[0][0] = f0
        for j in range(1, N):
            r.c[0][j] = f1 * self.c[0][j]
        for i in range(1, N):
            r.c[i][0] = f1 * self.c[i][0]
            for j in range(1, N):
                r.c[i][j] = f1 * self.c[i][j] + (f2 * self.c[0][j]) * self.c[i][0]
        return r

    def __neg__(self):
        cdef NestedDual6 r = _n6()
        cdef int i, j
        for i in range(N):
            for j in range(N):
                r.c[i][j] = -self.c[i][j]
        return r

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.c[0][0] < 0.0 else self

    def __lt__(self, other):
        return self.c[0][0] < _real(other)

    def __le__(self, other):
        return self.c[0][0] <= _real(other)

    def __gt__(self, other):
        return self.c[0][0] > _real(other)

    def __ge__(self, other):
        return self.c[0][0] >= _real(other)

    def __float__(self):
        raise TypeError(
            "implicit float() of NestedDual6 would drop its payload; "
            "use se3ad.scalars.real()"
        )

    def sin(self):
        cdef double x = self.c[0][0]
        return self._apply(c_sin(x), c_cos(x), -c_sin(x))

    def cos(self):
        cdef double x = self.c[0][0]
        return self._apply(c_cos(x), -c_sin(x), -c_cos(x))

    def sqrt(self):
        cdef double x = self.c[0][0], r, f1
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}")
        r = c_sqrt(x)
        f1 = 0.5 / r
        return self._apply(r, f1, -0.5 * f1 / x)

    def recip(self):
        if self.c[0][0] == 0.0:
            raise DomainError("reciprocal of zero value")
        return 1.0 / self

    def atan2(self, x):
        """``atan2(self, x)`` with ``self`` as the ordinate."""
        cdef NestedDual6 y = self, xd, r
        if type(x) is NestedDual6:
            xd = x
        elif _is_real(x):
            xd = self._const(x)
        else:
            raise TypeError(f"unsupported atan2 operand {type(x).__name__}")
        r = _n6()
        _natan2(y, xd, r)
        return r

    def __repr__(self):
        return f"NestedDual6({self.val!r}, {list(self.grad)!r})"


cdef inline void _nmul(NestedDual6 a, NestedDual6 b, NestedDual6 r):
    # same summation order as the pure-Python dual-over-dual product
    cdef int i, j
    cdef double a00 = a.c[0][0], b00 = b.c[0][0]
    r.c[0][0] = a00 * b00
    for j in range(1, N):
        r.c[0][j] = a00 * b.c[0][j] + a.c[0][j] * b00
    for i in range(1, N):
        r.c[i][0] = a00 * b.c[i][0] + a.c[i][0] * b00
        for j in range(1, N):
            r.c[i][j] = (a00 * b.c[i][j] + a.c[0][j] * b.c[i][0]) + (
                a.c[i][j] * b00 + a.c[i][0] * b.c[0][j]
            )


cdef inline void _ndiv(NestedDual6 a, NestedDual6 b, NestedDual6 r):
    # dual-over-dual quotient applied level by level, in the same operation
    # order as Dual6 division, so the first-order slots match Dual6 exactly
    cdef int i, j
    cdef double b00 = b.c[0][0], q0, t0, p
    cdef double q[N]
    q0 = a.c[0][0] / b00
    r.c[0][0] = q0
    for j in range(1, N):
        q[j] = (a.c[0][j] - q0 * b.c[0][j]) / b00
        r.c[0][j] = q[j]
    for i in range(1, N):
        t0 = a.c[i][0] - q0 * b.c[i][0]
        p = t0 / b00
        r.c[i][0] = p
        for j in range(1, N):
            r.c[i][j] = (
                (a.c[i][j] - (q0 * b.c[i][j] + q[j] * b.c[i][0])) - p * b.c[0][j]
            ) / b00


cdef inline void _natan2(NestedDual6 y, NestedDual6 x, NestedDual6 r):
    # level-by-level atan2, mirroring the Dual6 rule on each level
    cdef int i, j
    cdef double y0 = y.c[0][0], x0 = x.c[0][0], s0, n0, p
    cdef double s[N]
    s0 = x0 * x0 + y0 * y0
    r.c[0][0] = c_atan2(y0, x0)
    for j in range(1, N):
        s[j] = (x0 * x.c[0][j] + x.c[0][j] * x0) + (y0 * y.c[0][j] + y.c[0][j] * y0)
        r.c[0][j] = (x0 * y.c[0][j] - y0 * x.c[0][j]) / s0
    for i in range(1, N):
        n0 = x0 * y.c[i][0] - y0 * x.c[i][0]
        p = n0 / s0
        r.c[i][0] = p
        for j in range(1, N):
            r.c[i][j] = (
                (
                    (x0 * y.c[i][j] + x.c[0][j] * y.c[i][0])
                    - (y0 * x.c[i][j] + y.c[0][j] * x.c[i][0])
                )
                - p * s[j]
            ) / s0


cdef Dual6 _as_d6(object v):
    if type(v) is Dual6:
        return <Dual6>v
    if type(v) is NestedDual6:
        raise TypeError("NestedDual6 slots must be Dual6, got NestedDual6")
    return Dual6(v)
