"""Forward-mode differentiation with dual numbers.

A :class:`Dual` carries a value together with a tuple of partial
derivatives with respect to the chart coordinates.  Both the value and
the gradient entries may themselves be ``Dual`` instances: nesting one
differentiation pass inside another yields exact second derivatives
without a separate engine.

Field component functions are ordinary Python closures written with
``+ - * / **`` and the generic ``exp/log/sin/cos/sqrt`` below, so the
same closure evaluates on floats and on duals.
"""

from __future__ import annotations

import math

__all__ = [
    "Dual",
    "real_part",
    "value_part",
    "grad_part",
    "seed",
    "exp",
    "log",
    "sin",
    "cos",
    "sqrt",
]

_SCALARS = (int, float)


class Dual:
    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = tuple(grad)

    def _coerce(self, other):
        if isinstance(other, Dual):
            if len(other.grad) != len(self.grad):
                raise ValueError(
                    "mixed dual gradients of lengths "
                    f"{len(self.grad)} and {len(other.grad)}"
                )
            return other
        return Dual(other, (0.0,) * len(self.grad))

    def __add__(self, other):
        if not isinstance(other, (Dual, *_SCALARS)):
            return NotImplemented
        o = self._coerce(other)
        return Dual(self.val + o.val, tuple(a + b for a, b in zip(self.grad, o.grad)))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Dual, *_SCALARS)):
            return NotImplemented
        o = self._coerce(other)
        return Dual(self.val - o.val, tuple(a - b for a, b in zip(self.grad, o.grad)))

    def __rsub__(self, other):
        o = self._coerce(other)
        return Dual(o.val - self.val, tuple(a - b for a, b in zip(o.grad, self.grad)))

    def __mul__(self, other):
        if not isinstance(other, (Dual, *_SCALARS)):
            return NotImplemented
        o = self._coerce(other)
        return Dual(
            self.val * o.val,
            tuple(a * o.val + self.val * b for a, b in zip(self.grad, o.grad)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Dual, *_SCALARS)):
            return NotImplemented
        o = self._coerce(other)
        if real_part(o.val) == 0.0:
            raise ZeroDivisionError("division by a dual number with zero real part")
        inv = 1.0 / o.val if not isinstance(o.val, Dual) else _reciprocal(o.val)
        q = self.val * inv
        return Dual(q, tuple((a - q * b) * inv for a, b in zip(self.grad, o.grad)))

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __neg__(self):
        return Dual(-self.val, tuple(-a for a in self.grad))

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("dual numbers support integer exponents only")
        return _ipow(self, n)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.grad!r})"


def _reciprocal(x):
    if isinstance(x, Dual):
        if real_part(x.val) == 0.0:
            raise ZeroDivisionError("division by a dual number with zero real part")
        r = _reciprocal(x.val)
        return Dual(r, tuple(-(g * r) * r for g in x.grad))
    return 1.0 / x


def _ipow(x, n):
    if n == 0:
        return 1.0
    if n < 0:
        return _reciprocal(_ipow(x, -n))
    out = x
    for _ in range(n - 1):
        out = out * x
    return out


def real_part(x) -> float:
    """Strip all dual layers and return the underlying float."""
    while isinstance(x, Dual):
        x = x.val
    return float(x)


def value_part(x):
    """Value of ``x`` one dual level down (identity for plain numbers)."""
    return x.val if isinstance(x, Dual) else x


def grad_part(x, dim: int):
    """Gradient tuple of ``x`` (zeros for plain numbers)."""
    return x.grad if isinstance(x, Dual) else (0.0,) * dim


def seed(coords):
    """Lift coordinates to duals carrying unit derivative seeds.

    The entries of ``coords`` may themselves be duals from an enclosing
    differentiation pass; the seeds introduced here are plain floats, so
    the levels never mix.
    """
    d = len(coords)
    return [
        Dual(coords[k], tuple(1.0 if j == k else 0.0 for j in range(d)))
        for k in range(d)
    ]


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, tuple(e * g for g in x.grad))
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        if real_part(x.val) <= 0.0:
            raise ValueError(f"log domain error: real part {real_part(x.val)} <= 0")
        v = log(x.val)
        inv = _reciprocal(x.val)
        return Dual(v, tuple(inv * g for g in x.grad))
    if x <= 0.0:
        raise ValueError(f"log domain error: input must be > 0, got {x}")
    return math.log(x)


def sin(x):
    if isinstance(x, Dual):
        c = cos(x.val)
        return Dual(sin(x.val), tuple(c * g for g in x.grad))
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        s = sin(x.val)
        return Dual(cos(x.val), tuple(-(s * g) for g in x.grad))
    return math.cos(x)


def sqrt(x):
    if isinstance(x, Dual):
        if real_part(x.val) <= 0.0:
            raise ValueError(f"sqrt domain error: real part {real_part(x.val)} <= 0")
        s = sqrt(x.val)
        half_inv = 0.5 * _reciprocal(s)
        return Dual(s, tuple(half_inv * g for g in x.grad))
    if x < 0.0:
        raise ValueError(f"sqrt domain error: input must be >= 0, got {x}")
    return math.sqrt(x)
