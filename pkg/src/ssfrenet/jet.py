"""Truncated Taylor arithmetic (forward-mode AD to a fixed order).

A :class:`Jet` of order ``n`` stores the normalized Taylor coefficients
``c[k] = f^(k)(s) / k!`` for ``k = 0..n``.  Arithmetic and the elementary
functions propagate these coefficients exactly (up to rounding) through the
usual Cauchy-product recurrences, so derivatives never come from finite
differences.

Order 3 is what the curve language promises (``Jet3``); the Frenet machinery
asks for order 4 because differentiating the binormal needs one derivative
more than the curvature does.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import DomainError

__all__ = ["Jet", "Jet3", "jet_const", "jet_var", "lift", "compose"]


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[float]):
        self.c = tuple(float(x) for x in coeffs)
        if not self.c:
            raise ValueError("a jet needs at least one coefficient")

    @classmethod
    def from_derivatives(cls, derivs: Sequence[float]) -> "Jet":
        return cls(d / math.factorial(k) for k, d in enumerate(derivs))

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def derivative_value(self, k: int) -> float:
        """k-th derivative f^(k)(s); zero beyond the truncation order."""
        if k > self.order:
            raise IndexError(f"jet of order {self.order} has no derivative {k}")
        return self.c[k] * math.factorial(k)

    @property
    def derivatives(self) -> tuple:
        return tuple(self.derivative_value(k) for k in range(len(self.c)))

    # Jet3 field names
    v0 = property(lambda self: self.derivative_value(0))
    v1 = property(lambda self: self.derivative_value(1))
    v2 = property(lambda self: self.derivative_value(2))
    v3 = property(lambda self: self.derivative_value(3))

    @property
    def value(self) -> float:
        return self.c[0]

    def d(self) -> "Jet":
        """Jet of the derivative; loses one order."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet((k + 1) * self.c[k + 1] for k in range(self.order))

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.c[: order + 1])

    def __repr__(self):
        return f"Jet({list(self.derivatives)!r})"

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def isfinite(self) -> bool:
        return all(math.isfinite(x) for x in self.c)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return jet_const(other, self.order)

    @staticmethod
    def _common(a: "Jet", b: "Jet"):
        n = min(a.order, b.order)
        return a.c[: n + 1], b.c[: n + 1], n

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet((self.c[0] + other,) + self.c[1:])
        a, b, _ = self._common(self, other)
        return Jet(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-x for x in self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(x * other for x in self.c)
        a, b, n = self._common(self, other)
        return Jet(sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n + 1))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                raise DomainError("division by zero")
            return Jet(x / other for x in self.c)
        a, b, n = self._common(self, other)
        if b[0] == 0.0:
            raise DomainError("division by a jet with zero value")
        q = []
        for k in range(n + 1):
            q.append((a[k] - sum(q[j] * b[k - j] for j in range(k))) / b[0])
        return Jet(q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent):
        return jpow(self, exponent)

    def __rpow__(self, base):
        return jpow(self._coerce(base), self)


Jet3 = Jet


def jet_const(x: float, order: int = 3) -> Jet:
    return Jet((x,) + (0.0,) * order)


def jet_var(x: float, order: int = 3) -> Jet:
    """The identity function s -> s expanded at ``x``."""
    if order == 0:
        return Jet((x,))
    return Jet((x, 1.0) + (0.0,) * (order - 1))


def lift(x, order: int) -> Jet:
    return x if isinstance(x, Jet) else jet_const(x, order)


def _integrate(y0: float, z: Jet, w: Jet) -> Jet:
    # y' = w z'  =>  k y_k = sum_{j=1..k} j z_j w_{k-j}
    n = z.order
    y = [y0]
    for k in range(1, n + 1):
        y.append(sum(j * z.c[j] * w.c[k - j] for j in range(1, k + 1)) / k)
    return Jet(y)


# -- elementary functions -----------------------------------------------


def exp(z: Jet) -> Jet:
    n = z.order
    y = [math.exp(z.c[0])]
    for k in range(1, n + 1):
        y.append(sum(j * z.c[j] * y[k - j] for j in range(1, k + 1)) / k)
    return Jet(y)


def log(z: Jet) -> Jet:
    z0 = z.c[0]
    if not z0 > 0.0:
        raise DomainError(f"ln of non-positive value {z0!r}")
    n = z.order
    y = [math.log(z0)]
    for k in range(1, n + 1):
        acc = sum(j * y[j] * z.c[k - j] for j in range(1, k))
        y.append((z.c[k] - acc / k) / z0)
    return Jet(y)


def sincos(z: Jet):
    n = z.order
    s = [math.sin(z.c[0])]
    c = [math.cos(z.c[0])]
    for k in range(1, n + 1):
        s.append(sum(j * z.c[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(-sum(j * z.c[j] * s[k - j] for j in range(1, k + 1)) / k)
    return Jet(s), Jet(c)


def sin(z: Jet) -> Jet:
    return sincos(z)[0]


def cos(z: Jet) -> Jet:
    return sincos(z)[1]


def tan(z: Jet) -> Jet:
    s, c = sincos(z)
    if abs(c.c[0]) < 1e-300:
        raise DomainError("tan evaluated at a pole")
    return s / c


def atan(z: Jet) -> Jet:
    if z.order == 0:
        return Jet((math.atan(z.c[0]),))
    zt = z.truncate(z.order - 1)
    return _integrate(math.atan(z.c[0]), z, 1.0 / (1.0 + zt * zt))


def sqrt(z: Jet) -> Jet:
    z0 = z.c[0]
    if not z0 > 0.0:
        # zero is excluded too: the derivatives blow up there
        raise DomainError(f"sqrt of non-positive value {z0!r}")
    n = z.order
    y = [math.sqrt(z0)]
    for k in range(1, n + 1):
        acc = sum(y[j] * y[k - j] for j in range(1, k))
        y.append((z.c[k] - acc) / (2.0 * y[0]))
    return Jet(y)


def _int_power(z: Jet, m: int) -> Jet:
    result = jet_const(1.0, z.order)
    base = z
    e = abs(m)
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    if m < 0:
        return 1.0 / result
    return result


def jpow(base: Jet, exponent) -> Jet:
    """``base ** exponent``.

    Integer exponents multiply out so negative bases keep their sign; anything
    else goes through exp(e*ln(b)) and needs a positive base.
    """
    if isinstance(exponent, Jet):
        if all(x == 0.0 for x in exponent.c[1:]):
            exponent = exponent.c[0]
        else:
            return exp(exponent * log(base))
    e = float(exponent)
    if e.is_integer() and abs(e) <= 1024:
        return _int_power(base, int(e))
    if not base.c[0] > 0.0:
        raise DomainError(f"non-integer power {e!r} of non-positive base {base.c[0]!r}")
    return exp(e * log(base))


def norm(components: Sequence[Jet]) -> Jet:
    total = components[0] * components[0]
    for c in components[1:]:
        total = total + c * c
    return sqrt(total)


def compose(z: Jet, derivs: Sequence[float]) -> Jet:
    """Jet of f(z(s)) given ``derivs[k] = f^(k)(z(s))`` for k = 0..z.order."""
    n = z.order
    if len(derivs) < n + 1:
        raise ValueError(f"need {n + 1} derivatives, got {len(derivs)}")
    h = Jet((0.0,) + z.c[1:])
    out = [0.0] * (n + 1)
    power = jet_const(1.0, n)
    for k in range(n + 1):
        coef = derivs[k] / math.factorial(k)
        for m in range(n + 1):
            out[m] += coef * power.c[m]
        power = power * h
    return Jet(out)
