"""Gauss hypergeometric function 2F1(a, b; c; z) on the non-positive real axis.

Small arguments (|z| <= 0.5) use the defining series directly.  For z < -0.5
the Pfaff transformation

    2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1))

moves the argument into (1/3, 1), where the series converges; close to 1 it
converges slowly, so terms are generated in vectorized blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jet as J
from .errors import ParameterError, RangeError

__all__ = ["Hyp2F1Request", "gauss_2f1", "series_2f1", "pfaff_2f1", "hyp2f1_jet"]

_REL_STOP = 1e-17
_BLOCK = 4096
_MAX_TERMS = 50_000_000


@dataclass(frozen=True)
class Hyp2F1Request:
    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        if self.c <= 0 and float(self.c).is_integer():
            raise ParameterError(f"c = {self.c!r} is a non-positive integer")


def series_2f1(a: float, b: float, c: float, z: float) -> float:
    """Sum the power series; stops once 3 consecutive terms fall below 1e-17 of the partial sum."""
    if c <= 0 and float(c).is_integer():
        raise ParameterError(f"c = {c!r} is a non-positive integer")
    if abs(z) >= 1.0:
        raise RangeError(f"power series diverges at |z| = {abs(z)!r}")
    if z == 0.0:
        return 1.0
    total = 1.0
    term = 1.0
    partial = [1.0]
    start = 0
    small = 0
    while start < _MAX_TERMS:
        n = np.arange(start, start + _BLOCK, dtype=float)
        ratios = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        terms = term * np.cumprod(ratios)
        if terms[-1] == 0.0 and term == 0.0:
            break
        # locate the stopping index within the block
        running = total + np.cumsum(terms)
        tiny = np.abs(terms) < _REL_STOP * np.abs(running)
        for k in range(_BLOCK):
            small = small + 1 if tiny[k] else 0
            if small == 3:
                partial.extend(terms[: k + 1].tolist())
                return math.fsum(partial)
        partial.extend(terms.tolist())
        total = running[-1]
        term = terms[-1]
        start += _BLOCK
    raise RangeError(f"2F1 series did not converge for z = {z!r}")


def pfaff_2f1(a: float, b: float, c: float, z: float) -> float:
    """2F1 through the Pfaff transformation; valid for every z < 1."""
    if z >= 1.0:
        raise RangeError(f"Pfaff transformation needs z < 1, got {z!r}")
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * series_2f1(a, c - b, c, w)


def gauss_2f1(a, b=None, c=None, z=None) -> float:
    """2F1(a, b; c; z) for z <= 0, or |z| <= 0.5.

    Accepts either the four numbers or a :class:`Hyp2F1Request`.
    """
    if isinstance(a, Hyp2F1Request):
        req = a
    else:
        req = Hyp2F1Request(float(a), float(b), float(c), float(z))
    a, b, c, z = req.a, req.b, req.c, req.z
    if z == 0.0:
        return 1.0
    if abs(z) <= 0.5:
        return series_2f1(a, b, c, z)
    if z < 0.0:
        return pfaff_2f1(a, b, c, z)
    raise RangeError(f"z = {z!r} is outside the supported region (z <= 0 or |z| <= 0.5)")


def hyp2f1_jet(a: float, b: float, c: float, z: J.Jet) -> J.Jet:
    """Jet of s -> 2F1(a, b; c; z(s)).

    Uses d^k/dz^k 2F1(a,b;c;z) = (a)_k (b)_k / (c)_k 2F1(a+k, b+k; c+k; z).
    """
    z0 = z.value
    derivs = []
    poch = 1.0
    for k in range(z.order + 1):
        derivs.append(poch * gauss_2f1(a + k, b + k, c + k, z0))
        poch *= (a + k) * (b + k) / (c + k)
    return J.compose(z, derivs)
