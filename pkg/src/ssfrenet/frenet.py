"""Frenet apparatus of curves for the semi-symmetric metric connection.

For a unit-speed curve with tangent T the construction is

    kappa = |nabla~_T T|,            N = nabla~_T T / kappa,
    tau   = |nabla~_T N + kappa T|,  B = (nabla~_T N + kappa T) / tau,

giving order 1 (kappa = 0), order 2 (tau = 0) or order 3.  We use the sign
``nabla~_T T = +kappa N`` that follows from the definition of N; a summary
formula with ``-kappa N`` is inconsistent with it and with the expansion
``nabla~_T nabla~_T T = -kappa^2 T + kappa' N + kappa tau B``.

All derivatives along the curve are taken with jets of order 4: the
binormal's covariant derivative needs the fourth derivative of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import jet as J
from .curve import CurveExpr, eval_jets, parse_curve
from .errors import EmptyRange, NotUnitSpeed, StepError
from .manifolds import FrameVector, covariant_derivative, frame_state, get_model

__all__ = [
    "Tolerances", "FrenetSample", "CurveClassification", "apparatus_at", "second_covariant",
    "classify_interval", "frenet_residuals", "grid", "geodesic_defect", "curve_jets", "JET_ORDER",
]

JET_ORDER = 4


@dataclass(frozen=True)
class Tolerances:
    geo: float = 1e-7     # kappa at or below this is a geodesic point
    tor: float = 1e-7     # tau at or below this means order 2
    const: float = 1e-6   # relative spread allowed for "constant"
    speed: float = 1e-6   # |g(T,T) - 1|


DEFAULT_TOLS = Tolerances()


@dataclass(frozen=True)
class FrenetSample:
    s: float
    T: FrameVector
    kappa: float
    N: Optional[FrameVector] = None
    tau: Optional[float] = None
    B: Optional[FrameVector] = None
    order: int = 1
    kappa_prime: Optional[float] = None


@dataclass(frozen=True)
class CurveClassification:
    order: int
    kind: str  # Geodesic | Circle | Helix | GenericOrder2 | GenericOrder3
    kappa_range: Tuple[float, float]
    tau_range: Optional[Tuple[float, float]] = None
    singular_points: Tuple[float, ...] = ()
    samples: Tuple[FrenetSample, ...] = field(default=(), repr=False)

    @property
    def is_circle(self) -> bool:
        return self.kind == "Circle"


def grid(start: float, end: float, step: float) -> List[float]:
    """Grid ``start, start+step, ...``; includes ``end`` when it is hit within 1e-9 steps."""
    if not step > 0:
        raise StepError(f"step must be positive, got {step!r}")
    if not start < end:
        raise EmptyRange(f"empty range {start!r}:{end!r}")
    ratio = (end - start) / step
    n = math.floor(ratio + 1e-9)
    if abs(ratio - round(ratio)) <= 1e-9:
        n = int(round(ratio))
    return [start + k * step for k in range(n + 1)]


def _vec(jets) -> FrameVector:
    return FrameVector(*(float(j.value) for j in jets))


def _scale(jets, a):
    return [x * a for x in jets]


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def _norm_value(jets) -> float:
    return math.sqrt(sum(j.value ** 2 for j in jets))


def curve_jets(curve, s: float, order: int = JET_ORDER):
    """Coordinate jets of a parsed curve, or of any callable ``(s, order) -> 3 jets``."""
    if isinstance(curve, CurveExpr):
        return eval_jets(curve, s, order)
    return tuple(curve(s, order))


def _tangent_and_acceleration(model, coords, s, tols, check_speed=True):
    state = frame_state(model, coords, s)
    T = list(state.tangent_jets)
    speed = state.speed
    if check_speed and abs(speed * speed - 1.0) > tols.speed:
        raise NotUnitSpeed(f"curve is not unit-speed at s={s!r}", [speed])
    return state, T, covariant_derivative(model, T, T)


def geodesic_defect(model, coords, s: float = 0.0, tols: Tolerances = DEFAULT_TOLS,
                    check_speed: bool = True) -> float:
    """|nabla~_T T| from coordinate jets of order >= 2 (zero exactly on geodesics)."""
    model = get_model(model)
    _, _, dT = _tangent_and_acceleration(model, coords, s, tols, check_speed)
    return _norm_value(dT)


class _Apparatus:
    """Every jet of the construction at one parameter value."""

    def __init__(self, model, curve, s, tols):
        self.model = get_model(model)
        self.s = float(s)
        self.tols = tols
        self.state, self.T, self.dT = _tangent_and_acceleration(self.model, curve_jets(curve, s), s, tols)
        self.ddT = covariant_derivative(self.model, self.T, self.dT)  # order 1
        self.kappa_value = _norm_value(self.dT)
        self.order = 1
        self.kappa = self.N = self.dN = self.tau = self.B = self.dB = None
        if self.kappa_value <= tols.geo:
            return
        self.order = 2
        self.kappa = J.norm(self.dT)
        self.N = [x / self.kappa for x in self.dT]  # order 2
        self.dN = covariant_derivative(self.model, self.T, self.N)  # order 1
        self.w = _add(self.dN, _scale(self.T, self.kappa))  # nabla~_T N + kappa T
        tau_value = _norm_value(self.w)
        self.tau_value = tau_value
        if tau_value <= tols.tor:
            return
        self.order = 3
        self.tau = J.norm(self.w)
        self.B = [x / self.tau for x in self.w]  # order 1
        self.dB = covariant_derivative(self.model, self.T, self.B)  # order 0

    def sample(self) -> FrenetSample:
        if self.order == 1:
            return FrenetSample(self.s, _vec(self.T), self.kappa_value, order=1)
        kp = self.kappa.derivative_value(1)
        if self.order == 2:
            return FrenetSample(self.s, _vec(self.T), self.kappa.value, _vec(self.N),
                                order=2, kappa_prime=kp)
        return FrenetSample(self.s, _vec(self.T), self.kappa.value, _vec(self.N),
                            self.tau.value, _vec(self.B), 3, kp)


def _as_curve(curve):
    if isinstance(curve, str):
        return parse_curve(curve)
    return curve


def apparatus_at(model, curve, s: float, tols: Tolerances = DEFAULT_TOLS) -> FrenetSample:
    """Frenet frame, curvature, torsion and order of ``curve`` at ``s``.

    Raises NotUnitSpeed if ``|g(T,T) - 1| > tols.speed``.
    """
    return _Apparatus(model, _as_curve(curve), s, tols).sample()


def second_covariant(model, curve, s: float, tols: Tolerances = DEFAULT_TOLS) -> FrameVector:
    """nabla~_T nabla~_T T, by differentiating the frame components of nabla~_T T directly."""
    return _vec(_Apparatus(model, _as_curve(curve), s, tols).ddT)


def frenet_residuals(model, curve, s: float, tols: Tolerances = DEFAULT_TOLS) -> dict:
    """Defects of the Frenet formulas and related identities at ``s``.

    Keys present depend on the order: ``tangent`` (|nabla~_T T - kappa N|),
    ``normal`` (|nabla~_T N + kappa T - tau B|), ``binormal``
    (|nabla~_T B + tau N|), ``second`` (defect of the expansion of
    nabla~_T nabla~_T T), ``lambda`` (g(nabla~_T N, T) + kappa at order 2)
    and ``gram`` (max entrywise deviation of the frame Gram matrix from I).
    """
    a = _Apparatus(model, _as_curve(curve), s, tols)
    T = np.array(_vec(a.T))
    out = {"order": a.order}
    ddT = np.array(_vec(a.ddT))
    if a.order == 1:
        out["tangent"] = a.kappa_value
        out["second"] = float(np.linalg.norm(ddT))
        out["gram"] = abs(T @ T - 1.0)
        return out
    k = a.kappa.value
    kp = a.kappa.derivative_value(1)
    N = np.array(_vec(a.N))
    dT = np.array(_vec(a.dT))
    dN = np.array(_vec(a.dN))
    out["tangent"] = float(np.linalg.norm(dT - k * N))
    if a.order == 2:
        out["normal"] = float(np.linalg.norm(dN + k * T))
        out["second"] = float(np.linalg.norm(ddT - (-k * k * T + kp * N)))
        out["lambda"] = abs(float(dN @ T) + k)
        F = np.array([T, N])
    else:
        t = a.tau.value
        B = np.array(_vec(a.B))
        dB = np.array(_vec(a.dB))
        out["normal"] = float(np.linalg.norm(dN + k * T - t * B))
        out["binormal"] = float(np.linalg.norm(dB + t * N))
        out["second"] = float(np.linalg.norm(ddT - (-k * k * T + kp * N + k * t * B)))
        F = np.array([T, N, B])
    out["gram"] = float(np.max(np.abs(F @ F.T - np.eye(len(F)))))
    return out


def classify_interval(model, curve, s_range, tols: Tolerances = DEFAULT_TOLS) -> CurveClassification:
    """Order and kind of ``curve`` over the grid ``s_range = (start, end, step)``.

    Isolated zeros of kappa (or of tau on an order-3 curve) are reported in
    ``singular_points`` and do not lower the order of the whole interval.
    """
    model = get_model(model)
    curve = _as_curve(curve)
    ss = grid(*s_range)
    samples = []
    bad_speeds = []
    for s in ss:
        try:
            samples.append(apparatus_at(model, curve, s, tols))
        except NotUnitSpeed as exc:
            bad_speeds.extend(exc.speeds)
    if bad_speeds:
        raise NotUnitSpeed("curve is not unit-speed on the grid", bad_speeds)

    orders = [p.order for p in samples]
    n = len(samples)

    def isolated(idx, low):
        nbrs = [orders[j] for j in (idx - 1, idx + 1) if 0 <= j < n]
        return bool(nbrs) and all(o > low for o in nbrs)

    singular = set()
    for i, o in enumerate(orders):
        if o == 1 and isolated(i, 1):
            singular.add(i)
    regular = [i for i in range(n) if i not in singular]
    order = max((orders[i] for i in regular), default=1)
    if order == 3:
        for i in regular:
            if orders[i] == 2 and isolated(i, 2):
                singular.add(i)
        regular = [i for i in range(n) if i not in singular]

    kappas = [samples[i].kappa for i in regular]
    krange = (min(kappas), max(kappas))
    taus = [samples[i].tau for i in regular if samples[i].tau is not None]
    trange = (min(taus), max(taus)) if taus else None

    def constant(lo, hi):
        return hi - lo <= tols.const * abs(hi)

    if order == 1:
        kind = "Geodesic"
    elif order == 2:
        circle = constant(*krange) and krange[0] > tols.geo and all(orders[i] == 2 for i in regular)
        kind = "Circle" if circle else "GenericOrder2"
    else:
        helix = (
            all(orders[i] == 3 for i in regular)
            and constant(*krange) and constant(*trange)
            and krange[0] > tols.geo and trange[0] > tols.tor
        )
        kind = "Helix" if helix else "GenericOrder3"
    return CurveClassification(
        order, kind, krange, trange, tuple(ss[i] for i in sorted(singular)), tuple(samples)
    )
