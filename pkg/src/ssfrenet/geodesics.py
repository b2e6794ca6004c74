"""Geodesics of the semi-symmetric connection in the three model spaces.

ODE right-hand sides (chart coordinates, arc length s):

* E^3:      g1'' = -g1' g3',  g2'' = -g2' g3',  g3'' = 1 - g3'^2
* R^3(-3):  lambda = mu = nu = 0, solved for g'' as a 3x3 linear system
* H^3(-1):  g1'' = 3 g1' g3'/g3,  g2'' = 3 g2' g3'/g3,
            g3'' = (g3'^2 - 2 g1'^2 - 2 g2'^2) / g3

The nu equation is used in the form obtained from the frame tables,
``g3'' - g1'' g2 - g1' g2' - (g1'^2 + g2'^2)/2``; the same expression gives
the Riccati first integral ``2 f' = 4 - f^2`` for ``f = g3' - g1' g2``.

Closed forms: :func:`e3_closed_form`, :func:`r3_riccati_f` and
:func:`h3_closed_form`.  The H^3 solution splits the transverse speed
between g1 and g2 with weights ``1/sqrt(1+c1^2)`` and ``c1/sqrt(1+c1^2)``;
``printed=True`` gives both the same weight instead, which is only unit-speed
when ``c1^2 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import jet as J
from .errors import ConstraintViolation, DomainError, NotUnitSpeed, StepError
from .frenet import DEFAULT_TOLS, Tolerances, curve_jets, geodesic_defect, grid
from .hyp2f1 import hyp2f1_jet
from .manifolds import ChartPoint, get_model

__all__ = [
    "GeodesicState", "E3GeodesicParams", "R3RiccatiParams", "H3GeodesicParams", "Trajectory",
    "ode_rhs", "integrate", "unit_speed_defect", "e3_closed_form", "e3_curve", "r3_riccati_f",
    "r3_riccati_jet", "h3_closed_form", "h3_curve", "residual", "fit_riccati_c1",
    "riccati_invariant", "riccati_ode_defect", "derivative_fd4", "state_from_curve",
]


@dataclass(frozen=True)
class GeodesicState:
    position: Tuple[float, float, float]
    velocity: Tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity]).astype(float)

    @classmethod
    def from_array(cls, y) -> "GeodesicState":
        return cls(tuple(float(v) for v in y[:3]), tuple(float(v) for v in y[3:6]))


@dataclass(frozen=True)
class E3GeodesicParams:
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    def __post_init__(self):
        lhs = 4.0 * math.exp(2.0 * self.c1)
        rhs = self.c2 ** 2 + self.c4 ** 2
        if abs(lhs - rhs) > 1e-9 * max(1.0, lhs):
            raise ConstraintViolation(
                f"4 exp(2 c1) = {lhs!r} but c2^2 + c4^2 = {rhs!r}"
            )

    @classmethod
    def from_angle(cls, c1, angle, c3=0.0, c5=0.0, c6=0.0) -> "E3GeodesicParams":
        """Parameters on the constraint surface, with (c2, c4) at the given polar angle."""
        r = 2.0 * math.exp(c1)
        return cls(c1, r * math.cos(angle), c3, r * math.sin(angle), c5, c6)


@dataclass(frozen=True)
class R3RiccatiParams:
    c1: float

    def __post_init__(self):
        if not math.isfinite(self.c1):
            raise ConstraintViolation(f"c1 must be finite, got {self.c1!r}")


@dataclass(frozen=True)
class H3GeodesicParams:
    c1: float
    c2: float
    c3: float
    k1: float = 0.0
    l1: float = 0.0

    def __post_init__(self):
        if not self.c2 > 0:
            raise ConstraintViolation(f"c2 must be positive, got {self.c2!r}")


# -- unit-speed constraints ---------------------------------------------


def unit_speed_defect(model, position, velocity) -> float:
    """Defect of the model's unit-speed identity in chart form.

    E^3: |v|^2 - 1;  R^3(-3): v1^2 + v2^2 + (v3 - v1 y)^2 - 4;  H^3: |v|^2 - z^2.
    """
    model = get_model(model)
    x, y, z = position
    v1, v2, v3 = velocity
    if model.id == "e3":
        return v1 * v1 + v2 * v2 + v3 * v3 - 1.0
    if model.id == "r3m3":
        f = v3 - v1 * y
        return v1 * v1 + v2 * v2 + f * f - 4.0
    if not z > 0:
        raise DomainError(f"z = {z!r} outside H^3")
    return v1 * v1 + v2 * v2 + v3 * v3 - z * z


# -- right-hand sides ---------------------------------------------------


def _r3_system(position, velocity):
    """Coefficient matrix and constant part of (lambda, mu, nu) as affine functions of g''."""
    _, y, _ = position
    v1, v2, v3 = velocity
    M = np.array([
        [0.0, 1.0, 0.0],   # lambda: g2''
        [1.0, 0.0, 0.0],   # mu:     g1''
        [-y, 0.0, 1.0],    # nu:     g3'' - g1'' g2
    ])
    const = np.array([
        -0.5 * y * v1 * v2 - y * v1 * v1 + v1 * v3 + 0.5 * v2 * v3,
        y * v1 * v2 - 0.5 * y * v1 * v1 + 0.5 * v1 * v3 - v2 * v3,
        -0.5 * v1 * v1 - 0.5 * v2 * v2 - v1 * v2,
    ])
    return M, const


def r3_lambda_mu_nu(position, velocity, acceleration) -> np.ndarray:
    M, const = _r3_system(position, velocity)
    return M @ np.asarray(acceleration, dtype=float) + const


def ode_rhs(model, state) -> Tuple[np.ndarray, np.ndarray]:
    """(velocity, acceleration) of the geodesic through ``state``."""
    model = get_model(model)
    if isinstance(state, GeodesicState):
        pos, vel = np.asarray(state.position, float), np.asarray(state.velocity, float)
    else:
        y = np.asarray(state, dtype=float)
        pos, vel = y[:3], y[3:6]
    v1, v2, v3 = vel
    if model.id == "e3":
        acc = np.array([-v1 * v3, -v2 * v3, 1.0 - v3 * v3])
    elif model.id == "r3m3":
        M, const = _r3_system(pos, vel)
        acc = np.linalg.solve(M, -const)
    else:
        z = pos[2]
        if not z > 0:
            raise DomainError(f"trajectory left H^3: z = {z!r}")
        acc = np.array([
            3.0 * v1 * v3 / z,
            3.0 * v2 * v3 / z,
            (v3 * v3 - 2.0 * v1 * v1 - 2.0 * v2 * v2) / z,
        ])
    return vel.copy(), acc


# -- integration --------------------------------------------------------


@dataclass
class Trajectory:
    model_id: str
    s: np.ndarray
    position: np.ndarray  # (n, 3)
    velocity: np.ndarray  # (n, 3)
    residual: np.ndarray  # (n,)
    drift: float  # max |unit-speed defect - initial defect|

    def records(self) -> List[Tuple[float, ...]]:
        return [
            (float(s), *map(float, p), *map(float, v), float(r))
            for s, p, v, r in zip(self.s, self.position, self.velocity, self.residual)
        ]

    def state(self, k: int) -> GeodesicState:
        return GeodesicState(tuple(self.position[k]), tuple(self.velocity[k]))


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _sample_jets(position, velocity, acceleration):
    # second-order Taylor jets of the trajectory at a sample
    return tuple(J.Jet((p, v, 0.5 * a)) for p, v, a in zip(position, velocity, acceleration))


def integrate(model, state0, s_end: float, step: float, s0: float = 0.0,
              tols: Tolerances = DEFAULT_TOLS, with_residual: bool = True) -> Trajectory:
    """Classic fixed-step RK4 from ``s0`` to ``s_end``.

    The last step is shortened to land on ``s_end`` when the span is not a
    whole number of steps.  Residuals are |nabla~_T T| recomputed through the
    frame tables at every sample.
    """
    model = get_model(model)
    if not step > 0:
        raise StepError(f"step must be positive, got {step!r}")
    if not isinstance(state0, GeodesicState):
        state0 = GeodesicState.from_array(state0)
    y = state0.as_array()
    d0 = unit_speed_defect(model, y[:3], y[3:])
    scale = 4.0 if model.id == "r3m3" else (y[2] ** 2 if model.id == "h3m1" else 1.0)
    if abs(d0) > tols.speed * scale:
        raise NotUnitSpeed(f"initial state is not unit-speed (defect {d0!r})")

    ss = grid(s0, s_end, step)
    if ss[-1] < s_end - 1e-9 * step:
        ss.append(s_end)

    def f(u):
        vel, acc = ode_rhs(model, u)
        return np.concatenate([vel, acc])

    ys = [y]
    for k in range(1, len(ss)):
        y = _rk4_step(f, y, ss[k] - ss[k - 1])
        if model.id == "h3m1" and not y[2] > 0:
            raise DomainError(f"trajectory left H^3 at s = {ss[k]!r}")
        ys.append(y)
    Y = np.array(ys)
    drift = max(abs(unit_speed_defect(model, u[:3], u[3:]) - d0) for u in Y)
    res = np.zeros(len(Y))
    if with_residual:
        for k, u in enumerate(Y):
            _, acc = ode_rhs(model, u)
            res[k] = geodesic_defect(model, _sample_jets(u[:3], u[3:], acc), ss[k], check_speed=False)
    return Trajectory(model.id, np.array(ss), Y[:, :3], Y[:, 3:], res, float(drift))


# -- closed forms -------------------------------------------------------


def e3_curve(params: E3GeodesicParams) -> Callable:
    """Closed-form E^3 geodesic as a jet-valued curve ``(s, order) -> 3 jets``."""
    c1, c2, c3, c4, c5, c6 = (params.c1, params.c2, params.c3, params.c4, params.c5, params.c6)
    k = math.exp(-c1)

    def jets(s, order=4):
        sj = J.jet_var(float(s), order)
        at = J.atan(J.exp(sj - c1))
        g1 = k * c2 * at + c3
        g2 = k * c4 * at + c5
        g3 = -sj + J.log(J.exp(2.0 * sj) + math.exp(2.0 * c1)) + c6
        return g1, g2, g3

    return jets


def e3_closed_form(params: E3GeodesicParams, s: float) -> ChartPoint:
    return ChartPoint(*(j.value for j in e3_curve(params)(s, 0)))


def r3_riccati_jet(params: R3RiccatiParams, s, order: int = 1) -> J.Jet:
    sj = J.jet_var(float(s), order)
    q = math.exp(4.0 * params.c1)
    e = J.exp(2.0 * sj)
    return 2.0 * (e - q) / (e + q)


def r3_riccati_f(params: R3RiccatiParams, s: float) -> float:
    """f(s) = 2 (e^{2s} - e^{4 c1}) / (e^{2s} + e^{4 c1}) = 2 tanh(s - 2 c1)."""
    return 2.0 * math.tanh(s - 2.0 * params.c1)


def r3_transverse_speed_sq(params: R3RiccatiParams, s: float) -> float:
    """g1'^2 + g2'^2 = 4 - f^2 = 16 e^{2s+4c1} / (e^{2s} + e^{4c1})^2."""
    # in the shifted variable t = s - 2 c1 to avoid overflow
    t = s - 2.0 * params.c1
    return 4.0 / math.cosh(t) ** 2


def riccati_invariant(trajectory: Trajectory) -> np.ndarray:
    """f = g3' - g1' g2 along an R^3(-3) trajectory."""
    return trajectory.velocity[:, 2] - trajectory.velocity[:, 0] * trajectory.position[:, 1]


def derivative_fd4(s, f) -> np.ndarray:
    """Fourth-order finite-difference derivative of samples on a uniform grid."""
    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    if len(s) < 5:
        raise ValueError("need at least 5 samples")
    h = s[1] - s[0]
    if not np.allclose(np.diff(s), h, rtol=1e-9, atol=0.0):
        return np.gradient(f, s, edge_order=2)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = -(-25.0 * f[-1] + 48.0 * f[-2] - 36.0 * f[-3] + 16.0 * f[-4] - 3.0 * f[-5]) / (12.0 * h)
    d[-2] = -(-3.0 * f[-1] - 10.0 * f[-2] + 18.0 * f[-3] - 6.0 * f[-4] + f[-5]) / (12.0 * h)
    return d


def riccati_ode_defect(trajectory: Trajectory) -> np.ndarray:
    """Pointwise 2 f' - (4 - f^2) along an R^3(-3) trajectory, f' by finite differences."""
    f = riccati_invariant(trajectory)
    return 2.0 * derivative_fd4(trajectory.s, f) - (4.0 - f * f)


def fit_riccati_c1(s, f) -> Tuple[float, float]:
    """Fit ``f ~ 2 tanh(s - 2 c1)``; returns (c1, sup-norm misfit).

    Each sample gives c1 = (s - artanh(f/2)) / 2; the median is refined by a
    bounded scalar least-squares solve.
    """
    from scipy.optimize import minimize_scalar

    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    ok = np.abs(f) < 2.0 - 1e-12
    if not ok.any():
        raise ConstraintViolation("f is saturated at +-2; no finite c1 fits")
    guesses = 0.5 * (s[ok] - np.arctanh(f[ok] / 2.0))
    c0 = float(np.median(guesses))

    def loss(c):
        return float(np.sum((2.0 * np.tanh(s - 2.0 * c) - f) ** 2))

    width = 1e-3 + float(np.ptp(guesses))
    res = minimize_scalar(loss, bounds=(c0 - width, c0 + width), method="bounded",
                          options={"xatol": 1e-14})
    c1 = float(res.x) if res.fun < loss(c0) else c0
    misfit = float(np.max(np.abs(2.0 * np.tanh(s - 2.0 * c1) - f)))
    return c1, misfit


def h3_curve(params: H3GeodesicParams, printed: bool = False) -> Callable:
    """Closed-form H^3 geodesic as a jet-valued curve.

    ``printed=True`` uses the equal weights of the literal formula for g2.
    """
    c1, c2, c3, k1, l1 = params.c1, params.c2, params.c3, params.k1, params.l1
    amp = 2.0 * c2 * math.exp(0.5 * c3) / (3.0 * math.sqrt(1.0 + c1 * c1))
    w2 = 1.0 if printed else c1

    def jets(s, order=4):
        sj = J.jet_var(float(s), order)
        E = J.exp(4.0 * sj + c3)
        F = hyp2f1_jet(0.75, 1.5, 1.75, -E)
        base = amp * J.exp(3.0 * sj) * F
        g3 = c2 * J.exp(sj) / J.sqrt(E + 1.0)
        return base + k1, w2 * base + l1, g3

    return jets


def h3_closed_form(params: H3GeodesicParams, s: float, printed: bool = False) -> ChartPoint:
    return ChartPoint(*(j.value for j in h3_curve(params, printed)(s, 0)))


# -- residual -----------------------------------------------------------


def residual(model, curve, s: float, tols: Tolerances = DEFAULT_TOLS, check_speed: bool = True) -> float:
    """Geodesic defect |nabla~_T T| of a curve at ``s``.

    ``curve`` is a CurveExpr, curve text, a jet-valued callable, or a
    :class:`Trajectory` (then ``s`` must be one of its sample points).
    """
    model = get_model(model)
    if isinstance(curve, Trajectory):
        k = int(np.argmin(np.abs(curve.s - s)))
        if abs(curve.s[k] - s) > 1e-9 * max(1.0, abs(s)):
            raise ValueError(f"s = {s!r} is not a sample of the trajectory")
        pos, vel = curve.position[k], curve.velocity[k]
        _, acc = ode_rhs(model, np.concatenate([pos, vel]))
        return geodesic_defect(model, _sample_jets(pos, vel, acc), s, tols, check_speed)
    if isinstance(curve, str):
        from .curve import parse_curve

        curve = parse_curve(curve)
    return geodesic_defect(model, curve_jets(curve, s, 2), s, tols, check_speed)


def state_from_curve(curve, s: float) -> GeodesicState:
    """Position and velocity of a jet-valued or parsed curve at ``s``."""
    jets = curve_jets(curve, s, 1)
    return GeodesicState(tuple(j.value for j in jets), tuple(j.derivative_value(1) for j in jets))
