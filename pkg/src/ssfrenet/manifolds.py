"""The three model spaces and the semi-symmetric metric connection on them.

Every model carries a global g-orthonormal frame ``(f1, f2, f3)``.  Vectors
are handled through their components in that frame, and both connections are
stored as constant tables ``table[i][j] = components of nabla_{f_i} f_j``.

The semi-symmetric connection is

    nabla~_X Y = nabla_X Y + omega(Y) X - g(X, Y) U,    omega(X) = g(X, U),

with ``U`` the distinguished unit field of the model (d/dz, xi, e3).  Its
tables below are transcribed as published and audited against the formula
by :func:`ss_correction` in the test suite.

Model ids: ``"e3"`` (Euclidean space), ``"r3m3"`` (the Sasakian space
form R^3(-3) with frame X, Y, xi) and ``"h3m1"`` (Poincare half-space).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import jet as J
from .errors import DomainError

__all__ = [
    "FrameVector", "ChartPoint", "ManifoldModel", "CurveFrameState", "E3", "R3M3", "H3M1",
    "MODELS", "get_model", "metric_eval", "coordinate_to_frame", "frame_to_coordinate",
    "ss_derivative_along", "covariant_derivative", "torsion_check", "ss_correction",
    "bracket_table", "lie_bracket_at",
]


class ChartPoint(NamedTuple):
    x: float
    y: float
    z: float


class FrameVector(NamedTuple):
    a1: float
    a2: float
    a3: float

    def norm(self) -> float:
        return float(np.sqrt(self.a1 ** 2 + self.a2 ** 2 + self.a3 ** 2))

    def __array__(self, dtype=None, copy=None):
        return np.array(tuple(self), dtype=dtype or float)


def _value(x):
    return x.value if isinstance(x, J.Jet) else float(x)


def _table(entries):
    """Dense (3, 3, 3) int table from ``{(i, j): (a1, a2, a3)}``; missing entries are 0."""
    t = [[(0, 0, 0) for _ in range(3)] for _ in range(3)]
    for (i, j), vec in entries.items():
        t[i - 1][j - 1] = tuple(vec)
    return tuple(tuple(row) for row in t)


@dataclass(frozen=True)
class ManifoldModel:
    id: str
    name: str
    frame_names: tuple
    lc_table: tuple
    ss_table: tuple
    U_frame: tuple
    # point -> 3x3 matrix A with frame_components = A @ coordinate_vector
    _to_frame: Callable = field(repr=False)
    # point -> 3x3 matrix whose column i is f_i in coordinates
    _frame_fields: Callable = field(repr=False)
    # point -> 3x3 Gram matrix of the metric in coordinates
    _metric: Callable = field(repr=False)
    _in_domain: Callable = field(repr=False, default=lambda p: True)

    @property
    def lc(self) -> np.ndarray:
        return np.array(self.lc_table, dtype=float)

    @property
    def ss(self) -> np.ndarray:
        return np.array(self.ss_table, dtype=float)

    @property
    def U(self) -> np.ndarray:
        return np.array(self.U_frame, dtype=float)

    def check_domain(self, p) -> None:
        if not self._in_domain(tuple(_value(c) for c in p)):
            raise DomainError(f"point {tuple(_value(c) for c in p)!r} outside the domain of {self.name}")

    def to_frame_matrix(self, p):
        self.check_domain(p)
        return self._to_frame(p)

    def frame_fields(self, p):
        self.check_domain(p)
        return self._frame_fields(p)

    def metric_matrix(self, p):
        self.check_domain(p)
        return self._metric(p)

    def __str__(self):
        return self.name


def _e3_to_frame(p):
    return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


# frame X = 2 d/dy, Y = 2 (d/dx + y d/dz), xi = 2 d/dz
def _r3_to_frame(p):
    y = p[1]
    return [[0.0, 0.5, 0.0], [0.5, 0.0, 0.0], [-0.5 * y, 0.0, 0.5]]


def _r3_fields(p):
    y = p[1]
    return [[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0 * y, 2.0]]


def _r3_metric(p):
    y = _value(p[1])
    eta = np.array([-0.5 * y, 0.0, 0.5])
    return np.diag([0.25, 0.25, 0.0]) + np.outer(eta, eta)


# frame e1 = z d/dx, e2 = z d/dy, e3 = -z d/dz
def _h3_to_frame(p):
    inv = 1.0 / p[2]
    return [[inv, 0.0, 0.0], [0.0, inv, 0.0], [0.0, 0.0, -inv]]


def _h3_fields(p):
    z = p[2]
    return [[z, 0.0, 0.0], [0.0, z, 0.0], [0.0, 0.0, -z]]


def _h3_metric(p):
    z = _value(p[2])
    return np.eye(3) / (z * z)


E3 = ManifoldModel(
    id="e3",
    name="E^3",
    frame_names=("e1", "e2", "e3"),
    lc_table=_table({}),
    # nabla~_{e_i} e_j = delta_{j3} e_i - delta_{ij} e_3
    ss_table=_table({
        (1, 1): (0, 0, -1), (1, 3): (1, 0, 0),
        (2, 2): (0, 0, -1), (2, 3): (0, 1, 0),
    }),
    U_frame=(0, 0, 1),
    _to_frame=_e3_to_frame,
    _frame_fields=_e3_to_frame,
    _metric=lambda p: np.eye(3),
)

R3M3 = ManifoldModel(
    id="r3m3",
    name="R^3(-3)",
    frame_names=("X", "Y", "xi"),
    lc_table=_table({
        (1, 2): (0, 0, 1), (1, 3): (0, -1, 0),
        (2, 1): (0, 0, -1), (2, 3): (1, 0, 0),
        (3, 1): (0, -1, 0), (3, 2): (1, 0, 0),
    }),
    ss_table=_table({
        (1, 1): (0, 0, -1), (1, 2): (0, 0, 1), (1, 3): (1, -1, 0),
        (2, 1): (0, 0, -1), (2, 2): (0, 0, -1), (2, 3): (1, 1, 0),
        (3, 1): (0, -1, 0), (3, 2): (1, 0, 0),
    }),
    U_frame=(0, 0, 1),
    _to_frame=_r3_to_frame,
    _frame_fields=_r3_fields,
    _metric=_r3_metric,
)

H3M1 = ManifoldModel(
    id="h3m1",
    name="H^3(-1)",
    frame_names=("e1", "e2", "e3"),
    lc_table=_table({
        (1, 1): (0, 0, -1), (1, 3): (1, 0, 0),
        (2, 2): (0, 0, -1), (2, 3): (0, 1, 0),
    }),
    ss_table=_table({
        (1, 1): (0, 0, -2), (1, 3): (2, 0, 0),
        (2, 2): (0, 0, -2), (2, 3): (0, 2, 0),
    }),
    U_frame=(0, 0, 1),
    _to_frame=_h3_to_frame,
    _frame_fields=_h3_fields,
    _metric=_h3_metric,
    _in_domain=lambda p: p[2] > 0.0,
)

MODELS = {m.id: m for m in (E3, R3M3, H3M1)}


def get_model(model) -> ManifoldModel:
    if isinstance(model, ManifoldModel):
        return model
    try:
        return MODELS[str(model).lower()]
    except KeyError:
        raise ValueError(f"unknown manifold {model!r}; expected one of {sorted(MODELS)}") from None


def ss_correction(model: ManifoldModel):
    """Integer table of ``omega(f_j) f_i - g(f_i, f_j) U`` for every (i, j)."""
    U = model.U_frame
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            fi = [int(k == i) for k in range(3)]
            omega_fj = U[j]
            g_ij = int(i == j)
            row.append(tuple(omega_fj * fi[k] - g_ij * U[k] for k in range(3)))
        out.append(tuple(row))
    return tuple(out)


def bracket_table(model: ManifoldModel) -> np.ndarray:
    """``[f_i, f_j]`` in frame components from torsion-freeness of the Levi-Civita table."""
    lc = model.lc
    return lc - lc.transpose(1, 0, 2)


def metric_eval(model, p, v, w) -> float:
    model = get_model(model)
    G = model.metric_matrix(p)
    return float(np.asarray(v, dtype=float) @ G @ np.asarray(w, dtype=float))


def coordinate_to_frame(model, p, v) -> FrameVector:
    model = get_model(model)
    A = np.array(model.to_frame_matrix(p), dtype=float)
    return FrameVector(*(A @ np.asarray(v, dtype=float)))


def frame_to_coordinate(model, p, a) -> np.ndarray:
    model = get_model(model)
    F = np.array(model.frame_fields(p), dtype=float)
    return F @ np.asarray(a, dtype=float)


def ss_derivative_along(model, V, dV, T) -> FrameVector:
    """nabla~_T V for a field with frame components ``V`` and their s-derivatives ``dV``."""
    model = get_model(model)
    V = np.asarray(V, dtype=float)
    out = np.asarray(dV, dtype=float) + np.einsum("i,k,ikm->m", np.asarray(T, dtype=float), V, model.ss)
    return FrameVector(*out)


def covariant_derivative(model, T: Sequence[J.Jet], V: Sequence[J.Jet], table=None):
    """Jet version of :func:`ss_derivative_along`.

    ``T`` and ``V`` are frame-component jets along the curve; the result has
    one order less than the lower of the two.
    """
    model = get_model(model)
    tbl = model.ss_table if table is None else table
    n = min(min(t.order for t in T), min(v.order for v in V))
    if n < 1:
        raise ValueError("need jets of order >= 1 to differentiate")
    Tn = [t.truncate(n - 1) for t in T]
    Vn = [v.truncate(n - 1) for v in V]
    out = [v.truncate(n).d() for v in V]
    for i in range(3):
        for k in range(3):
            coeffs = tbl[i][k]
            if not any(coeffs):
                continue
            tv = Tn[i] * Vn[k]
            for m in range(3):
                if coeffs[m]:
                    out[m] = out[m] + coeffs[m] * tv
    return out


def torsion_check(model, i: int, j: int) -> float:
    """Frame norm of the torsion identity defect for the pair ``(f_i, f_j)``, 1-based."""
    model = get_model(model)
    a, b = i - 1, j - 1
    ss = model.ss
    U = model.U
    fi, fj = np.eye(3)[a], np.eye(3)[b]
    torsion = ss[a, b] - ss[b, a] - bracket_table(model)[a, b]
    expected = U[b] * fi - U[a] * fj
    return float(np.linalg.norm(torsion - expected))


def lie_bracket_at(model, p, i: int, j: int) -> FrameVector:
    """``[f_i, f_j]`` at ``p`` from the coordinate expressions of the frame, by AD.

    Independent of the connection tables; used to audit them.
    """
    model = get_model(model)
    F = np.array(model.frame_fields(p), dtype=float)

    def directional(field_idx, direction):
        line = [J.Jet((float(p[k]), float(direction[k]))) for k in range(3)]
        cols = model.frame_fields(line)
        return np.array([J.lift(cols[r][field_idx], 1).c[1] for r in range(3)])

    a, b = i - 1, j - 1
    coord = directional(b, F[:, a]) - directional(a, F[:, b])
    return coordinate_to_frame(model, p, coord)


@dataclass(frozen=True)
class CurveFrameState:
    """Point, unit tangent and frame-component jets of a curve at one parameter."""

    s: float
    point: ChartPoint
    T: FrameVector
    tangent_jets: tuple  # frame-component jets of gamma'

    @property
    def speed(self) -> float:
        return self.T.norm()


def frame_state(model, coord_jets: Sequence[J.Jet], s: float) -> CurveFrameState:
    """Pull the coordinate jets of a curve through the frame conversion."""
    model = get_model(model)
    A = model.to_frame_matrix(coord_jets)
    dg = [c.d() for c in coord_jets]
    t = []
    for r in range(3):
        acc = None
        for k in range(3):
            a = A[r][k]
            if isinstance(a, J.Jet):
                term = a * dg[k]
            elif a == 0.0:
                continue
            else:
                term = dg[k] * a
            acc = term if acc is None else acc + term
        t.append(acc if acc is not None else J.jet_const(0.0, dg[0].order))
    point = ChartPoint(*(c.value for c in coord_jets))
    return CurveFrameState(s, point, FrameVector(*(x.value for x in t)), tuple(t))
