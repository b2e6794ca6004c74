"""Frenet curves and geodesics for the semi-symmetric metric connection.

Three model spaces are supported: Euclidean 3-space, the Sasakian space form
R^3(-3) and the Poincare half-space H^3(-1), each with its distinguished unit
field U defining ``nabla~_X Y = nabla_X Y + g(Y, U) X - g(X, Y) U``.
"""

from .curve import CurveExpr, eval_jet3, eval_jets, parse_curve
from .errors import (
    ArityError, ConstraintViolation, CurveSyntaxError, DomainError, EmptyRange, NotUnitSpeed,
    ParameterError, RangeError, SSFrenetError, StepError, UnknownFunction,
)
from .frenet import (
    CurveClassification, FrenetSample, Tolerances, apparatus_at, classify_interval,
    frenet_residuals, second_covariant,
)
from .geodesics import (
    E3GeodesicParams, GeodesicState, H3GeodesicParams, R3RiccatiParams, e3_closed_form,
    h3_closed_form, integrate, ode_rhs, r3_riccati_f, residual,
)
from .hyp2f1 import gauss_2f1
from .jet import Jet, Jet3
from .manifolds import (
    E3, H3M1, MODELS, R3M3, ChartPoint, FrameVector, ManifoldModel, coordinate_to_frame,
    get_model, metric_eval, ss_derivative_along, torsion_check,
)

__version__ = "0.1.0"
