"""Independent reference computations used by the tests.

Nothing here goes through the jet arithmetic or the connection tables of the
package unless stated.
"""

import math

import numpy as np
import sympy as sp
from scipy.integrate import quad


def fd_derivative(f, x, k=1, h=1e-4):
    """k-th derivative (k = 1, 2) by central differences with one Richardson step."""
    def central(step):
        if k == 1:
            return (f(x + step) - f(x - step)) / (2 * step)
        if k == 2:
            return (f(x + step) - 2 * f(x) + f(x - step)) / step ** 2
        raise ValueError(k)

    return (4 * central(h / 2) - central(h)) / 3


def hyp2f1_quadrature(a, b, c, z):
    """2F1(3/4, 3/2; 7/4; z) for z < 0 from
    x^(3/4) 2F1(3/4,3/2;7/4;-x) = (3/4) int_0^x t^(-1/4) (1+t)^(-3/2) dt.

    Substituting t = u^4 removes the endpoint singularity.
    """
    assert (a, b, c) == (0.75, 1.5, 1.75) and z < 0
    x = -z
    val, err = quad(lambda u: 4 * u * u * (1 + u ** 4) ** -1.5, 0.0, x ** 0.25,
                    epsabs=1e-300, epsrel=1e-13, limit=200)
    return 0.75 * val / x ** 0.75


# -- symbolic coordinate geometry -------------------------------------------

_x, _y, _z = sp.symbols("x y z", real=True)
COORDS = (_x, _y, _z)


def sym_metric(model_id):
    if model_id == "e3":
        return sp.eye(3)
    if model_id == "r3m3":
        eta = sp.Matrix([-_y / 2, 0, sp.Rational(1, 2)])
        return sp.diag(sp.Rational(1, 4), sp.Rational(1, 4), 0) + eta * eta.T
    if model_id == "h3m1":
        return sp.eye(3) / _z ** 2
    raise ValueError(model_id)


def sym_U(model_id):
    """Distinguished field in coordinates: d/dz, xi = 2 d/dz, e3 = -z d/dz."""
    return {"e3": sp.Matrix([0, 0, 1]), "r3m3": sp.Matrix([0, 0, 2]),
            "h3m1": sp.Matrix([0, 0, -_z])}[model_id]


_CACHE = {}


def christoffel(model_id):
    """Lambdified Gamma^k_ij(x, y, z) of the Levi-Civita connection."""
    if model_id in _CACHE:
        return _CACHE[model_id]
    g = sym_metric(model_id)
    ginv = g.inv()
    gam = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for k in range(3):
        for i in range(3):
            for j in range(3):
                gam[k][i][j] = sp.simplify(sum(
                    ginv[k, l] * (sp.diff(g[l, i], COORDS[j]) + sp.diff(g[l, j], COORDS[i])
                                  - sp.diff(g[i, j], COORDS[l])) / 2
                    for l in range(3)))
    fns = (sp.lambdify(COORDS, sp.Array(gam), "numpy"),
           sp.lambdify(COORDS, g, "numpy"),
           sp.lambdify(COORDS, sym_U(model_id), "numpy"))
    _CACHE[model_id] = fns
    return fns


def coordinate_ss_acceleration(model_id, p, v, a):
    """nabla~_T T in coordinates from Christoffel symbols: a + Gamma(v, v) + g(v,U) v - g(v,v) U.

    Returns (vector, metric at p) so callers can take g-norms.
    """
    gam_f, g_f, U_f = christoffel(model_id)
    gam = np.array(gam_f(*p), dtype=float)
    G = np.array(g_f(*p), dtype=float)
    U = np.array(U_f(*p), dtype=float).reshape(3)
    v = np.asarray(v, float)
    lc = np.asarray(a, float) + np.einsum("kij,i,j->k", gam, v, v)
    return lc + (v @ G @ U) * v - (v @ G @ v) * U, G
