import itertools

import numpy as np
import pytest

from ssfrenet import jet as J
from ssfrenet.errors import DomainError
from ssfrenet.manifolds import (
    E3, H3M1, MODELS, R3M3, bracket_table, coordinate_to_frame, covariant_derivative,
    frame_to_coordinate, get_model, lie_bracket_at, metric_eval, ss_correction,
    ss_derivative_along, torsion_check,
)

PAIRS = list(itertools.product(range(1, 4), repeat=2))


def random_point(model, rng):
    p = rng.uniform(-2, 2, 3)
    if model.id == "h3m1":
        p[2] = rng.uniform(0.1, 3)
    return p


class TestMetric:
    def test_euclidean(self):
        assert metric_eval("e3", (3, -1, 2), (1, 0, 0), (1, 0, 0)) == 1.0

    def test_half_space_scaling(self):
        assert metric_eval("h3m1", (0, 0, 2), (1, 0, 0), (1, 0, 0)) == 0.25

    def test_sasakian_frame_vector_is_unit(self):
        assert metric_eval("r3m3", (0, 0, 0), (0, 2, 0), (0, 2, 0)) == 1.0

    def test_half_space_domain(self):
        with pytest.raises(DomainError):
            metric_eval("h3m1", (0, 0, 0), (1, 0, 0), (1, 0, 0))
        with pytest.raises(DomainError):
            metric_eval("h3m1", (0, 0, -1), (1, 0, 0), (1, 0, 0))

    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_frame_is_orthonormal(self, mid, rng):
        model = get_model(mid)
        for _ in range(100):
            p = random_point(model, rng)
            F = np.array(model.frame_fields(p), dtype=float)
            gram = np.array([[metric_eval(model, p, F[:, i], F[:, j]) for j in range(3)]
                             for i in range(3)])
            assert np.abs(gram - np.eye(3)).max() <= 1e-12


class TestFrameConversion:
    def test_sasakian_helix_tangent_is_X(self):
        assert coordinate_to_frame("r3m3", (0, 1, 1), (0, 2, 0)) == (1, 0, 0)

    def test_half_space_line_tangent_is_e1(self):
        assert coordinate_to_frame("h3m1", (0.3, 0, 1), (1, 0, 0)) == (1, 0, 0)

    def test_euclidean_identity(self):
        assert coordinate_to_frame("e3", (5, 5, 5), (0, 0, 1)) == (0, 0, 1)

    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_round_trip_and_norm(self, mid, rng):
        model = get_model(mid)
        for _ in range(100):
            p = random_point(model, rng)
            v = rng.normal(size=3)
            a = coordinate_to_frame(model, p, v)
            assert np.allclose(frame_to_coordinate(model, p, a), v, atol=1e-12, rtol=0)
            assert metric_eval(model, p, v, v) == pytest.approx(np.dot(a, a), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            coordinate_to_frame("h3m1", (0, 0, 0), (1, 0, 0))


class TestTables:
    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_ss_table_is_lc_plus_correction(self, mid):
        model = get_model(mid)
        corr = ss_correction(model)
        for i, j in itertools.product(range(3), repeat=2):
            lc_plus = tuple(a + b for a, b in zip(model.lc_table[i][j], corr[i][j]))
            assert model.ss_table[i][j] == lc_plus, (i + 1, j + 1)

    def test_sasakian_published_identities(self):
        ss = R3M3.ss
        X, Y, xi = np.eye(3)
        assert (ss[0, 0] == -xi).all()
        assert (ss[0, 2] == X - Y).all()
        assert (ss[1, 2] == X + Y).all()
        assert (ss[2, 2] == 0).all()

    def test_half_space_published_identities(self):
        ss = H3M1.ss
        e1, e2, e3 = np.eye(3)
        assert (ss[0, 0] == -2 * e3).all()
        assert (ss[0, 2] == 2 * e1).all()
        assert (ss[2] == 0).all()

    @pytest.mark.parametrize("mid", sorted(MODELS))
    @pytest.mark.parametrize("i,j", PAIRS)
    def test_torsion_identity(self, mid, i, j):
        assert torsion_check(mid, i, j) <= 1e-12

    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_brackets_from_coordinates_match_lc_antisymmetrization(self, mid, rng):
        """Lie brackets of the coordinate frame fields (AD) versus the table-derived ones."""
        model = get_model(mid)
        br = bracket_table(model)
        for _ in range(10):
            p = random_point(model, rng)
            for i, j in PAIRS:
                assert np.allclose(lie_bracket_at(model, p, i, j), br[i - 1, j - 1], atol=1e-12)

    def test_sasakian_bracket(self):
        assert np.allclose(lie_bracket_at("r3m3", (0.3, -1.2, 0.5), 1, 2), (0, 0, 2))

    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_levi_civita_table_from_koszul(self, mid, rng):
        # orthonormal frame: g(nabla_i f_j, f_k) = 1/2 (c_ijk - c_jki + c_kij), c_abc = g([f_a,f_b], f_c)
        model = get_model(mid)
        p = random_point(model, rng)
        c = np.array([[list(lie_bracket_at(model, p, a + 1, b + 1)) for b in range(3)] for a in range(3)])
        for i, j, k in itertools.product(range(3), repeat=3):
            koszul = 0.5 * (c[i, j, k] - c[j, k, i] + c[k, i, j])
            assert model.lc[i, j, k] == pytest.approx(koszul, abs=1e-12)


class TestCovariantDerivative:
    def test_sasakian_xi_along_curve(self):
        g1p, g2p, f = 0.7, -0.4, 0.3
        T = (g2p / 2, g1p / 2, f / 2)
        out = ss_derivative_along("r3m3", (0, 0, 1), (0, 0, 0), T)
        # Y-coefficient (g1' - g2')/2 is what the table and metric compatibility force:
        # g(nabla~_T xi, Y) = -g(xi, nabla~_T Y) = -(g2' - g1')/2
        expected = 0.5 * np.array([g1p + g2p, g1p - g2p, 0.0])
        assert np.allclose(out, expected, atol=1e-15)
        dY = ss_derivative_along("r3m3", (0, 1, 0), (0, 0, 0), T)
        assert out[1] == pytest.approx(-dY[2], abs=1e-15)

    def test_sasakian_X_and_Y_along_curve(self):
        g1p, g2p, f = 0.7, -0.4, 0.3
        T = (g2p / 2, g1p / 2, f / 2)
        dX = ss_derivative_along("r3m3", (1, 0, 0), (0, 0, 0), T)
        dY = ss_derivative_along("r3m3", (0, 1, 0), (0, 0, 0), T)
        assert np.allclose(dX, 0.5 * np.array([0, -f, -(g1p + g2p)]), atol=1e-15)
        assert np.allclose(dY, 0.5 * np.array([f, 0, g2p - g1p]), atol=1e-15)

    def test_half_space_e3_along_curve(self):
        g1p, g2p, g3p, g3 = 0.3, 0.5, -0.2, 1.7
        T = (g1p / g3, g2p / g3, -g3p / g3)
        out = ss_derivative_along("h3m1", (0, 0, 1), (0, 0, 0), T)
        assert np.allclose(out, (2 * g1p / g3, 2 * g2p / g3, 0), atol=1e-15)

    def test_euclidean_U_along_vertical(self):
        assert ss_derivative_along("e3", (0, 0, 1), (0, 0, 0), (0, 0, 1)) == (0, 0, 0)

    @pytest.mark.parametrize("mid", sorted(MODELS))
    def test_metric_compatibility(self, mid, rng):
        model = get_model(mid)
        for _ in range(100):
            s = rng.uniform(-1, 1)
            sj = J.jet_var(s, 2)
            a, b, c = rng.normal(size=(3, 3))
            T = [J.sin(a[k] * sj + b[k]) + c[k] for k in range(3)]
            V = [J.exp(0.3 * a[k] * sj) * b[k] for k in range(3)]
            W = [J.cos(c[k] * sj) + a[k] * sj for k in range(3)]
            dV = covariant_derivative(model, T, V)
            dW = covariant_derivative(model, T, W)
            gvw = V[0] * W[0] + V[1] * W[1] + V[2] * W[2]
            lhs = gvw.derivative_value(1)
            rhs = sum(dV[k].value * W[k].value + V[k].value * dW[k].value for k in range(3))
            assert abs(lhs - rhs) <= 1e-9
