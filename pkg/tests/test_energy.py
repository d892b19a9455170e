import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ringpatterns.energy import (
    CATALAN,
    VertexWeights,
    boundary_phi_budget,
    edge_term,
    energy,
    energy_report,
    gradient,
    hessian,
    ti2,
    ti2_exp,
)
from ringpatterns.errors import MissingWeight, NegativeArgument
from ringpatterns.lattice import block_complex
from ringpatterns.rings import RhoField, closure_residual, deform

RNG = np.random.default_rng(7)


def ti2_quadrature(y: float) -> float:
    """Independent oracle: direct numerical quadrature of arctan(t)/t."""
    if y == 0:
        return 0.0
    val, err = quad(
        lambda t: math.atan(t) / t, 0.0, y,
        limit=400, epsabs=1e-14, epsrel=1e-14,
    )
    assert err < 1e-11
    return val


def catalan_series() -> float:
    """Independent oracle: the alternating series sum (-1)^k / (2k+1)^2.

    The raw series needs ~1e7 terms for 1e-13, so the partial sums are
    accelerated by repeated averaging (Euler transform), which converges
    geometrically for alternating series.
    """
    terms = [(-1.0) ** k / (2 * k + 1) ** 2 for k in range(80)]
    s = list(np.cumsum(terms))[40:]
    while len(s) > 1:
        s = [(a + b) / 2 for a, b in zip(s, s[1:])]
    return s[0]


def interior_weights(c, boundary_value=1.0):
    return VertexWeights(c, np.where(c.interior_mask, 2 * math.pi, boundary_value))


def random_field(c, lo=-1.5, hi=1.5):
    return RhoField(c, RNG.uniform(lo, hi, c.num_vertices))


class TestTi2:
    def test_zero(self):
        assert ti2(0.0) == 0.0

    def test_catalan(self):
        assert abs(ti2(1.0) - catalan_series()) < 1e-13
        assert abs(CATALAN - catalan_series()) < 1e-14

    def test_reflection_identity_value(self):
        assert ti2(2.0) - ti2(0.5) == pytest.approx((math.pi / 2) * math.log(2), abs=1e-13)

    @pytest.mark.parametrize("y", [1e-3, 0.1, 0.5, 0.7, 1.0, 1.4, 2.0, 5.0, 40.0, 1e3])
    def test_against_quadrature(self, y):
        assert ti2(y) == pytest.approx(ti2_quadrature(y), abs=1e-12)

    def test_reflection_identity_sweep(self):
        ys = np.logspace(-3, 3, 50)
        err = np.abs(ti2(ys) - ti2(1.0 / ys) - (math.pi / 2) * np.log(ys))
        assert np.max(err) < 1e-12

    def test_negative_rejected(self):
        with pytest.raises(NegativeArgument):
            ti2(-0.1)
        with pytest.raises(NegativeArgument):
            ti2(np.array([0.3, -0.2]))

    def test_monotone(self):
        ys = np.linspace(0, 50, 2001)
        vals = ti2(ys)
        assert np.all(np.diff(vals) > 0)

    def test_upper_bound(self):
        # Ti2(y) <= (pi/2) ln y + G for y >= 1
        ys = np.logspace(0, 17, 60)
        assert np.all(ti2(ys) <= (math.pi / 2) * np.log(ys) + CATALAN + 1e-15)

    def test_large_argument_accuracy(self):
        # Ti2(e^40) = (pi/2)*40 + Ti2(e^-40); the tail term is ~4e-18
        assert ti2(math.exp(40.0)) == pytest.approx((math.pi / 2) * 40.0, abs=1e-13)

    def test_exp_form_no_overflow(self):
        assert math.isfinite(ti2_exp(5000.0))
        assert ti2_exp(5000.0) == pytest.approx((math.pi / 2) * 5000.0)
        assert ti2_exp(-5000.0) == 0.0


class TestEdgeTerm:
    def test_symmetric_zero(self):
        assert edge_term(0.0, 0.0) == pytest.approx(2 * CATALAN, abs=1e-13)

    def test_one_zero_against_quadrature(self):
        expected = ti2_quadrature(math.exp(-1)) + ti2_quadrature(math.e) - math.pi / 2
        assert edge_term(1.0, 0.0) == pytest.approx(expected, abs=1e-12)
        # frozen oracle value
        assert edge_term(1.0, 0.0) == pytest.approx(0.7251997008434778, abs=1e-12)

    @given(st.floats(-100, 100), st.floats(-100, 100))
    def test_finite_everywhere(self, ri, rj):
        assert math.isfinite(edge_term(ri, rj))


class TestEnergy:
    def test_single_square_constant(self):
        c = block_complex(1, 1)
        f = RhoField.constant(c, 0.0)
        w = VertexWeights(c, np.zeros(4))
        # four edges, each contributing 2*Catalan
        assert energy(f, w) == pytest.approx(8 * CATALAN, abs=1e-12)

    def test_gauge_shift_identity(self):
        c = block_complex(3, 3)
        f = random_field(c)
        w = interior_weights(c, boundary_value=1.3)
        for delta in (0.37, -1.1):
            lhs = energy(deform(f, delta), w) - energy(f, w)
            rhs = delta * (float(w.phi.sum()) - math.pi * c.num_edges)
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_weights_must_cover(self):
        c = block_complex(2, 2)
        with pytest.raises(MissingWeight):
            VertexWeights(c, np.zeros(3))
        with pytest.raises(MissingWeight):
            VertexWeights.from_mapping(c, {(0, 0): 1.0})


class TestGradient:
    def test_constant_interior_zero(self):
        c = block_complex(2, 2)
        f = RhoField.constant(c, 0.4)
        g = gradient(f, interior_weights(c))
        i = c.vertex_index[(1, 1)]
        assert abs(g[i]) < 1e-14

    def test_doyle_interior_zero(self):
        c = block_complex(4, 4)
        f = RhoField.from_function(c, lambda m, n: 0.3 * m - 0.2 * n)
        g = gradient(f, interior_weights(c))
        for v in c.interior_vertices:
            assert abs(g[c.vertex_index[v]]) < 1e-13

    def test_equals_closure_residual_at_interior(self):
        c = block_complex(3, 3)
        for _ in range(5):
            f = random_field(c)
            g = gradient(f, interior_weights(c))
            for v in c.interior_vertices:
                assert g[c.vertex_index[v]] == pytest.approx(
                    closure_residual(f, v), abs=1e-12
                )

    def test_finite_differences(self):
        c = block_complex(3, 3)
        f = random_field(c)
        w = interior_weights(c)
        g = gradient(f, w)
        h = 1e-6
        for i in range(c.num_vertices):
            vals = f.values.copy()
            vals[i] += h
            ep = energy(f.with_values(vals), w)
            vals[i] -= 2 * h
            em = energy(f.with_values(vals), w)
            assert abs((ep - em) / (2 * h) - g[i]) < 1e-6


class TestHessian:
    def test_single_square_matrix(self):
        c = block_complex(1, 1)
        f = RhoField.constant(c, 0.9)  # sech(0) = 1 on every edge
        H = hessian(f).toarray()
        # vertices in lexicographic order: (0,0), (0,1), (1,0), (1,1)
        expected = np.array(
            [
                [2.0, -1.0, -1.0, 0.0],
                [-1.0, 2.0, 0.0, -1.0],
                [-1.0, 0.0, 2.0, -1.0],
                [0.0, -1.0, -1.0, 2.0],
            ]
        )
        assert np.allclose(H, expected, atol=1e-15)

    def test_row_sums_zero(self):
        c = block_complex(4, 3)
        f = random_field(c)
        H = hessian(f)
        assert np.max(np.abs(np.asarray(H.sum(axis=1)).ravel())) < 1e-12

    def test_finite_differences(self):
        c = block_complex(3, 3)
        f = random_field(c)
        w = interior_weights(c)
        H = hessian(f).toarray()
        h = 1e-5
        for i in range(c.num_vertices):
            vals = f.values.copy()
            vals[i] += h
            gp = gradient(f.with_values(vals), w)
            vals[i] -= 2 * h
            gm = gradient(f.with_values(vals), w)
            assert np.max(np.abs((gp - gm) / (2 * h) - H[:, i])) < 1e-5

    def test_psd_with_shift_kernel(self):
        c = block_complex(4, 4)
        for _ in range(5):
            f = random_field(c)
            H = hessian(f).toarray()
            evals, evecs = np.linalg.eigh(H)
            assert evals[0] == pytest.approx(0.0, abs=1e-12)
            assert evals[1] > 0
            ones = np.ones(c.num_vertices) / math.sqrt(c.num_vertices)
            assert abs(abs(evecs[:, 0] @ ones) - 1.0) < 1e-10

    def test_convexity_directions(self):
        c = block_complex(3, 3)
        f = random_field(c)
        w = interior_weights(c)
        h = 1e-4
        # flat along the all-ones direction
        ones = np.ones(c.num_vertices)
        second = (
            energy(f.with_values(f.values + h * ones), w)
            - 2 * energy(f, w)
            + energy(f.with_values(f.values - h * ones), w)
        ) / h**2
        assert abs(second) < 1e-6
        # strictly convex transverse to it
        for _ in range(5):
            d = RNG.normal(size=c.num_vertices)
            d -= d.mean()
            d /= np.linalg.norm(d)
            second = (
                energy(f.with_values(f.values + h * d), w)
                - 2 * energy(f, w)
                + energy(f.with_values(f.values - h * d), w)
            ) / h**2
            assert second > 0.1


class TestVertexWeights:
    def test_budget_matches_flat_angles(self):
        # flat weights (pi at corners, 3*pi/2 on sides) meet the budget
        c = block_complex(2, 2)
        total = sum(
            math.pi if c.degree[v] == 2 else 1.5 * math.pi for v in c.boundary_vertices
        )
        assert total == pytest.approx(boundary_phi_budget(c), abs=1e-12)

    def test_budget_closed_form(self):
        # simple zigzag boundary: budget = (3*n_b/2 - 2) * pi
        for shape in [(2, 2), (3, 5), (4, 4)]:
            c = block_complex(*shape)
            n_b = len(c.boundary_vertices)
            assert boundary_phi_budget(c) == pytest.approx(
                (1.5 * n_b - 2) * math.pi, abs=1e-9
            )

    def test_validate(self):
        c = block_complex(2, 2)
        w = VertexWeights.with_boundary(
            c,
            {v: (math.pi if c.degree[v] == 2 else 1.5 * math.pi)
             for v in c.boundary_vertices},
        )
        w.validate()
        bad = VertexWeights.with_boundary(
            c, {v: 1.0 for v in c.boundary_vertices}
        )
        with pytest.raises(ValueError):
            bad.validate()

    def test_report_serializes(self):
        c = block_complex(2, 2)
        f = random_field(c)
        rep = energy_report(f, interior_weights(c))
        data = rep.to_json_dict()
        assert set(data) == {"value", "gradient", "hessian"}
        assert len(data["gradient"]) == c.num_vertices
