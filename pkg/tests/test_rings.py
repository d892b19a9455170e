import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringpatterns.lattice import block_complex
from ringpatterns.rings import (
    DeformationParam,
    RhoField,
    Ring,
    circle_limit,
    closure_residual,
    closure_residuals,
    deform,
    kite_angle,
    rescaled_radii,
    ring_distance,
)

RNG = np.random.default_rng(42)


def random_field(c, lo=-2.0, hi=2.0):
    return RhoField(c, RNG.uniform(lo, hi, c.num_vertices))


class TestRing:
    def test_radii(self):
        ring = Ring(rho=0.7, ell0=2.0)
        assert ring.R == pytest.approx(2.0 * math.cosh(0.7))
        assert ring.r == pytest.approx(2.0 * math.sinh(0.7))

    @given(st.floats(-4, 4), st.floats(0.1, 10))
    def test_area_and_sign(self, rho, ell0):
        ring = Ring(rho=rho, ell0=ell0)
        assert ring.R > 0
        assert ring.R**2 - ring.r**2 == pytest.approx(ell0**2, rel=1e-12)
        assert math.copysign(1, ring.r) == math.copysign(1, rho) or rho == 0

    @given(st.floats(-12, 12), st.floats(0.1, 10))
    def test_area_cancellation_bounded(self, rho, ell0):
        # for large rho the difference of squares cancels; the residual
        # stays at rounding level relative to R^2
        ring = Ring(rho=rho, ell0=ell0)
        # each radius carries ~1.5 ulp, the squares ~3.5 ulp of R^2
        assert abs(ring.R**2 - ring.r**2 - ell0**2) <= 3e-15 * ring.R**2 + 1e-300


class TestKiteAngle:
    def test_equal_rho(self):
        assert kite_angle(0.5, 0.5) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_positive_branch_closed_forms(self):
        # pi - 2*arctan(e) and arctan(1/sinh(1)) describe the same angle
        val = kite_angle(1.0, 0.0)
        assert val == pytest.approx(math.pi - 2 * math.atan(math.e), abs=1e-14)
        assert val == pytest.approx(math.atan(1 / math.sinh(1.0)), abs=1e-14)

    def test_negative_branch(self):
        assert kite_angle(-1.0, 0.0) == pytest.approx(-2 * math.atan(math.exp(-1.0)), abs=1e-15)

    def test_zero_uses_positive_branch(self):
        assert kite_angle(0.0, -0.3) == pytest.approx(
            math.pi - 2 * math.atan(math.exp(0.3)), abs=1e-15
        )

    @given(st.floats(-30, 0, exclude_max=True), st.floats(-30, 30))
    def test_antisymmetry_for_negative(self, ri, rj):
        assert kite_angle(ri, rj) == pytest.approx(
            -2 * math.atan(math.exp(ri - rj)), abs=1e-14
        )

    @given(st.floats(-400, 400), st.floats(-400, 400))
    def test_range_and_overflow_safety(self, ri, rj):
        val = kite_angle(ri, rj)
        assert -math.pi <= val <= math.pi
        assert math.isfinite(val)
        if abs(ri - rj) <= 35:  # beyond that, doubles saturate at the asymptote
            assert val > -math.pi

    def test_asymptote_clamp(self):
        # |difference| > 40: indistinguishable from the asymptote in doubles
        assert kite_angle(100.0, 0.0) == 0.0
        assert kite_angle(0.5, 100.0) == pytest.approx(math.pi)


class TestEqualArea:
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 5))
    def test_edge_invariants(self, ri, rj, ell0):
        a, b = Ring(ri, ell0), Ring(rj, ell0)
        assert a.R**2 - a.r**2 == pytest.approx(b.R**2 - b.r**2, rel=1e-12)
        # both diagonals of the center-distance square agree
        assert a.R**2 + b.r**2 == pytest.approx(a.r**2 + b.R**2, rel=1e-12)
        assert ring_distance(ri, rj, ell0) ** 2 == pytest.approx(
            a.R**2 + b.r**2, rel=1e-12
        )


class TestClosure:
    def test_constant_field(self):
        c = block_complex(3, 3)
        f = RhoField.constant(c, 1.3)
        for v in c.interior_vertices:
            assert abs(closure_residual(f, v)) < 1e-14

    def test_doyle_field_closes(self):
        c = block_complex(4, 4)
        x, y = 0.37, -0.82
        f = RhoField.from_function(c, lambda m, n: m * x - n * y)
        for v in c.interior_vertices:
            assert abs(closure_residual(f, v)) < 1e-13

    def test_erf_field_closes(self):
        c = block_complex(4, 4)
        f = RhoField.from_function(c, lambda m, n: 0.8 * m * n)
        for v in c.interior_vertices:
            assert abs(closure_residual(f, v)) < 1e-13

    @settings(max_examples=25)
    @given(st.floats(-3, 3))
    def test_gauge_invariance(self, delta):
        c = block_complex(3, 3)
        f = random_field(c)
        g = deform(f, delta)
        for v in c.interior_vertices:
            assert closure_residual(g, v) == pytest.approx(
                closure_residual(f, v), abs=1e-12
            )


class TestDeform:
    def test_shift(self):
        c = block_complex(2, 2)
        f = RhoField.constant(c, 0.0)
        g = deform(f, DeformationParam(1.0))
        assert np.all(g.values == 1.0)

    def test_doyle_shift(self):
        c = block_complex(3, 3)
        f = RhoField.from_function(c, lambda m, n: 0.3 * m - 0.2 * n)
        g = deform(f, -3.0)
        for m, n in c.vertices:
            assert g[(m, n)] == pytest.approx(0.3 * m - 0.2 * n - 3.0, abs=1e-15)


class TestRescaledRadii:
    def test_large_positive_delta(self):
        r, R = rescaled_radii(0.7, 30.0)
        assert r == pytest.approx(math.exp(0.7), abs=1e-12)
        assert R == pytest.approx(math.exp(0.7), abs=1e-12)
        assert abs(R - r) < 1e-12

    def test_large_negative_delta(self):
        r, R = rescaled_radii(0.7, -30.0)
        assert r == pytest.approx(-math.exp(-0.7), abs=1e-12)
        assert R == pytest.approx(math.exp(-0.7), abs=1e-12)

    def test_zero(self):
        assert rescaled_radii(0.0, 0.0) == (0.0, 2.0)

    @given(st.floats(-2, 2))
    def test_limit_consistency(self, rho):
        r, R = rescaled_radii(rho, 40.0)
        assert abs(r - math.exp(rho)) < 1e-10
        assert abs(R - math.exp(rho)) < 1e-10
        r, R = rescaled_radii(rho, -40.0)
        assert abs(r + math.exp(-rho)) < 1e-10
        assert abs(R - math.exp(-rho)) < 1e-10

    def test_huge_delta_does_not_overflow(self):
        r, R = rescaled_radii(1.0, 1e4)
        assert r == pytest.approx(math.e)
        assert R == pytest.approx(math.e)


class TestCircleLimit:
    def test_signs(self):
        c = block_complex(2, 2)
        f = random_field(c)
        plus = circle_limit(f, +1)
        minus = circle_limit(f, -1)
        assert np.all(plus.values == f.values)
        assert np.all(minus.values == -f.values)
        assert plus.ell0 == 0.0 and minus.ell0 == 0.0

    def test_invalid_sign(self):
        c = block_complex(2, 2)
        with pytest.raises(ValueError):
            circle_limit(random_field(c), 0)

    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_angle_complement_identity(self, ri, rj):
        # circle-pattern angle of the limit equals the ring kite angle:
        # 2 arctan(e^(rho_j - rho_i)) == pi - 2 arctan(e^(rho_i - rho_j))
        lhs = 2 * math.atan(math.exp(rj - ri))
        assert lhs == pytest.approx(math.pi - 2 * math.atan(math.exp(ri - rj)), abs=1e-12)


class TestRhoField:
    def test_mapping_roundtrip(self):
        c = block_complex(2, 2)
        f = random_field(c)
        g = RhoField.from_mapping(c, f.as_dict())
        assert np.all(f.values == g.values)

    def test_missing_vertex(self):
        c = block_complex(2, 2)
        with pytest.raises(KeyError):
            RhoField.from_mapping(c, {(0, 0): 1.0})

    def test_nonfinite_rejected(self):
        c = block_complex(2, 2)
        vals = np.zeros(c.num_vertices)
        vals[0] = math.inf
        with pytest.raises(ValueError):
            RhoField(c, vals)

    def test_immutable(self):
        c = block_complex(2, 2)
        f = random_field(c)
        with pytest.raises(AttributeError):
            f.ell0 = 2.0
        with pytest.raises(ValueError):
            f.values[0] = 3.0

    def test_json_dict(self):
        c = block_complex(1, 1)
        f = RhoField.constant(c, 0.5, ell0=2.0)
        data = f.to_json_dict()
        assert data["ell0"] == 2.0
        assert data["rho"] == [[0, 0, 0.5], [0, 1, 0.5], [1, 0, 0.5], [1, 1, 0.5]]
