import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiltcara import caratheodory as C
from tiltcara import series as S
from tiltcara.errors import (
    InvalidMeasure,
    InvalidTilt,
    OutsideEvaluationRadius,
    TiltMismatch,
    TiltSumOutOfRange,
)
from tiltcara.extremal import member_seed, random_member

from oracles import kernel_mp

LAMS = (0.0, 0.3, -0.3, 0.9, -0.9, 1.3, -1.3)


class TestTiltAngle:
    def test_derived_quantities(self):
        t = C.TiltAngle(0.4)
        assert abs(abs(t.m) - 2 * math.cos(0.4)) < 1e-15
        assert t.e2 == pytest.approx(cmath.exp(-0.8j), abs=1e-16)
        assert t.rotation == pytest.approx(cmath.exp(0.4j), abs=1e-16)

    @pytest.mark.parametrize("lam", [math.pi / 2, -math.pi / 2, math.pi / 2 - 1e-7, math.nan, 2.0])
    def test_rejects(self, lam):
        with pytest.raises(InvalidTilt):
            C.TiltAngle(lam)

    def test_accepts_edge(self):
        C.TiltAngle(math.pi / 2 - 2e-6)


class TestMeasure:
    def test_validation(self):
        with pytest.raises(InvalidMeasure):
            C.DiscreteMeasure([1.0, 1j], [0.5, 0.4])
        with pytest.raises(InvalidMeasure):
            C.DiscreteMeasure([1.1], [1.0])
        with pytest.raises(InvalidMeasure):
            C.DiscreteMeasure([1.0, -1.0], [1.5, -0.5])
        with pytest.raises(InvalidMeasure):
            C.DiscreteMeasure([], [])

    def test_moments(self):
        mu = C.DiscreteMeasure([1.0, -1.0], [0.5, 0.5])
        assert np.allclose(mu.moments(4), [1, 0, 1, 0, 1])

    def test_product(self):
        mu = C.DiscreteMeasure.from_angles([0.3, 1.0], [0.25, 0.75])
        nu = C.DiscreteMeasure.from_angles([-0.5], [1.0])
        pm = mu.product(nu)
        assert np.allclose(pm.moments(6), mu.moments(6) * nu.moments(6))


class TestHerglotz:
    @pytest.mark.parametrize("lam", LAMS)
    def test_single_atom_matches_kernel(self, lam):
        x = cmath.exp(0.7j)
        p = C.kernel_member(lam, x)
        for z in (0.3, 0.5j, -0.8 + 0.1j):
            assert abs(p(z) - kernel_mp(lam, x, z)) < 1e-14
            assert abs(S.evaluate(p.series, z) - kernel_mp(lam, x, z)) < S.tail_bound(2, 64, abs(z)) + 1e-12

    def test_two_atom_coefficients(self):
        lam = 0.5
        t = C.TiltAngle(lam)
        p = C.herglotz_build(lam, C.DiscreteMeasure([1.0, -1.0], [0.5, 0.5]), 8)
        expected = [1] + [t.m if n % 2 == 0 else 0 for n in range(1, 9)]
        assert np.allclose(p.series.coeffs, expected, atol=1e-15)

    def test_radius_guard(self):
        with pytest.raises(OutsideEvaluationRadius):
            C.kernel_member(0.2)(0.9995)

    def test_deriv_matches_series(self):
        p = random_member(0.7, 4, member_seed(1, 0))
        z = 0.4 * np.exp(1j * np.linspace(0, 6, 9))
        assert np.allclose(p.deriv(z), S.evaluate(S.derivative(p.series), z), atol=1e-11)


class TestGrid:
    def test_standard_shape(self):
        g = C.EvaluationGrid.standard()
        assert g.shape == (24, 256)
        assert g.radii[-1] == 0.99 and g.angles[-1] == math.pi
        assert g.angles[0] > -math.pi

    def test_validation(self):
        with pytest.raises(ValueError):
            C.EvaluationGrid([0.5, 0.4], [0.0])
        with pytest.raises(ValueError):
            C.EvaluationGrid([0.5], [-math.pi])
        with pytest.raises(ValueError):
            C.EvaluationGrid([0.9995], [0.0])


class TestMembership:
    @pytest.mark.parametrize("lam", LAMS)
    def test_kernel_positive(self, lam):
        rep = C.membership_test(C.kernel_member(lam), lam)
        assert rep.passed and rep.min_value > 0

    def test_argmin_lexicographic_on_ties(self):
        # a constant evaluator ties everywhere; the first grid point is reported
        g = C.EvaluationGrid([0.1, 0.2], [0.0, 1.0])
        rep = C.membership_test(lambda z: np.full(z.shape, -1.0 + 0j), 0.0, g)
        assert rep.argmin == (0.1, 0.0) and not rep.passed

    def test_rejects_nonmember(self):
        rep = C.membership_test(lambda z: 1 - 3 * z, 0.0)
        assert not rep.passed

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(LAMS), st.integers(1, 8), st.integers(0, 10**6))
    def test_random_members_pass(self, lam, k, seed):
        p = random_member(lam, k, member_seed(seed, 0))
        assert C.membership_test(p, lam).passed


class TestTiltToBase:
    @pytest.mark.parametrize("lam", LAMS)
    def test_affine_identity(self, lam):
        p = random_member(lam, 3, member_seed(5, 0))
        q = C.tilt_to_base(p)
        t = C.TiltAngle(lam)
        z = C.EvaluationGrid.standard().points
        expected = (t.rotation * p.value(z) - 1j * t.sin) / t.cos
        assert np.allclose(q.value(z), expected, atol=1e-9)
        assert C.membership_test(q, 0.0).passed

    @pytest.mark.parametrize("lam", [0.3, -1.2])
    def test_round_trip_without_measure(self, lam):
        p = random_member(lam, 3, member_seed(6, 0))
        bare = C.ClassMember(p.tilt, p.series, p.value, p.deriv, "bare")
        q = C.tilt_to_base(bare)
        back = C.base_to_tilt(q, lam)
        assert back.series.allclose(p.series, 1e-12)
        z = np.array([0.2, 0.7j])
        assert np.allclose(back.value(z), p.value(z))

    def test_base_to_tilt_requires_tilt_zero(self):
        with pytest.raises(TiltMismatch):
            C.base_to_tilt(C.kernel_member(0.2), 0.3)


class TestSubordination:
    @pytest.mark.parametrize("lam", LAMS)
    def test_round_trip(self, lam):
        p = random_member(lam, 4, member_seed(9, 1), 32)
        w = C.subordination_omega(p)
        assert w.coeffs[0] == 0
        back = S.compose(C.kernel_series(lam, 32), w)
        assert back.allclose(p.series, 1e-9)
        assert np.abs(C.omega_eval(p, C.EvaluationGrid.standard().points)).max() < 1

    def test_kernel_is_identity(self):
        w = C.subordination_omega(C.kernel_member(0.6, 1.0, 16))
        assert w.allclose(S.identity(16), 1e-12)


class TestDualLine:
    @pytest.mark.parametrize("lam", LAMS)
    def test_line_points_on_line(self, lam):
        t = C.TiltAngle(lam)
        w = C.line_point(lam, C.default_line_samples())
        assert np.abs(np.real(t.rotation * w)).max() < 1e-12

    def test_line_point_is_boundary_value(self):
        lam, x = 0.5, cmath.exp(2.0j)
        assert abs(C.line_point(lam, x) - kernel_mp(lam, x, 1.0)) < 1e-12

    def test_samples_skip_one(self):
        xs = C.default_line_samples()
        assert xs.size == 64 and np.abs(xs - 1).min() > 0.09

    @pytest.mark.parametrize("lam", LAMS)
    def test_members_pass(self, lam):
        assert C.dual_line_check(C.kernel_member(lam)).passed
        assert C.dual_line_check(random_member(lam, 5, member_seed(3, 0))).passed

    def test_detects_hit(self):
        # a function taking an excluded value at a grid point
        lam = 0.4
        g = C.EvaluationGrid([0.5], [0.0])
        target = C.line_point(lam, C.default_line_samples()[10])
        fake = C.ClassMember(C.TiltAngle(lam), S.constant(1, 2), lambda z: np.full(z.shape, target), lambda z: 0 * z)
        assert not C.dual_line_check(fake, g).passed

    def test_rejects_x_one(self):
        with pytest.raises(ValueError):
            C.dual_line_check(C.kernel_member(0.1), x_samples=[1.0])


class TestConvolution:
    def test_hadamard_closed_form_matches_series(self):
        p1 = random_member(0.3, 3, member_seed(1, 1))
        p2 = random_member(-0.5, 2, member_seed(1, 2))
        h = C.hadamard_members(p1, p2)
        s = S.hadamard(p1.series, p2.series)
        z = 0.5 * np.exp(1j * np.linspace(0, 6, 7))
        assert np.allclose(h(z), S.evaluate(s, z), atol=1e-12)

    def test_schur(self):
        p1 = random_member(0.0, 3, member_seed(2, 1))
        p2 = random_member(0.0, 3, member_seed(2, 2))
        q = C.schur_half_hadamard(p1, p2)
        expected = S.hadamard(p1.series, p2.series).coeffs / 2
        assert np.allclose(q.series.coeffs[1:], expected[1:], atol=1e-14)
        assert C.membership_test(q, 0.0).passed

    def test_schur_without_measures(self):
        p = random_member(0.0, 2, member_seed(2, 3), 32)
        bare = C.ClassMember(p.tilt, p.series, p.value, p.deriv, "bare")
        q = C.schur_half_hadamard(bare, bare)
        assert q.provenance == "schur"
        assert abs(q.value(0.3) - C.schur_half_hadamard(p, p).value(0.3)) < 1e-12

    def test_schur_requires_tilt_zero(self):
        with pytest.raises(TiltMismatch):
            C.schur_half_hadamard(C.kernel_member(0.1), C.kernel_member(0.0))

    def test_tilted_bound(self):
        p1 = random_member(0.9, 3, member_seed(4, 1))
        p2 = random_member(-1.2, 3, member_seed(4, 2))
        rep = C.tilted_convolution_bound(p1, p2, claim_membership=True)
        assert rep.holds
        assert rep.lower_bound == pytest.approx(-math.cos(2.1))
        assert rep.membership is True

    def test_membership_not_claimed_when_lower_bound_negative(self):
        rep = C.tilted_convolution_bound(C.kernel_member(0.2), C.kernel_member(0.1), claim_membership=True)
        assert rep.membership is None

    def test_tilt_sum_out_of_range(self):
        with pytest.raises(TiltSumOutOfRange):
            C.tilted_convolution_bound(C.kernel_member(1.0), C.kernel_member(0.8), claim_membership=True)
