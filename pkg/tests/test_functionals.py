import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from hardy_sphere.functionals import (
    DegenerateInputError,
    ExponentConfig,
    Functional,
    Regime,
    constant_profile,
    divergent_log_tangent_moment,
    eval_functional,
    inequality_margin,
    profile_from_t_poly,
    sharpness_ratio,
    sharpness_target,
)
from hardy_sphere.families import FamilyId, make_profile
from hardy_sphere.geometry import (
    SphericalPoint,
    distance_field,
    geodesic_distance,
    surface_gradient_fd,
)
from hardy_sphere.quadrature import NonIntegrableError, surface_constant


def rel_err(got, want):
    return abs(got - want) / abs(want)


class TestExponentConfig:
    def test_subcritical_validation(self):
        with pytest.raises(ValueError):
            ExponentConfig.subcritical(3, 1.5)  # dimension too small
        with pytest.raises(ValueError):
            ExponentConfig.subcritical(5, 4.0)  # p beyond n-1
        with pytest.raises(ValueError):
            ExponentConfig.subcritical(5, 1.0)
        cfg = ExponentConfig.subcritical(7, 2.0)
        assert cfg.alpha == pytest.approx(2.0)
        with pytest.raises(ValueError):
            _ = cfg.gamma

    def test_critical_validation(self):
        with pytest.raises(ValueError):
            ExponentConfig.critical(2)
        cfg = ExponentConfig.critical(3)
        assert cfg.sphere_dim == 2
        assert cfg.exponent == 2.0
        assert cfg.gamma == pytest.approx(0.5)
        with pytest.raises(ValueError):
            _ = cfg.alpha


class TestEvalFunctional:
    def test_constant_sin_energy(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        v = eval_functional(Functional.SIN_FULL, constant_profile(1.0), cfg)
        assert rel_err(v, 4.0 * math.pi ** 2) < 1e-12

    def test_constant_gradient_energy_vanishes(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        assert eval_functional(Functional.GRAD_COS, constant_profile(1.0), cfg) == 0.0

    def test_tangent_energy_of_inverse_sine_profile(self):
        # kappa = 1/2 member of the inverse-sine family at (n, p) = (5, 2):
        # the tangent-weighted energy reduces to 2 C_5 * (pi/4) = pi^3
        cfg = ExponentConfig.subcritical(5, 2.0)
        prof = make_profile(FamilyId.INV_SIN, cfg, 0.5)
        v = eval_functional(Functional.TAN_FULL, prof, cfg)
        assert rel_err(v, math.pi ** 3) < 1e-12

    def test_regime_mismatch(self):
        cfg = ExponentConfig.critical(3)
        with pytest.raises(ValueError):
            eval_functional(Functional.SIN_FULL, constant_profile(1.0), cfg)
        sub = ExponentConfig.subcritical(5, 2.0)
        with pytest.raises(ValueError):
            eval_functional(Functional.LOG_SIN_FULL, constant_profile(1.0), sub)

    def test_non_integrable_combination_named(self):
        # gradient energy of the bare cotangent family blows up at the
        # equator once p(kappa - 1) <= -1
        cfg = ExponentConfig.subcritical(5, 2.0)
        prof = make_profile(FamilyId.COT, cfg, 0.5)  # kappa = 1/2
        with pytest.raises(NonIntegrableError) as err:
            eval_functional(Functional.GRAD, prof, cfg)
        assert "not integrable" in str(err.value)

    def test_scale_invariance_in_profile(self):
        cfg = ExponentConfig.subcritical(6, 2.5)
        v1 = eval_functional(Functional.SIN_REDUCED, constant_profile(1.0), cfg)
        v2 = eval_functional(Functional.SIN_REDUCED, constant_profile(2.0), cfg)
        assert rel_err(v2, 2.0 ** 2.5 * v1) < 1e-12


class TestPoleIndependence:
    def test_direct_angular_sampling_two_poles(self):
        # reduced-variable evaluation against a brute-force surface integral
        # on the two-sphere, at two different pole placements
        from hardy_sphere.quadrature import integrate_zonal

        poly = np.polynomial.Polynomial([1.0, 0.5, 0.25])
        zonal = integrate_zonal(lambda t: poly(t) ** 2, 3).value
        # exact value: 2 pi * int P^2 = 2 pi * 2.525
        assert rel_err(zonal, 2.0 * math.pi * 2.525) < 1e-12
        nodes, weights = np.polynomial.legendre.leggauss(120)
        phis = np.linspace(0.0, 2.0 * math.pi, 241)[:-1]
        for pole_angles in ((0.9, 1.3), (2.1, 4.4)):
            pole = SphericalPoint(pole_angles, 3)
            px = np.array([math.cos(pole_angles[0]),
                           math.sin(pole_angles[0]) * math.cos(pole_angles[1]),
                           math.sin(pole_angles[0]) * math.sin(pole_angles[1])])
            total = 0.0
            for ct, w in zip(nodes, weights):
                stheta = math.sqrt(1.0 - ct * ct)
                xs = np.stack([np.full_like(phis, ct),
                               stheta * np.cos(phis),
                               stheta * np.sin(phis)], axis=0)
                lam = px @ xs
                total += w * float(np.sum(poly(lam) ** 2)) * (2.0 * math.pi / len(phis))
            assert rel_err(total, zonal) < 1e-6


class TestZonalGradientReduction:
    def test_fd_gradient_matches_profile_derivative(self):
        prof = profile_from_t_poly("poly", [0.5, 1.0, -0.25, 0.125])
        pole = SphericalPoint((1.9, 0.7, 2.5), 4)
        rng = np.random.default_rng(5)
        for _ in range(10):
            ang = (rng.uniform(0.3, math.pi - 0.3), rng.uniform(0.3, math.pi - 0.3),
                   rng.uniform(0.0, 2.0 * math.pi))
            pt = SphericalPoint(ang, 4)
            d = geodesic_distance(pt, pole)
            if math.sin(d) < 0.1:
                continue
            field = lambda a: prof.value(
                math.acos(min(1.0, max(-1.0, float(
                    np.dot(np.asarray(_embed(a)), _embed(pole.array)))))))
            g = surface_gradient_fd(field, pt)
            assert abs(float(np.linalg.norm(g)) - abs(prof.derivative(d))) < 1e-6


def _embed(ang):
    from hardy_sphere.geometry import _embed_array

    return _embed_array(np.asarray(ang, dtype=float))


class TestMargins:
    def test_f1_constant_positive(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        m = inequality_margin("f1", constant_profile(1.0), cfg)
        assert m.margin > 0.0
        assert not m.violates()

    def test_f1_family_member_nonnegative(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        prof = make_profile(FamilyId.COT_COS, cfg, 0.1)
        m = inequality_margin("f1", prof, cfg)
        assert m.margin >= -1e-9 * abs(m.rhs)

    def test_strengthened_inequality_fails_on_constants(self):
        cfg = ExponentConfig.subcritical(7, 2.0)
        m = inequality_margin("inqfls", constant_profile(1.0), cfg)
        assert m.margin < 0.0
        assert m.violates()
        # exact sides: alpha^2 * C_7 * 4/3 versus 2 * area of the sphere in R^7
        assert rel_err(m.lhs, 16.0 * math.pi ** 3 / 3.0) < 1e-12
        assert rel_err(m.rhs, 32.0 * math.pi ** 3 / 15.0) < 1e-12

    def test_f3_requires_p_at_least_two(self):
        cfg = ExponentConfig.subcritical(4, 1.5)
        with pytest.raises(ValueError, match="p >= 2"):
            inequality_margin("f3", constant_profile(1.0), cfg)

    def test_critical_margins_positive_on_smooth_profiles(self):
        cfg = ExponentConfig.critical(4)
        for prof in (constant_profile(1.0),
                     profile_from_t_poly("poly", [1.0, 0.0, 0.5])):
            for ineq in ("fc1", "fc2"):
                m = inequality_margin(ineq, prof, cfg)
                assert m.margin >= -1e-9 * abs(m.rhs), (ineq, prof.label)

    def test_unknown_id(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        with pytest.raises(ValueError):
            inequality_margin("f2", constant_profile(1.0), cfg)


_coeff = st.floats(min_value=-2.0, max_value=2.0)


class TestMarginProperty:
    @given(st.tuples(_coeff, _coeff, _coeff, _coeff, _coeff))
    @settings(max_examples=25, deadline=None)
    def test_margins_nonnegative_for_random_cos_polys(self, coeffs):
        # the inequalities are proven for every admissible profile, so any
        # cosine polynomial must land on the correct side
        assume(max(abs(c) for c in coeffs) > 1e-3)
        prof = profile_from_t_poly("random-poly", list(coeffs))
        sub = ExponentConfig.subcritical(5, 2.0)
        crit = ExponentConfig.critical(3)
        for ineq, cfg in (("f1", sub), ("f3", sub), ("fc1", crit), ("fc2", crit)):
            m = inequality_margin(ineq, prof, cfg)
            assert m.margin >= -max(1e-9 * abs(m.rhs), 1e-12), (ineq, coeffs)


class TestSharpnessRatios:
    def test_f1shrp1_near_limit(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        prof = make_profile(FamilyId.COT_COS, cfg, 0.01)
        r = sharpness_ratio("f1shrp1", prof, cfg)
        assert 0.9 < r <= 1.0 + 1e-10

    def test_f3shrp3_closed_value(self):
        cfg = ExponentConfig.subcritical(5, 2.0)
        prof = make_profile(FamilyId.INV_SIN, cfg, 0.1)
        r = sharpness_ratio("f3shrp3", prof, cfg)
        assert abs(r - 0.95) < 1e-10

    def test_ratios_below_targets(self):
        cfg = ExponentConfig.subcritical(6, 2.0)
        prof = make_profile(FamilyId.INV_SIN, cfg, 0.25)
        for form in ("f3shrp1", "f3shrp2", "f3shrp3"):
            r = sharpness_ratio(form, prof, cfg)
            assert r <= sharpness_target(form, cfg) + 1e-8, form

    def test_degenerate_denominator(self):
        cfg = ExponentConfig.critical(3)
        r = sharpness_ratio("fc2shrp2", constant_profile(1.0), cfg)
        assert r == -math.inf
        assert r <= sharpness_target("fc2shrp2", cfg)

    def test_weighted_space_warning_above_half_dimension(self):
        cfg = ExponentConfig.subcritical(5, 2.5)  # p >= n/2
        prof = make_profile(FamilyId.COT, cfg, 0.2)
        with pytest.warns(RuntimeWarning, match="weighted"):
            sharpness_ratio("f1shrp3", prof, cfg)


class TestDivergentFamily:
    def test_rejected_before_evaluation(self):
        cfg = ExponentConfig.critical(4)
        for m in (-1.0, 0.0, 1.0, 2.0, 7.5):
            with pytest.raises(NonIntegrableError):
                divergent_log_tangent_moment(cfg, m)

    def test_requires_critical_regime(self):
        with pytest.raises(ValueError):
            divergent_log_tangent_moment(ExponentConfig.subcritical(5, 2.0), 2.0)
