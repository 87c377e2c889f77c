import math
import random

import pytest
import scipy.special as sps

from hardy_sharp.kernel import (
    EULER_GAMMA,
    DomainError,
    HEvaluator,
    QuadratureError,
    digamma,
    exp_moment,
    gamma_upper,
    h_eval,
    integrate,
    integrate_log_singular,
)


class TestIntegrate:
    def test_log_square_unit_interval(self):
        r = integrate(lambda x: abs(1.0 + math.log(x)) ** 2, 0.0, 1.0, tol=1e-12)
        assert r.value == pytest.approx(1.0, abs=1e-12)
        assert r.error_estimate >= 0.0
        assert r.evaluations >= 1

    def test_constant_unit_interval(self):
        r = integrate(lambda x: 1.0, 0.0, 1.0, tol=1e-12)
        assert r.value == pytest.approx(1.0, abs=1e-13)

    def test_cubic_exponential_tail(self):
        r = integrate(lambda y: y**3 * math.exp(-y), 0.0, math.inf, tol=1e-12)
        assert r.value == pytest.approx(6.0, abs=1e-11)

    def test_power_singularity_at_zero(self):
        r = integrate(lambda t: t**-0.5, 0.0, 1.0, tol=1e-12)
        assert r.value == pytest.approx(2.0, abs=1e-12)

    def test_power_tail(self):
        r = integrate(lambda x: x**-1.5, 1.0, math.inf, tol=1e-12)
        assert r.value == pytest.approx(2.0, abs=1e-11)

    def test_empty_interval_rejected(self):
        with pytest.raises(DomainError):
            integrate(lambda x: x, 1.0, 1.0, tol=1e-10)

    def test_budget_exhaustion_carries_partial(self):
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: math.sin(1.0 / x) / x, 0.0, 1.0, tol=1e-14, max_panels=8)
        partial = info.value.partial
        assert math.isfinite(partial.value)
        assert partial.evaluations >= 1


class TestIntegrateLogSingular:
    def test_c1_value(self):
        r = integrate_log_singular(lambda x: abs(1.0 + math.log(x)), tol=1e-13)
        assert r.value == pytest.approx(2.0 / math.e, abs=1e-13)

    def test_constant(self):
        r = integrate_log_singular(lambda x: 1.0, tol=1e-13)
        assert r.value == pytest.approx(1.0, abs=1e-13)

    def test_log_log_integrand_cross_route(self):
        # integrand has a log singularity at x = 1/e; the substituted route
        # must agree with plain quadrature split at that point
        f = lambda x: math.log(abs(1.0 + math.log(x)))
        r = integrate_log_singular(f, tol=1e-12)
        split = (
            integrate(f, 0.0, math.exp(-1.0), tol=1e-13).value
            + integrate(f, math.exp(-1.0), 1.0, tol=1e-13).value
        )
        assert r.value == pytest.approx(split, abs=5e-12)


class TestGammaUpper:
    @pytest.mark.parametrize("a", [0.25, 1.0, 2.5, 7.0, 19.5])
    def test_at_zero_is_complete_gamma(self, a):
        assert gamma_upper(a, 0.0) == pytest.approx(math.gamma(a), rel=1e-14)

    @pytest.mark.parametrize("x", [0.1, 1.0, 3.7, 20.0, 50.0])
    def test_a_one_is_exponential(self, x):
        assert gamma_upper(1.0, x) == pytest.approx(math.exp(-x), rel=1e-13)

    def test_integration_by_parts_value(self):
        # int_1^inf t^2 e^-t dt = 5/e
        assert gamma_upper(3.0, 1.0) == pytest.approx(5.0 / math.e, rel=1e-14)

    def test_matches_scipy_over_domain(self):
        rng = random.Random(1234)
        for _ in range(300):
            a = rng.uniform(1e-3, 20.0)
            x = rng.uniform(0.0, 50.0)
            ref = sps.gammaincc(a, x) * math.gamma(a)
            assert gamma_upper(a, x) == pytest.approx(ref, rel=1e-13, abs=5e-300)

    def test_strictly_decreasing_in_x(self):
        for a in (0.5, 1.0, 3.0, 10.0):
            xs = [0.0, 0.3, 1.0, 2.0, 5.0, 12.0, 30.0]
            vals = [gamma_upper(a, x) for x in xs]
            assert all(u > v for u, v in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            gamma_upper(0.0, 1.0)
        with pytest.raises(DomainError):
            gamma_upper(-2.0, 1.0)
        with pytest.raises(DomainError):
            gamma_upper(1.0, -0.5)


class TestExpMoment:
    def test_empty_integral(self):
        assert exp_moment(0.0, 1.7) == 0.0

    def test_p_zero_is_e_minus_one(self):
        assert exp_moment(1.0, 0.0) == pytest.approx(math.e - 1.0, rel=1e-15)

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.25])
    def test_against_quadrature(self, p):
        rng = random.Random(99)
        for _ in range(10):
            s = rng.uniform(0.01, 2.0)
            ref = integrate(lambda t: t**p * math.exp(t), 0.0, s, tol=1e-14).value
            assert exp_moment(s, p) == pytest.approx(ref, rel=1e-12)

    def test_strictly_increasing_in_s(self):
        vals = [exp_moment(s, 1.3) for s in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)]
        assert all(u < v for u, v in zip(vals, vals[1:]))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            exp_moment(-0.1, 1.0)


class TestH:
    def test_p2_closed_form(self):
        ev = HEvaluator(p=2.0)
        for r in (0.0, 0.25, 1.0, 1.5, 4.0, 10.0, 100.0):
            assert h_eval(ev, r) == pytest.approx(r * r + 1.0, rel=1e-13)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 4.5])
    def test_at_one_is_gamma(self, p):
        ev = HEvaluator(p=p)
        assert h_eval(ev, 1.0) == pytest.approx(math.gamma(p + 1.0), rel=1e-14)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
    def test_branch_consistency(self, p):
        # the derivative of h at 1 equals Gamma(p+1), so the one-sided values
        # at distance d sit a first-order step d*Gamma(p+1) away; the seam
        # itself must be continuous to roundoff
        ev = HEvaluator(p=p)
        g = math.gamma(p + 1.0)
        gaps = []
        for d in (1e-6, 1e-8, 1e-10):
            lo, hi = h_eval(ev, 1.0 - d), h_eval(ev, 1.0 + d)
            assert abs(lo - (g - d * g)) < 1e-10 * g + 10 * d * d * g
            assert abs(hi - (g + d * g)) < 1e-10 * g + 10 * d * d * g
            gaps.append(abs(hi - lo))
        assert gaps[0] > gaps[1] > gaps[2]
        assert h_eval(ev, 1.0) == pytest.approx(g, rel=1e-14)

    def test_oracle_equivalence_random(self):
        rng = random.Random(20240613)
        for _ in range(50):
            r = rng.uniform(0.0, 5.0)
            p = rng.uniform(1.0 + 1e-9, 4.0)
            ev = HEvaluator(p=p)
            f = lambda y: abs(y - 1.0) ** p * math.exp(-y)
            quad = math.exp(r) * integrate(f, r, math.inf, tol=1e-13).value
            assert h_eval(ev, r) == pytest.approx(quad, rel=1e-10)

    def test_negative_r_rejected(self):
        ev = HEvaluator(p=1.5)
        with pytest.raises(DomainError):
            h_eval(ev, -0.1)

    def test_gamma_cache(self):
        ev = HEvaluator(p=3.0)
        assert ev.gamma_p1 == pytest.approx(6.0, rel=1e-15)

    def test_invalid_p(self):
        with pytest.raises(DomainError):
            HEvaluator(p=0.0)


class TestDigamma:
    def test_at_two(self):
        assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, abs=1e-14)

    def test_matches_scipy(self):
        rng = random.Random(5)
        for _ in range(100):
            x = rng.uniform(0.05, 30.0)
            assert digamma(x) == pytest.approx(float(sps.digamma(x)), rel=1e-12, abs=1e-13)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            digamma(0.0)
