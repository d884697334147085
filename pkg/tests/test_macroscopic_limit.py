import numpy as np
import pytest
from scipy.integrate import quad

from src.errors import CouplingOutOfRange, NoCrossing, ValidationError
from src.gaussian_thermal import GaussianThermalSpec
from src.macroscopic_limit import (
    T_BRACKET,
    LimitParams,
    d_pm,
    derivative_bound,
    even_odd_f0,
    fourier_coeff,
    fourier_coefficients,
    halfhalf_limit_lhs,
    halfhalf_ppt_sufficient_finite,
    halfhalf_ppt_sufficient_limit,
    hurwitz_zeta,
    hurwitz_zeta_upper_bound,
    lambda_min_W,
    logneg_density_limit,
    partial_sums,
    periodic_abs_integral,
    residual_tail,
    threshold_even_odd_limit,
    threshold_halfhalf_upper,
    x_matrix,
    x_row_sum_norm,
)
from src.negativity_gaussian import log_negativity, log_negativity_even_odd_analytic
from src.partitions import make_partition
from src.potentials import potential_nearest
from src.scan_certify import threshold_temperature
from src.systems import get_system


class TestFourierCoefficients:
    @pytest.mark.parametrize('sign', [1, -1])
    @pytest.mark.parametrize('l', [0, 1, 3, 7])
    def test_match_adaptive_quadrature(self, sign, l):
        c, T = 0.4, 0.45
        expected, _ = quad(lambda x: d_pm(x, c, T, sign) * np.cos(l * x), 0.0, 2.0 * np.pi,
                           epsabs=1e-14, epsrel=1e-12, limit=200)
        assert fourier_coeff(l, c, T, sign) == pytest.approx(expected / (2.0 * np.pi), abs=1e-11)

    def test_decoupled_symbol_is_constant(self):
        coeffs = fourier_coefficients(0.0, 0.5, 1, 5)
        assert coeffs[0] == pytest.approx(np.tanh(1.0))
        assert np.all(np.abs(coeffs[1:]) < 1e-14)

    def test_coefficients_are_read_only(self):
        coeffs = fourier_coefficients(0.3, 0.4, -1, 4)
        with pytest.raises(ValueError):
            coeffs[0] = 1.0

    def test_partial_sums(self):
        plus = np.abs(fourier_coefficients(0.3, 0.4, 1, 6))
        minus = np.abs(fourier_coefficients(0.3, 0.4, -1, 6))
        s_plus, s_minus = partial_sums(0.3, 0.4, 6)
        assert s_plus == pytest.approx(plus[0] + 2.0 * plus[1:].sum())
        assert s_minus == pytest.approx(minus[1:].sum())

    @pytest.mark.parametrize('kwargs', [
        {'l': -1, 'c': 0.3, 'T': 0.4, 'sign': 1},
        {'l': 1, 'c': 0.3, 'T': 0.4, 'sign': 0},
        {'l': 1, 'c': 0.3, 'T': 0.0, 'sign': 1},
    ])
    def test_invalid_arguments(self, kwargs):
        with pytest.raises(ValidationError):
            fourier_coeff(**kwargs)

    def test_coupling_out_of_range(self):
        with pytest.raises(CouplingOutOfRange):
            fourier_coeff(0, 0.5, 0.4, 1)

    def test_residual_tail_shrinks_with_n(self):
        tails = [residual_tail(0.49, 0.01, n) for n in (64, 128, 256, 512)]
        assert all(a > b for a, b in zip(tails, tails[1:]))
        assert tails[-1] > 1e-14
        assert tails[0] >= 10.0 * tails[-1]


class TestDerivativeBound:
    @pytest.mark.parametrize('sign', [1, -1])
    def test_first_derivative_is_total_variation(self, sign):
        c, T = 0.3, 0.4
        variation = 2.0 * abs(d_pm(np.pi, c, T, sign) - d_pm(0.0, c, T, sign))
        assert derivative_bound(c, T, 1, sign) == pytest.approx(variation, rel=1e-5)

    @pytest.mark.parametrize('sign', [1, -1])
    def test_second_derivative_against_finite_differences(self, sign):
        c, T = 0.3, 0.4
        size = 2 ** 15
        step = 2.0 * np.pi / size
        values = d_pm(step * np.arange(size), c, T, sign)
        second = (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / step ** 2
        assert derivative_bound(c, T, 2, sign) == pytest.approx(np.abs(second).sum() * step, rel=1e-4)

    @pytest.mark.parametrize('c', [0.001, 0.05, 0.2, 0.45])
    @pytest.mark.parametrize('T', [1e-3, 0.1, 5.0])
    @pytest.mark.parametrize('sign', [1, -1])
    def test_converges_across_couplings_and_temperatures(self, c, T, sign):
        variation = 2.0 * abs(d_pm(np.pi, c, T, sign) - d_pm(0.0, c, T, sign))
        assert derivative_bound(c, T, 1, sign) == pytest.approx(variation, rel=1e-5)
        bound = derivative_bound(c, T, 3, sign)
        assert np.isfinite(bound) and bound > 0.0

    @pytest.mark.parametrize('s', [4, 8])
    def test_high_orders_converge_near_half(self, s):
        assert np.isfinite(derivative_bound(0.45, 1e-3, s, -1))

    def test_constant_symbol_has_zero_bound(self):
        assert derivative_bound(0.0, 0.5, 3, 1) == 0.0

    def test_order_must_be_positive(self):
        with pytest.raises(ValidationError):
            derivative_bound(0.3, 0.4, 0, 1)


def test_periodic_abs_integral_of_cosine():
    size = 64
    step = 2.0 * np.pi / size
    values = np.cos(step * np.arange(size))
    assert periodic_abs_integral(values, step) == pytest.approx(4.0, rel=1e-2)
    assert periodic_abs_integral(np.zeros(8), 1.0) == 0.0


class TestHurwitzZeta:
    def test_basel(self):
        assert hurwitz_zeta(2, 1.0) == pytest.approx(np.pi ** 2 / 6.0, abs=1e-12)

    @pytest.mark.parametrize('s', [2, 3, 5])
    @pytest.mark.parametrize('a', [0.5, 1.0, 11.0])
    def test_recurrence(self, s, a):
        assert hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0) == pytest.approx(a ** -s, rel=1e-10)

    @pytest.mark.parametrize('s', [2, 3, 4])
    def test_upper_bound(self, s):
        assert hurwitz_zeta(s, 11.0) <= hurwitz_zeta_upper_bound(s, 11.0)

    @pytest.mark.parametrize('s, a', [(1, 1.0), (3, 0.0)])
    def test_invalid(self, s, a):
        with pytest.raises(ValidationError):
            hurwitz_zeta(s, a)


@pytest.mark.parametrize('c', [0.1, 0.3, 0.45])
@pytest.mark.parametrize('T', [0.2, 0.5, 2.0])
def test_lambda_min_w_matches_finite_chain(c, T):
    spec = GaussianThermalSpec(potential_nearest(64, c), T)
    assert lambda_min_W(c, T) == pytest.approx(spec.min_thermal_weight(), rel=1e-12)


class TestEvenOddLimit:
    def test_threshold_is_root_of_f0(self):
        T = threshold_even_odd_limit(0.4)
        assert even_odd_f0(0.4, T) == pytest.approx(1.0, abs=1e-7)
        assert even_odd_f0(0.4, 0.9 * T) > 1.0
        assert even_odd_f0(0.4, 1.1 * T) < 1.0

    def test_decoupled_threshold_is_zero(self):
        assert threshold_even_odd_limit(0.0) == 0.0

    def test_threshold_grows_with_coupling(self):
        thresholds = [threshold_even_odd_limit(c) for c in (0.1, 0.2, 0.3, 0.4, 0.45)]
        assert all(a < b for a, b in zip(thresholds, thresholds[1:]))

    def test_threshold_stays_bounded_near_half(self):
        assert threshold_even_odd_limit(0.4999) < 1.0

    def test_no_crossing_inside_bracket(self):
        with pytest.raises(NoCrossing):
            threshold_even_odd_limit(0.4, bracket=(1e-4, 0.3))

    def test_f0_at_zero_temperature(self):
        assert even_odd_f0(0.3, 0.0) == pytest.approx(2.0)

    @pytest.mark.parametrize('T', [0.3, 0.45])
    def test_density_matches_large_chain(self, T):
        n = 512
        finite = log_negativity_even_odd_analytic(n, 0.4, T).value
        assert n * logneg_density_limit(0.4, T) == pytest.approx(finite, rel=1e-2)

    def test_density_vanishes_above_threshold(self):
        T = threshold_even_odd_limit(0.3)
        assert logneg_density_limit(0.3, 1.05 * T) == 0.0
        assert logneg_density_limit(0.3, 0.95 * T) > 0.0
        assert logneg_density_limit(0.0, 0.1) == 0.0


class TestHalfHalfLimit:
    def test_condition_holds_at_high_temperature(self):
        params = LimitParams(c=0.3, T=5.0)
        assert halfhalf_limit_lhs(params) < 0.1
        assert halfhalf_ppt_sufficient_limit(params)

    @pytest.mark.parametrize('c', [0.001, 0.05, 0.2, 0.45])
    @pytest.mark.parametrize('T', [1e-3, 0.1, 5.0])
    def test_left_side_is_finite(self, c, T):
        lhs = halfhalf_limit_lhs(LimitParams(c=c, T=T))
        assert np.isfinite(lhs) and lhs > 0.0

    @pytest.mark.parametrize('c', [0.001, 0.05, 0.2, 0.45])
    def test_upper_bound_exists(self, c):
        bound = threshold_halfhalf_upper(c, tol=1e-5)
        assert 0.0 < bound < T_BRACKET[1]
        assert halfhalf_ppt_sufficient_limit(LimitParams(c=c, T=1.01 * bound))
        assert not halfhalf_ppt_sufficient_limit(LimitParams(c=c, T=0.99 * bound))

    def test_window_exists_on_coupling_grid(self):
        for c in np.round(np.arange(0.05, 0.451, 0.05), 10):
            assert threshold_halfhalf_upper(c, tol=1e-5) < threshold_even_odd_limit(c)

    def test_higher_orders_tighten_the_bound(self):
        assert threshold_halfhalf_upper(0.3, m=20, s=4) <= threshold_halfhalf_upper(0.3, m=10, s=3) + 1e-6

    def test_inconclusive_at_low_temperature(self):
        params = LimitParams(c=0.3, T=0.05)
        assert halfhalf_limit_lhs(params) >= 1.0
        assert not halfhalf_ppt_sufficient_limit(params)

    @pytest.mark.parametrize('kwargs, error', [
        ({'c': 0.3, 'T': 0.5, 'm': 0}, ValidationError),
        ({'c': 0.3, 'T': 0.5, 's': 1}, ValidationError),
        ({'c': 0.3, 'T': 0.5, 's': 9}, ValidationError),
        ({'c': 0.3, 'T': 0.0}, ValidationError),
        ({'c': 0.5, 'T': 0.5}, CouplingOutOfRange),
    ])
    def test_invalid_params(self, kwargs, error):
        with pytest.raises(error):
            LimitParams(**kwargs)

    @pytest.mark.slow
    def test_upper_bound_is_above_finite_threshold(self):
        n = 800
        for c in np.round(np.arange(0.05, 0.451, 0.05), 10):
            system = get_system('harmonic-nearest', n, c=c)
            finite = threshold_temperature(system, make_partition('half_half', n), t_max=2.0, tol=1e-4)
            bound = threshold_halfhalf_upper(c, tol=1e-5)
            assert finite <= bound + 1e-4
            assert bound < threshold_even_odd_limit(c)

    @pytest.mark.slow
    def test_upper_bound_clears_finite_half_half_entanglement(self):
        bound = threshold_halfhalf_upper(0.4)
        assert bound > 0.0
        assert halfhalf_ppt_sufficient_limit(LimitParams(c=0.4, T=1.01 * bound))
        spec = GaussianThermalSpec(potential_nearest(64, 0.4), 1.02 * bound)
        assert log_negativity(spec, make_partition('half_half', 64)).value == 0.0


class TestFiniteCondition:
    def test_x_matrix_keeps_only_cross_blocks(self):
        spec = GaussianThermalSpec(potential_nearest(8, 0.4), 0.45)
        x = x_matrix(spec)
        omega_minus, _ = spec.omega_matrices()
        assert np.all(x[:4, :4] == 0.0) and np.all(x[4:, 4:] == 0.0)
        np.testing.assert_array_equal(x[:4, 4:], omega_minus[:4, 4:])
        np.testing.assert_allclose(x, x.T, atol=1e-14)
        assert x_row_sum_norm(spec) >= np.abs(omega_minus[0, 4:]).sum() > 0.0

    def test_sufficient_condition_implies_ppt(self):
        n = 64
        part = make_partition('half_half', n)
        certified = 0
        for c in np.linspace(0.02, 0.48, 20):
            for T in np.linspace(0.1, 3.0, 20):
                spec = GaussianThermalSpec(potential_nearest(n, c), T)
                if halfhalf_ppt_sufficient_finite(spec):
                    certified += 1
                    assert log_negativity(spec, part).value == 0.0
        assert certified > 0

    def test_row_sum_matches_limit_coefficients(self):
        n, c, T = 2048, 0.3, 0.4
        row_sum = x_row_sum_norm(GaussianThermalSpec(potential_nearest(n, c), T))
        coeffs = np.abs(fourier_coefficients(c, T, -1, n // 2))
        assert row_sum == pytest.approx(coeffs[1:].sum(), rel=1e-9)
        _, s_minus = partial_sums(c, T, 10)
        bound = s_minus + derivative_bound(c, T, 3, -1) * hurwitz_zeta(3, 11) / (2.0 * np.pi)
        assert s_minus <= row_sum <= bound
