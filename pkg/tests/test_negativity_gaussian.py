import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.errors import BadSize, BadPartitionParams, WrongKind
from src.gaussian_thermal import GaussianThermalSpec
from src.negativity_gaussian import (
    NegativityResult,
    even_odd_f,
    even_odd_q_spectrum,
    log_negativity,
    log_negativity_even_odd_analytic,
    log_negativity_even_odd_circulant,
    q_spectrum,
)
from src.partitions import make_partition
from src.potentials import DensePotential, potential_nearest, potential_next_nearest


def _spec(n, c, T):
    return GaussianThermalSpec(potential_nearest(n, c), T)


@pytest.mark.parametrize('kind', ['even_odd', 'half_half', 'one_vs_rest'])
def test_identity_potential_is_never_entangled(identity_potential, kind):
    T = 0.5
    spec = GaussianThermalSpec(identity_potential, T)
    part = make_partition(kind, 8)
    np.testing.assert_allclose(q_spectrum(spec, part), np.tanh(1.0 / (2.0 * T)) ** 2, atol=1e-14)
    assert log_negativity(spec, part).value == 0.0


def test_dense_even_odd_spectrum_matches_products():
    spec = _spec(8, 0.4, 0.0)
    dense = q_spectrum(spec, make_partition('even_odd', 8))
    np.testing.assert_allclose(dense, even_odd_q_spectrum(spec), atol=1e-10)


@pytest.mark.parametrize('n', [4, 8, 12])
@pytest.mark.parametrize('kind', ['even_odd', 'half_half', 'one_vs_rest'])
def test_symmetrized_path_matches_general_eigensolver(n, kind):
    spec = _spec(n, 0.42, 0.3)
    part = make_partition(kind, n)
    omega_minus, omega_plus = spec.omega_matrices()
    p = np.diag(part.signs)
    general = np.sort(np.linalg.eigvals(p @ omega_minus @ p @ omega_plus).real)
    np.testing.assert_allclose(q_spectrum(spec, part), general, atol=1e-9)


@pytest.mark.parametrize('n', [8, 16, 64])
@pytest.mark.parametrize('c', [0.1, 0.3, 0.45])
@pytest.mark.parametrize('T', [0.0, 0.2, 0.5])
def test_analytic_and_dense_even_odd_agree(n, c, T):
    spec = _spec(n, c, T)
    part = make_partition('even_odd', n)
    dense = log_negativity(spec, part, method='dense').value
    analytic = log_negativity_even_odd_analytic(n, c, T).value
    assert analytic == pytest.approx(dense, rel=1e-8, abs=1e-9)


def test_analytic_agreement_n16():
    dense = log_negativity(_spec(16, 0.3, 0.2), make_partition('even_odd', 16), method='dense')
    assert log_negativity_even_odd_analytic(16, 0.3, 0.2).value == pytest.approx(dense.value, rel=1e-8)
    assert dense.value > 0.0


def test_bound_entanglement_signature_at_c04():
    n = 64
    hot = _spec(n, 0.4, 0.45)
    assert log_negativity(hot, make_partition('half_half', n)).value == 0.0
    assert log_negativity(hot, make_partition('even_odd', n)).value > 0.0
    cold = _spec(n, 0.4, 0.35)
    assert log_negativity(cold, make_partition('half_half', n)).value > 0.0
    assert log_negativity(cold, make_partition('even_odd', n)).value > 0.0


@settings(max_examples=20, deadline=None)
@given(T=st.floats(min_value=0.0, max_value=5.0), kind=st.sampled_from(['even_odd', 'half_half', 'one_vs_rest']))
def test_decoupled_chain_has_zero_negativity(T, kind):
    assert log_negativity(_spec(16, 0.0, T), make_partition(kind, 16)).value == 0.0


def test_even_odd_grows_with_n():
    values = [log_negativity(_spec(n, 0.4, 0.45), make_partition('even_odd', n)).value for n in (16, 32, 64)]
    assert values[0] < values[1] < values[2]


def test_half_half_independent_of_offset():
    spec = _spec(16, 0.4, 0.3)
    values = [log_negativity(spec, make_partition('half_half', 16, offset=o)).value for o in range(16)]
    assert max(values) - min(values) < 1e-10


def test_negativity_decreases_with_temperature():
    n = 16
    part = make_partition('half_half', n)
    values = [log_negativity(_spec(n, 0.4, T), part).value for T in np.linspace(0.0, 0.6, 13)]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_result_invariants():
    result = log_negativity(_spec(16, 0.45, 0.1), make_partition('half_half', 16))
    contributing = result.q_eigenvalues[result.q_eigenvalues > 1.0 + 1e-10]
    assert result.value == pytest.approx(np.sum(np.log2(contributing)))
    assert result.contributing_count == contributing.size > 0
    assert not result.is_ppt
    assert np.all(np.diff(result.q_eigenvalues) >= 0.0)


def test_from_eigenvalues_ppt():
    result = NegativityResult.from_eigenvalues(np.array([0.3, 1.0, 0.9]))
    assert result.is_ppt and result.value == 0.0 and result.contributing_count == 0


class TestEvenOddF:
    @pytest.mark.parametrize('c', [0.1, 0.3, 0.45])
    def test_ground_state_value(self, c):
        assert even_odd_f(0, 16, c, 0.0) == pytest.approx(np.sqrt((1 + 2 * c) / (1 - 2 * c)))

    def test_decoupled(self):
        T = 0.3
        assert even_odd_f(2, 16, 0.0, T) == pytest.approx(np.tanh(1.0 / (2.0 * T)) ** 2)

    def test_entangled_at_045(self):
        assert even_odd_f(0, 16, 0.4, 0.45) > 1.0

    def test_largest_q_eigenvalue(self):
        spectrum = q_spectrum(_spec(16, 0.4, 0.45), make_partition('even_odd', 16))
        assert spectrum.max() == pytest.approx(even_odd_f(0, 16, 0.4, 0.45), abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(c=st.floats(min_value=0.0, max_value=0.49), T=st.floats(min_value=0.0, max_value=3.0))
    def test_non_increasing_in_k(self, c, T):
        values = [even_odd_f(k, 32, c, T) for k in range(9)]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_above_threshold_gives_zero(self):
        assert even_odd_f(0, 16, 0.3, 2.0) < 1.0
        assert log_negativity_even_odd_analytic(16, 0.3, 2.0).value == 0.0

    def test_decoupled_analytic_is_zero(self):
        assert log_negativity_even_odd_analytic(16, 0.0, 0.2).value == 0.0

    @pytest.mark.parametrize('k, n', [(0, 6), (5, 16), (-1, 16)])
    def test_invalid_arguments(self, k, n):
        with pytest.raises((BadSize, BadPartitionParams)):
            even_odd_f(k, n, 0.3, 0.2)


class TestMethods:
    def test_analytic_requires_even_odd(self):
        with pytest.raises(WrongKind):
            log_negativity(_spec(8, 0.3, 0.2), make_partition('half_half', 8), method='analytic')

    def test_analytic_requires_circulant(self):
        spec = GaussianThermalSpec(DensePotential(potential_nearest(8, 0.3).dense()), 0.2)
        with pytest.raises(WrongKind):
            even_odd_q_spectrum(spec)

    def test_auto_falls_back_to_dense(self):
        dense_spec = GaussianThermalSpec(DensePotential(potential_nearest(8, 0.3).dense()), 0.2)
        circulant_spec = _spec(8, 0.3, 0.2)
        part = make_partition('even_odd', 8)
        assert log_negativity(dense_spec, part).value == pytest.approx(log_negativity(circulant_spec, part).value)

    def test_next_nearest_circulant_path_matches_dense(self):
        spec = GaussianThermalSpec(potential_next_nearest(16, 0.5), 0.2)
        part = make_partition('even_odd', 16)
        assert log_negativity_even_odd_circulant(spec).value == pytest.approx(
            log_negativity(spec, part, method='dense').value, rel=1e-8, abs=1e-9)

    def test_partition_size_mismatch(self):
        with pytest.raises(BadPartitionParams):
            log_negativity(_spec(8, 0.3, 0.2), make_partition('even_odd', 16))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            log_negativity(_spec(8, 0.3, 0.2), make_partition('even_odd', 8), method='sdp')
