import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigvalsh, expm

from src.errors import BadPartitionParams, TooLarge, ValidationError
from src.partitions import make_partition
from src.spin_thermal import (
    DensityMatrix,
    SpinSystem,
    build_hamiltonian,
    ground_state_projector,
    is_ppt,
    negativity,
    partial_transpose,
    thermal_state,
    total_magnetization,
)


def _cuts(n):
    return [make_partition('even_odd', n), make_partition('half_half', n), make_partition('one_vs_rest', n)]


class TestHamiltonian:
    def test_two_site_xx_doubles_the_wrapped_bond(self):
        system = build_hamiltonian('XX', 2, J=1.0, B=0.0)
        assert eigvalsh(system.hamiltonian) == pytest.approx([-4.0, 0.0, 0.0, 4.0], abs=1e-12)

    def test_field_only_is_diagonal(self):
        h = build_hamiltonian('XX', 2, J=0.0, B=1.9).hamiltonian
        np.testing.assert_array_equal(h, np.diag([3.8, 0.0, 0.0, -3.8]))

    def test_periodic_two_sites_is_twice_open(self):
        periodic = build_hamiltonian('XXX', 2, J=0.7, B=0.0, boundary='periodic').hamiltonian
        open_chain = build_hamiltonian('XXX', 2, J=0.7, B=0.0, boundary='open').hamiltonian
        np.testing.assert_allclose(periodic, 2.0 * open_chain, atol=1e-14)

    @pytest.mark.parametrize('model', ['XX', 'XXX'])
    def test_conserves_magnetization(self, model):
        system = build_hamiltonian(model, 6, J=0.8, B=1.3)
        mz = total_magnetization(6).toarray()
        h = system.hamiltonian
        assert np.abs(h @ mz - mz @ h).max() < 1e-12
        np.testing.assert_allclose(h, h.T, atol=1e-14)

    def test_bonds(self):
        assert SpinSystem(4).bonds() == [(0, 1), (1, 2), (2, 3), (3, 0)]
        assert SpinSystem(4, boundary='open').bonds() == [(0, 1), (1, 2), (2, 3)]

    def test_magnetization_diagonal(self):
        np.testing.assert_array_equal(total_magnetization(2).toarray(), np.diag([2.0, 0.0, 0.0, -2.0]))

    def test_hamiltonian_is_read_only(self):
        with pytest.raises(ValueError):
            build_hamiltonian('XX', 2).hamiltonian[0, 0] = 1.0

    def test_too_large(self):
        with pytest.raises(TooLarge):
            SpinSystem(16)

    @pytest.mark.parametrize('kwargs', [{'n': 1}, {'n': 4, 'model': 'XY'}, {'n': 4, 'boundary': 'twisted'}])
    def test_invalid_systems(self, kwargs):
        with pytest.raises(ValidationError):
            SpinSystem(**kwargs)


class TestGroundStates:
    @pytest.mark.parametrize('model, B', [('XX', 3.0), ('XXX', 5.0)])
    def test_strong_field_polarizes(self, model, B):
        system = build_hamiltonian(model, 6, J=1.0, B=B)
        rho = ground_state_projector(system).matrix
        expected = np.zeros((64, 64))
        expected[63, 63] = 1.0
        np.testing.assert_allclose(rho, expected, atol=1e-10)

    def test_xxx_product_ground_state_has_no_negativity(self):
        rho = thermal_state(build_hamiltonian('XXX', 8, J=1.0, B=4.5), 0.0)
        for part in _cuts(8):
            assert negativity(rho, part) == pytest.approx(0.0, abs=1e-12)

    def test_xx_w_like_ground_state_is_entangled(self):
        rho = thermal_state(build_hamiltonian('XX', 10, J=1.0, B=1.9), 0.0)
        assert negativity(rho, make_partition('even_odd', 10)) > 0.0

    def test_low_temperature_approaches_ground_projector(self):
        system = build_hamiltonian('XX', 6, J=1.0, B=3.0)
        np.testing.assert_allclose(thermal_state(system, 1e-3).matrix, ground_state_projector(system).matrix, atol=1e-12)


class TestThermalState:
    def test_is_a_state(self):
        rho = thermal_state(build_hamiltonian('XX', 6, J=1.0, B=1.9), 0.7).matrix
        assert np.trace(rho) == pytest.approx(1.0)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)
        assert eigvalsh(rho).min() > -1e-14

    def test_infinite_temperature_is_maximally_mixed(self):
        rho = thermal_state(build_hamiltonian('XX', 6, J=1.0, B=1.9), 1e8)
        np.testing.assert_allclose(rho.matrix, np.eye(64) / 64, atol=1e-7)
        assert all(is_ppt(rho, part) for part in _cuts(6))

    @pytest.mark.parametrize('T', [0.0, 0.3, 2.0])
    def test_uncoupled_chain_is_separable(self, T):
        rho = thermal_state(build_hamiltonian('XX', 6, J=0.0, B=1.2), T)
        for part in _cuts(6):
            assert negativity(rho, part) == pytest.approx(0.0, abs=1e-12)

    def test_negative_temperature(self):
        with pytest.raises(ValidationError):
            thermal_state(build_hamiltonian('XX', 4), -1.0)

    def test_two_site_matches_matrix_exponential(self):
        system = build_hamiltonian('XX', 2, J=1.0, B=1.9)
        oracle = expm(-system.hamiltonian / 1.0)
        oracle /= np.trace(oracle)
        flipped = oracle.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
        expected = -eigvalsh(flipped)[eigvalsh(flipped) < 0].sum()
        rho = thermal_state(system, 1.0)
        np.testing.assert_allclose(rho.matrix, oracle, atol=1e-12)
        assert negativity(rho, make_partition('one_vs_rest', 2)) == pytest.approx(expected, abs=1e-12)

    def test_bad_trace_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.eye(4), 2)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.diag([0.6, 0.6, 0.2, -0.4]), 2)

    def test_non_hermitian_rejected(self):
        matrix = np.eye(4) / 4.0
        matrix[0, 1] = 0.1
        with pytest.raises(ValidationError):
            DensityMatrix(matrix, 2)

    def test_partial_transpose_of_entangled_state_is_not_a_state(self, bell_state):
        with pytest.raises(ValidationError):
            DensityMatrix(partial_transpose(bell_state, make_partition('one_vs_rest', 2)), 2)


class TestPartialTranspose:
    def test_bell_state(self, bell_state):
        part = make_partition('one_vs_rest', 2)
        assert eigvalsh(partial_transpose(bell_state, part)) == pytest.approx([-0.5, 0.5, 0.5, 0.5])
        assert negativity(bell_state, part) == pytest.approx(0.5)
        assert not is_ppt(bell_state, part)

    def test_product_state_stays_positive(self):
        vector = np.kron(np.array([1.0, 1.0]) / np.sqrt(2.0), np.array([0.0, 1.0]))
        rho = DensityMatrix(np.outer(vector, vector), 2)
        assert eigvalsh(partial_transpose(rho, make_partition('one_vs_rest', 2))).min() >= -1e-15

    def test_size_mismatch(self, bell_state):
        with pytest.raises(BadPartitionParams):
            partial_transpose(bell_state, make_partition('even_odd', 4))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 31),
           labels=st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4).filter(lambda l: len(set(l)) == 2))
    def test_double_transpose_is_identity(self, seed, labels):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        matrix = a @ a.conj().T
        # Mixed enough that its partial transpose is still a state
        rho = DensityMatrix(0.1 * matrix / np.trace(matrix).real + 0.9 * np.eye(16) / 16.0, 4)
        part = make_partition('custom', 4, labels=labels)
        once = partial_transpose(rho, part)
        twice = partial_transpose(DensityMatrix(once, 4), part)
        np.testing.assert_array_equal(twice, rho.matrix)
        assert np.trace(once).real == pytest.approx(1.0)
        np.testing.assert_allclose(once, once.conj().T, atol=1e-14)


def test_field_raises_even_odd_negativity_away_from_zero_temperature():
    system = build_hamiltonian('XX', 10, J=1.0, B=2.3)
    part = make_partition('even_odd', 10)
    temperatures = np.linspace(0.02, 6.0, 12)
    values = [negativity(thermal_state(system, T), part) for T in temperatures]
    assert values[0] == pytest.approx(0.0, abs=1e-10)
    peak = int(np.argmax(values))
    assert 0 < peak < len(values) - 1
    assert values[peak] > 0.0


@pytest.mark.slow
def test_bound_entangled_at_t26():
    system = build_hamiltonian('XX', 10, J=1.0, B=1.9)
    rho = thermal_state(system, 2.6)
    assert negativity(rho, make_partition('half_half', 10)) == pytest.approx(0.0, abs=1e-10)
    assert negativity(rho, make_partition('even_odd', 10)) > 1e-10


@pytest.mark.slow
def test_field_dips_at_low_temperature():
    part = make_partition('half_half', 10)
    values = [negativity(thermal_state(build_hamiltonian('XX', 10, J=1.0, B=B), 0.1), part)
              for B in np.arange(0.0, 2.0001, 0.05)]
    dips = [i for i in range(1, len(values) - 1) if values[i] < values[i - 1] and values[i] < values[i + 1]]
    assert dips


@pytest.mark.slow
def test_even_odd_grows_while_half_half_saturates():
    even_odd, half_half = [], []
    for n in (6, 8, 10, 12):
        rho = thermal_state(build_hamiltonian('XX', n, J=1.0, B=1.9), 2.0)
        even_odd.append(negativity(rho, make_partition('even_odd', n)))
        half_half.append(negativity(rho, make_partition('half_half', n)))
    assert all(a < b for a, b in zip(even_odd, even_odd[1:]))
    assert max(half_half) - min(half_half) < 0.05 * max(half_half)
