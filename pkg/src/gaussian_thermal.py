"""
Gaussian thermal states of harmonic chains: W(T), covariance matrix and the
omega matrices entering the log-negativity
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.linalg import block_diag, eigvals

from src.errors import GaplessAtZeroT, ValidationError
from src.potentials import Potential

logger = logging.getLogger(__name__)

# Below this temperature the exact ground-state branch is used (w_k = 1)
ZERO_T_CUTOFF = 1e-8


@dataclass(frozen=True)
class GaussianThermalSpec:
    """
    Thermal state of the Hamiltonian H = (sum p_i^2 + x.V.x)/2 at temperature T

    Natural units hbar = k_B = 1. The spectral data of V is taken from the
    potential, which caches it.
    """
    potential: Potential
    temperature: float

    def __post_init__(self):
        if not np.isfinite(self.temperature) or self.temperature < 0:
            raise ValidationError(f"Temperature must be >= 0, got {self.temperature}")

    @property
    def n(self) -> int:
        return self.potential.n

    @property
    def is_ground_state(self) -> bool:
        return self.temperature < ZERO_T_CUTOFF

    def _require_gap(self, what: str) -> None:
        if self.potential.is_gapless:
            raise GaplessAtZeroT(
                f"{what} is undefined for the gapless potential {self.potential!r} at T={self.temperature}"
            )

    @cached_property
    def _tanh_factors(self) -> np.ndarray:
        roots = np.sqrt(self.potential.spectrum())
        if self.is_ground_state:
            return np.ones_like(roots)
        return np.tanh(roots / (2.0 * self.temperature))

    def thermal_weights(self) -> np.ndarray:
        """
        Eigenvalues w_k = coth(sqrt(Λ_k)/2T) of W(T)

        Uses the coth form of W(T) = 1 + 2[exp(V^(1/2)/T) - 1]^(-1), which
        does not overflow at small T. Gapless modes at T > 0 give w_k = inf.

        Returns:
            ndarray: Weights >= 1, in the order of potential.spectrum()
        """
        with np.errstate(divide='ignore'):
            return 1.0 / self._tanh_factors

    def mode_weights(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Per-mode eigenvalues of omega^-/+ = W(T)^(-1) V^(-/+ 1/2)

        d^+-_k = Λ_k^(+-1/2) tanh(sqrt(Λ_k)/2T). A zero mode at T > 0 takes its
        limit d^- = 1/(2T), d^+ = 0.

        Returns:
            tuple: (d_minus, d_plus) vectors in the order of potential.spectrum()
        """
        spectrum = self.potential.spectrum()
        roots = np.sqrt(spectrum)
        factors = self._tanh_factors
        gapless = spectrum == 0.0
        if np.any(gapless) and self.is_ground_state:
            self._require_gap("d^- at T=0")

        d_plus = roots * factors
        safe_roots = np.where(gapless, 1.0, roots)
        limit = 0.0 if self.is_ground_state else 1.0 / (2.0 * self.temperature)
        d_minus = np.where(gapless, limit, factors / safe_roots)
        return d_minus, d_plus

    def covariance(self) -> np.ndarray:
        """
        Covariance matrix gamma(T) = [V^(-1/2) W(T)] (+) [V^(1/2) W(T)]

        Ordering S = (x_1..x_n, p_1..p_n); the vacuum of a unit oscillator is
        the identity.

        Returns:
            ndarray: 2n x 2n block-diagonal symmetric positive-definite matrix
        """
        self._require_gap("The covariance matrix")
        roots = np.sqrt(self.potential.spectrum())
        weights = self.thermal_weights()
        x_block = self.potential.matrix_function(weights / roots)
        p_block = self.potential.matrix_function(weights * roots)
        return block_diag(x_block, p_block)

    def omega_matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Build omega^- and omega^+

        Returns:
            tuple: (omega_minus, omega_plus), symmetric n x n matrices sharing
            V's eigenvectors; circulant whenever V is
        """
        d_minus, d_plus = self.mode_weights()
        return self.potential.matrix_function(d_minus), self.potential.matrix_function(d_plus)

    def min_thermal_weight(self) -> float:
        return float(np.min(self.thermal_weights()))


def symplectic_form(n: int) -> np.ndarray:
    """Standard symplectic form for the ordering (x_1..x_n, p_1..p_n)"""
    identity = np.eye(n)
    zeros = np.zeros((n, n))
    return np.block([[zeros, identity], [-identity, zeros]])


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """
    Symplectic eigenvalues of a covariance matrix

    Computed as the moduli of the eigenvalues of i*Omega*gamma, each
    appearing twice; a physical state has all of them >= 1.

    Args:
        gamma (ndarray): 2n x 2n covariance matrix

    Returns:
        ndarray: n symplectic eigenvalues in ascending order
    """
    n = gamma.shape[0] // 2
    moduli = np.sort(np.abs(eigvals(1j * symplectic_form(n) @ gamma)))
    return moduli[::2]
