"""
Log-negativity of bipartitions of harmonic chains from the spectrum of
Q = P omega^- P omega^+
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh

from src.errors import BadPartitionParams, BadSize, CouplingOutOfRange, WrongKind
from src.gaussian_thermal import GaussianThermalSpec, ZERO_T_CUTOFF
from src.partitions import Partition
from src.potentials import potential_nearest

logger = logging.getLogger(__name__)

# Eigenvalues of Q above 1 + PPT_TOLERANCE contribute to E_l
PPT_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class NegativityResult:
    """
    Log-negativity E_l (base 2) together with the spectrum it came from

    Some literature uses the natural logarithm; values here are in bits.
    """
    value: float
    q_eigenvalues: np.ndarray
    contributing_count: int
    is_ppt: bool

    @classmethod
    def from_eigenvalues(cls, eigenvalues: np.ndarray) -> 'NegativityResult':
        ordered = np.sort(np.asarray(eigenvalues, dtype=float))
        contributing = ordered[ordered > 1.0 + PPT_TOLERANCE]
        value = float(np.sum(np.log2(contributing)))
        if value < PPT_TOLERANCE:
            value = 0.0
        return cls(value=value, q_eigenvalues=ordered,
                   contributing_count=int(contributing.size), is_ppt=contributing.size == 0)


def _check_partition(spec: GaussianThermalSpec, part: Partition) -> None:
    if part.n != spec.n:
        raise BadPartitionParams(f"Partition over {part.n} sites does not match chain of {spec.n} oscillators")


def q_spectrum(spec: GaussianThermalSpec, part: Partition) -> np.ndarray:
    """
    Eigenvalues of Q = P omega^- P omega^+

    Q is similar to the symmetric positive-definite matrix
    M = (omega^+)^(1/2) P omega^- P (omega^+)^(1/2), whose spectrum is
    computed with a symmetric eigensolver.

    Args:
        spec (GaussianThermalSpec): Thermal state
        part (Partition): Bipartition of the chain

    Returns:
        ndarray: Real eigenvalues in ascending order
    """
    _check_partition(spec, part)
    d_minus, d_plus = spec.mode_weights()
    omega_minus = spec.potential.matrix_function(d_minus)
    root_plus = spec.potential.matrix_function(np.sqrt(d_plus))
    signs = part.signs
    flipped = omega_minus * np.outer(signs, signs)
    symmetrized = root_plus @ flipped @ root_plus
    return eigvalsh(0.5 * (symmetrized + symmetrized.T))


def even_odd_q_spectrum(spec: GaussianThermalSpec) -> np.ndarray:
    """
    Eigenvalues of Q for the even-odd partition of a circulant chain

    The Fourier transform maps P onto the shift by n/2, so the eigenvalues are
    d^-_k d^+_(k+n/2 mod n) for k = 0..n-1.

    Args:
        spec (GaussianThermalSpec): Thermal state with a circulant potential

    Returns:
        ndarray: Eigenvalues in ascending order
    """
    if not spec.potential.is_circulant:
        raise WrongKind(f"Analytic even-odd spectrum needs a circulant potential, got {spec.potential!r}")
    d_minus, d_plus = spec.mode_weights()
    return np.sort(d_minus * np.roll(d_plus, -(spec.n // 2)))


def log_negativity(spec: GaussianThermalSpec, part: Partition, method: str = 'auto') -> NegativityResult:
    """
    Log-negativity E_l = sum_k log2 max(1, λ_k(Q))

    Args:
        spec (GaussianThermalSpec): Thermal state
        part (Partition): Bipartition of the chain
        method (str): 'dense' (symmetrized Q), 'analytic' (even-odd on a
            circulant chain) or 'auto' (analytic whenever it applies)

    Returns:
        NegativityResult: Value in bits plus spectral evidence
    """
    _check_partition(spec, part)
    analytic_applies = part.kind == 'even_odd' and spec.potential.is_circulant
    if method == 'analytic' or (method == 'auto' and analytic_applies):
        if part.kind != 'even_odd':
            raise WrongKind(f"Analytic path only covers the even-odd partition, got '{part.kind}'")
        eigenvalues = even_odd_q_spectrum(spec)
    elif method in ('dense', 'auto'):
        eigenvalues = q_spectrum(spec, part)
    else:
        raise ValueError(f"Unknown method '{method}'. Expected 'auto', 'dense' or 'analytic'")
    result = NegativityResult.from_eigenvalues(eigenvalues)
    logger.debug(f"E_l[{part.name}] = {result.value:.6g} at T={spec.temperature:g} ({spec.potential!r})")
    return result


def even_odd_f(k: int, n: int, c: float, T: float) -> float:
    """
    Contributing eigenvalue f(k,n,c,T) of Q for the nearest-neighbour chain

    f = sqrt(Λ_(k+n/2)/Λ_k) tanh(sqrt(Λ_k)/2T) tanh(sqrt(Λ_(k+n/2))/2T)
    with Λ_k = 1 - 2c cos(2πk/n).

    Args:
        k (int): Mode index, 0 <= k <= n/4
        n (int): Chain length, a multiple of 4
        c (float): Coupling in [0, 1/2)
        T (float): Temperature >= 0

    Returns:
        float: f(k, n, c, T)
    """
    if n < 4 or n % 4 != 0:
        raise BadSize(f"Even-odd closed form needs n a multiple of 4, got {n}")
    if not 0 <= k <= n // 4:
        raise BadPartitionParams(f"Mode index k={k} outside [0, {n // 4}]")
    if not 0.0 <= c < 0.5:
        raise CouplingOutOfRange(f"Coupling c must lie in [0, 1/2), got {c}")
    low = 1.0 - 2.0 * c * np.cos(2.0 * np.pi * k / n)
    high = 1.0 + 2.0 * c * np.cos(2.0 * np.pi * k / n)
    ratio = np.sqrt(high / low)
    if T < ZERO_T_CUTOFF:
        return float(ratio)
    return float(ratio * np.tanh(np.sqrt(low) / (2.0 * T)) * np.tanh(np.sqrt(high) / (2.0 * T)))


def log_negativity_even_odd_circulant(spec: GaussianThermalSpec) -> NegativityResult:
    """
    Even-odd log-negativity of any circulant chain from the d^+- products

    Args:
        spec (GaussianThermalSpec): Thermal state with a circulant potential

    Returns:
        NegativityResult: Same value as the dense path
    """
    return NegativityResult.from_eigenvalues(even_odd_q_spectrum(spec))


def log_negativity_even_odd_analytic(n: int, c: float, T: float) -> NegativityResult:
    """
    Even-odd log-negativity of the nearest-neighbour chain in closed form

    All n products d^-_k d^+_(k+n/2) are generated and filtered, which
    accounts for the double multiplicity of f(k) and the single endpoints.

    Args:
        n (int): Chain length, a multiple of 4
        c (float): Coupling in [0, 1/2)
        T (float): Temperature >= 0

    Returns:
        NegativityResult: E_l of the even-odd partition
    """
    if n < 4 or n % 4 != 0:
        raise BadSize(f"Even-odd closed form needs n a multiple of 4, got {n}")
    spec = GaussianThermalSpec(potential_nearest(n, c), T)
    return log_negativity_even_odd_circulant(spec)
