"""
Exact diagonalization of spin-1/2 chains and negativity of their thermal states
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, eigvalsh

from src.errors import BadPartitionParams, TooLarge, ValidationError
from src.partitions import Partition

logger = logging.getLogger(__name__)

MAX_SPINS = 14
# Tolerance of the Hermiticity and positivity checks on density matrices
STATE_TOL = 1e-10
MODELS = ('XX', 'XXX')
BOUNDARIES = ('periodic', 'open')

# Pauli matrices in the basis |0>, |1> with sigma^z|0> = +|0>
SIGMA_Z = sp.csr_matrix(np.diag([1.0, -1.0]))
SIGMA_PLUS = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
SIGMA_MINUS = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))


def site_operator(op: sp.spmatrix, site: int, n: int) -> sp.csr_matrix:
    """
    Embed a single-site operator at `site` of an n-spin chain

    Site 0 is the leftmost (most significant) tensor factor.
    """
    left = sp.identity(2 ** site, format='csr')
    right = sp.identity(2 ** (n - site - 1), format='csr')
    return sp.kron(sp.kron(left, op, format='csr'), right, format='csr')


def total_magnetization(n: int) -> sp.csr_matrix:
    """Sum of sigma^z over all sites"""
    return sum((site_operator(SIGMA_Z, i, n) for i in range(n)), sp.csr_matrix((2 ** n, 2 ** n)))


@dataclass(frozen=True)
class SpinSystem:
    """
    Spin-1/2 chain with XX or Heisenberg (XXX) coupling in a field B

    XX:  H = -J sum_i (sx_i sx_(i+1) + sy_i sy_(i+1)) + B sum_i sz_i
    XXX: H =  J sum_i (sx_i sx_(i+1) + sy_i sy_(i+1) + sz_i sz_(i+1)) + B sum_i sz_i

    The sigmas are Pauli matrices (no spin-1/2 rescaling). With periodic
    boundaries the bond (n-1, 0) is included; for n = 2 both bonds join the
    same pair, doubling the coupling.
    """
    n: int
    model: str = 'XX'
    J: float = 1.0
    B: float = 0.0
    boundary: str = 'periodic'

    def __post_init__(self):
        if self.n > MAX_SPINS:
            raise TooLarge(f"Dense diagonalization is limited to {MAX_SPINS} spins, got {self.n}")
        if self.n < 2:
            raise ValidationError(f"A spin chain needs at least 2 sites, got {self.n}")
        if self.model not in MODELS:
            raise ValidationError(f"Unknown spin model '{self.model}'. Expected one of {MODELS}")
        if self.boundary not in BOUNDARIES:
            raise ValidationError(f"Unknown boundary '{self.boundary}'. Expected one of {BOUNDARIES}")

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def bonds(self):
        last = self.n if self.boundary == 'periodic' else self.n - 1
        return [(i, (i + 1) % self.n) for i in range(last)]

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        n = self.n
        h = sp.csr_matrix((self.dim, self.dim))
        for i, j in self.bonds():
            # sx sx + sy sy = 2 (s+ s- + s- s+)
            hopping = 2.0 * (site_operator(SIGMA_PLUS, i, n) @ site_operator(SIGMA_MINUS, j, n)
                             + site_operator(SIGMA_MINUS, i, n) @ site_operator(SIGMA_PLUS, j, n))
            if self.model == 'XX':
                h = h - self.J * hopping
            else:
                h = h + self.J * (hopping + site_operator(SIGMA_Z, i, n) @ site_operator(SIGMA_Z, j, n))
        h = h + self.B * total_magnetization(n)
        dense = h.toarray()
        dense.setflags(write=False)
        return dense

    @cached_property
    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        logger.debug(f"Diagonalizing {self.model} chain with n={self.n} (dimension {self.dim})")
        return eigh(self.hamiltonian)


def build_hamiltonian(model: str, n: int, J: float = 1.0, B: float = 0.0,
                      boundary: str = 'periodic') -> SpinSystem:
    """
    Build a spin chain and assemble its dense Hamiltonian

    Args:
        model (str): 'XX' or 'XXX'
        n (int): Number of spins, 2 <= n <= 14
        J (float): Exchange coupling
        B (float): Transverse field
        boundary (str): 'periodic' or 'open'

    Returns:
        SpinSystem: System with the Hamiltonian materialized
    """
    system = SpinSystem(n=n, model=model, J=J, B=B, boundary=boundary)
    system.hamiltonian
    return system


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density matrix of an n-spin chain, Hermitian PSD with unit trace"""
    matrix: np.ndarray
    n: int

    def __post_init__(self):
        if self.matrix.shape != (2 ** self.n, 2 ** self.n):
            raise ValidationError(f"Density matrix shape {self.matrix.shape} does not match {self.n} spins")
        trace = float(np.trace(self.matrix).real)
        if abs(trace - 1.0) > STATE_TOL:
            raise ValidationError(f"Density matrix trace is {trace}, expected 1")
        if not np.allclose(self.matrix, self.matrix.conj().T, rtol=0.0, atol=STATE_TOL):
            raise ValidationError("Density matrix is not Hermitian")
        # Cholesky of rho + tol I exists iff the smallest eigenvalue exceeds -tol
        try:
            np.linalg.cholesky(self.matrix + STATE_TOL * np.eye(self.matrix.shape[0]))
        except np.linalg.LinAlgError:
            raise ValidationError(f"Density matrix has an eigenvalue below -{STATE_TOL:g}") from None


def ground_state_projector(system: SpinSystem, degeneracy_tol: float = 1e-10) -> DensityMatrix:
    """
    Equal mixture of all ground states, the T -> 0+ limit of the Gibbs state
    """
    energies, vectors = system.eigensystem
    scale = max(1.0, abs(float(energies[0])))
    ground = vectors[:, energies - energies[0] <= degeneracy_tol * scale]
    logger.debug(f"Ground space of {system.model} chain (n={system.n}, B={system.B}) has dimension {ground.shape[1]}")
    return DensityMatrix(ground @ ground.conj().T / ground.shape[1], system.n)


def thermal_state(system: SpinSystem, T: float) -> DensityMatrix:
    """
    Gibbs state exp(-H/T)/Tr exp(-H/T)

    Built from the eigendecomposition with the ground energy subtracted, so
    no exponent overflows. T = 0 returns the ground-space projector.

    Args:
        system (SpinSystem): Spin chain
        T (float): Temperature >= 0

    Returns:
        DensityMatrix: Thermal state
    """
    if T < 0:
        raise ValidationError(f"Temperature must be >= 0, got {T}")
    if T == 0:
        return ground_state_projector(system)
    energies, vectors = system.eigensystem
    weights = np.exp(-(energies - energies[0]) / T)
    weights /= weights.sum()
    return DensityMatrix((vectors * weights) @ vectors.conj().T, system.n)


def partial_transpose(rho: DensityMatrix, part: Partition) -> np.ndarray:
    """
    Transpose the tensor factors of group A (label +1) of a partition

    Args:
        rho (DensityMatrix): State of n spins
        part (Partition): Bipartition over the same n spins

    Returns:
        ndarray: Hermitian matrix with the same trace as rho
    """
    n = rho.n
    if part.n != n:
        raise BadPartitionParams(f"Partition over {part.n} sites does not match {n} spins")
    tensor = rho.matrix.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for site in part.group_a:
        axes[site], axes[n + site] = axes[n + site], axes[site]
    return tensor.transpose(axes).reshape(2 ** n, 2 ** n)


def negativity(rho: DensityMatrix, part: Partition) -> float:
    """
    Negativity E_N: sum of |negative eigenvalues| of the partial transpose

    Equivalent to (||rho^T_A||_1 - 1)/2. E_N = 0 means the state is PPT
    across this cut.
    """
    negative = eigvalsh(partial_transpose(rho, part), subset_by_value=(-np.inf, 0.0))
    return float(np.abs(negative[negative < 0.0]).sum())


def is_ppt(rho: DensityMatrix, part: Partition, tol: float = 1e-10) -> bool:
    return negativity(rho, part) <= tol
