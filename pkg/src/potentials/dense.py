from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.linalg import eigh

from src.errors import AsymmetricRow, BadSize
from src.potentials.base import Potential


class DensePotential(Potential):
    """
    Potential given as a full symmetric matrix

    The symmetric eigendecomposition is computed once and its eigenvectors are
    kept for matrix functions, which makes this path O(n^3).
    """
    def __init__(self, matrix: np.ndarray):
        mat = np.array(matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise BadSize(f"Potential matrix must be square, got shape {mat.shape}")
        super().__init__(mat.shape[0], kind='dense')
        scale = max(1.0, float(np.abs(mat).max()))
        if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12 * scale):
            raise AsymmetricRow("Potential matrix is not symmetric")
        mat = 0.5 * (mat + mat.T)
        mat.setflags(write=False)
        self._matrix = mat

    @cached_property
    def _eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        return eigh(self._matrix)

    def _raw_spectrum(self) -> np.ndarray:
        return self._eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigh[1]

    def dense(self) -> np.ndarray:
        return self._matrix.copy()

    def matrix_function(self, values: np.ndarray) -> np.ndarray:
        vectors = self.eigenvectors
        return (vectors * np.asarray(values, dtype=float)) @ vectors.T
