import logging
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Callable, Dict, Optional

import numpy as np

from src.errors import BadSize, NotPositiveSemidefinite

logger = logging.getLogger(__name__)

# Absolute tolerance of the positive-semidefiniteness check
TOL_PSD = 1e-10


class Potential(ABC):
    """
    Abstract base class for the coupling matrix V of a harmonic chain

    Subclasses decide how V is stored and how its spectrum is obtained. All
    instances are immutable after construction.
    """
    def __init__(self, n: int, kind: str, params: Optional[Dict[str, float]] = None):
        """
        Initialize the potential

        Args:
            n (int): Number of sites, positive and even
            kind (str): One of 'nearest', 'next_nearest', 'custom', 'dense'
            params (dict): Coupling parameters of the kind, e.g. {'c': 0.4}
        """
        if n < 2 or n % 2 != 0:
            raise BadSize(f"Site count must be an even integer >= 2, got {n}")
        self.n = int(n)
        self.kind = kind
        self.params = dict(params or {})

    @abstractmethod
    def _raw_spectrum(self) -> np.ndarray:
        """
        Eigenvalues of V before the PSD check
        """
        pass

    @abstractmethod
    def dense(self) -> np.ndarray:
        """
        Materialize V as a dense symmetric n x n matrix
        """
        pass

    @abstractmethod
    def matrix_function(self, values: np.ndarray) -> np.ndarray:
        """
        Build the matrix sharing V's eigenvectors with the given eigenvalues

        Args:
            values (ndarray): One value per entry of spectrum(), same order

        Returns:
            ndarray: Dense n x n symmetric matrix
        """
        pass

    @property
    def is_circulant(self) -> bool:
        return False

    @cached_property
    def _spectrum(self) -> np.ndarray:
        raw = np.asarray(self._raw_spectrum(), dtype=float)
        lowest = float(raw.min())
        if lowest < -TOL_PSD:
            raise NotPositiveSemidefinite(
                f"Potential '{self.kind}' with n={self.n} has eigenvalue {lowest:.3e} < -{TOL_PSD:g}"
            )
        clamped = np.where(np.abs(raw) < TOL_PSD, 0.0, raw)
        if np.any(clamped == 0.0):
            logger.debug(f"Potential '{self.kind}' (n={self.n}) is gapless")
        clamped.setflags(write=False)
        return clamped

    def spectrum(self) -> np.ndarray:
        """
        Eigenvalues Λ_k of V

        Circulant potentials return them in Fourier-index order k=0..n-1,
        dense potentials in ascending order. Values within TOL_PSD of zero
        are clamped to exactly zero.

        Returns:
            ndarray: Read-only vector of length n
        """
        return self._spectrum

    @property
    def is_gapless(self) -> bool:
        return bool(np.any(self._spectrum == 0.0))

    def apply(self, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """
        Apply a scalar function to V through its spectrum

        Args:
            func (callable): Vectorized function of the eigenvalues

        Returns:
            ndarray: Dense matrix func(V)
        """
        return self.matrix_function(func(self._spectrum))

    def __repr__(self) -> str:
        params = ', '.join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}(n={self.n}, kind={self.kind}{', ' + params if params else ''})"
