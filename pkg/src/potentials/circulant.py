import logging
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.linalg import circulant

from src.errors import AsymmetricRow, BadSize, CouplingOutOfRange
from src.potentials.base import Potential

logger = logging.getLogger(__name__)


class CirculantPotential(Potential):
    """
    Translation-invariant potential stored by its first row

    Row r of the matrix is the first row cyclically shifted by r. The
    spectrum follows from cosine sums over the nonzero entries of the row.

    Example first rows:
    ```
    nearest, c=0.4, n=8:   (1, -0.4, 0, 0, 0, 0, 0, -0.4)
    next_nearest, mu:      (2+4mu^2, -4mu, 1, 0, ..., 0, 1, -4mu)
    ```
    """
    def __init__(self, first_row: Sequence[float], kind: str = 'custom',
                 params: Optional[Dict[str, float]] = None):
        row = np.array(first_row, dtype=float)
        if row.ndim != 1:
            raise BadSize(f"First row must be a vector, got shape {row.shape}")
        super().__init__(len(row), kind, params)

        # Reflection symmetry row[l] == row[n-l] makes the matrix symmetric
        mirrored = np.roll(row[::-1], 1)
        if not np.allclose(row, mirrored, rtol=0.0, atol=1e-14):
            bad = int(np.flatnonzero(~np.isclose(row, mirrored, rtol=0.0, atol=1e-14))[0])
            raise AsymmetricRow(
                f"First row not symmetric under index reflection: row[{bad}]={row[bad]} "
                f"but row[{(self.n - bad) % self.n}]={row[(self.n - bad) % self.n]}"
            )
        row.setflags(write=False)
        self._first_row = row

    @property
    def is_circulant(self) -> bool:
        return True

    @property
    def first_row(self) -> np.ndarray:
        return self._first_row

    def _raw_spectrum(self) -> np.ndarray:
        support = np.flatnonzero(self._first_row)
        k = np.arange(self.n)
        phases = 2.0 * np.pi * np.outer(k, support) / self.n
        return np.cos(phases) @ self._first_row[support]

    def dense(self) -> np.ndarray:
        return circulant(self._first_row)

    def function_first_row(self, values: np.ndarray) -> np.ndarray:
        """
        First row of the circulant matrix with eigenvalues `values`

        Args:
            values (ndarray): Eigenvalues in Fourier-index order

        Returns:
            ndarray: v_l = (1/n) sum_k values_k exp(2 pi i k l / n), real part
        """
        return np.fft.ifft(np.asarray(values, dtype=float)).real

    def matrix_function(self, values: np.ndarray) -> np.ndarray:
        return circulant(self.function_first_row(values))


def build_circulant(first_row: Sequence[float]) -> CirculantPotential:
    """
    Build a custom circulant potential from its first row

    Args:
        first_row (sequence): Row of even length n >= 2, symmetric under l -> n-l

    Returns:
        CirculantPotential: Potential tagged 'custom'
    """
    return CirculantPotential(first_row, kind='custom')


def potential_nearest(n: int, c: float) -> CirculantPotential:
    """
    Nearest-neighbour chain V = circ(1, -c, 0, ..., 0, -c)

    Args:
        n (int): Even number of oscillators, n >= 4
        c (float): Coupling in [0, 1/2)

    Returns:
        CirculantPotential: Potential tagged 'nearest'
    """
    if n < 4 or n % 2 != 0:
        raise BadSize(f"Nearest-neighbour chain needs an even n >= 4, got {n}")
    if not 0.0 <= c < 0.5:
        raise CouplingOutOfRange(f"Coupling c must lie in [0, 1/2), got {c}")
    row = np.zeros(n)
    row[0] = 1.0
    row[1] = -c
    row[-1] = -c
    return CirculantPotential(row, kind='nearest', params={'c': float(c)})


def potential_next_nearest(n: int, mu: float) -> CirculantPotential:
    """
    Next-to-nearest chain V = circ(2+4mu^2, -4mu, 1, 0, ..., 0, 1, -4mu)

    The spectrum is checked numerically for positive semidefiniteness.

    Args:
        n (int): Even number of oscillators, n >= 6
        mu (float): Coupling parameter

    Returns:
        CirculantPotential: Potential tagged 'next_nearest'
    """
    if n < 6 or n % 2 != 0:
        raise BadSize(f"Next-to-nearest chain needs an even n >= 6, got {n}")
    row = np.zeros(n)
    row[0] = 2.0 + 4.0 * mu ** 2
    row[1] = -4.0 * mu
    row[-1] = -4.0 * mu
    row[2] = 1.0
    row[-2] = 1.0
    potential = CirculantPotential(row, kind='next_nearest', params={'mu': float(mu)})
    potential.spectrum()
    if potential.is_gapless:
        logger.info(f"Next-to-nearest potential with mu={mu}, n={n} is gapless; only T > 0 is admissible")
    return potential
