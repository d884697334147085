import abc
from typing import List, Sequence

from src.partitions import Partition, make_partition


class EntanglementSystem(abc.ABC):
    """
    Abstract base class for a chain whose thermal-state entanglement can be
    evaluated across bipartitions
    """
    # harmonic-nearest | harmonic-next-nearest | harmonic-custom | spin-XX | spin-XXX
    family: str = ''

    def __init__(self, n: int):
        """Initialize with the number of sites"""
        self.n = n

    @abc.abstractmethod
    def negativity(self, temperature: float, partition: Partition) -> float:
        """
        Entanglement across a bipartition at temperature T

        Args:
            temperature: Temperature >= 0
            partition: Bipartition of the n sites

        Returns:
            E_l in bits for harmonic chains, E_N for spin chains; 0 means PPT
        """
        pass

    def negativities(self, temperature: float, partitions: Sequence[Partition]) -> List[float]:
        """Entanglement across several bipartitions of the same thermal state"""
        return [self.negativity(temperature, partition) for partition in partitions]

    @property
    def is_translation_invariant(self) -> bool:
        """True for rings whose half-half cuts are all equivalent"""
        return False

    def partition(self, kind: str, **params) -> Partition:
        return make_partition(kind, self.n, **params)

    def describe(self) -> str:
        return f"{self.family}(n={self.n})"
