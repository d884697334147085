from src.gaussian_thermal import GaussianThermalSpec
from src.negativity_gaussian import log_negativity
from src.partitions import Partition
from src.potentials import Potential
from src.systems.base import EntanglementSystem


class HarmonicChain(EntanglementSystem):
    """
    Harmonic chain evaluated through the Gaussian log-negativity
    """
    def __init__(self, potential: Potential):
        """
        Initialize with the coupling matrix

        Args:
            potential: Potential V of the chain
        """
        super().__init__(potential.n)
        self.potential = potential
        self.family = f"harmonic-{potential.kind.replace('_', '-')}"

    def negativity(self, temperature: float, partition: Partition) -> float:
        spec = GaussianThermalSpec(self.potential, temperature)
        return log_negativity(spec, partition).value

    @property
    def is_translation_invariant(self) -> bool:
        return self.potential.is_circulant

    def describe(self) -> str:
        params = ', '.join(f"{k}={v:g}" for k, v in self.potential.params.items())
        return f"{self.family}(n={self.n}{', ' + params if params else ''})"
