from typing import List, Sequence

from src.partitions import Partition
from src.spin_thermal import SpinSystem, negativity, thermal_state
from src.systems.base import EntanglementSystem


class SpinChain(EntanglementSystem):
    """
    Spin-1/2 chain evaluated through the negativity of its Gibbs state
    """
    def __init__(self, system: SpinSystem):
        super().__init__(system.n)
        self.system = system
        self.family = f"spin-{system.model}"

    def negativity(self, temperature: float, partition: Partition) -> float:
        return negativity(thermal_state(self.system, temperature), partition)

    def negativities(self, temperature: float, partitions: Sequence[Partition]) -> List[float]:
        # One Gibbs state shared by all cuts
        rho = thermal_state(self.system, temperature)
        return [negativity(rho, partition) for partition in partitions]

    @property
    def is_translation_invariant(self) -> bool:
        return self.system.boundary == 'periodic'

    def describe(self) -> str:
        return f"{self.family}(n={self.n}, J={self.system.J:g}, B={self.system.B:g}, {self.system.boundary})"
