"""
Systems package: chains whose thermal entanglement is scanned and certified
"""
from typing import Any

from src.errors import ValidationError
from src.potentials import potential_nearest, potential_next_nearest
from src.spin_thermal import SpinSystem
from src.systems.base import EntanglementSystem
from src.systems.harmonic import HarmonicChain
from src.systems.spin import SpinChain

FAMILIES = ('harmonic-nearest', 'harmonic-next-nearest', 'spin-XX', 'spin-XXX')

# Parameter swept by a phase diagram of each family
SWEEP_PARAMETER = {
    'harmonic-nearest': 'c',
    'harmonic-next-nearest': 'mu',
    'spin-XX': 'J',
    'spin-XXX': 'B',
}


def get_system(family: str, n: int, **params: Any) -> EntanglementSystem:
    """
    Factory function building a system of the given family

    Args:
        family (str): One of FAMILIES
        n (int): Number of sites
        **params: c | mu for harmonic chains; J, B, boundary for spin chains

    Returns:
        EntanglementSystem: An instance of the matching system class
    """
    if family == 'harmonic-nearest':
        return HarmonicChain(potential_nearest(n, float(params['c'])))
    elif family == 'harmonic-next-nearest':
        return HarmonicChain(potential_next_nearest(n, float(params['mu'])))
    elif family in ('spin-XX', 'spin-XXX'):
        return SpinChain(SpinSystem(
            n=n,
            model=family.split('-', 1)[1],
            J=float(params.get('J', 1.0)),
            B=float(params.get('B', 0.0)),
            boundary=params.get('boundary', 'periodic'),
        ))
    else:
        raise ValidationError(f"Unknown system family: {family}. Expected one of {FAMILIES}")


__all__ = ['EntanglementSystem', 'HarmonicChain', 'SpinChain', 'FAMILIES', 'SWEEP_PARAMETER', 'get_system']
