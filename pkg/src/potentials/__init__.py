from typing import Any, Mapping

from src.errors import ValidationError
from src.potentials.base import Potential, TOL_PSD
from src.potentials.circulant import (
    CirculantPotential,
    build_circulant,
    potential_nearest,
    potential_next_nearest,
)
from src.potentials.dense import DensePotential


def get_potential(settings: Mapping[str, Any]) -> Potential:
    """
    Factory function building a potential from a config mapping

    Args:
        settings (mapping): {kind: 'nearest', n, c} | {kind: 'next_nearest', n, mu}
            | {kind: 'custom', first_row} | {kind: 'dense', matrix}

    Returns:
        Potential: An instance of the matching potential class
    """
    kind = settings.get('kind')
    if kind == 'nearest':
        return potential_nearest(int(settings['n']), float(settings['c']))
    elif kind == 'next_nearest':
        return potential_next_nearest(int(settings['n']), float(settings['mu']))
    elif kind == 'custom':
        return build_circulant(settings['first_row'])
    elif kind == 'dense':
        return DensePotential(settings['matrix'])
    else:
        raise ValidationError(
            f"Unknown potential kind: {kind}. Expected one of 'nearest', 'next_nearest', 'custom', 'dense'"
        )


__all__ = [
    'Potential', 'CirculantPotential', 'DensePotential', 'TOL_PSD',
    'build_circulant', 'potential_nearest', 'potential_next_nearest', 'get_potential',
]
