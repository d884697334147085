"""
Thermal Entanglement - Negativities, threshold temperatures and bound-entanglement windows of harmonic and spin chains
"""

__version__ = '1.0.0'
