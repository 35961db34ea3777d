"""
error_terms - 各定律对应的误差项
"""

from .fugacity import FugacityTerm, PotentialTerm
from .henry import HenryTerm
from .raoult import RaoultTerm
from .solvated import SolventActivityTerm

__all__ = ['RaoultTerm', 'HenryTerm', 'FugacityTerm', 'PotentialTerm', 'SolventActivityTerm']
