"""
equilib
化学平衡、活度商误差模式、反应路径追踪与电化学电位计算
"""

__version__ = "1.0.0"
__author__ = "equilib Team"

from .core.exceptions import ConfigError, DomainError, EquilibError, NumericalError
from .core.gibbs_model import AffineGibbsModel, RegimeTag
from .core.system import MixtureState, ReactionSystem, Species

__all__ = [
    "AffineGibbsModel",
    "RegimeTag",
    "ReactionSystem",
    "Species",
    "MixtureState",
    "EquilibError",
    "ConfigError",
    "DomainError",
    "NumericalError",
]
