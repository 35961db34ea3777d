"""
Core module: 反应体系、热力学关系、∂G/∂ξ 模型与误差模型
"""

from .base_error_term import BaseErrorTerm
from .error_model import ErrorModel, create_error_model
from .gibbs_model import AffineGibbsModel, RegimeTag
from .system import MixtureState, QuotientConvention, ReactionSystem, SolventMode, Species

__all__ = [
    "BaseErrorTerm",
    "ErrorModel",
    "create_error_model",
    "AffineGibbsModel",
    "RegimeTag",
    "ReactionSystem",
    "Species",
    "MixtureState",
    "SolventMode",
    "QuotientConvention",
]
