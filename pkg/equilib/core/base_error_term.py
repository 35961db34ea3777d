"""
base_error_term.py - 误差项基类
定义了所有误差项（Raoult、Henry、逸度、溶剂活度）必须实现的接口
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from ..numerics.differences import partial_derivatives
from .exceptions import DomainError


@dataclass(frozen=True)
class SeparablePart:
    """ε_err(T, P) = a(P) + b·T 的分解"""
    a: Callable[[float], float]
    a_prime: Callable[[float], float]
    b: float


class BaseErrorTerm(ABC):
    """误差项基类

    value 返回已乘以化学计量系数的贡献 ν_i·γ_i。
    """

    # 依赖的变量: "P"、"T" 或 "TP"
    signature = "TP"

    def __init__(self, species: str, nu: float):
        """
        初始化误差项

        Args:
            species: 物种名（错误信息使用）
            nu: 化学计量系数
        """
        self.species = species
        self.nu = float(nu)
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def value(self, T: float, P: float) -> float:
        """误差贡献 J/mol"""
        pass

    def analytic_partials(self, T: float, P: float) -> Optional[Tuple[float, float]]:
        """
        解析偏导 (∂/∂T, ∂/∂P)

        Returns:
            无解析形式时返回 None，由 partials 退回到有限差分
        """
        return None

    def partials(self, T: float, P: float) -> Tuple[float, float, bool]:
        """
        偏导数 (∂/∂T, ∂/∂P, 是否解析)
        """
        analytic = self.analytic_partials(T, P)
        if analytic is not None:
            return analytic[0], analytic[1], True
        d_t, d_p = partial_derivatives(self.value, T, P)
        return d_t, d_p, False

    def separable_part(self) -> Optional[SeparablePart]:
        """可分离为 a(P) + b·T 时返回分解，否则 None"""
        return None

    def scaled(self, factor: float) -> "BaseErrorTerm":
        """化学计量系数缩放后的副本"""
        clone = object.__new__(self.__class__)
        clone.__dict__.update(self.__dict__)
        clone.nu = self.nu * factor
        return clone

    def _checked(self, value: float, T: float, P: float) -> float:
        if not math.isfinite(value):
            raise DomainError(f"误差项在 (T={T!r}, P={P!r}) 处无定义", species=self.species)
        return value

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(species={self.species!r}, nu={self.nu!r})"
