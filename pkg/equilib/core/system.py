"""
core/system.py - 反应体系的静态定义
定义物种、溶剂模式、活度商约定以及热力学状态点
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .constants import F, P_STANDARD, R
from .exceptions import ConfigError


class SolventMode(Enum):
    """溶剂模式"""
    NONE = "none"
    NO_INTERACTION = "no_interaction"
    INTERACTING = "interacting"


class QuotientConvention(Enum):
    """活度商约定

    Q_PLAIN: ∏ x_i^ν_i（无溶剂）
    Q_WITH_A0: x_0 · ∏ x_i^ν_i
    W: ∏ x_i^ν_i，但 x_i 的分母包含溶剂
    Z: 无相互作用时为 x_0 · ∏，有相互作用时为 x_0^ν_0 · ∏
    """
    Q_PLAIN = "Q_plain"
    Q_WITH_A0 = "Q_with_a0"
    W = "W"
    Z = "Z"


_ALLOWED_CONVENTIONS = {
    SolventMode.NONE: {QuotientConvention.Q_PLAIN},
    SolventMode.NO_INTERACTION: {QuotientConvention.W, QuotientConvention.Q_WITH_A0,
                                 QuotientConvention.Z},
    SolventMode.INTERACTING: {QuotientConvention.Z},
}


@dataclass(frozen=True)
class Species:
    """物种参数

    Attributes:
        name: 物种名
        nu: 化学计量系数（带符号）；无相互作用溶剂取 0
        molar_mass: 摩尔质量 kg/mol
        molar_volume: 摩尔体积 m³/mol（Raoult 误差项使用）
        henry_constant: Henry 常数 Pa（Henry 误差项使用）
        heat_capacity: 比热容函数 T → J/(kg·K)
        density: 密度函数 (T, P) → kg/m³
        is_solvent: 是否为溶剂（编号 0）
    """
    name: str
    nu: float
    molar_mass: float = 1.0
    molar_volume: Optional[float] = None
    henry_constant: Optional[float] = None
    heat_capacity: Optional[Callable[[float], float]] = None
    density: Optional[Callable[[float, float], float]] = None
    is_solvent: bool = False

    def __post_init__(self):
        if not self.molar_mass > 0:
            raise ConfigError("摩尔质量必须 > 0", field=f"species.{self.name}.molar_mass")
        if self.henry_constant is not None and not self.henry_constant > 0:
            raise ConfigError("Henry 常数必须 > 0", field=f"species.{self.name}.henry_constant")


@dataclass(frozen=True)
class ReactionSystem:
    """反应体系

    溶剂（如有）固定位于下标 0，其余为溶质/反应物。
    """
    species: Tuple[Species, ...]
    solvent_mode: SolventMode = SolventMode.NONE
    quotient_convention: QuotientConvention = QuotientConvention.Q_PLAIN
    p_standard: float = P_STANDARD
    gas_constant: float = R
    faraday: float = F

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        if not self.p_standard > 0:
            raise ConfigError("标准压力必须 > 0", field="system.p_standard")

        solvents = [i for i, s in enumerate(self.species) if s.is_solvent]
        if self.solvent_mode is SolventMode.NONE:
            if solvents:
                raise ConfigError("solvent_mode=none 时不能声明溶剂", field="system.solvent_mode")
        else:
            if solvents != [0]:
                raise ConfigError("必须且只能在第一个位置声明一个溶剂", field="system.species")
            nu0 = self.species[0].nu
            if self.solvent_mode is SolventMode.NO_INTERACTION and nu0 != 0:
                raise ConfigError("无相互作用溶剂的化学计量系数必须为 0",
                                  field=f"species.{self.species[0].name}.nu")
            if self.solvent_mode is SolventMode.INTERACTING and nu0 == 0:
                raise ConfigError("相互作用溶剂的化学计量系数不能为 0",
                                  field=f"species.{self.species[0].name}.nu")

        solutes = [s for s in self.species if not s.is_solvent]
        if len(solutes) < 2:
            raise ConfigError("至少需要 2 个非溶剂物种", field="system.species")
        for s in solutes:
            if s.nu == 0:
                raise ConfigError("非溶剂物种的化学计量系数不能为 0", field=f"species.{s.name}.nu")

        if self.quotient_convention not in _ALLOWED_CONVENTIONS[self.solvent_mode]:
            raise ConfigError(
                f"约定 {self.quotient_convention.value} 与溶剂模式 {self.solvent_mode.value} 不一致",
                field="system.quotient_convention",
            )

    @property
    def has_solvent(self) -> bool:
        return self.solvent_mode is not SolventMode.NONE

    @property
    def size(self) -> int:
        return len(self.species)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.species)

    @property
    def nu(self) -> np.ndarray:
        """所有物种（含溶剂）的化学计量系数"""
        return np.array([s.nu for s in self.species], dtype=float)

    @property
    def extent_coefficients(self) -> np.ndarray:
        """n_i = n_i0 + m_i·ξ 中的 m_i；无相互作用溶剂固定不变"""
        return self.nu

    @property
    def quotient_exponents(self) -> np.ndarray:
        """活度商中各物种摩尔分数的指数"""
        exponents = self.nu.copy()
        if self.has_solvent:
            convention = self.quotient_convention
            if convention is QuotientConvention.W:
                exponents[0] = 0.0
            elif convention is QuotientConvention.Q_WITH_A0:
                exponents[0] = 1.0
            elif self.solvent_mode is SolventMode.NO_INTERACTION:
                # Z 约定下，不参与反应的溶剂以指数 1 进入
                exponents[0] = 1.0
        return exponents

    def index_of(self, name: str) -> int:
        for i, s in enumerate(self.species):
            if s.name == name:
                return i
        raise ConfigError(f"未知物种 '{name}'", field="species")

    def with_scaled_nu(self, factor: float) -> "ReactionSystem":
        """返回化学计量系数整体缩放后的体系"""
        scaled = tuple(
            Species(s.name, s.nu * factor, s.molar_mass, s.molar_volume, s.henry_constant,
                    s.heat_capacity, s.density, s.is_solvent)
            for s in self.species
        )
        return ReactionSystem(scaled, self.solvent_mode, self.quotient_convention,
                              self.p_standard, self.gas_constant, self.faraday)


@dataclass(frozen=True)
class MixtureState:
    """热力学状态点 (T, P, n_0..n_c)"""
    T: float
    P: float
    amounts: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "amounts", tuple(float(a) for a in self.amounts))
        if not self.T > 0:
            raise ConfigError("温度必须 > 0", field="state.T")
        if not self.P > 0:
            raise ConfigError("压力必须 > 0", field="state.P")

    @property
    def n(self) -> np.ndarray:
        return np.asarray(self.amounts, dtype=float)

    @property
    def total(self) -> float:
        return float(np.sum(self.n))

    def with_amounts(self, amounts: Sequence[float]) -> "MixtureState":
        return MixtureState(self.T, self.P, tuple(amounts))
