"""
electrochem/cell.py - 带误差项的 Nernst 方程
标准电池 n_e = 2，催化器 n_e = 4；电位差与 ∂G/∂ξ 之间的正反换算
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from ..core.constants import F, R
from ..core.exceptions import ConfigError, DomainError
from ..core.fields import Field, as_field
from ..core.gibbs_model import AffineGibbsModel, RegimeTag, log_quotient

logger = logging.getLogger(__name__)


@dataclass
class CellSpec:
    """电化学电池

    quotient 为电池实测活度商的来源 q(T, P)；缺省时使用模型的闭式活度商，
    其约定（Q、W 或 Z）由误差模型的模式决定。
    dg_standard 为 P° 处的 ΔG°(T) J/mol（如热化学表），缺省取模型的标准部分。
    """
    n_electrons: int
    model: AffineGibbsModel
    errors: object = None
    e_standard: Optional[Field] = None
    quotient: Optional[Field] = None
    dg_standard: Optional[Field] = None
    faraday: float = F
    gas_constant: float = R

    def __post_init__(self):
        if isinstance(self.n_electrons, bool) or int(self.n_electrons) != self.n_electrons \
                or self.n_electrons < 1:
            raise ConfigError(f"电子数必须为正整数，实际 {self.n_electrons!r}",
                              field="cell.n_electrons")
        self.n_electrons = int(self.n_electrons)
        if not self.faraday > 0:
            raise ConfigError("法拉第常数必须 > 0", field="system.faraday")
        if self.e_standard is not None:
            self.e_standard = as_field(self.e_standard, "cell.e_standard")
        if self.quotient is not None:
            self.quotient = as_field(self.quotient, "cell.quotient")
        if self.dg_standard is not None:
            self.dg_standard = as_field(self.dg_standard, "cell.dg_standard")
        if self.errors is not None:
            self.gas_constant = self.errors.gas_constant

    @property
    def regime(self) -> RegimeTag:
        return RegimeTag.IDEALIZED if self.errors is None else self.errors.regime

    @property
    def charge(self) -> float:
        """n_e·F C/mol"""
        return self.n_electrons * self.faraday

    def eps_err(self, T: float, P: float) -> float:
        return 0.0 if self.errors is None else self.errors.epsilon(T, P)

    def log_q(self, T: float, P: float) -> float:
        """
        ln q(T, P)

        Raises:
            DomainError: q ≤ 0 或不是有限值
        """
        if self.quotient is None:
            return log_quotient(self.model, self.errors, T, P)
        q = self.quotient(T, P)
        if not (math.isfinite(q) and q > 0):
            raise DomainError(f"活度商 q(T={T!r}, P={P!r}) = {q!r} 必须 > 0")
        return math.log(q)

    def standard_potential(self, T: float) -> float:
        """E°(T) V；表格形式不外推"""
        if self.e_standard is None:
            raise ConfigError("未给出标准电位 E°(T)", field="cell.e_standard")
        return self.e_standard(T)

    def dg_at_standard_pressure(self, T: float) -> float:
        """∂G/∂ξ|_{(T,P°)}"""
        if self.dg_standard is not None:
            return self.dg_standard(T, self.model.p_standard)
        return self.model.delta_g_standard(T)


def nernst_offset(T: float, log_q: float, eps_err: float, n_electrons: int,
                  faraday: float = F, gas_constant: float = R) -> float:
    """E − E° = −(RT·ln q + ε)/(n_e·F)"""
    return -(gas_constant * T * log_q + eps_err) / (n_electrons * faraday)


def nernst_potential(cell: CellSpec, T: float, P: float) -> float:
    """
    Nernst 电位差 E − E° V

    Args:
        cell: 电池
        T: 温度 K
        P: 压力 Pa

    Raises:
        DomainError: 活度商不可计算或 ≤ 0
    """
    return nernst_offset(T, cell.log_q(T, P), cell.eps_err(T, P), cell.n_electrons,
                         cell.faraday, cell.gas_constant)


def delta_g_from_potential(cell: CellSpec, E: float, E_standard: float,
                           a0_standard: Optional[float] = None,
                           T: Optional[float] = None) -> float:
    """
    ΔG° = n_e·F·(E − E°)

    给出 a0_standard（P° 处的溶剂活度）时再加上 RT·ln a₀，此时需要温度 T。
    """
    value = cell.charge * (E - E_standard)
    if a0_standard is not None:
        if T is None or not T > 0:
            raise ConfigError("溶剂活度修正需要温度 T > 0", field="cell.T")
        if not a0_standard > 0:
            raise DomainError(f"溶剂活度 a0 = {a0_standard!r} 必须 > 0")
        value += cell.gas_constant * T * math.log(a0_standard)
    return value


def dg_dxi_from_measurement(cell: CellSpec, T: float, P: float, E: float, E_standard: float,
                            dg_at_p_standard: float) -> float:
    """
    由测得电位反解 ∂G/∂ξ：
    n_e·F·(E − E°) + ∂G/∂ξ|_{P°} + RT·ln q + ε
    """
    return (cell.charge * (E - E_standard) + dg_at_p_standard
            + cell.gas_constant * T * cell.log_q(T, P) + cell.eps_err(T, P))


def cell_potential(cell: CellSpec, T: float, P: float,
                   model: Optional[AffineGibbsModel] = None) -> float:
    """
    正向关系给出的电位差 E − E° V

    (∂G/∂ξ|_{(T,P)} − ∂G/∂ξ|_{(T,P°)} − RT·ln q − ε)/(n_e·F)；
    model 缺省为电池自身的模型。
    """
    model = model or cell.model
    dg_shift = model.dg_dxi(T, P) - model.delta_g_standard(T)
    return (dg_shift - cell.gas_constant * T * cell.log_q(T, P)
            - cell.eps_err(T, P)) / cell.charge
