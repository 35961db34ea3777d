"""
core/enthalpy.py - ΔH° 的温度依赖（Kirchhoff 修正）与误差泛函 w(T1, T2)

反应热容 C(T) = −(1/m_mix)·Σ ν_i·m_i·C_i(T)，随混合物质量增大按 1/m_mix 趋于零。
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence, Tuple

from ..numerics.quadrature import integrate_piecewise
from .exceptions import ConfigError, DomainError
from .fields import AffineField, ConstantField, Field, TemperatureTableField, as_field
from .gibbs_model import gibbs_helmholtz_transport
from .system import ReactionSystem

logger = logging.getLogger(__name__)


def heat_capacity_from_config(spec: Any, name: str = "heat_capacity") -> Field:
    """
    比热容 C_i(T) J/(kg·K)：常数、{kind: affine, a, b_T} 或 {kind: table, T, values}
    """
    if isinstance(spec, dict) and spec.get("kind") == "table":
        unknown = set(spec) - {"kind", "T", "values"}
        if unknown:
            raise ConfigError(f"未知字段 {sorted(unknown)}", field=name)
        try:
            return TemperatureTableField(spec["T"], spec["values"], name=name)
        except KeyError as e:
            raise ConfigError(f"缺少字段 {e.args[0]}", field=name)
    field = as_field(spec, name)
    if field.depends_on_pressure:
        raise ConfigError("比热容只能依赖温度", field=name)
    return field


class MixtureHeatModel:
    """混合物热容模型"""

    def __init__(self, nu: Sequence[float], molar_masses: Sequence[float],
                 heat_capacities: Sequence[Any], m_mix: float, dh_ref: float, T0: float,
                 names: Optional[Sequence[str]] = None):
        """
        初始化

        Args:
            nu: 化学计量系数
            molar_masses: 摩尔质量 kg/mol
            heat_capacities: 比热容 C_i(T) J/(kg·K)
            m_mix: 混合物质量 kg
            dh_ref: T0 处的 ΔH° J/mol
            T0: 参考温度 K
            names: 物种名（用于错误信息）
        """
        if not (len(nu) == len(molar_masses) == len(heat_capacities)):
            raise ConfigError("nu、摩尔质量与比热容的长度不一致", field="enthalpy.species")
        if not m_mix > 0:
            raise ConfigError("混合物质量必须 > 0", field="enthalpy.m_mix")
        if not T0 > 0:
            raise ConfigError("参考温度必须 > 0", field="enthalpy.T0")

        self.nu = [float(v) for v in nu]
        self.molar_masses = [float(m) for m in molar_masses]
        self.names = list(names) if names is not None else [f"species_{i}" for i in range(len(nu))]
        self.heat_capacities = [
            heat_capacity_from_config(c, f"enthalpy.heat_capacity.{n}")
            for c, n in zip(heat_capacities, self.names)
        ]
        self.m_mix = float(m_mix)
        self.dh_ref = float(dh_ref)
        self.T0 = float(T0)
        self.logger = logging.getLogger(self.__class__.__name__)

        self.linear_coefficients = self._linear_coefficients()
        self.knots = tuple(sorted({k for c in self.heat_capacities for k in c.knots}))
        self.logger.debug(f"热容模型: {self!r}")

    @classmethod
    def from_system(cls, system: ReactionSystem, heat_capacities: Dict[str, Any],
                    m_mix: float, dh_ref: float, T0: float) -> "MixtureHeatModel":
        """按物种名从体系中取 ν 与摩尔质量；不参与反应的溶剂可省略比热容"""
        nu, masses, caps, names = [], [], [], []
        for s in system.species:
            if s.name not in heat_capacities:
                if s.nu == 0:
                    continue
                if s.heat_capacity is None:
                    raise ConfigError("缺少比热容", field=f"enthalpy.heat_capacity.{s.name}")
                heat_capacities = {**heat_capacities, s.name: s.heat_capacity}
            nu.append(s.nu)
            masses.append(s.molar_mass)
            caps.append(heat_capacities[s.name])
            names.append(s.name)
        unknown = set(heat_capacities) - set(system.names)
        if unknown:
            raise ConfigError(f"未知物种 {sorted(unknown)}", field="enthalpy.heat_capacity")
        return cls(nu, masses, caps, m_mix, dh_ref, T0, names)

    def _linear_coefficients(self) -> Optional[Tuple[float, float]]:
        """C(T) = c0 + c1·T 时返回 (c0, c1)"""
        c0, c1 = 0.0, 0.0
        for nu, m, cap in zip(self.nu, self.molar_masses, self.heat_capacities):
            if isinstance(cap, ConstantField):
                a, b = cap.value, 0.0
            elif isinstance(cap, AffineField):
                a, b = cap.a, cap.b_T
            else:
                return None
            c0 -= nu * m * a / self.m_mix
            c1 -= nu * m * b / self.m_mix
        return c0, c1

    def _capacity(self, i: int, T: float) -> float:
        try:
            value = self.heat_capacities[i](T)
        except DomainError as e:
            raise DomainError(str(e), species=self.names[i])
        if not value > 0:
            raise DomainError(f"比热容 C({T!r}) = {value!r} 必须 > 0", species=self.names[i])
        return value

    def reaction_heat_capacity(self, T: float) -> float:
        """C(T) = −(1/m_mix)·Σ ν_i·m_i·C_i(T) J/(mol·K)"""
        if not T > 0:
            raise ConfigError("温度必须 > 0", field="T")
        total = sum(nu * m * self._capacity(i, T)
                    for i, (nu, m) in enumerate(zip(self.nu, self.molar_masses)))
        return -total / self.m_mix

    def delta_h(self, T: float) -> float:
        """ΔH°(T) = ΔH°(T0) + ∫_{T0}^{T} C(S) dS"""
        return self.dh_ref + self.enthalpy_shift(T)

    def enthalpy_shift(self, T: float) -> float:
        """v(T) = ΔH°(T) − ΔH°(T0)"""
        if self.linear_coefficients is not None:
            # 端点合法性检查
            self.reaction_heat_capacity(T)
            c0, c1 = self.linear_coefficients
            return c0 * (T - self.T0) + 0.5 * c1 * (T * T - self.T0 * self.T0)
        value, _ = integrate_piecewise(self.reaction_heat_capacity, self.T0, T, self.knots,
                                       rtol=1e-12)
        return value

    def capacity_sup(self, T1: float, T2: float) -> float:
        """
        sup |C(T)|，在 [T0, T1, T2] 所张区间上取值

        比热容为常数、仿射或分段线性时，极值只出现在端点和表格节点上。
        """
        lo, hi = min(self.T0, T1, T2), max(self.T0, T1, T2)
        points = [lo, hi] + [k for k in self.knots if lo < k < hi]
        return max(abs(self.reaction_heat_capacity(t)) for t in points)

    def __repr__(self) -> str:
        return (f"MixtureHeatModel(species={self.names}, m_mix={self.m_mix!r}, "
                f"dh_ref={self.dh_ref!r}, T0={self.T0!r})")


def reaction_heat_capacity(hm: MixtureHeatModel, T: float) -> float:
    """反应热容 J/(mol·K)"""
    return hm.reaction_heat_capacity(T)


def delta_h_of_T(hm: MixtureHeatModel, T: float) -> float:
    """
    ΔH°(T) J/mol

    比热容为常数或仿射时用闭式，否则在表格节点处分段做自适应 Simpson 积分。

    Raises:
        DomainError: 积分区间超出比热容表格范围
    """
    return hm.delta_h(T)


def error_w(hm: MixtureHeatModel, T1: float, T2: float, rtol: float = 1e-10) -> float:
    """
    w(T1, T2) = T1·∫_{T1}^{T2} v(S)/S² dS，其中 v(S) = ΔH°(S) − ΔH°(T0)

    Gibbs-Helmholtz 迁移在 ΔH° 随温度变化时的修正量：
    ΔG°(T1) = (T1/T2)·ΔG°(T2) − (T1/T2 − 1)·ΔH°(T0) + w(T1, T2)
    """
    if not (T1 > 0 and T2 > 0):
        raise ConfigError("温度必须 > 0", field="T")
    if T1 == T2:
        return 0.0

    if hm.linear_coefficients is not None:
        hm.reaction_heat_capacity(T1)
        hm.reaction_heat_capacity(T2)
        c0, c1 = hm.linear_coefficients
        T0 = hm.T0
        inv = 1.0 / T2 - 1.0 / T1
        integral = (c0 * (math.log(T2 / T1) + T0 * inv)
                    + 0.5 * c1 * ((T2 - T1) + T0 * T0 * inv))
        return T1 * integral

    value, _ = integrate_piecewise(lambda s: hm.enthalpy_shift(s) / (s * s), T1, T2,
                                   hm.knots, rtol=rtol)
    return T1 * value


def bound_w(hm: MixtureHeatModel, T1: float, T2: float, c_bound: float) -> float:
    """
    |w(T1, T2)| 的上界 T1·C_bound·∫_{T1}^{T2} |S − T0|/S² dS（闭式）

    Args:
        c_bound: sup |C(T)|，J/(mol·K)
    """
    if not (T1 > 0 and T2 > 0):
        raise ConfigError("温度必须 > 0", field="T")
    if c_bound < 0:
        raise ConfigError("C_bound 必须 ≥ 0", field="enthalpy.c_bound")
    T0 = hm.T0
    lo, hi = min(T1, T2), max(T1, T2)

    def antiderivative(s: float) -> float:
        return math.log(s) + T0 / s

    cuts = [lo] + ([T0] if lo < T0 < hi else []) + [hi]
    integral = sum(abs(antiderivative(b) - antiderivative(a)) for a, b in zip(cuts[:-1], cuts[1:]))
    return T1 * c_bound * integral


def transport_delta_g(hm: MixtureHeatModel, dg2: float, T1: float, T2: float) -> float:
    """把 ΔG°(T2) 迁移到 T1，并加上 ΔH° 随温度变化的修正 w(T1, T2)"""
    return gibbs_helmholtz_transport(dg2, hm.dh_ref, T1, T2) + error_w(hm, T1, T2)
