"""
core/error_model.py - 按模式汇总的误差项 ε(T, P)
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Type

from ..error_terms.fugacity import FugacityTerm, PotentialTerm
from ..error_terms.henry import HenryTerm
from ..error_terms.raoult import RaoultTerm
from ..error_terms.solvated import SolventActivityTerm
from .base_error_term import BaseErrorTerm, SeparablePart
from .constants import P_STANDARD, R
from .exceptions import ConfigError
from .gibbs_model import RegimeTag
from .system import ReactionSystem, SolventMode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpsilonPartials:
    """ε 的偏导数；analytic 为 False 表示至少有一项用了有限差分"""
    d_T: float
    d_P: float
    analytic: bool


# 各模式允许的误差项类型
_ALLOWED_TERMS: Dict[RegimeTag, Sequence[Type[BaseErrorTerm]]] = {
    RegimeTag.IDEALIZED: (),
    RegimeTag.IDEAL_RAOULT: (RaoultTerm,),
    RegimeTag.DILUTE_SOLVATED: (SolventActivityTerm,),
    RegimeTag.HENRY_INTERACTING: (HenryTerm, RaoultTerm),
    RegimeTag.HENRY_NO_INTERACTION: (HenryTerm,),
    RegimeTag.FUGACITY_INTERACTING: (FugacityTerm, PotentialTerm),
    RegimeTag.FUGACITY_NO_INTERACTION: (FugacityTerm, PotentialTerm),
}


class ErrorModel:
    """误差模型：模式标签加上一组误差项"""

    def __init__(self, regime: RegimeTag, terms: Sequence[BaseErrorTerm] = (),
                 gas_constant: float = R, p_standard: float = P_STANDARD):
        """
        初始化误差模型

        Args:
            regime: 模式标签
            terms: 误差项列表
            gas_constant: 摩尔气体常数
            p_standard: 标准压力
        """
        self.regime = regime
        self.terms: List[BaseErrorTerm] = list(terms)
        self.gas_constant = gas_constant
        self.p_standard = p_standard
        self.logger = logging.getLogger(self.__class__.__name__)

        allowed = _ALLOWED_TERMS[regime]
        for term in self.terms:
            if not allowed or not isinstance(term, tuple(allowed)):
                raise ConfigError(f"模式 {regime.value} 不接受误差项 {term!r}", field="errors")

    @classmethod
    def idealized(cls, gas_constant: float = R, p_standard: float = P_STANDARD) -> "ErrorModel":
        return cls(RegimeTag.IDEALIZED, (), gas_constant, p_standard)

    @property
    def signature(self) -> str:
        """ε 依赖的变量，取值为空串、P、T 或 TP"""
        letters = set("".join(t.signature for t in self.terms))
        return "".join(v for v in "TP" if v in letters)

    def epsilon(self, T: float, P: float) -> float:
        """
        误差项 ε(T, P) J/mol

        Raises:
            DomainError: 某个分量函数无定义，异常中给出物种名
        """
        if self.regime is RegimeTag.IDEALIZED:
            return 0.0
        return float(sum(term.value(T, P) for term in self.terms))

    def epsilon_partials(self, T: float, P: float) -> EpsilonPartials:
        """
        (∂ε/∂T, ∂ε/∂P)，闭式部分解析求导，用户函数部分用四阶中心差分
        """
        d_t, d_p, analytic = 0.0, 0.0, True
        if self.regime is RegimeTag.IDEALIZED:
            return EpsilonPartials(0.0, 0.0, True)
        for term in self.terms:
            t_part, p_part, exact = term.partials(T, P)
            d_t += t_part
            d_p += p_part
            analytic = analytic and exact
        return EpsilonPartials(d_t, d_p, analytic)

    def separable_pressure_part(self) -> Optional[SeparablePart]:
        """
        ε(T, P) = a(P) + b·T 时返回分解，否则 None
        """
        parts = []
        for term in self.terms:
            part = term.separable_part()
            if part is None:
                return None
            parts.append(part)
        if not parts:
            return SeparablePart(a=lambda P: 0.0, a_prime=lambda P: 0.0, b=0.0)
        return SeparablePart(
            a=lambda P: sum(p.a(P) for p in parts),
            a_prime=lambda P: sum(p.a_prime(P) for p in parts),
            b=sum(p.b for p in parts),
        )

    def scaled(self, factor: float) -> "ErrorModel":
        """所有化学计量系数乘以 factor"""
        return ErrorModel(self.regime, [t.scaled(factor) for t in self.terms],
                          self.gas_constant, self.p_standard)

    def __repr__(self) -> str:
        return f"ErrorModel(regime={self.regime.value}, terms={self.terms!r})"


def create_error_model(system: ReactionSystem, regime: RegimeTag,
                       settings: Optional[Dict[str, Dict[str, Any]]] = None) -> ErrorModel:
    """
    根据模式为体系创建误差模型

    Args:
        system: 反应体系
        regime: 模式
        settings: 按物种名给出的误差参数，例如
            {"A": {"p_star": 9e4, "p_prime": 1.1e5}, "H2O": {"a0": 0.98}}

    Returns:
        ErrorModel
    """
    settings = settings or {}
    unknown = set(settings) - set(system.names)
    if unknown:
        raise ConfigError(f"未知物种 {sorted(unknown)}", field="errors")

    R_ = system.gas_constant
    p_std = system.p_standard
    solvent = system.species[0] if system.has_solvent else None
    solutes = [s for s in system.species if not s.is_solvent]
    terms: List[BaseErrorTerm] = []

    def entry(name: str, key: str, default: Any = None) -> Any:
        value = settings.get(name, {}).get(key, default)
        if value is None:
            raise ConfigError(f"模式 {regime.value} 需要参数 {key}", field=f"errors.{name}.{key}")
        return value

    if regime is RegimeTag.IDEALIZED:
        pass
    elif regime is RegimeTag.IDEAL_RAOULT:
        for s in solutes:
            terms.append(RaoultTerm(s.name, s.nu, s.molar_volume, entry(s.name, "p_star"),
                                    entry(s.name, "p_prime", p_std)))
    elif regime is RegimeTag.DILUTE_SOLVATED:
        if solvent is None:
            raise ConfigError("dilute_solvated 模式需要声明溶剂", field="system.solvent_mode")
        terms.append(SolventActivityTerm(solvent.name, entry(solvent.name, "a0", 1.0), R_))
    elif regime in (RegimeTag.HENRY_INTERACTING, RegimeTag.FUGACITY_INTERACTING):
        if system.solvent_mode is not SolventMode.INTERACTING:
            raise ConfigError(f"{regime.value} 模式需要 solvent_mode=interacting",
                              field="system.solvent_mode")
        if regime is RegimeTag.HENRY_INTERACTING:
            terms.append(RaoultTerm(solvent.name, solvent.nu, solvent.molar_volume,
                                    entry(solvent.name, "p_star"),
                                    entry(solvent.name, "p_prime", p_std)))
            terms.extend(HenryTerm(s.name, s.nu, s.henry_constant, p_std, R_) for s in solutes)
        else:
            terms.append(PotentialTerm(solvent.name, solvent.nu, entry(solvent.name, "phi0")))
            terms.extend(_fugacity_term(s, settings, p_std, R_) for s in solutes)
    else:
        if system.solvent_mode is SolventMode.INTERACTING:
            raise ConfigError(f"{regime.value} 模式不允许相互作用溶剂",
                              field="system.solvent_mode")
        if regime is RegimeTag.HENRY_NO_INTERACTION:
            terms.extend(HenryTerm(s.name, s.nu, s.henry_constant, p_std, R_) for s in solutes)
        else:
            terms.extend(_fugacity_term(s, settings, p_std, R_) for s in solutes)

    model = ErrorModel(regime, terms, R_, p_std)
    logger.debug(f"误差模型: {model!r}")
    return model


def _fugacity_term(species, settings: Dict[str, Dict[str, Any]], p_std: float,
                   gas_constant: float) -> BaseErrorTerm:
    params = settings.get(species.name, {})
    if "psi" in params:
        return PotentialTerm(species.name, species.nu, params["psi"])
    return FugacityTerm(species.name, species.nu, species.henry_constant,
                        params.get("gamma", 1.0), params.get("delta", 1.0), p_std, gas_constant)
