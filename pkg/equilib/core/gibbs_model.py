"""
core/gibbs_model.py - ∂G/∂ξ 的仿射模型
包含标准 Gibbs 能与焓、van't Hoff / Gibbs-Helmholtz 迁移、平衡判定、
各模式下的活度商闭式以及由样本拟合模型
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..numerics.quadrature import adaptive_simpson
from ..numerics.roots import bracket_root
from .constants import ATOL_EQUILIBRIUM, P_STANDARD, R
from .exceptions import ConfigError, DegenerateModel, FitError, NoRoot

logger = logging.getLogger(__name__)


class RegimeTag(Enum):
    """误差模式"""
    IDEALIZED = "idealized"
    IDEAL_RAOULT = "ideal_raoult"
    DILUTE_SOLVATED = "dilute_solvated"
    HENRY_INTERACTING = "henry_interacting"
    FUGACITY_INTERACTING = "fugacity_interacting"
    HENRY_NO_INTERACTION = "henry_no_interaction"
    FUGACITY_NO_INTERACTION = "fugacity_no_interaction"

    @classmethod
    def parse(cls, value: str) -> "RegimeTag":
        try:
            return cls(value.lower())
        except ValueError:
            allowed = ", ".join(t.value for t in cls)
            raise ConfigError(f"未知模式 '{value}'，可选: {allowed}", field="regime")


@dataclass(frozen=True)
class AffineGibbsModel:
    """∂G/∂ξ = λ′ + ε·ln(P/P°) + β·T + σ·ln T

    lam 存储的是已并入 ε·ln P° 的 λ′，保证结果与压力单位无关。
    """
    lam: float
    eps: float = 0.0
    beta: float = 0.0
    sigma: float = 0.0
    p_standard: float = P_STANDARD

    def __post_init__(self):
        for name in ("lam", "eps", "beta", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError("系数必须为有限值", field=f"model.{name}")
        if not self.p_standard > 0:
            raise ConfigError("标准压力必须 > 0", field="model.p_standard")

    @classmethod
    def from_raw(cls, lambda_raw: float, eps: float = 0.0, beta: float = 0.0,
                 sigma: float = 0.0, p_standard: float = P_STANDARD) -> "AffineGibbsModel":
        """由 λ + ε·ln P（P 以 Pa 计）形式的系数构造"""
        return cls(lambda_raw + eps * math.log(p_standard), eps, beta, sigma, p_standard)

    def dg_dxi(self, T: float, P: float) -> float:
        """(∂G/∂ξ)_{T,P} J/mol"""
        if not (T > 0 and P > 0):
            raise ConfigError(f"需要 T > 0 且 P > 0，实际 T={T!r}, P={P!r}", field="state")
        return (self.lam + self.eps * math.log(P / self.p_standard)
                + self.beta * T + self.sigma * math.log(T))

    def delta_g_standard(self, T: float) -> float:
        """ΔG°(T) = ∂G/∂ξ 在 P° 处的值"""
        return self.dg_dxi(T, self.p_standard)

    def delta_h_standard(self, T: float) -> float:
        """由 Gibbs-Helmholtz 关系得到的 ΔH°(T) = λ′ + σ(ln T − 1)"""
        if not T > 0:
            raise ConfigError("温度必须 > 0", field="state.T")
        return self.lam + self.sigma * (math.log(T) - 1.0)


def gibbs_helmholtz_transport(dg2: float, dh: float, T1: float, T2: float) -> float:
    """
    把 ΔG°(T2) 迁移到 T1：(T1/T2)·ΔG°(T2) − (T1/T2 − 1)·ΔH°
    """
    if not (T1 > 0 and T2 > 0):
        raise ConfigError("温度必须 > 0", field="T")
    ratio = T1 / T2
    return ratio * dg2 - dh * (ratio - 1.0)


DeltaH = Union[float, Callable[[float], float]]


def vant_hoff_log_ratio(dh: DeltaH, T1: float, T2: float,
                        eps_fn: Optional[Callable[[float, float], float]] = None,
                        P_of_T: Optional[Callable[[float], float]] = None,
                        gas_constant: float = R, rtol: float = 1e-10) -> float:
    """
    ln(Q(T2)/Q(T1))，沿路径 P(T) 并计入误差项

    dh 可以是常数，也可以是温度的函数（此时对 ΔH°/(RT²) 做自适应积分）。

    Args:
        dh: ΔH° J/mol 或 T → ΔH°(T)
        T1: 起点温度
        T2: 终点温度
        eps_fn: 误差项 (T, P) → J/mol
        P_of_T: 路径 T → P

    Returns:
        无量纲对数比
    """
    if not (T1 > 0 and T2 > 0):
        raise ConfigError("温度必须 > 0", field="T")
    if (eps_fn is None) != (P_of_T is None):
        raise ConfigError("eps_fn 与 P_of_T 必须同时给出", field="eps_fn")

    if callable(dh):
        integral, _ = adaptive_simpson(lambda t: dh(t) / (t * t), T1, T2, rtol=rtol)
        value = integral / gas_constant
    else:
        value = -dh / gas_constant * (1.0 / T2 - 1.0 / T1)

    if eps_fn is not None:
        e1 = eps_fn(T1, P_of_T(T1))
        e2 = eps_fn(T2, P_of_T(T2))
        value += (e1 / T1 - e2 / T2) / gas_constant
    return value


def quotient_closed_form(model: AffineGibbsModel, errors, T: float, P: float) -> float:
    """
    活度商闭式 Q = exp((ε·ln(P/P°) − ε_err(T,P)) / RT)

    Args:
        model: 仿射模型
        errors: 误差模型（ErrorModel），None 表示理想化
        T: 温度 K
        P: 压力 Pa
    """
    return math.exp(log_quotient(model, errors, T, P))


def log_quotient(model: AffineGibbsModel, errors, T: float, P: float) -> float:
    """ln Q 的闭式"""
    rt = _gas_constant(errors) * T
    eps_err = errors.epsilon(T, P) if errors is not None else 0.0
    return (model.eps * math.log(P / model.p_standard) - eps_err) / rt


def _gas_constant(errors) -> float:
    return errors.gas_constant if errors is not None else R


@dataclass(frozen=True)
class PointClassification:
    """状态点的平衡判定"""
    chemical_eq: bool
    quotient: float
    dg_dxi: float
    delta_g_standard: float
    eps_err: float
    residual: float


def classify_point(model: AffineGibbsModel, errors, T: float, P: float,
                   atol_eq: float = ATOL_EQUILIBRIUM) -> PointClassification:
    """
    判定 (T, P) 是否为化学平衡点

    chemical_eq ⇔ |∂G/∂ξ| ≤ atol_eq；residual = ln Q + (ΔG° + ε_err)/RT，
    平衡时为零。
    """
    dg = model.dg_dxi(T, P)
    dg_std = model.delta_g_standard(T)
    eps_err = errors.epsilon(T, P) if errors is not None else 0.0
    ln_q = log_quotient(model, errors, T, P)
    residual = ln_q + (dg_std + eps_err) / (_gas_constant(errors) * T)
    return PointClassification(abs(dg) <= atol_eq, math.exp(ln_q), dg, dg_std, eps_err,
                               residual)


def equilibrium_temperature(model: AffineGibbsModel, level: float = 0.0,
                            rtol: float = 1e-12) -> List[float]:
    """
    求 λ′ + β·T + σ·ln T = level 的全部正根（即 P° 处的平衡温度）

    β、σ 同号时根唯一；异号时在 T1 = −σ/β 两侧各至多一个根，
    极值恰为零时只有 T1 一个根。

    Raises:
        NoRoot: β = σ = 0 且 λ′ ≠ level
        DegenerateModel: β = σ = 0 且 λ′ = level（处处平衡）
    """
    lam = model.lam - level
    beta, sigma = model.beta, model.sigma
    if model.eps != 0.0:
        logger.debug("ε ≠ 0，返回的是 P = P° 上的平衡温度")

    if beta == 0.0 and sigma == 0.0:
        if lam == 0.0:
            raise DegenerateModel("λ = β = σ = 0，任意 (T, P°) 均为平衡点")
        raise NoRoot(f"β = σ = 0 而 λ = {lam!r} ≠ 0，不存在平衡温度")
    if sigma == 0.0:
        root = -lam / beta
        return [root] if root > 0 else []
    if beta == 0.0:
        return [math.exp(-lam / sigma)]

    def g(t: float) -> float:
        return lam + beta * t + sigma * math.log(t)

    if (beta > 0) == (sigma > 0):
        # 单调：T → 0 时 g 与 β 异号，T → ∞ 时与 β 同号
        g_one = g(1.0)
        if g_one == 0.0:
            return [1.0]
        if (g_one > 0) == (beta > 0):
            return [bracket_root(g, _expand_down(g, 1.0), 1.0, rtol)]
        return [bracket_root(g, 1.0, _expand_up(g, 1.0), rtol)]

    t1 = -sigma / beta
    g1 = lam - sigma + sigma * math.log(t1)
    scale = max(abs(lam), abs(sigma), abs(beta * t1), abs(sigma * math.log(t1)), 1e-300)
    if abs(g1) <= 1e-12 * scale:
        return [t1]
    # β > 0 时 g1 为极小值，β < 0 时为极大值
    if (beta > 0 and g1 > 0) or (beta < 0 and g1 < 0):
        return []
    lo = _expand_down(g, t1)
    hi = _expand_up(g, t1)
    return [bracket_root(g, lo, t1, rtol), bracket_root(g, t1, hi, rtol)]


def _expand_down(g: Callable[[float], float], start: float) -> float:
    ref = math.copysign(1.0, g(start))
    t = start
    for _ in range(700):
        t *= 0.5
        if math.copysign(1.0, g(t)) != ref:
            return t
    raise NoRoot(f"在 (0, {start!r}) 内找不到变号点")


def _expand_up(g: Callable[[float], float], start: float) -> float:
    ref = math.copysign(1.0, g(start))
    t = start
    for _ in range(1100):
        t *= 2.0
        if not math.isfinite(t):
            break
        if math.copysign(1.0, g(t)) != ref:
            return t
    raise NoRoot(f"在 ({start!r}, ∞) 内找不到变号点")


@dataclass(frozen=True)
class ModelFit:
    """模型拟合结果"""
    model: AffineGibbsModel
    residual_rms: float
    sigma_refit: bool = False
    residual_increase: float = 0.0
    unconstrained_sigma: float = 0.0


_COEFFICIENTS = ("lam", "eps", "beta", "sigma")


def fit_model(samples: Sequence[Tuple[float, float, float]], p_standard: float = P_STANDARD,
              eps_tol: Optional[float] = None) -> ModelFit:
    """
    在基 (1, ln(P/P°), T, ln T) 上最小二乘拟合 (λ′, ε, β, σ)

    |ε| 超过容差时令 σ = 0 并在缩减基上重新拟合。

    Args:
        samples: (T, P, ∂G/∂ξ) 样本
        p_standard: 标准压力
        eps_tol: ε 的判零容差，默认 1e-9·max|∂G/∂ξ|

    Returns:
        ModelFit

    Raises:
        FitError: 设计矩阵秩亏，给出不可辨识的系数
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ConfigError("样本必须是 (T, P, dg_dxi) 三元组", field="model.fit_samples")
    if data.shape[0] < 4:
        raise ConfigError("至少需要 4 个样本", field="model.fit_samples")
    T, P, y = data[:, 0], data[:, 1], data[:, 2]
    if np.any(T <= 0) or np.any(P <= 0):
        raise ConfigError("样本的 T、P 必须 > 0", field="model.fit_samples")

    design = np.column_stack([np.ones_like(T), np.log(P / p_standard), T, np.log(T)])
    _check_rank(design)

    coef, rms = _lstsq(design, y)
    if eps_tol is None:
        eps_tol = 1e-9 * max(1.0, float(np.max(np.abs(y))))

    if abs(coef[1]) <= eps_tol:
        model = AffineGibbsModel(coef[0], coef[1], coef[2], coef[3], p_standard)
        logger.info(f"模型拟合完成: λ′={coef[0]!r}, ε={coef[1]!r}, β={coef[2]!r}, "
                    f"σ={coef[3]!r}, RMS={rms!r}")
        return ModelFit(model, rms)

    reduced, rms_reduced = _lstsq(design[:, :3], y)
    increase = rms_reduced - rms
    if abs(coef[3]) > eps_tol:
        logger.warning(f"ε ≠ 0 时 σ 应为 0，拟合得到 σ={coef[3]!r}；"
                       f"按 σ = 0 重新拟合，残差 RMS 增加 {increase!r}")
    model = AffineGibbsModel(reduced[0], reduced[1], reduced[2], 0.0, p_standard)
    logger.info(f"模型拟合完成: λ′={reduced[0]!r}, ε={reduced[1]!r}, β={reduced[2]!r}, "
                f"RMS={rms_reduced!r}")
    return ModelFit(model, rms_reduced, True, increase, float(coef[3]))


def _lstsq(design: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, float]:
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    return coef, float(np.sqrt(np.mean(residual ** 2)))


def _check_rank(design: np.ndarray) -> None:
    # 列尺度差异大，先按列归一化再判秩
    norms = np.linalg.norm(design, axis=0)
    norms[norms == 0] = 1.0
    scaled = design / norms
    full = np.linalg.matrix_rank(scaled, tol=1e-10)
    if full == design.shape[1]:
        return
    for name in ("eps", "sigma", "beta", "lam"):
        j = _COEFFICIENTS.index(name)
        others = np.delete(scaled, j, axis=1)
        if np.linalg.matrix_rank(others, tol=1e-10) == full:
            raise FitError(name)
    raise FitError("lam")


def quotient_along_curve(model: AffineGibbsModel, errors,
                         curve: Callable[[float], Tuple[float, float]]) -> Callable[[float], float]:
    """
    把 (T, P) 平面上的曲线 t ↦ (T(t), P(t)) 转换为活度商目标 t ↦ Q(T(t), P(t))

    Args:
        model: 仿射模型
        errors: 误差模型
        curve: t ∈ [0, 1] → (T, P)
    """
    def target(t: float) -> float:
        T, P = curve(t)
        return quotient_closed_form(model, errors, T, P)

    return target
