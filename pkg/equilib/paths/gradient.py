"""
paths/gradient.py - 活度商的梯度与最大反应路径的斜率

内部使用缩放坐标 u = T/T_ref、v = P/P°，区域判据 |grad Q| ≥ 1 在缩放坐标中计算。
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from ..core.constants import R, T_REF
from ..core.exceptions import DomainError
from ..core.gibbs_model import AffineGibbsModel, log_quotient


@dataclass(frozen=True)
class Gradient:
    """某点处的活度商及其梯度"""
    quotient: float
    d_T: float
    d_P: float
    d_u: float
    d_v: float
    analytic: bool

    @property
    def norm(self) -> float:
        """缩放坐标下的 |grad Q|"""
        return math.hypot(self.d_u, self.d_v)

    @property
    def raw(self) -> Tuple[float, float]:
        return self.d_T, self.d_P


def _partials(errors, T: float, P: float) -> Tuple[float, float, float, bool]:
    if errors is None:
        return 0.0, 0.0, 0.0, True
    eps_err = errors.epsilon(T, P)
    partials = errors.epsilon_partials(T, P)
    return eps_err, partials.d_T, partials.d_P, partials.analytic


def _gas_constant(errors) -> float:
    return errors.gas_constant if errors is not None else R


def gradient_at(model: AffineGibbsModel, errors, T: float, P: float,
                t_ref: float = T_REF) -> Gradient:
    """
    闭式梯度

    ∂Q/∂T = Q·[−(ε·ln(P/P°) − ε_err)/(RT²) − ∂ε/∂T/(RT)]
    ∂Q/∂P = Q·[ε/(RTP) − ∂ε/∂P/(RT)]

    Raises:
        DomainError: Q 下溢为 0 或上溢
    """
    rt = _gas_constant(errors) * T
    ln_q = log_quotient(model, errors, T, P)
    q = math.exp(ln_q) if ln_q < 709.0 else math.inf
    if not q > 0 or not math.isfinite(q):
        raise DomainError(f"(T={T!r}, P={P!r}) 处 Q={q!r} 不在 (0, ∞) 内")
    eps_err, e_t, e_p, analytic = _partials(errors, T, P)
    d_t = q * (-(model.eps * math.log(P / model.p_standard) - eps_err) / (rt * T) - e_t / rt)
    d_p = q * (model.eps / (rt * P) - e_p / rt)
    return Gradient(q, d_t, d_p, t_ref * d_t, model.p_standard * d_p, analytic)


def grad_quotient(model: AffineGibbsModel, errors, T: float, P: float) -> Tuple[float, float]:
    """(∂Q/∂T, ∂Q/∂P)，原始单位"""
    return gradient_at(model, errors, T, P).raw


def maximal_path_slope(model: AffineGibbsModel, errors, T: float, P: float,
                       t_ref: float = T_REF) -> float:
    """
    最大反应路径在缩放坐标中的斜率 dv/du

    原始单位下 ∂Q/∂P ÷ ∂Q/∂T = T·(ε − P·∂ε/∂P) / (P·(−ε·ln(P/P°) + ε_err − T·∂ε/∂T))，
    缩放坐标中的梯度流满足 dv/du = (P°/T_ref)·∂Q/∂P ÷ ∂Q/∂T。∂Q/∂T = 0 时返回 ±inf。
    """
    eps_err, e_t, e_p, _ = _partials(errors, T, P)
    numerator = T * (model.eps - P * e_p)
    denominator = P * (-model.eps * math.log(P / model.p_standard) + eps_err - T * e_t)
    p_std = model.p_standard
    if denominator == 0.0:
        return math.copysign(math.inf, numerator) if numerator else math.nan
    return (p_std / t_ref) * numerator / denominator


def in_region(gradient: Gradient) -> bool:
    """闭区域 |grad Q| ≥ 1 且 Q > 0"""
    return gradient.quotient > 0 and gradient.norm >= 1.0


def unit_direction(gradient: Gradient) -> Optional[Tuple[float, float]]:
    norm = gradient.norm
    if norm == 0.0:
        return None
    return gradient.d_u / norm, gradient.d_v / norm
