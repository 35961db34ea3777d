"""
paths/maximal.py - 最大反应路径
在 |grad Q| ≥ 1 的区域内沿单位化梯度场做定步长 RK4 积分，并沿途记录隐式不变量
"""

import logging
import math
from typing import Callable, Optional

import numpy as np

from ..core.constants import T_REF
from ..core.exceptions import DomainError, RegionError, SingularIntegrand
from ..core.gibbs_model import AffineGibbsModel
from ..numerics.ode import rk4_step
from ..numerics.quadrature import adaptive_simpson
from ..numerics.roots import bracket_root, sign_change_brackets
from .gradient import gradient_at, in_region
from .traced_path import PathKind, PathPoint, StopReason, TracedPath

logger = logging.getLogger(__name__)


class _LeftDomain(Exception):
    pass


class InvariantEvaluator:
    """最大反应路径的隐式不变量 F(v) + u²/2

    ε_err 可分离为 a(P) + b·T 时，令 A(v) = ε·ln v − a(P°·v)，
    F(v) = ∫₁ᵛ A(s)/A′(s) ds；无误差项时取闭式 F(v) = v²(ln v/2 − 1/4)。
    不可分离时不变量不存在，返回 nan。
    """

    def __init__(self, model: AffineGibbsModel, errors, t_ref: float = T_REF,
                 rtol: float = 1e-10):
        self.model = model
        self.errors = errors
        self.t_ref = t_ref
        self.rtol = rtol
        self.logger = logging.getLogger(self.__class__.__name__)

        self.closed_form = errors is None or not errors.terms
        self.part = None if self.closed_form else errors.separable_pressure_part()
        self.available = self.closed_form or self.part is not None
        if not self.available:
            self.logger.debug("误差项不可分离，最大反应路径的不变量记为 nan")

        # 增量积分的缓存 (v, F(v))
        self._last = (1.0, 0.0)

    def _a(self, v: float) -> float:
        p_std = self.model.p_standard
        return self.model.eps * math.log(v) - self.part.a(p_std * v)

    def _a_prime(self, v: float) -> float:
        p_std = self.model.p_standard
        return self.model.eps / v - p_std * self.part.a_prime(p_std * v)

    def integrand(self, v: float) -> float:
        return self._a(v) / self._a_prime(v)

    def _check_denominator(self, lo: float, hi: float) -> None:
        grid = np.linspace(lo, hi, 65)
        brackets = sign_change_brackets(self._a_prime, grid)
        if brackets:
            a, b = brackets[0]
            location = a if a == b else bracket_root(self._a_prime, a, b)
            raise SingularIntegrand(location)

    def potential(self, v: float) -> float:
        """F(v)"""
        if self.closed_form:
            return v * v * (0.5 * math.log(v) - 0.25)
        if not self.available:
            return math.nan
        start, value = self._last
        # 从缓存点出发只积分新增的一小段；距离过远时从 1 重新积分
        if abs(v - start) > abs(v - 1.0):
            start, value = 1.0, 0.0
        lo, hi = min(start, v), max(start, v)
        self._check_denominator(lo, hi)
        increment, _ = adaptive_simpson(self.integrand, start, v, rtol=self.rtol, atol=1e-15)
        value += increment
        self._last = (v, value)
        return value

    def __call__(self, T: float, P: float) -> float:
        u = T / self.t_ref
        return self.potential(P / self.model.p_standard) + 0.5 * u * u


def implicit_invariant(model: AffineGibbsModel, errors, T: float, P: float,
                       t_ref: float = T_REF) -> float:
    """
    最大反应路径的隐式不变量（缩放坐标）

    Raises:
        SingularIntegrand: A′ 在 [1, P/P°] 内变号
    """
    return InvariantEvaluator(model, errors, t_ref)(T, P)


def trace_maximal_reaction(model: AffineGibbsModel, errors, T0: float, P0: float,
                           step: float = 1e-2, max_steps: int = 10000, direction: int = 1,
                           t_ref: float = T_REF,
                           progress: Optional[Callable[[int], None]] = None) -> TracedPath:
    """
    追踪最大反应路径 d(u, v)/ds = ±grad Q/|grad Q|

    Args:
        model: 仿射模型
        errors: 误差模型（None 表示理想化）
        T0: 起点温度 K
        P0: 起点压力 Pa
        step: 缩放坐标下的弧长步长
        max_steps: 最大步数
        direction: +1 沿 Q 增大方向，−1 沿 Q 减小方向

    Returns:
        TracedPath，stop_reason 为 REGION_EXIT、DOMAIN_BOUNDARY 或 STEP_LIMIT

    Raises:
        RegionError: 起点不在区域内
    """
    if direction not in (1, -1):
        raise ValueError("direction 必须为 +1 或 −1")
    if not step > 0:
        raise ValueError("step 必须 > 0")

    p_std = model.p_standard
    start = gradient_at(model, errors, T0, P0, t_ref)
    if not in_region(start):
        raise RegionError(f"起点 (T={T0!r}, P={P0!r}) 不在 |grad Q| ≥ 1 的区域内", start.norm)

    invariant = InvariantEvaluator(model, errors, t_ref)

    def field(y: np.ndarray) -> np.ndarray:
        u, v = y
        if not (u > 0 and v > 0):
            raise _LeftDomain()
        try:
            g = gradient_at(model, errors, u * t_ref, v * p_std, t_ref)
        except DomainError:
            raise _LeftDomain()
        norm = g.norm
        if norm == 0.0:
            return np.zeros(2)
        return direction * np.array([g.d_u, g.d_v]) / norm

    path = TracedPath(PathKind.MAXIMAL_REACTION)
    path.points.append(PathPoint(0.0, T0, P0, start.quotient, invariant(T0, P0), start.norm))
    y = np.array([T0 / t_ref, P0 / p_std])
    path.stop_reason = StopReason.STEP_LIMIT

    for k in range(1, max_steps + 1):
        try:
            y_next = rk4_step(field, y, step)
        except _LeftDomain:
            path.stop_reason = StopReason.DOMAIN_BOUNDARY
            break
        if not (y_next[0] > 0 and y_next[1] > 0) or not np.all(np.isfinite(y_next)):
            path.stop_reason = StopReason.DOMAIN_BOUNDARY
            break
        T, P = float(y_next[0] * t_ref), float(y_next[1] * p_std)
        try:
            g = gradient_at(model, errors, T, P, t_ref)
        except DomainError:
            path.stop_reason = StopReason.DOMAIN_BOUNDARY
            break
        if not in_region(g):
            path.stop_reason = StopReason.REGION_EXIT
            path.exit_point = PathPoint(k * step, T, P, g.quotient, invariant(T, P), g.norm)
            break
        path.points.append(PathPoint(k * step, T, P, g.quotient, invariant(T, P), g.norm))
        y = y_next
        if progress is not None:
            progress(k)

    logger.info(f"最大反应路径追踪完成: {len(path)} 个点，停止原因 {path.stop_reason.value}")
    return path
