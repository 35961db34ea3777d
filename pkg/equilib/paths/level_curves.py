"""
paths/level_curves.py - 动态平衡曲线（Q = c）与准化学平衡曲线（∂G/∂ξ = c）
以及组成路径的动态平衡检验
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core.constants import R
from ..core.exceptions import ConfigError, DomainError, LevelNotAttained, NoRoot
from ..core.gibbs_model import (AffineGibbsModel, RegimeTag, equilibrium_temperature,
                                log_quotient)
from ..core.system import ReactionSystem
from ..core.thermo import activity_quotient
from ..numerics.roots import bracket_root, sign_change_brackets
from .gradient import gradient_at
from .traced_path import PathKind, PathPoint, TracedPath

logger = logging.getLogger(__name__)

# 动态平衡曲线的压力搜索范围（相对 P°）
P_SEARCH_MIN = 1e-6
P_SEARCH_MAX = 1e6
P_SCAN_POINTS = 241


def _is_idealized(errors) -> bool:
    return errors is None or errors.regime is RegimeTag.IDEALIZED or not errors.terms


def _temperature_grid(T_min: float, T_max: float, n_points: int) -> np.ndarray:
    if not (0 < T_min <= T_max):
        raise ConfigError(f"温度区间不合法: [{T_min!r}, {T_max!r}]", field="trace.T_range")
    if n_points < 1:
        raise ConfigError("点数必须 ≥ 1", field="trace.n_points")
    if n_points == 1:
        return np.array([T_min])
    return np.linspace(T_min, T_max, n_points)


def _grad_norm(model, errors, T, P) -> float:
    try:
        return gradient_at(model, errors, T, P).norm
    except DomainError:
        return math.nan


def solve_level_pressure(model: AffineGibbsModel, errors, T: float, level: float,
                         previous: Optional[float] = None, rtol: float = 1e-12) -> float:
    """
    在温度 T 下求 Q(T, P) = level 的压力

    理想化模式用闭式 P = P°·c^{RT/ε}；其余情形在对数压力网格上扫描变号，
    再用 brentq 求解 ln Q − ln c = 0。多个根时取最接近 previous（缺省为 P°）的一个。

    Raises:
        LevelNotAttained: 搜索范围内无解
    """
    p_std = model.p_standard
    ln_c = math.log(level)
    rt = (errors.gas_constant if errors is not None else R) * T

    if _is_idealized(errors):
        if model.eps == 0.0:
            if ln_c == 0.0:
                return p_std if previous is None else previous
            raise LevelNotAttained(T, level)
        exponent = rt * ln_c / model.eps
        if exponent > 700 or exponent < -700:
            raise LevelNotAttained(T, level)
        return p_std * math.exp(exponent)

    def h(x: float) -> float:
        try:
            return log_quotient(model, errors, T, p_std * math.exp(x)) - ln_c
        except DomainError:
            return math.nan

    grid = np.linspace(math.log(P_SEARCH_MIN), math.log(P_SEARCH_MAX), P_SCAN_POINTS)
    brackets = sign_change_brackets(h, grid)
    if not brackets:
        raise LevelNotAttained(T, level)

    roots = []
    for a, b in brackets:
        roots.append(a if a == b else bracket_root(h, a, b, rtol=rtol))
    anchor = 0.0 if previous is None else math.log(previous / p_std)
    x = min(roots, key=lambda r: abs(r - anchor))
    return p_std * math.exp(x)


def _vertical_lines(model: AffineGibbsModel, level: float, T_min: float, T_max: float):
    try:
        roots = equilibrium_temperature(model, level=level)
    except NoRoot:
        return ()
    return tuple(r for r in roots if T_min <= r <= T_max)


def trace_dynamic_equilibrium(model: AffineGibbsModel, errors, level: float,
                              T_min: float, T_max: float, n_points: int = 101) -> TracedPath:
    """
    追踪动态平衡曲线 Q(T, P) = c

    Q 与 P 无关（ε = 0 且误差项不含 P）时水平集退化为竖直线，
    此时 points 为空，vertical_lines 给出 Q = c 的温度。

    Args:
        model: 仿射模型
        errors: 误差模型
        level: 水平 c > 0
        T_min: 温度下限
        T_max: 温度上限
        n_points: 温度网格点数

    Returns:
        TracedPath；在某温度下无解的点被跳过并记录在 skipped 中
    """
    if not level > 0:
        raise ConfigError("水平 c 必须 > 0", field="trace.level")
    temps = _temperature_grid(T_min, T_max, n_points)
    path = TracedPath(PathKind.DYNAMIC_EQUILIBRIUM, level=level)

    if model.eps == 0.0 and (errors is None or "P" not in errors.signature):
        lines = []
        ln_c = math.log(level)

        def h(t: float) -> float:
            return log_quotient(model, errors, t, model.p_standard) - ln_c

        dense = np.linspace(T_min, T_max, max(4 * n_points, 2))
        for a, b in sign_change_brackets(h, dense):
            lines.append(a if a == b else bracket_root(h, a, b))
        path.vertical_lines = tuple(lines)
        logger.warning(f"Q 与压力无关，水平集 Q = {level!r} 退化为竖直线 T ∈ {lines}")
        return path

    previous = None
    span = temps[-1] - temps[0]
    for T in temps:
        T = float(T)
        try:
            P = solve_level_pressure(model, errors, T, level, previous)
        except LevelNotAttained as e:
            path.skipped.append((T, str(e)))
            logger.warning(str(e))
            continue
        q = math.exp(log_quotient(model, errors, T, P))
        t = (T - temps[0]) / span if span else 0.0
        path.points.append(PathPoint(t, T, P, q, q, _grad_norm(model, errors, T, P)))
        path.max_deviation = max(path.max_deviation, abs(q - level) / level)
        previous = P

    logger.info(f"动态平衡曲线 Q = {level!r}: {len(path)} 个点，跳过 {len(path.skipped)} 个温度")
    return path


def trace_quasi_equilibrium(model: AffineGibbsModel, level: float, T_min: float, T_max: float,
                            n_points: int = 101, errors=None) -> TracedPath:
    """
    追踪准化学平衡曲线 ∂G/∂ξ = c：P(T) = P°·exp((c − λ′ − β·T − σ·ln T)/ε)

    ε = 0 时曲线为竖直线，vertical_lines 给出 λ′ + β·T + σ·ln T = c 的根。
    errors 仅用于输出点上的活度商。
    """
    temps = _temperature_grid(T_min, T_max, n_points)
    path = TracedPath(PathKind.QUASI_CHEMICAL_EQUILIBRIUM, level=level)

    if model.eps == 0.0:
        path.vertical_lines = _vertical_lines(model, level, T_min, T_max)
        logger.info(f"ε = 0，准化学平衡曲线为竖直线 T ∈ {list(path.vertical_lines)}")
        return path

    p_std = model.p_standard
    span = temps[-1] - temps[0]
    for T in temps:
        T = float(T)
        exponent = (level - model.lam - model.beta * T - model.sigma * math.log(T)) / model.eps
        if not -700.0 < exponent < 700.0:
            path.skipped.append((T, f"指数 {exponent!r} 溢出"))
            logger.warning(f"T={T!r} 处压力溢出，跳过")
            continue
        P = p_std * math.exp(exponent)
        dg = model.dg_dxi(T, P)
        try:
            q = math.exp(log_quotient(model, errors, T, P))
        except (DomainError, OverflowError):
            q = math.nan
        t = (T - temps[0]) / span if span else 0.0
        path.points.append(PathPoint(t, T, P, q, dg, _grad_norm(model, errors, T, P)))
        scale = max(abs(level), abs(model.lam), abs(model.beta * T), 1.0)
        path.max_deviation = max(path.max_deviation, abs(dg - level) / scale)

    if path.max_deviation > 1e-9:
        logger.warning(f"准化学平衡曲线残差 {path.max_deviation!r} 超过 1e-9")
    logger.info(f"准化学平衡曲线 ∂G/∂ξ = {level!r}: {len(path)} 个点")
    return path


@dataclass(frozen=True)
class DynamicCheck:
    """组成路径的动态平衡检验结果"""
    is_dynamic: bool
    max_dn: float
    max_quotient_deviation: float


def verify_dynamic_equilibrium(amounts: Sequence[Sequence[float]],
                               system: Optional[ReactionSystem] = None,
                               atol: float = 1e-9) -> DynamicCheck:
    """
    检验组成路径是否为动态平衡路径（各物质的量不变）

    Args:
        amounts: 形状 (k, c) 的组成采样
        system: 给出时同时报告 Q 的最大相对偏差
        atol: 物质的量变化的绝对容差 mol

    Returns:
        DynamicCheck
    """
    n = np.asarray(amounts, dtype=float)
    if n.ndim != 2:
        raise ConfigError("组成路径必须是二维数组", field="path")
    if n.shape[0] < 2:
        return DynamicCheck(True, 0.0, 0.0)
    max_dn = float(np.max(np.abs(np.diff(n, axis=0))))
    q_dev = 0.0
    if system is not None:
        q = np.array([activity_quotient(system, row) for row in n])
        q_dev = float(np.max(np.abs(q - q[0])) / q[0])
    return DynamicCheck(max_dn <= atol, max_dn, q_dev)
