"""
paths/feasible.py - 可行组成路径的构造
由 (T, P) 曲线上的活度商目标 ε(t) 反求满足线性联动关系的组成 n_i(t)：
n_i = (ν_i/ν_j)·n_j + d_i，Q(n(t)) = ε(t)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from ..core.exceptions import BranchSingular, ConfigError, ConstructionFailed, TruncatedPath
from ..core.system import ReactionSystem
from ..core.thermo import activity_quotient, choose_pivot
from ..numerics.roots import real_roots

logger = logging.getLogger(__name__)

# 联动偏移量扰动的相对幅度与重试次数
PERTURBATION = 1e-9
MAX_RETRIES = 3

DEFAULT_GRID_POINTS = 256
NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class LinkageOffsets:
    """线性联动关系 n_i = (m_i/m_j)·n_j + d_i 的主元与偏移量"""
    pivot: int
    d: tuple

    @classmethod
    def from_initial(cls, system: ReactionSystem, initial: Sequence[float],
                     pivot: Optional[int] = None) -> "LinkageOffsets":
        """
        由初始组成确定偏移量，使初始组成恰好落在联动关系上

        Args:
            system: 反应体系
            initial: 初始物质的量（全部 > 0）
            pivot: 主元下标，缺省时自动选择
        """
        n0 = np.asarray(initial, dtype=float)
        if n0.shape != (system.size,) or np.any(n0 <= 0):
            raise ConfigError("初始组成必须与物种数一致且全部 > 0", field="feasible.initial")
        m = system.extent_coefficients
        fixed = [i for i in range(system.size) if m[i] == 0]
        if pivot is None:
            pivot = choose_pivot(m, preferred=system.size - 1, fixed=fixed)
        elif not 0 <= pivot < system.size or m[pivot] == 0:
            raise ConfigError(f"主元 {pivot} 的化学计量系数为 0 或越界", field="feasible.pivot")
        d = n0 - m / m[pivot] * n0[pivot]
        d[pivot] = 0.0
        return cls(pivot, tuple(float(v) for v in d))


@dataclass
class RationalProfile:
    """以 x = 1/n_j 为变量的有理函数 q(x) = N(x)/D(x)

    reciprocal 为 True 时已对活度商取倒数（Σe_i < 0 的情形），目标相应取 1/ε。
    """
    system: ReactionSystem
    offsets: LinkageOffsets
    numerator: Polynomial
    denominator: Polynomial
    degree: int
    reciprocal: bool
    x0: float
    branches: List[float] = field(default_factory=list)
    root_table: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ratios(self) -> np.ndarray:
        m = self.system.extent_coefficients
        return m / m[self.offsets.pivot]

    def amounts(self, x: float) -> np.ndarray:
        """x 对应的组成"""
        y = 1.0 / x
        return self.ratios * y + np.asarray(self.offsets.d)

    def target_value(self, eps: float) -> float:
        return 1.0 / eps if self.reciprocal else eps

    def q(self, x: float) -> float:
        return float(self.numerator(x) / self.denominator(x))

    def residual(self, x: float, eps: float) -> float:
        return float(self.numerator(x) - self.target_value(eps) * self.denominator(x))

    def residual_derivative(self, x: float, eps: float) -> float:
        return float(self.numerator.deriv()(x) - self.target_value(eps) * self.denominator.deriv()(x))

    def admissible(self, x: float) -> bool:
        return x > 0 and bool(np.all(self.amounts(x) > 0))


def _integer_exponents(system: ReactionSystem) -> np.ndarray:
    e = system.quotient_exponents
    if np.any(np.abs(e - np.round(e)) > 1e-12):
        raise ConfigError("可行路径构造要求化学计量系数为整数", field="system.species.nu")
    return np.round(e).astype(int)


def _reverse(poly: Polynomial, degree: int) -> Polynomial:
    coef = np.zeros(degree + 1)
    c = poly.coef
    coef[:c.size] = c
    return Polynomial(coef[::-1])


def _assemble(system: ReactionSystem, offsets: LinkageOffsets, exponents: np.ndarray):
    m = system.extent_coefficients
    ratios = m / m[offsets.pivot]
    d = np.asarray(offsets.d)
    one = Polynomial([1.0])
    linear = [Polynomial([d[i], ratios[i]]) for i in range(system.size)]
    total = Polynomial([float(np.sum(d)), float(np.sum(ratios))])

    numerator, denominator = one, one
    for i, e in enumerate(exponents):
        if e > 0:
            numerator = numerator * linear[i] ** int(e)
        elif e < 0:
            denominator = denominator * linear[i] ** int(-e)
    weight = int(np.sum(exponents))
    if weight > 0:
        denominator = denominator * total ** weight
    return numerator.trim(), denominator.trim()


def _root_table(profile: RationalProfile, eps0: float) -> List[Dict[str, Any]]:
    poly = profile.numerator - profile.target_value(eps0) * profile.denominator
    table = []
    for r in real_roots(poly):
        table.append({
            "x": float(r),
            "n_pivot": (1.0 / r) if r != 0 else math.inf,
            "admissible": profile.admissible(r) if r > 0 else False,
            "denominator": float(profile.denominator(r)),
        })
    return table


def _collides(numerator: Polynomial, denominator: Polynomial) -> bool:
    scale = float(np.sum(np.abs(denominator.coef))) or 1.0
    for r in real_roots(numerator):
        if r > 0 and abs(denominator(r)) <= 1e-10 * scale * max(1.0, abs(r)) ** denominator.degree():
            return True
    return False


def build_profile(system: ReactionSystem, offsets: LinkageOffsets,
                  q_target: Callable[[float], float],
                  enumerate_all: bool = False) -> RationalProfile:
    """
    构造有理函数并选择起始根

    在 y = n_j 上写出 N(y) = ε·D(y)，Σe_i < 0 时先对活度商取倒数；
    代入 x = 1/y 并反转多项式，由伴随矩阵特征值求出全部实根，
    选择使所有 n_i > 0 的最大 x（即最小的 n_j）。

    Args:
        system: 反应体系（化学计量系数为整数）
        offsets: 联动偏移量
        q_target: t ↦ ε(t) > 0
        enumerate_all: 是否记录全部可行分支

    Returns:
        RationalProfile

    Raises:
        ConstructionFailed: 无可行根，或分子分母共根且扰动后仍未消除
    """
    eps0 = q_target(0.0)
    if not eps0 > 0 or not math.isfinite(eps0):
        raise ConfigError(f"目标活度商 ε(0)={eps0!r} 必须 > 0", field="feasible.target")

    exponents = _integer_exponents(system)
    reciprocal = int(np.sum(exponents)) < 0
    if reciprocal:
        exponents = -exponents

    current = offsets
    for attempt in range(MAX_RETRIES + 1):
        num_y, den_y = _assemble(system, current, exponents)
        degree = max(num_y.degree(), den_y.degree())
        numerator = _reverse(num_y, degree)
        denominator = _reverse(den_y, degree)
        if not _collides(numerator, denominator):
            break
        if attempt == MAX_RETRIES:
            profile = RationalProfile(system, current, numerator, denominator, degree,
                                      reciprocal, math.nan)
            raise ConstructionFailed("分子与分母存在公共正根，扰动偏移量后仍未消除",
                                     _root_table(profile, eps0))
        d = np.asarray(current.d)
        signs = np.array([(-1.0) ** i * (i + 1) for i in range(d.size)])
        d = d * (1.0 + PERTURBATION * (attempt + 1) * signs)
        d[current.pivot] = 0.0
        current = LinkageOffsets(current.pivot, tuple(float(v) for v in d))
        logger.warning(f"分子与分母共根，第 {attempt + 1} 次扰动偏移量")

    profile = RationalProfile(system, current, numerator, denominator, degree, reciprocal,
                              math.nan)
    table = _root_table(profile, eps0)
    profile.root_table = table
    candidates = sorted((row["x"] for row in table if row["admissible"]), reverse=True)
    if not candidates:
        raise ConstructionFailed(f"ε(0)={eps0!r} 在正组成区域内不可达", table)

    profile.x0 = candidates[0]
    if enumerate_all:
        profile.branches = candidates
    logger.info(f"可行路径起点 n_{current.pivot} = {1.0 / profile.x0!r}，"
                f"共 {len(candidates)} 个可行分支")
    return profile


@dataclass
class CompositionPath:
    """组成路径"""
    t: np.ndarray
    amounts: np.ndarray
    quotient: np.ndarray
    extent: np.ndarray
    truncated: bool = False
    t_stop: Optional[float] = None


def _newton(profile: RationalProfile, eps: float, x: float, maxiter: int = 50) -> Optional[float]:
    for _ in range(maxiter):
        f = profile.residual(x, eps)
        df = profile.residual_derivative(x, eps)
        if df == 0.0 or not math.isfinite(df):
            return None
        step = f / df
        x_new = x - step
        if not math.isfinite(x_new) or x_new <= 0:
            return None
        if abs(step) <= NEWTON_TOL * abs(x_new):
            return x_new
        x = x_new
    return None


def continue_branch(profile: RationalProfile, q_target: Callable[[float], float],
                    t_grid: Optional[Sequence[float]] = None, strict: bool = False,
                    max_bisections: int = 30) -> CompositionPath:
    """
    沿 t 对 q(x) = ε(t) 的根做 Newton 延拓

    Newton 不收敛时对 t 步长二分；某点组成离开正值区域时停止，
    返回可行的前段并标记 truncated。

    Args:
        profile: build_profile 的结果
        q_target: t ↦ ε(t)
        t_grid: t 网格，缺省为 [0, 1] 上 256 个均匀点
        strict: 为 True 时截断抛出 TruncatedPath

    Raises:
        BranchSingular: 起始根处 q′ = 0
    """
    if t_grid is None:
        t_grid = np.linspace(0.0, 1.0, DEFAULT_GRID_POINTS)
    t_grid = np.asarray(t_grid, dtype=float)
    eps0 = q_target(float(t_grid[0]))

    x = _newton(profile, eps0, profile.x0)
    if x is None:
        raise ConstructionFailed("起始根无法修正", profile.root_table)
    slope = profile.residual_derivative(x, eps0)
    scale = max(abs(profile.numerator.deriv()(x)), abs(profile.target_value(eps0)
                * profile.denominator.deriv()(x)), 1e-300)
    if abs(slope) <= 1e-12 * scale:
        raise BranchSingular(f"x0={x!r} 处 q′(x0) = 0，分支无法延拓")

    pivot = profile.offsets.pivot
    m_pivot = profile.system.extent_coefficients[pivot]
    n_start = profile.amounts(x)

    ts, rows = [float(t_grid[0])], [n_start]
    truncated, t_stop = False, None

    for t_next in t_grid[1:]:
        t_prev = ts[-1]
        t_next = float(t_next)
        x_new = _advance(profile, q_target, x, t_prev, t_next, max_bisections)
        if x_new is None or not profile.admissible(x_new):
            truncated, t_stop = True, t_prev
            break
        x = x_new
        ts.append(t_next)
        rows.append(profile.amounts(x))

    if truncated:
        logger.warning(f"组成在 t={t_stop!r} 之后离开正值区域，路径截断")
        if strict:
            raise TruncatedPath(t_stop)

    amounts = np.array(rows)
    quotients = np.array([activity_quotient(profile.system, row) for row in amounts])
    extent = (amounts[:, pivot] - n_start[pivot]) / m_pivot
    return CompositionPath(np.array(ts), amounts, quotients, extent, truncated, t_stop)


def _advance(profile: RationalProfile, q_target, x: float, t_prev: float, t_next: float,
             depth: int) -> Optional[float]:
    x_new = _newton(profile, q_target(t_next), x)
    if x_new is not None and profile.admissible(x_new) and abs(x_new - x) <= 0.5 * abs(x):
        return x_new
    if depth == 0:
        return x_new
    t_mid = 0.5 * (t_prev + t_next)
    x_mid = _advance(profile, q_target, x, t_prev, t_mid, depth - 1)
    if x_mid is None or not profile.admissible(x_mid):
        return x_mid
    return _advance(profile, q_target, x_mid, t_mid, t_next, depth - 1)


def tabulated_target(t_values: Sequence[float], q_values: Sequence[float]) -> Callable[[float], float]:
    """由表格 (t, ε) 线性插值得到目标函数"""
    t = np.asarray(t_values, dtype=float)
    q = np.asarray(q_values, dtype=float)
    if t.shape != q.shape or t.size < 2 or np.any(np.diff(t) <= 0):
        raise ConfigError("目标表格的 t 必须严格递增且与 ε 等长", field="feasible.target")
    if np.any(q <= 0):
        raise ConfigError("目标活度商必须 > 0", field="feasible.target")
    return lambda s: float(np.interp(s, t, q))
