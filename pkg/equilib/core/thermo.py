"""
core/thermo.py - 化学计量、组成与活度商
包含摩尔分数、活度商、反应进度映射以及初始组成的核可行性条件
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from .exceptions import (ConfigError, DegenerateState, ExtentOutOfRange, InconsistentTarget,
                         SingularTarget)
from .system import MixtureState, ReactionSystem

logger = logging.getLogger(__name__)

AmountsLike = Union[MixtureState, Sequence[float], np.ndarray]

# 核可行性判定中的秩容差
KERNEL_TOL = 1e-10


def _amounts(value: AmountsLike) -> np.ndarray:
    if isinstance(value, MixtureState):
        return value.n
    return np.asarray(value, dtype=float)


def mole_fractions(state: AmountsLike) -> np.ndarray:
    """
    计算摩尔分数 x_i = n_i / Σn_j

    Args:
        state: 状态点或物质的量向量

    Returns:
        摩尔分数向量

    Raises:
        DegenerateState: 任一 n_i ≤ 0
    """
    n = _amounts(state)
    if n.size == 0 or np.any(n <= 0):
        raise DegenerateState(f"物质的量必须全部 > 0: {n.tolist()}")
    return n / np.sum(n)


def _check_size(system: ReactionSystem, n: np.ndarray) -> None:
    if n.shape != (system.size,):
        raise ConfigError(f"组成向量长度 {n.size} 与物种数 {system.size} 不一致",
                          field="state.amounts")


def activity_quotient(system: ReactionSystem, state: AmountsLike) -> float:
    """
    理想活度下的活度商（Q/W/Z 由体系约定决定）

    Args:
        system: 反应体系
        state: 状态点或物质的量向量（含溶剂，溶剂在下标 0）

    Returns:
        活度商
    """
    n = _amounts(state)
    _check_size(system, n)
    x = mole_fractions(n)
    return float(np.exp(np.sum(system.quotient_exponents * np.log(x))))


def extent_interval(system: ReactionSystem, initial: AmountsLike) -> Tuple[float, float]:
    """
    使所有物质的量保持为正的反应进度开区间

    Returns:
        (ξ_min, ξ_max)，可为 ±inf
    """
    n0 = _amounts(initial)
    _check_size(system, n0)
    lo, hi = -math.inf, math.inf
    for n_i, m_i in zip(n0, system.extent_coefficients):
        if m_i > 0:
            lo = max(lo, -n_i / m_i)
        elif m_i < 0:
            hi = min(hi, -n_i / m_i)
    return lo, hi


def apply_extent(system: ReactionSystem, initial: MixtureState, xi: float) -> MixtureState:
    """
    按反应进度更新组成 n_i = n_i0 + ν_i·ξ，无相互作用溶剂保持不变

    Args:
        system: 反应体系
        initial: 初始状态
        xi: 反应进度 mol

    Returns:
        新的状态点（T、P 不变）

    Raises:
        ExtentOutOfRange: 结果中出现 n_i ≤ 0
    """
    n0 = initial.n
    _check_size(system, n0)
    n = n0 + system.extent_coefficients * xi
    if np.any(n <= 0):
        raise ExtentOutOfRange(xi, extent_interval(system, n0))
    return initial.with_amounts(n)


@dataclass(frozen=True)
class ExtentSolution:
    """由目标摩尔分数反解的反应进度"""
    xi: float
    max_discrepancy: float
    reference_index: int
    per_species: Tuple[float, ...] = field(default_factory=tuple)


def extent_from_fractions(system: ReactionSystem, initial: AmountsLike,
                          fractions: Sequence[float], rtol: float = 1e-9) -> ExtentSolution:
    """
    由目标摩尔分数反解反应进度 ξ = (n_i0 − n_0·f_i)/(κ·f_i − ν_i)

    n_0 为初始总物质的量，κ = Σν_i。逐物种求解并检查一致性。

    Args:
        system: 反应体系
        initial: 初始物质的量
        fractions: 目标摩尔分数（和为 1）
        rtol: 跨物种一致性的相对容差

    Returns:
        ExtentSolution

    Raises:
        SingularTarget: 分母为零而分子不为零
        InconsistentTarget: 各物种给出的 ξ 不一致
    """
    n0 = _amounts(initial)
    _check_size(system, n0)
    f = np.asarray(fractions, dtype=float)
    if f.shape != n0.shape:
        raise ConfigError("目标摩尔分数长度与物种数不一致", field="fractions")
    if abs(np.sum(f) - 1.0) > 1e-9:
        raise ConfigError(f"目标摩尔分数之和必须为 1，实际为 {np.sum(f)!r}", field="fractions")

    m = system.extent_coefficients
    total = float(np.sum(n0))
    kappa = float(np.sum(m))
    scale = max(1.0, abs(kappa)) * max(1.0, total)

    estimates: Dict[int, float] = {}
    for i, (n_i, m_i, f_i) in enumerate(zip(n0, m, f)):
        numerator = n_i - total * f_i
        denominator = kappa * f_i - m_i
        if abs(denominator) <= 1e-14 * scale:
            if abs(numerator) > 1e-12 * max(1.0, total):
                raise SingularTarget(system.species[i].name)
            continue
        estimates[i] = numerator / denominator

    if not estimates:
        raise SingularTarget(system.species[0].name)

    ref = next(iter(estimates))
    xi = estimates[ref]
    xi_scale = max(abs(xi), total * 1e-3)
    discrepancy = max(abs(v - xi) for v in estimates.values()) / xi_scale
    if discrepancy > rtol:
        raise InconsistentTarget(discrepancy)

    per_species = tuple(estimates.get(i, math.nan) for i in range(system.size))
    return ExtentSolution(xi, discrepancy, ref, per_species)


def quotient_along_extent(system: ReactionSystem, initial: AmountsLike, xi: float) -> float:
    """
    直接计算 G_γ(ξ) = ∏(ν_i ξ + n_i0)^e_i / (αξ + β)^Σe_i

    分母指数取活度商指数之和，使其与 Q = ∏ x_i^e_i 一致。
    """
    n0 = _amounts(initial)
    _check_size(system, n0)
    m = system.extent_coefficients
    e = system.quotient_exponents
    alpha = float(np.sum(m))
    beta = float(np.sum(n0))
    n = m * xi + n0
    if np.any(n <= 0) or alpha * xi + beta <= 0:
        raise ExtentOutOfRange(xi, extent_interval(system, n0))
    log_value = np.sum(e * np.log(n)) - np.sum(e) * math.log(alpha * xi + beta)
    return float(math.exp(log_value))


def choose_pivot(nu: Sequence[float], preferred: Optional[int] = None,
                 fixed: Sequence[int] = ()) -> int:
    """
    选择线性联动关系的主元 j：ν_j ≠ 0 且其余参与反应物种的 Σν_i ≠ 0

    Args:
        nu: 化学计量系数
        preferred: 优先使用的下标
        fixed: 不参与反应（不随 ξ 变化）的下标

    Returns:
        主元下标
    """
    nu = np.asarray(nu, dtype=float)
    moving = [i for i in range(nu.size) if i not in set(fixed) and nu[i] != 0]

    def admissible(j: int) -> bool:
        if j not in moving:
            return False
        others = sum(nu[i] for i in moving if i != j)
        return abs(others) > 1e-12

    if preferred is not None and admissible(preferred):
        return preferred
    for j in reversed(moving):
        if admissible(j):
            if preferred is not None:
                logger.info(f"主元 {preferred} 不可用，改用 {j}")
            return j
    raise ConfigError("所有 (c−1) 元子集的化学计量系数之和均为 0，无法选择主元", field="nu")


@dataclass(frozen=True)
class FeasibilityMatrix:
    """可行性矩阵 M：对角元 f_i − 1，第 i 行其余元素为 f_i

    第 i 行编码 n_i = f_i·Σn_j。
    """
    f: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(float(v) for v in self.f))
        for i, v in enumerate(self.f):
            if not 0.0 < v < 1.0:
                raise ConfigError(f"f_{i} = {v!r} 不在 (0, 1) 内", field="feasibility.f")

    @classmethod
    def from_potentials(cls, mu_excess: Sequence[float], T0: float,
                        gas_constant: float = 8.314462618) -> "FeasibilityMatrix":
        """由 μ_i − μ_i° 构造 f_i = exp((μ_i − μ_i°)/RT0)"""
        if not T0 > 0:
            raise ConfigError("温度必须 > 0", field="feasibility.T0")
        return cls(tuple(math.exp(mu / (gas_constant * T0)) for mu in mu_excess))

    @property
    def matrix(self) -> np.ndarray:
        f = np.asarray(self.f)
        c = f.size
        return np.outer(f, np.ones(c)) - np.eye(c)


@dataclass(frozen=True)
class KernelResult:
    """核可行性判定结果"""
    feasible: bool
    witness: Optional[np.ndarray]
    kernel_dim: int
    rank: int
    singular_values: Tuple[float, ...]
    diagnostics: List[str] = field(default_factory=list)


def kernel_feasibility(fm: FeasibilityMatrix, tol: float = KERNEL_TOL) -> KernelResult:
    """
    判定 Ker(M) 与正卦限是否相交

    用 SVD 求核空间基；一维核做符号检查，高维核解一个小的线性可行性规划。

    Args:
        fm: 可行性矩阵
        tol: 相对秩容差

    Returns:
        KernelResult，witness 归一化为 Σ = 1
    """
    M = fm.matrix
    c = M.shape[0]
    _, s, vt = np.linalg.svd(M)
    s_max = float(s[0]) if s.size else 0.0
    threshold = tol * max(s_max, 1.0)
    rank = int(np.sum(s > threshold))
    basis = vt[rank:].T
    diagnostics: List[str] = []

    near = [float(v) for v in s if threshold < v <= 1e3 * threshold]
    if near:
        diagnostics.append(f"数值上接近秩亏的奇异值: {near}")

    dim = basis.shape[1]
    if dim == 0:
        return KernelResult(False, None, 0, rank, tuple(float(v) for v in s), diagnostics)

    if dim == 1:
        v = basis[:, 0]
        if np.all(v > 0) or np.all(v < 0):
            witness = v / np.sum(v)
            return KernelResult(True, witness, 1, rank, tuple(float(x) for x in s), diagnostics)
        return KernelResult(False, None, 1, rank, tuple(float(x) for x in s), diagnostics)

    # 高维核：max t  s.t.  N·y ≥ t，|y| ≤ 1，t ≤ 1
    objective = np.zeros(dim + 1)
    objective[-1] = -1.0
    a_ub = np.hstack([-basis, np.ones((c, 1))])
    b_ub = np.zeros(c)
    bounds = [(-1.0, 1.0)] * dim + [(None, 1.0)]
    result = linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status == 0 and -result.fun > tol:
        v = basis @ result.x[:dim]
        return KernelResult(True, v / np.sum(v), dim, rank, tuple(float(x) for x in s), diagnostics)
    diagnostics.append(f"线性规划状态: {result.message}")
    return KernelResult(False, None, dim, rank, tuple(float(x) for x in s), diagnostics)
