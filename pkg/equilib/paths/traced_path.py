"""
paths/traced_path.py - 路径数据类型
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np


class PathKind(Enum):
    MAXIMAL_REACTION = "maximal_reaction"
    DYNAMIC_EQUILIBRIUM = "dynamic_equilibrium"
    QUASI_CHEMICAL_EQUILIBRIUM = "quasi_chemical_equilibrium"


class StopReason(Enum):
    REGION_EXIT = "region_exit"
    DOMAIN_BOUNDARY = "domain_boundary"
    STEP_LIMIT = "step_limit"
    CONVERGED = "converged"


@dataclass(frozen=True)
class PathPoint:
    """路径上的一个采样点

    invariant 为该路径类型的守恒量：最大反应路径为隐式不变量，
    动态平衡曲线为 Q，准化学平衡曲线为 ∂G/∂ξ。
    """
    t: float
    T: float
    P: float
    quotient: float
    invariant: float
    grad_norm: float


@dataclass
class TracedPath:
    """追踪得到的路径"""
    kind: PathKind
    points: List[PathPoint] = field(default_factory=list)
    level: Optional[float] = None
    stop_reason: StopReason = StopReason.CONVERGED
    skipped: List[Tuple[float, str]] = field(default_factory=list)
    max_deviation: float = 0.0
    vertical_lines: Tuple[float, ...] = ()
    # 最大反应路径离开区域时的第一个区域外点
    exit_point: Optional[PathPoint] = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def temperatures(self) -> np.ndarray:
        return np.array([p.T for p in self.points])

    @property
    def pressures(self) -> np.ndarray:
        return np.array([p.P for p in self.points])

    @property
    def quotients(self) -> np.ndarray:
        return np.array([p.quotient for p in self.points])

    @property
    def invariants(self) -> np.ndarray:
        return np.array([p.invariant for p in self.points])

    def invariant_drift(self) -> float:
        """不变量相对首点的最大相对漂移"""
        values = self.invariants
        if values.size == 0 or not np.all(np.isfinite(values)):
            return math.nan
        ref = values[0]
        scale = max(abs(ref), 1e-300)
        return float(np.max(np.abs(values - ref)) / scale)
