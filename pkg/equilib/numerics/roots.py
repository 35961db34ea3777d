"""
numerics/roots.py - 求根工具
区间求根基于 scipy.optimize.brentq，多项式根由伴随矩阵特征值给出后再做 Newton 修正
"""

import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from ..core.exceptions import NoRoot

logger = logging.getLogger(__name__)


def bracket_root(f: Callable[[float], float], a: float, b: float,
                 rtol: float = 1e-12, maxiter: int = 200) -> float:
    """
    在 [a, b] 上求 f 的根（要求端点异号）

    Raises:
        NoRoot: 端点同号
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoRoot(f"区间 [{a!r}, {b!r}] 端点同号: f(a)={fa!r}, f(b)={fb!r}")
    xtol = max(1e-300, rtol * min(abs(a), abs(b)) * 1e-3)
    return float(brentq(f, a, b, xtol=xtol, rtol=max(rtol, 4 * np.finfo(float).eps),
                        maxiter=maxiter))


def sign_change_brackets(f: Callable[[float], float],
                         grid: Sequence[float]) -> List[Tuple[float, float]]:
    """
    在网格上扫描 f 的变号区间

    非有限值的点被跳过。
    """
    brackets: List[Tuple[float, float]] = []
    prev_x, prev_v = None, None
    for x in grid:
        v = f(x)
        if not math.isfinite(v):
            prev_x, prev_v = None, None
            continue
        if v == 0.0:
            brackets.append((x, x))
        elif prev_v is not None and prev_v != 0.0 and (prev_v < 0) != (v < 0):
            brackets.append((prev_x, x))
        prev_x, prev_v = x, v
    return brackets


def polish_root(poly: Polynomial, x: float, iterations: int = 8) -> float:
    """Newton 修正一个实根"""
    deriv = poly.deriv()
    for _ in range(iterations):
        d = deriv(x)
        if d == 0.0:
            break
        step = poly(x) / d
        x_new = x - step
        if not math.isfinite(x_new):
            break
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            return float(x_new)
        x = x_new
    return float(x)


def real_roots(poly: Polynomial, imag_tol: float = 1e-8) -> np.ndarray:
    """
    多项式的全部实根（升序）

    Args:
        poly: numpy 多项式
        imag_tol: 判定为实根的虚部相对阈值

    Returns:
        修正后的实根数组
    """
    trimmed = poly.trim()
    if trimmed.degree() < 1:
        return np.array([])
    roots = trimmed.roots()
    real = [polish_root(trimmed, float(r.real)) for r in roots
            if abs(r.imag) <= imag_tol * max(1.0, abs(r))]
    return np.array(sorted(real))
