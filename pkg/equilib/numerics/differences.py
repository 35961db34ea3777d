"""
numerics/differences.py - 四阶中心差分
"""

from typing import Callable, Tuple


def step_size(x: float, rel: float = 1e-6, floor: float = 1e-9) -> float:
    """差分步长 h = max(rel·|x|, floor)"""
    return max(rel * abs(x), floor)


def central_difference(f: Callable[[float], float], x: float, h: float = None) -> float:
    """四阶中心差分 f'(x) ≈ [f(x−2h) − 8f(x−h) + 8f(x+h) − f(x+2h)] / 12h"""
    if h is None:
        h = step_size(x)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def partial_derivatives(f: Callable[[float, float], float], T: float,
                        P: float) -> Tuple[float, float]:
    """二元函数 f(T, P) 的两个偏导数"""
    d_t = central_difference(lambda t: f(t, P), T)
    d_p = central_difference(lambda p: f(T, p), P)
    return d_t, d_p
