"""
numerics/ode.py - 经典四阶 Runge-Kutta 单步
"""

from typing import Callable

import numpy as np


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    """
    自治系统 y' = f(y) 的一步 RK4

    Args:
        f: 右端函数
        y: 当前状态
        h: 步长

    Returns:
        下一步状态
    """
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
