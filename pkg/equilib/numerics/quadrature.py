"""
numerics/quadrature.py - 自适应 Simpson 积分
"""

import logging
import math
from typing import Callable, Iterable, Tuple

logger = logging.getLogger(__name__)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rtol: float = 1e-10, atol: float = 1e-14,
                     max_depth: int = 50) -> Tuple[float, float]:
    """
    自适应 Simpson 积分，带 Richardson 外推

    Args:
        f: 被积函数
        a: 下限
        b: 上限
        rtol: 相对容差（相对于整段的粗估值）
        atol: 绝对容差下限
        max_depth: 最大递归深度

    Returns:
        (积分值, 误差估计)
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = adaptive_simpson(f, b, a, rtol, atol, max_depth)
        return -value, error

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width / 6.0 * (fa + 4.0 * fm + fb)

    hit_limit = [False]

    def recurse(lo: float, hi: float, flo: float, fmid: float, fhi: float,
                whole: float, tol: float, depth: int) -> Tuple[float, float]:
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * tol:
                hit_limit[0] = True
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(lo, mid, flo, flm, fmid, left, 0.5 * tol, depth + 1)
        rv, re = recurse(mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1)
        return lv + rv, le + re

    fa = f(a)
    fb = f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = simpson(fa, fm, fb, b - a)

    # 粗估值用五点复合 Simpson，避免首段恰好为零时容差退化
    q1, q3 = 0.5 * (a + m), 0.5 * (m + b)
    coarse = simpson(fa, f(q1), fm, m - a) + simpson(fm, f(q3), fb, b - m)
    tol = max(atol, rtol * abs(coarse))

    value, error = recurse(a, b, fa, fm, fb, whole, tol, 0)
    if hit_limit[0]:
        logger.warning(f"自适应 Simpson 在 [{a!r}, {b!r}] 上达到最大递归深度，误差估计 {error!r}")
    if not math.isfinite(value):
        raise ArithmeticError(f"积分在 [{a!r}, {b!r}] 上不收敛")
    return value, error


def integrate_piecewise(f: Callable[[float], float], a: float, b: float,
                        knots: Iterable[float] = (), rtol: float = 1e-10,
                        atol: float = 1e-14) -> Tuple[float, float]:
    """
    在表格节点处分段的自适应 Simpson 积分

    Args:
        f: 被积函数
        a: 下限
        b: 上限
        knots: 被积函数可能不光滑的位置

    Returns:
        (积分值, 误差估计)
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    cuts = [a] + sorted(k for k in set(knots) if a < k < b) + [b]
    total, error = 0.0, 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        value, err = adaptive_simpson(f, lo, hi, rtol, atol)
        total += value
        error += err
    return sign * total, error
