"""
numerics - 数值工具
自适应 Simpson 积分、区间求根、多项式求根、定步长 RK4 与四阶中心差分
"""

from .differences import central_difference, partial_derivatives
from .ode import rk4_step
from .quadrature import adaptive_simpson, integrate_piecewise
from .roots import bracket_root, polish_root, real_roots, sign_change_brackets

__all__ = [
    'adaptive_simpson', 'integrate_piecewise',
    'bracket_root', 'sign_change_brackets', 'real_roots', 'polish_root',
    'rk4_step',
    'central_difference', 'partial_derivatives',
]
