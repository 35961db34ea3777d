"""
core/constants.py - 物理常数与默认参数
所有数值固定为 CODATA-2018，保证结果可逐位复现
"""

# 摩尔气体常数 J/(mol·K)
R = 8.314462618

# 法拉第常数 C/mol
F = 96485.33212

# 默认标准压力 Pa
P_STANDARD = 1.0e5

# 路径追踪的温度缩放基准 K
T_REF = 298.15

# 化学平衡判定的绝对容差 J/mol
ATOL_EQUILIBRIUM = 1e-6
