"""
core/exceptions.py - 异常层次
CLI 根据异常类别决定退出码：ConfigError → 2，DomainError → 3，NumericalError → 4
"""

from typing import Any, List, Optional, Sequence, Tuple


class EquilibError(Exception):
    """所有 equilib 异常的基类"""


class ConfigError(EquilibError):
    """配置或输入参数不合法"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        prefix = f"{field}: " if field else ""
        suffix = f" (第 {line} 行)" if line is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")


class DomainError(EquilibError):
    """输入超出函数定义域"""

    def __init__(self, message: str, species: Optional[str] = None):
        self.species = species
        if species is not None:
            message = f"{message} [物种: {species}]"
        super().__init__(message)


class DegenerateState(DomainError):
    """物质的量或摩尔分数非正"""


class ExtentOutOfRange(DomainError):
    """反应进度超出可行区间"""

    def __init__(self, xi: float, interval: Tuple[float, float]):
        self.xi = xi
        self.interval = interval
        super().__init__(f"反应进度 ξ={xi!r} 超出可行区间 ({interval[0]!r}, {interval[1]!r})")


class RegionError(DomainError):
    """起点不在 |grad Q| ≥ 1 且 Q > 0 的区域内"""

    def __init__(self, message: str, grad_norm: float):
        self.grad_norm = grad_norm
        super().__init__(f"{message} (|grad Q| = {grad_norm!r})")


class LevelNotAttained(DomainError):
    """在给定温度下，可行压力区间内找不到 Q = c 的点"""

    def __init__(self, temperature: float, level: float):
        self.temperature = temperature
        self.level = level
        super().__init__(f"T={temperature!r} K 处 Q 达不到水平 {level!r}")


class NumericalError(EquilibError):
    """数值过程失败"""


class InconsistentTarget(NumericalError):
    """各物种给出的反应进度不一致"""

    def __init__(self, discrepancy: float):
        self.discrepancy = discrepancy
        super().__init__(f"目标摩尔分数不一致，最大相对偏差 {discrepancy!r}")


class SingularTarget(NumericalError):
    """κf_i − ν_i 为零而分子不为零，目标组成不可达"""

    def __init__(self, species: str):
        self.species = species
        super().__init__(f"物种 {species} 的分母 κf_i − ν_i 为零")


class NoRoot(NumericalError):
    """方程无根"""


class DegenerateModel(NumericalError):
    """模型处处平衡（λ = β = σ = 0）"""


class FitError(NumericalError):
    """最小二乘设计矩阵秩亏"""

    def __init__(self, coefficient: str):
        self.coefficient = coefficient
        super().__init__(f"样本无法确定系数 '{coefficient}'")


class SingularIntegrand(NumericalError):
    """不变量被积函数的分母在积分区间内变号"""

    def __init__(self, location: float):
        self.location = location
        super().__init__(f"被积函数在 P/P° ≈ {location!r} 处奇异")


class ConstructionFailed(NumericalError):
    """可行路径的有理函数构造失败"""

    def __init__(self, message: str, root_table: Optional[List[Any]] = None):
        self.root_table = root_table or []
        super().__init__(message)


class BranchSingular(NumericalError):
    """q'(v0) = 0，分支无法延拓"""


class TruncatedPath(NumericalError):
    """延拓过程中组成离开正值区域"""

    def __init__(self, t_stop: float):
        self.t_stop = t_stop
        super().__init__(f"路径在 t={t_stop!r} 处离开正值区域")


class CalibrationError(NumericalError):
    """测量标定失败"""

    def __init__(self, message: str, residual: Optional[float] = None,
                 residuals: Optional[Sequence[float]] = None):
        self.residual = residual
        self.residuals = list(residuals) if residuals is not None else []
        if residual is not None:
            message = f"{message} (残差 RMS = {residual!r})"
        super().__init__(message)
