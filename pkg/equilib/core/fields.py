"""
core/fields.py - 用户提供的标量函数 f(T, P)
支持常数、仿射、对数仿射、(T, P) 双线性表格与 T 线性表格，均可由配置字典构造
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .exceptions import ConfigError, DomainError


class Field(ABC):
    """标量函数 f(T, P) 的基类"""

    # 仅依赖温度的函数调用时可省略 P
    depends_on_pressure = True
    knots: Tuple[float, ...] = ()

    @abstractmethod
    def __call__(self, T: float, P: Optional[float] = None) -> float:
        pass

    def partials(self, T: float, P: Optional[float] = None) -> Optional[Tuple[float, float]]:
        """解析偏导 (∂f/∂T, ∂f/∂P)；无解析形式时返回 None"""
        return None

    @property
    def is_constant(self) -> bool:
        return False


@dataclass(frozen=True)
class ConstantField(Field):
    value: float

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        return self.value

    def partials(self, T, P=None):
        return 0.0, 0.0

    @property
    def is_constant(self) -> bool:
        return True


@dataclass(frozen=True)
class AffineField(Field):
    """a + b_T·T + b_P·P"""
    a: float
    b_T: float = 0.0
    b_P: float = 0.0

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        if self.b_P and P is None:
            raise ConfigError("该函数依赖压力，调用时需要压力参数")
        return self.a + self.b_T * T + (self.b_P * P if self.b_P else 0.0)

    def partials(self, T, P=None):
        return self.b_T, self.b_P

    @property
    def depends_on_pressure(self) -> bool:
        return self.b_P != 0.0

    @property
    def is_constant(self) -> bool:
        return self.b_T == 0.0 and self.b_P == 0.0


@dataclass(frozen=True)
class LogAffineField(Field):
    """a + b_T·ln T + b_P·ln P"""
    a: float
    b_T: float = 0.0
    b_P: float = 0.0

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        if self.b_P and P is None:
            raise ConfigError("该函数依赖压力，调用时需要压力参数")
        value = self.a + self.b_T * math.log(T)
        if self.b_P:
            value += self.b_P * math.log(P)
        return value

    def partials(self, T, P=None):
        return self.b_T / T, (self.b_P / P if self.b_P else 0.0)

    @property
    def depends_on_pressure(self) -> bool:
        return self.b_P != 0.0

    @property
    def is_constant(self) -> bool:
        return self.b_T == 0.0 and self.b_P == 0.0


class TableField(Field):
    """(T, P) 网格上的双线性插值，越界报错"""

    def __init__(self, T: Sequence[float], P: Sequence[float], values: Sequence[Sequence[float]],
                 name: str = "table"):
        self.name = name
        t_axis = np.asarray(T, dtype=float)
        p_axis = np.asarray(P, dtype=float)
        grid = np.asarray(values, dtype=float)
        if grid.shape != (t_axis.size, p_axis.size):
            raise ConfigError(f"表格形状应为 ({t_axis.size}, {p_axis.size})，实际为 {grid.shape}",
                              field=f"{name}.values")
        if np.any(np.diff(t_axis) <= 0) or np.any(np.diff(p_axis) <= 0):
            raise ConfigError("表格坐标必须严格递增", field=name)
        self._interp = RegularGridInterpolator((t_axis, p_axis), grid, method="linear",
                                               bounds_error=True)
        self.knots = tuple(float(t) for t in t_axis)

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        if P is None:
            raise ConfigError("该表格需要压力参数", field=self.name)
        try:
            return float(self._interp([[T, P]])[0])
        except ValueError:
            raise DomainError(f"(T={T!r}, P={P!r}) 超出表格 '{self.name}' 的范围")


class TemperatureTableField(Field):
    """T 上的分段线性插值，禁止外推"""

    depends_on_pressure = False

    def __init__(self, T: Sequence[float], values: Sequence[float], name: str = "table_T"):
        self.name = name
        self.T = np.asarray(T, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.T.shape != self.values.shape or self.T.size < 2:
            raise ConfigError("T 与 values 长度必须一致且至少 2 个点", field=name)
        if np.any(np.diff(self.T) <= 0):
            raise ConfigError("温度坐标必须严格递增", field=f"{name}.T")
        self.knots = tuple(float(t) for t in self.T)

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        if not self.T[0] <= T <= self.T[-1]:
            raise DomainError(f"T={T!r} 超出表格 '{self.name}' 的范围 "
                              f"[{self.T[0]!r}, {self.T[-1]!r}]")
        return float(np.interp(T, self.T, self.values))


class CallableField(Field):
    """包装任意 Python 可调用对象 fn(T, P)"""

    def __init__(self, fn: Callable[..., float], depends_on_pressure: bool = True):
        self.fn = fn
        self.depends_on_pressure = depends_on_pressure

    def __call__(self, T: float, P: Optional[float] = None) -> float:
        if self.depends_on_pressure:
            return float(self.fn(T, P))
        return float(self.fn(T))


FieldLike = Any


def as_field(value: FieldLike, name: str = "field") -> Field:
    """把常数、可调用对象或配置字典统一转换为 Field"""
    if isinstance(value, Field):
        return value
    if isinstance(value, bool):
        raise ConfigError("需要数值或函数定义", field=name)
    if isinstance(value, (int, float)):
        return ConstantField(float(value))
    if isinstance(value, dict):
        return field_from_config(value, name)
    if callable(value):
        return CallableField(value)
    raise ConfigError(f"无法解析为函数: {value!r}", field=name)


_FIELD_KEYS = {
    "constant": {"kind", "value"},
    "affine": {"kind", "a", "b_T", "b_P"},
    "log_affine": {"kind", "a", "b_T", "b_P"},
    "table": {"kind", "T", "P", "values"},
    "table_T": {"kind", "T", "values"},
}


def field_from_config(spec: Dict[str, Any], name: str = "field") -> Field:
    """
    由配置字典构造 Field

    Args:
        spec: 形如 {kind: affine, a: 1.0, b_T: 0.1} 的字典
        name: 字段路径（用于错误信息）
    """
    kind = spec.get("kind")
    if kind not in _FIELD_KEYS:
        raise ConfigError(f"未知函数类型 '{kind}'，可选: {', '.join(_FIELD_KEYS)}",
                          field=f"{name}.kind")
    unknown = set(spec) - _FIELD_KEYS[kind]
    if unknown:
        raise ConfigError(f"未知字段 {sorted(unknown)}", field=name)

    try:
        if kind == "constant":
            return ConstantField(float(spec["value"]))
        if kind == "affine":
            return AffineField(float(spec.get("a", 0.0)), float(spec.get("b_T", 0.0)),
                               float(spec.get("b_P", 0.0)))
        if kind == "log_affine":
            return LogAffineField(float(spec.get("a", 0.0)), float(spec.get("b_T", 0.0)),
                                  float(spec.get("b_P", 0.0)))
        if kind == "table":
            return TableField(spec["T"], spec["P"], spec["values"], name=name)
        return TemperatureTableField(spec["T"], spec["values"], name=name)
    except KeyError as e:
        raise ConfigError(f"缺少字段 {e.args[0]}", field=name)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"数值格式错误: {e}", field=name)
