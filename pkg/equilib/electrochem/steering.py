"""
electrochem/steering.py - 由动态平衡曲线上的实测电位标定模型，
再沿最大反应路径给出所需的电位偏移
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.constants import T_REF
from ..core.exceptions import CalibrationError
from ..core.gibbs_model import AffineGibbsModel
from ..paths.maximal import trace_maximal_reaction
from ..paths.traced_path import PathPoint, StopReason
from .cell import CellSpec, cell_potential, dg_dxi_from_measurement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Measurement:
    """一次电位测量；E 为绝对电位 V（电池未给出 E° 时视为 E − E°）"""
    T: float
    P: float
    E: float


@dataclass
class CellCalibration:
    """标定结果"""
    eps_hat: float
    model: AffineGibbsModel
    dg_dxi: List[float]
    residuals: List[float]
    residual_rms: float
    standard_rms: float = 0.0


@dataclass(frozen=True)
class ScheduleRow:
    T: float
    P: float
    E_offset: float
    quotient: float
    dg_dxi: float
    grad_norm: float
    in_region: bool


@dataclass
class SteeringSchedule:
    rows: List[ScheduleRow] = field(default_factory=list)
    calibration: Optional[CellCalibration] = None
    stop_reason: StopReason = StopReason.CONVERGED

    def __len__(self) -> int:
        return len(self.rows)


def _reference_potential(cell: CellSpec, T: float) -> float:
    return 0.0 if cell.e_standard is None else cell.standard_potential(T)


def _fit_standard_part(T: np.ndarray, values: np.ndarray,
                       with_log: bool) -> Tuple[float, float, float, float]:
    """在基 (1, T[, ln T]) 上拟合 P° 处的 ∂G/∂ξ，返回 (λ′, β, σ, RMS)"""
    columns = [np.ones_like(T), T] + ([np.log(T)] if with_log else [])
    design = np.column_stack(columns)
    # 测量温度不足以确定全部系数时从高阶列开始去掉
    while design.shape[1] > 1:
        scaled = design / np.linalg.norm(design, axis=0)
        if np.linalg.matrix_rank(scaled) == design.shape[1]:
            break
        design = design[:, :-1]
    coef, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    residual = values - design @ coef
    padded = list(coef) + [0.0] * (3 - coef.size)
    return (float(padded[0]), float(padded[1]), float(padded[2]),
            float(np.sqrt(np.mean(residual ** 2))))


def calibrate_cell(cell: CellSpec, measurements: Sequence[Measurement],
                   rtol: float = 1e-8) -> CellCalibration:
    """
    用实测电位标定 ∂G/∂ξ

    测量关系只约束压力偏移 ∂G/∂ξ − ∂G/∂ξ|_{P°}，P° 处的值以电池的 ΔG°(T) 为锚点
    （cell.dg_standard，缺省为模型的标准部分）。步骤：

    1. 用 dg_dxi_from_measurement 恢复每个测量点的 ∂G/∂ξ；
    2. 压力偏移对 ln(P/P°) 做过原点最小二乘，得到 ε̂；
    3. ∂G/∂ξ − ε̂·ln(P/P°) 在基 (1, T, ln T) 上拟合，得到标定后的 λ′、β、σ
       （ε̂ ≠ 0 时 σ = 0）。

    Args:
        cell: 电池（模型作为初始猜测）
        measurements: 实测电位
        rtol: 压力偏移残差的相对容差

    Returns:
        CellCalibration

    Raises:
        CalibrationError: 测量为空、压力全部等于 P° 或残差超过容差
    """
    if not measurements:
        raise CalibrationError("没有可用于标定的测量数据")

    p_std = cell.model.p_standard
    T = np.array([m.T for m in measurements], dtype=float)
    x = np.array([math.log(m.P / p_std) for m in measurements])
    dg_std = np.array([cell.dg_at_standard_pressure(m.T) for m in measurements])
    dg = np.array([dg_dxi_from_measurement(cell, m.T, m.P, m.E,
                                           _reference_potential(cell, m.T), s)
                   for m, s in zip(measurements, dg_std)])
    shift = dg - dg_std

    if not np.any(x != 0.0):
        raise CalibrationError("所有测量点都在标准压力上，无法确定压力灵敏度")
    coef, _, _, _ = np.linalg.lstsq(x[:, np.newaxis], shift, rcond=None)
    eps_hat = float(coef[0])
    residuals = shift - eps_hat * x
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    scale = max(float(np.max(np.abs(shift))), 1.0)

    if rms > rtol * scale:
        raise CalibrationError(f"标定残差 {rms!r} 超过容差 {rtol * scale!r}",
                               residual=rms, residuals=residuals.tolist())

    lam, beta, sigma, standard_rms = _fit_standard_part(
        T, dg - eps_hat * x, with_log=abs(eps_hat) <= rtol * scale)
    if standard_rms > rtol * max(float(np.max(np.abs(dg_std))), 1.0):
        logger.warning(f"P° 处的 ΔG°(T) 不是仿射形式，拟合残差 RMS = {standard_rms!r}")

    logger.info(f"电池标定完成: ε̂ = {eps_hat!r}, λ′ = {lam!r}, β = {beta!r}, σ = {sigma!r}, "
                f"残差 RMS = {rms!r}")
    return CellCalibration(
        eps_hat=eps_hat,
        model=AffineGibbsModel(lam, eps_hat, beta, sigma, p_std),
        dg_dxi=dg.tolist(),
        residuals=residuals.tolist(),
        residual_rms=rms,
        standard_rms=standard_rms,
    )


def steering_schedule(cell: CellSpec, measurements: Sequence[Measurement],
                      start: Tuple[float, float], step: float = 1e-2,
                      max_steps: int = 10000, direction: int = 1, rtol: float = 1e-8,
                      t_ref: float = T_REF,
                      progress: Optional[Callable[[int], None]] = None) -> SteeringSchedule:
    """
    生成沿最大反应路径推动反应的电位调度表

    Args:
        cell: 电池
        measurements: 动态平衡曲线上的实测电位
        start: 最大反应路径起点 (T0, P0)
        step: 路径步长（缩放坐标）
        max_steps: 最大步数
        direction: 路径方向
        rtol: 标定残差容差

    预测电位使用标定后的模型，闭式活度商也随之更新。

    Returns:
        SteeringSchedule；离开区域的第一个点以 in_region=False 附在末尾

    Raises:
        CalibrationError: 标定失败
        RegionError: 起点不在区域内
    """
    calibration = calibrate_cell(cell, measurements, rtol)
    model = calibration.model
    calibrated = replace(cell, model=model)
    T0, P0 = start
    path = trace_maximal_reaction(model, cell.errors, T0, P0, step=step, max_steps=max_steps,
                                  direction=direction, t_ref=t_ref, progress=progress)

    def row(point: PathPoint, inside: bool) -> ScheduleRow:
        return ScheduleRow(point.T, point.P, cell_potential(calibrated, point.T, point.P),
                           point.quotient, model.dg_dxi(point.T, point.P), point.grad_norm,
                           inside)

    schedule = SteeringSchedule(calibration=calibration, stop_reason=path.stop_reason)
    schedule.rows.extend(row(p, True) for p in path.points)
    if path.exit_point is not None:
        schedule.rows.append(row(path.exit_point, False))
        logger.warning(f"调度表在 T={path.exit_point.T!r}, P={path.exit_point.P!r} 处离开 "
                       f"|grad Q| ≥ 1 区域")
    return schedule
