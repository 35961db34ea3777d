#!/usr/bin/env python3
"""
Run Manager - 由配置构造体系、模型与误差模型，并分派各个计算命令
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..electrochem.cell import CellSpec, cell_potential, nernst_potential
from ..electrochem.steering import Measurement, steering_schedule
from ..paths.feasible import (LinkageOffsets, build_profile, continue_branch,
                              tabulated_target)
from ..paths.level_curves import trace_dynamic_equilibrium, trace_quasi_equilibrium
from ..paths.maximal import trace_maximal_reaction
from ..paths.traced_path import TracedPath
from .constants import ATOL_EQUILIBRIUM, F, P_STANDARD, R
from .enthalpy import MixtureHeatModel, bound_w, error_w, heat_capacity_from_config
from .error_model import ErrorModel, create_error_model
from .exceptions import ConfigError
from .gibbs_model import (AffineGibbsModel, RegimeTag, classify_point, fit_model,
                          quotient_along_curve)
from .system import QuotientConvention, ReactionSystem, SolventMode, Species

_DEFAULT_CONVENTION = {
    SolventMode.NONE: QuotientConvention.Q_PLAIN,
    SolventMode.NO_INTERACTION: QuotientConvention.W,
    SolventMode.INTERACTING: QuotientConvention.Z,
}

Progress = Optional[Callable[[int], None]]


@dataclass
class CommandResult:
    """命令输出：表格加上写在文件末尾的注释行"""
    frame: pd.DataFrame
    footer: Dict[str, Any] = field(default_factory=dict)


def _number(section: Dict[str, Any], key: str, where: str, default: Any = None) -> float:
    value = section.get(key, default)
    if value is None:
        raise ConfigError("缺少必需字段", field=f"{where}.{key}")
    if isinstance(value, bool):
        raise ConfigError(f"应为数值，实际 {value!r}", field=f"{where}.{key}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"应为数值，实际 {value!r}", field=f"{where}.{key}")


def _integer(section: Dict[str, Any], key: str, where: str, default: Any = None) -> int:
    value = _number(section, key, where, default)
    if value != int(value):
        raise ConfigError(f"应为整数，实际 {value!r}", field=f"{where}.{key}")
    return int(value)


def _enum(enum_cls, value: str, where: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"未知取值 '{value}'，可选: {allowed}", field=where)


def build_system(section: Dict[str, Any]) -> ReactionSystem:
    """由 system 段构造 ReactionSystem"""
    mode = _enum(SolventMode, section.get("solvent_mode", "none"), "system.solvent_mode")
    convention = section.get("quotient_convention")
    convention = (_DEFAULT_CONVENTION[mode] if convention is None
                  else _enum(QuotientConvention, convention, "system.quotient_convention"))
    entries = section.get("species") or []
    species: List[Species] = []
    for i, entry in enumerate(entries):
        where = f"system.species.{i}"
        name = entry.get("name")
        if not name:
            raise ConfigError("缺少物种名", field=f"{where}.name")
        heat = entry.get("heat_capacity")
        species.append(Species(
            name=str(name),
            nu=_number(entry, "nu", where),
            molar_mass=_number(entry, "molar_mass", where, 1.0),
            molar_volume=entry.get("molar_volume"),
            henry_constant=entry.get("henry_constant"),
            heat_capacity=(None if heat is None
                           else heat_capacity_from_config(heat, f"species.{name}.heat_capacity")),
            is_solvent=bool(entry.get("is_solvent", False)),
        ))
    return ReactionSystem(
        tuple(species), mode, convention,
        p_standard=_number(section, "p_standard", "system", P_STANDARD),
        gas_constant=_number(section, "gas_constant", "system", R),
        faraday=_number(section, "faraday", "system", F),
    )


def build_model(section: Dict[str, Any], p_standard: float) -> AffineGibbsModel:
    """由 model 段构造模型；给出 fit_samples 时改为拟合"""
    if section.get("fit_samples") is not None:
        eps_tol = section.get("eps_tol")
        fit = fit_model(section["fit_samples"], p_standard,
                        None if eps_tol is None else float(eps_tol))
        return fit.model
    eps = _number(section, "eps", "model", 0.0)
    beta = _number(section, "beta", "model", 0.0)
    sigma = _number(section, "sigma", "model", 0.0)
    if "lambda_raw" in section:
        if "lam" in section:
            raise ConfigError("lam 与 lambda_raw 只能给出一个", field="model.lambda_raw")
        return AffineGibbsModel.from_raw(_number(section, "lambda_raw", "model"), eps, beta,
                                         sigma, p_standard)
    return AffineGibbsModel(_number(section, "lam", "model", 0.0), eps, beta, sigma, p_standard)


def _grid(section: Dict[str, Any], where: str, p_standard: float) -> Tuple[np.ndarray, np.ndarray]:
    t_min = _number(section, "T_min", where, 298.15)
    t_max = _number(section, "T_max", where, t_min)
    p_min = _number(section, "P_min", where, p_standard)
    p_max = _number(section, "P_max", where, p_min)
    n_t = _integer(section, "T_points", where, 1 if t_min == t_max else 11)
    n_p = _integer(section, "P_points", where, 1 if p_min == p_max else 11)
    if not (0 < t_min <= t_max and 0 < p_min <= p_max and n_t >= 1 and n_p >= 1):
        raise ConfigError("网格范围不合法", field=where)
    return np.linspace(t_min, t_max, n_t), np.linspace(p_min, p_max, n_p)


class RunManager:
    """运行管理器 - 统一管理各个计算命令"""

    def __init__(self, config: Dict[str, Any], base_dir: Optional[Path] = None):
        """
        初始化运行管理器

        Args:
            config: 已通过结构校验的配置字典
            base_dir: 配置中相对路径的基准目录
        """
        self.config = config
        self.base_dir = Path(base_dir) if base_dir is not None else None
        self.logger = logging.getLogger(self.__class__.__name__)

        self.system = build_system(config.get("system") or {})
        self.regime = RegimeTag.parse(str(config.get("regime", "idealized")))
        self.model = build_model(config.get("model") or {}, self.system.p_standard)
        self.errors = self._create_errors()
        self.logger.info(f"体系 {list(self.system.names)}，模式 {self.regime.value}，"
                         f"模型 {self.model}")

    def _create_errors(self) -> ErrorModel:
        settings = self.config.get("errors") or {}
        return create_error_model(self.system, self.regime, settings)

    def section(self, name: str) -> Dict[str, Any]:
        return self.config.get(name) or {}

    def resolve(self, relative: str) -> Path:
        path = Path(relative)
        if path.is_absolute() or self.base_dir is None:
            return path
        return self.base_dir / path

    def quotient_grid(self, progress: Progress = None) -> CommandResult:
        """(T, P) 网格上的活度商、∂G/∂ξ 与 ε_err"""
        section = self.section("quotient")
        temps, pressures = _grid(section, "quotient", self.system.p_standard)
        atol = _number(section, "atol_eq", "quotient", ATOL_EQUILIBRIUM)
        rows = []
        for k, T in enumerate(temps, 1):
            for P in pressures:
                point = classify_point(self.model, self.errors, float(T), float(P), atol)
                rows.append({
                    "T_K": float(T), "P_Pa": float(P), "quotient": point.quotient,
                    "dg_dxi_J_per_mol": point.dg_dxi, "eps_err_J_per_mol": point.eps_err,
                })
            if progress is not None:
                progress(k)
        frame = pd.DataFrame(rows, columns=["T_K", "P_Pa", "quotient", "dg_dxi_J_per_mol",
                                            "eps_err_J_per_mol"])
        return CommandResult(frame, {"regime": self.regime.value})

    def trace(self, kind: str, progress: Progress = None) -> TracedPath:
        """
        追踪路径

        Args:
            kind: maximal、dynamic 或 quasi
        """
        section = self.section("trace")
        if kind == "maximal":
            params = section.get("maximal") or {}
            return trace_maximal_reaction(
                self.model, self.errors,
                _number(params, "T0", "trace.maximal"), _number(params, "P0", "trace.maximal"),
                step=_number(params, "step", "trace.maximal", 1e-2),
                max_steps=_integer(params, "max_steps", "trace.maximal", 10000),
                direction=_integer(params, "direction", "trace.maximal", 1),
                progress=progress,
            )
        if kind in ("dynamic", "quasi"):
            where = f"trace.{kind}"
            params = section.get(kind) or {}
            level = _number(params, "level", where, 1.0 if kind == "dynamic" else 0.0)
            t_min = _number(params, "T_min", where)
            t_max = _number(params, "T_max", where)
            n_points = _integer(params, "n_points", where, 101)
            if kind == "dynamic":
                return trace_dynamic_equilibrium(self.model, self.errors, level, t_min, t_max,
                                                 n_points)
            return trace_quasi_equilibrium(self.model, level, t_min, t_max, n_points, self.errors)
        raise ConfigError(f"未知路径类型 '{kind}'", field="trace")

    def trace_result(self, kind: str, progress: Progress = None) -> CommandResult:
        path = self.trace(kind, progress)
        frame = pd.DataFrame({
            "t": [p.t for p in path.points],
            "T_K": path.temperatures,
            "P_Pa": path.pressures,
            "quotient": path.quotients,
            "invariant": path.invariants,
            "grad_norm": [p.grad_norm for p in path.points],
        }, columns=["t", "T_K", "P_Pa", "quotient", "invariant", "grad_norm"])
        footer: Dict[str, Any] = {"kind": path.kind.value, "stop_reason": path.stop_reason.value}
        if path.level is not None:
            footer["level"] = path.level
        if path.vertical_lines:
            footer["vertical_lines"] = " ".join(repr(t) for t in path.vertical_lines)
        if path.skipped:
            footer["skipped"] = " ".join(repr(t) for t, _ in path.skipped)
        if kind == "maximal" and len(path) > 1:
            footer["invariant_drift"] = path.invariant_drift()
        return CommandResult(frame, footer)

    def cell(self) -> CellSpec:
        section = self.section("cell")
        return CellSpec(
            n_electrons=_integer(section, "n_electrons", "cell", 2),
            model=self.model,
            errors=self.errors,
            e_standard=section.get("e_standard"),
            quotient=section.get("quotient"),
            dg_standard=section.get("dg_standard"),
            faraday=self.system.faraday,
            gas_constant=self.system.gas_constant,
        )

    def cell_result(self, measurements: Optional[List[Measurement]] = None,
                    progress: Progress = None) -> CommandResult:
        """
        无测量数据时输出 (T, P) 网格上的 Nernst 电位面；
        有测量数据时标定并输出最大反应路径上的电位调度表
        """
        section = self.section("cell")
        cell = self.cell()
        if measurements is None:
            temps, pressures = _grid(section, "cell", self.system.p_standard)
            rows = []
            for T in temps:
                for P in pressures:
                    T_, P_ = float(T), float(P)
                    rows.append({
                        "T_K": T_, "P_Pa": P_,
                        "E_offset_V": nernst_potential(cell, T_, P_),
                        "E_cell_offset_V": cell_potential(cell, T_, P_),
                        "dg_dxi_J_per_mol": self.model.dg_dxi(T_, P_),
                    })
            frame = pd.DataFrame(rows, columns=["T_K", "P_Pa", "E_offset_V", "E_cell_offset_V",
                                                "dg_dxi_J_per_mol"])
            return CommandResult(frame, {"n_electrons": cell.n_electrons})

        params = section.get("steering") or {}
        schedule = steering_schedule(
            cell, measurements,
            (_number(params, "T0", "cell.steering"), _number(params, "P0", "cell.steering")),
            step=_number(params, "step", "cell.steering", 1e-2),
            max_steps=_integer(params, "max_steps", "cell.steering", 10000),
            direction=_integer(params, "direction", "cell.steering", 1),
            rtol=_number(params, "rtol", "cell.steering", 1e-8),
            progress=progress,
        )
        frame = pd.DataFrame([{
            "T_K": r.T, "P_Pa": r.P, "E_offset_V": r.E_offset, "quotient": r.quotient,
            "dg_dxi_J_per_mol": r.dg_dxi, "in_region": r.in_region,
        } for r in schedule.rows], columns=["T_K", "P_Pa", "E_offset_V", "quotient",
                                            "dg_dxi_J_per_mol", "in_region"])
        footer = {
            "n_electrons": cell.n_electrons,
            "eps_hat": schedule.calibration.eps_hat,
            "lam_hat": schedule.calibration.model.lam,
            "beta_hat": schedule.calibration.model.beta,
            "sigma_hat": schedule.calibration.model.sigma,
            "calibration_rms": schedule.calibration.residual_rms,
            "stop_reason": schedule.stop_reason.value,
        }
        return CommandResult(frame, footer)

    def _feasible_target(self, target: Dict[str, Any]) -> Callable[[float], float]:
        kind = target.get("kind", "constant")
        if kind == "constant":
            value = _number(target, "value", "feasible.target")
            if not value > 0:
                raise ConfigError("目标活度商必须 > 0", field="feasible.target.value")
            return lambda t: value
        if kind == "table":
            return tabulated_target(target.get("t") or [], target.get("q") or [])
        if kind == "curve":
            temps = target.get("T")
            pressures = target.get("P")
            if not (isinstance(temps, list) and len(temps) == 2
                    and isinstance(pressures, list) and len(pressures) == 2):
                raise ConfigError("curve 目标需要 T: [起点, 终点] 与 P: [起点, 终点]",
                                  field="feasible.target")
            (t0, t1), (p0, p1) = map(float, temps), map(float, pressures)

            def curve(t: float) -> Tuple[float, float]:
                return t0 + (t1 - t0) * t, p0 + (p1 - p0) * t

            return quotient_along_curve(self.model, self.errors, curve)
        raise ConfigError(f"未知目标类型 '{kind}'，可选: constant, table, curve",
                          field="feasible.target.kind")

    def feasible_result(self) -> CommandResult:
        """沿目标活度商 ε(t) 构造可行组成路径"""
        section = self.section("feasible")
        initial = section.get("initial")
        if initial is None:
            raise ConfigError("缺少必需字段", field="feasible.initial")
        pivot = section.get("pivot")
        if pivot is not None:
            pivot = self.system.index_of(str(pivot))
        offsets = LinkageOffsets.from_initial(self.system, initial, pivot)
        target = self._feasible_target(section.get("target") or {})
        profile = build_profile(self.system, offsets, target,
                                enumerate_all=bool(section.get("enumerate_all", False)))
        grid = np.linspace(0.0, 1.0, _integer(section, "t_points", "feasible", 101))
        path = continue_branch(profile, target, grid, strict=bool(section.get("strict", False)))

        spec = section.get("target") or {}
        data: Dict[str, Any] = {"t": path.t}
        if spec.get("kind") == "curve":
            temps, pressures = [float(v) for v in spec["T"]], [float(v) for v in spec["P"]]
            data["T_K"] = temps[0] + (temps[1] - temps[0]) * path.t
            data["P_Pa"] = pressures[0] + (pressures[1] - pressures[0]) * path.t
        for i, name in enumerate(self.system.names):
            data[f"n_{name}"] = path.amounts[:, i]
        data["quotient"] = path.quotient
        frame = pd.DataFrame(data)
        footer: Dict[str, Any] = {"pivot": self.system.names[offsets.pivot],
                                  "truncated": path.truncated}
        if path.truncated:
            footer["t_stop"] = path.t_stop
        if profile.branches:
            footer["branches"] = " ".join(repr(1.0 / x) for x in profile.branches)
        return CommandResult(frame, footer)

    def heat_model(self) -> MixtureHeatModel:
        section = self.section("enthalpy")
        return MixtureHeatModel.from_system(
            self.system, section.get("heat_capacity") or {},
            m_mix=_number(section, "m_mix", "enthalpy"),
            dh_ref=_number(section, "dh_ref", "enthalpy", 0.0),
            T0=_number(section, "T0", "enthalpy", 298.15),
        )

    def enthalpy_result(self) -> CommandResult:
        """ΔH°(T)、反应热容、w(T0, T) 及其上界"""
        section = self.section("enthalpy")
        hm = self.heat_model()
        t_min = _number(section, "T_min", "enthalpy", hm.T0)
        t_max = _number(section, "T_max", "enthalpy", t_min)
        n_points = _integer(section, "n_points", "enthalpy", 1 if t_min == t_max else 51)
        rows = []
        for T in np.linspace(t_min, t_max, n_points):
            T = float(T)
            c_bound = section.get("c_bound")
            c_bound = hm.capacity_sup(hm.T0, T) if c_bound is None else float(c_bound)
            rows.append({
                "T_K": T,
                "delta_h_J_per_mol": hm.delta_h(T),
                "heat_capacity_J_per_mol_K": hm.reaction_heat_capacity(T),
                "w_J_per_mol": error_w(hm, hm.T0, T),
                "w_bound_J_per_mol": bound_w(hm, hm.T0, T, c_bound),
            })
        frame = pd.DataFrame(rows, columns=["T_K", "delta_h_J_per_mol",
                                            "heat_capacity_J_per_mol_K", "w_J_per_mol",
                                            "w_bound_J_per_mol"])
        return CommandResult(frame, {"m_mix": hm.m_mix, "T0": hm.T0})

    def summary(self) -> Dict[str, Any]:
        """配置摘要（validate 命令使用）"""
        return {
            "species": ", ".join(f"{s.name}({s.nu:g})" for s in self.system.species),
            "solvent_mode": self.system.solvent_mode.value,
            "quotient_convention": self.system.quotient_convention.value,
            "p_standard": self.system.p_standard,
            "regime": self.regime.value,
            "model": (f"λ′={self.model.lam!r}, ε={self.model.eps!r}, "
                      f"β={self.model.beta!r}, σ={self.model.sigma!r}"),
            "error_signature": self.errors.signature or "-",
            "sections": ", ".join(k for k in self.config if k != "schema_version"),
        }

