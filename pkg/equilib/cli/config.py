"""
cli/config.py - YAML 配置文件的加载与结构校验
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from ..core.exceptions import ConfigError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# 任意键（值由下游构造函数校验）
ANY = None
_WILDCARD = "*"

_STATE_KEYS = {"T0": ANY, "P0": ANY, "step": ANY, "max_steps": ANY, "direction": ANY}
_LEVEL_KEYS = {"level": ANY, "T_min": ANY, "T_max": ANY, "n_points": ANY}
_GRID_KEYS = {"T_min": ANY, "T_max": ANY, "T_points": ANY,
              "P_min": ANY, "P_max": ANY, "P_points": ANY}

SCHEMA: Dict[str, Any] = {
    "schema_version": ANY,
    "system": {
        "p_standard": ANY,
        "gas_constant": ANY,
        "faraday": ANY,
        "solvent_mode": ANY,
        "quotient_convention": ANY,
        "species": [{
            "name": ANY, "nu": ANY, "molar_mass": ANY, "molar_volume": ANY,
            "henry_constant": ANY, "heat_capacity": ANY, "is_solvent": ANY,
        }],
    },
    "regime": ANY,
    "model": {
        "lam": ANY, "lambda_raw": ANY, "eps": ANY, "beta": ANY, "sigma": ANY,
        "fit_samples": ANY, "eps_tol": ANY,
    },
    "errors": {_WILDCARD: {
        "p_star": ANY, "p_prime": ANY, "a0": ANY, "phi0": ANY,
        "gamma": ANY, "delta": ANY, "psi": ANY,
    }},
    "quotient": {**_GRID_KEYS, "atol_eq": ANY},
    "trace": {
        "maximal": dict(_STATE_KEYS),
        "dynamic": dict(_LEVEL_KEYS),
        "quasi": dict(_LEVEL_KEYS),
    },
    "feasible": {
        "initial": ANY, "pivot": ANY, "t_points": ANY, "strict": ANY, "enumerate_all": ANY,
        "target": {"kind": ANY, "value": ANY, "T": ANY, "P": ANY, "t": ANY, "q": ANY},
    },
    "cell": {
        "n_electrons": ANY, "e_standard": ANY, "quotient": ANY, "dg_standard": ANY,
        "measurements": ANY,
        **_GRID_KEYS,
        "steering": {**_STATE_KEYS, "rtol": ANY},
    },
    "enthalpy": {
        "m_mix": ANY, "dh_ref": ANY, "T0": ANY, "heat_capacity": {_WILDCARD: ANY},
        "T_min": ANY, "T_max": ANY, "n_points": ANY, "c_bound": ANY,
    },
    "output": {"path": ANY},
    "logging": {"level": ANY, "file": ANY},
}

NodePath = Tuple[Any, ...]


@dataclass
class ConfigDocument:
    """已加载的配置：数据、各节点所在行号与文件位置"""
    data: Dict[str, Any]
    lines: Dict[NodePath, int] = field(default_factory=dict)
    source: Optional[Path] = None

    def section(self, name: str) -> Dict[str, Any]:
        return self.data.get(name) or {}

    def resolve(self, relative: str) -> Path:
        """相对于配置文件所在目录解析路径"""
        path = Path(relative)
        if path.is_absolute() or self.source is None:
            return path
        return self.source.parent / path

    def line_of(self, dotted: Optional[str]) -> Optional[int]:
        """
        字段路径对应的行号；species.<名称>.<字段> 映射到 system.species 列表项。
        找不到时逐级退回到上层节点。
        """
        if not dotted:
            return None
        parts = dotted.split(".")
        if parts[0] == "species" and len(parts) >= 2:
            names = [s.get("name") for s in self.data.get("system", {}).get("species") or []
                     if isinstance(s, dict)]
            if parts[1] in names:
                parts = ["system", "species", names.index(parts[1])] + parts[2:]
            else:
                parts = ["system", "species"]
        key: NodePath = tuple(parts)
        while key:
            if key in self.lines:
                return self.lines[key]
            key = key[:-1]
        return None

    def locate(self, error: ConfigError) -> ConfigError:
        """为缺少行号的 ConfigError 补上行号"""
        if error.line is not None or error.field is None:
            return error
        line = self.line_of(error.field)
        if line is None:
            return error
        message = str(error)
        prefix = f"{error.field}: "
        if message.startswith(prefix):
            message = message[len(prefix):]
        return ConfigError(message, field=error.field, line=line)


def _collect_lines(node: yaml.Node, path: NodePath, lines: Dict[NodePath, int]) -> None:
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            _collect_lines(value_node, path + (key_node.value,), lines)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            _collect_lines(item, path + (i,), lines)


def _validate(value: Any, schema: Any, path: NodePath, lines: Dict[NodePath, int]) -> None:
    if schema is ANY or value is None:
        return
    dotted = ".".join(str(p) for p in path)
    if isinstance(schema, list):
        if not isinstance(value, list):
            raise ConfigError("应为列表", field=dotted, line=lines.get(path))
        for i, item in enumerate(value):
            _validate(item, schema[0], path + (i,), lines)
        return
    if not isinstance(value, dict):
        raise ConfigError("应为映射", field=dotted or None, line=lines.get(path))
    for key, item in value.items():
        if key in schema:
            _validate(item, schema[key], path + (key,), lines)
        elif _WILDCARD in schema:
            _validate(item, schema[_WILDCARD], path + (key,), lines)
        else:
            child = path + (key,)
            allowed = ", ".join(k for k in schema if k != _WILDCARD)
            raise ConfigError(f"未知字段 '{key}'，可选: {allowed}",
                              field=".".join(str(p) for p in child), line=lines.get(child))


def parse_config(text: str, source: Optional[Path] = None) -> ConfigDocument:
    """
    解析并校验配置文本

    Raises:
        ConfigError: YAML 语法错误、schema_version 不符或存在未知字段
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"YAML 解析失败: {getattr(e, 'problem', e)}",
                          line=mark.line + 1 if mark is not None else None)

    lines: Dict[NodePath, int] = {}
    if root is not None:
        _collect_lines(root, (), lines)
    if not isinstance(data, dict):
        raise ConfigError("配置文件顶层必须是映射", line=1)

    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"不支持的 schema_version {version!r}，当前版本为 {SCHEMA_VERSION}",
                          field="schema_version", line=lines.get(("schema_version",)))
    for required in ("system", "regime"):
        if required not in data:
            raise ConfigError("缺少必需字段", field=required)

    _validate(data, SCHEMA, (), lines)
    logger.debug(f"配置校验通过: {source or '<string>'}")
    return ConfigDocument(data, lines, source)


def load_config(path: str) -> ConfigDocument:
    """读取 YAML 配置文件"""
    source = Path(path)
    with open(source, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse_config(text, source)
