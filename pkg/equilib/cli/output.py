"""
cli/output.py - CSV 读写

数值使用最短往返表示（至多 17 位有效数字），附加信息以 "# key=value" 注释行写在表尾。
"""

import io
import logging
import math
from pathlib import Path
from typing import Any, List, Optional

import click
import numpy as np
import pandas as pd

from ..core.exceptions import ConfigError
from ..core.run_manager import CommandResult
from ..electrochem.steering import Measurement

logger = logging.getLogger(__name__)

MEASUREMENT_COLUMNS = ("T_K", "P_Pa", "E_V")


def format_value(value: Any) -> str:
    """单元格格式：浮点数取 repr，布尔值为 true/false"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def render_csv(result: CommandResult) -> str:
    """把命令结果渲染为 CSV 文本"""
    frame = result.frame.copy()
    for column in frame.columns:
        frame[column] = frame[column].map(format_value)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False)
    text = buffer.getvalue().replace("\r\n", "\n")
    for key, value in result.footer.items():
        text += f"# {key}={format_value(value)}\n"
    return text


def write_result(result: CommandResult, out: Optional[str] = None) -> None:
    """写到文件；out 为空时写到 stdout"""
    text = render_csv(result)
    if out is None:
        click.echo(text, nl=False)
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"已写出 {len(result.frame)} 行到 {path}")


def read_table(path: str) -> pd.DataFrame:
    """读取本工具写出的 CSV（跳过表尾注释）"""
    return pd.read_csv(path, comment="#")


def read_measurements(path: Path) -> List[Measurement]:
    """
    读取电位测量数据，列为 T_K, P_Pa, E_V

    Raises:
        ConfigError: 文件缺列或含非有限值
    """
    try:
        frame = pd.read_csv(path, comment="#")
    except FileNotFoundError:
        raise ConfigError(f"测量文件不存在: {path}", field="cell.measurements")
    except pd.errors.EmptyDataError:
        return []
    missing = [c for c in MEASUREMENT_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"测量文件缺少列 {missing}", field="cell.measurements")
    values = frame[list(MEASUREMENT_COLUMNS)].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise ConfigError("测量文件含有非有限值", field="cell.measurements")
    return [Measurement(float(T), float(P), float(E)) for T, P, E in values]
