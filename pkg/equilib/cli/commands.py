"""
cli/commands.py - 命令行接口
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from tqdm import tqdm

from .. import __version__
from ..core.exceptions import (ConfigError, ConstructionFailed, DomainError, EquilibError,
                               NumericalError)
from ..core.run_manager import CommandResult, RunManager
from ..utils.logger import LOG_ENV_VAR, setup_logger
from .config import ConfigDocument, load_config
from .output import read_measurements, write_result

console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4

COMMANDS = ('quotient', 'trace-max', 'trace-dyn', 'trace-quasi', 'cell', 'feasible', 'enthalpy')


@click.group()
@click.version_option(version=__version__, prog_name='equilib')
def cli():
    """equilib - 化学平衡、反应路径与电化学电位计算工具"""
    pass


def common_options(func: Callable) -> Callable:
    """各计算命令共用的选项"""
    @click.option('--config', '-c', type=click.Path(exists=True, dir_okay=False), required=True,
                  help='配置文件路径')
    @click.option('--out', '-o', type=click.Path(dir_okay=False), default=None,
                  help='输出 CSV 路径（缺省写到 stdout）')
    @click.option('--seed', type=int, default=None, help='随机诊断使用的种子')
    @click.option('--quiet', '-q', is_flag=True, help='只输出错误，关闭进度条')
    @click.option('--log-level', envvar=LOG_ENV_VAR,
                  type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                                    case_sensitive=False),
                  default=None, help=f'日志级别（缺省读取 {LOG_ENV_VAR}）')
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)
    return wrapper


class _Progress:
    """tqdm 进度条包装为 progress(k) 回调"""

    def __init__(self, total: Optional[int], desc: str, disable: bool):
        self.bar = tqdm(total=total, desc=desc, disable=disable, leave=False, file=sys.stderr)
        self.position = 0

    def __call__(self, k: int) -> None:
        self.bar.update(k - self.position)
        self.position = k

    def close(self) -> None:
        self.bar.close()


def _load(config: str, log_level: Optional[str], quiet: bool) -> ConfigDocument:
    document = load_config(config)
    logging_section = document.section("logging")
    level = log_level or logging_section.get("level")
    log_file = logging_section.get("file")
    setup_logger(level, str(document.resolve(log_file)) if log_file else None, quiet)
    return document


def _fail(code: int, message: str) -> None:
    console.print(f"[red]错误：{escape(message)}[/red]")
    sys.exit(code)


def execute(config: str, out: Optional[str], seed: Optional[int], quiet: bool,
            log_level: Optional[str], action: Callable[[RunManager, bool], CommandResult]) -> None:
    """
    加载配置、执行命令并写出结果；按异常类别设置退出码
    """
    document: Optional[ConfigDocument] = None
    try:
        document = _load(config, log_level, quiet)
        if seed is not None:
            logger.debug(f"随机种子: {seed}")
        manager = RunManager(document.data, document.resolve("."))
        result = action(manager, quiet)
        output = out or document.section("output").get("path")
        if output and not out:
            output = str(document.resolve(output))
        write_result(result, output)
        if output and not quiet:
            console.print(f"[green]结果已写入 {output}[/green]")
    except ConfigError as e:
        if document is not None:
            e = document.locate(e)
        logger.debug("配置错误", exc_info=True)
        _fail(EXIT_CONFIG, str(e))
    except DomainError as e:
        logger.debug("定义域错误", exc_info=True)
        _fail(EXIT_DOMAIN, str(e))
    except ConstructionFailed as e:
        logger.debug("构造失败", exc_info=True)
        display_root_table(e.root_table)
        _fail(EXIT_NUMERICAL, str(e))
    except NumericalError as e:
        logger.error(f"数值计算失败: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
        _fail(EXIT_NUMERICAL, str(e))
    except EquilibError as e:
        _fail(1, str(e))


def _quotient(manager: RunManager, quiet: bool) -> CommandResult:
    section = manager.section("quotient")
    progress = _Progress(section.get("T_points"), "quotient", quiet)
    try:
        return manager.quotient_grid(progress)
    finally:
        progress.close()


def _trace(kind: str) -> Callable[[RunManager, bool], CommandResult]:
    def action(manager: RunManager, quiet: bool) -> CommandResult:
        total = (manager.section("trace").get("maximal") or {}).get("max_steps", 10000)
        progress = _Progress(total if kind == "maximal" else None, f"trace-{kind}", quiet)
        try:
            result = manager.trace_result(kind, progress)
        finally:
            progress.close()
        if not quiet and "stop_reason" in result.footer:
            console.print(f"停止原因：{result.footer['stop_reason']}")
        return result
    return action


def _cell(measurements_path: Optional[str]) -> Callable[[RunManager, bool], CommandResult]:
    def action(manager: RunManager, quiet: bool) -> CommandResult:
        source = measurements_path or manager.section("cell").get("measurements")
        measurements = None
        if source:
            path = Path(measurements_path) if measurements_path else manager.resolve(source)
            measurements = read_measurements(path)
        progress = _Progress(None, "cell", quiet)
        try:
            return manager.cell_result(measurements, progress)
        finally:
            progress.close()
    return action


def _feasible(manager: RunManager, quiet: bool) -> CommandResult:
    return manager.feasible_result()


def _enthalpy(manager: RunManager, quiet: bool) -> CommandResult:
    return manager.enthalpy_result()


_ACTIONS = {
    'quotient': _quotient,
    'trace-max': _trace("maximal"),
    'trace-dyn': _trace("dynamic"),
    'trace-quasi': _trace("quasi"),
    'feasible': _feasible,
    'enthalpy': _enthalpy,
}


@cli.command()
@common_options
def quotient(config, out, seed, quiet, log_level):
    """在 (T, P) 网格上计算活度商与 ∂G/∂ξ"""
    execute(config, out, seed, quiet, log_level, _quotient)


@cli.command('trace-max')
@common_options
def trace_max(config, out, seed, quiet, log_level):
    """追踪最大反应路径"""
    execute(config, out, seed, quiet, log_level, _ACTIONS['trace-max'])


@cli.command('trace-dyn')
@common_options
def trace_dyn(config, out, seed, quiet, log_level):
    """追踪动态平衡曲线 Q = c"""
    execute(config, out, seed, quiet, log_level, _ACTIONS['trace-dyn'])


@cli.command('trace-quasi')
@common_options
def trace_quasi(config, out, seed, quiet, log_level):
    """追踪准化学平衡曲线 ∂G/∂ξ = c"""
    execute(config, out, seed, quiet, log_level, _ACTIONS['trace-quasi'])


@cli.command()
@common_options
@click.option('--measurements', '-m', type=click.Path(exists=True, dir_okay=False), default=None,
              help='电位测量 CSV（列 T_K, P_Pa, E_V）；给出时输出电位调度表')
def cell(config, out, seed, quiet, log_level, measurements):
    """计算 Nernst 电位面或电位调度表"""
    execute(config, out, seed, quiet, log_level, _cell(measurements))


@cli.command()
@common_options
def feasible(config, out, seed, quiet, log_level):
    """构造可行组成路径"""
    execute(config, out, seed, quiet, log_level, _feasible)


@cli.command()
@common_options
def enthalpy(config, out, seed, quiet, log_level):
    """计算 ΔH°(T) 与误差泛函 w"""
    execute(config, out, seed, quiet, log_level, _enthalpy)


@cli.command()
@common_options
@click.option('--command', 'command', type=click.Choice(COMMANDS), required=True,
              help='要执行的计算')
def run(config, out, seed, quiet, log_level, command):
    """按 --command 执行任一计算"""
    action = _cell(None) if command == 'cell' else _ACTIONS[command]
    execute(config, out, seed, quiet, log_level, action)


@cli.command()
@click.option('--config', '-c', type=click.Path(exists=True, dir_okay=False), required=True,
              help='配置文件路径')
def validate(config):
    """验证配置文件"""
    document = None
    try:
        document = load_config(config)
        with console.status("构造体系与模型..."):
            manager = RunManager(document.data)
        display_summary(manager.summary())
        console.print("\n[green]配置验证通过！[/green]")
    except ConfigError as e:
        if document is not None:
            e = document.locate(e)
        _fail(EXIT_CONFIG, f"配置验证失败：{e}")
    except DomainError as e:
        _fail(EXIT_DOMAIN, f"配置验证失败：{e}")
    except NumericalError as e:
        _fail(EXIT_NUMERICAL, f"配置验证失败：{e}")


@cli.command('generate-config')
@click.option('--output', '-o', default='equilib_config.yaml', help='输出文件名')
def generate_config(output):
    """生成配置文件模板"""
    with open(output, 'w', encoding='utf-8') as f:
        f.write(CONFIG_TEMPLATE)
    console.print(f"[green]配置文件模板已生成：{output}[/green]")
    console.print("\n请根据实际情况修改配置文件")


CONFIG_TEMPLATE = """# equilib 配置文件
schema_version: 1

# 反应体系（溶剂如有必须位于第一个）
system:
  p_standard: 1.0e5            # 标准压力 Pa
  solvent_mode: none           # none, no_interaction, interacting
  quotient_convention: Q_plain # Q_plain, Q_with_a0, W, Z
  species:
    - {name: A, nu: -1, molar_mass: 0.028, molar_volume: 2.0e-5}
    - {name: B, nu: 2, molar_mass: 0.014, molar_volume: 1.5e-5}

# 误差模式: idealized, ideal_raoult, dilute_solvated, henry_interacting,
#           fugacity_interacting, henry_no_interaction, fugacity_no_interaction
regime: idealized

# ∂G/∂ξ = λ′ + ε·ln(P/P°) + β·T + σ·ln T
model:
  lam: -1000.0
  eps: 2000.0
  beta: 5.0
  sigma: 0.0

# 各物种的误差参数（按模式需要填写）
errors: {}

quotient:
  T_min: 280.0
  T_max: 320.0
  T_points: 5
  P_min: 5.0e4
  P_max: 2.0e5
  P_points: 4

trace:
  maximal: {T0: 298.15, P0: 2.0e5, step: 0.01, max_steps: 2000, direction: 1}
  dynamic: {level: 1.5, T_min: 280.0, T_max: 320.0, n_points: 41}
  quasi: {level: 0.0, T_min: 280.0, T_max: 320.0, n_points: 41}

feasible:
  initial: [1.0, 0.5]
  t_points: 101
  target: {kind: curve, T: [298.15, 320.0], P: [1.0e5, 2.0e5]}

cell:
  n_electrons: 2
  e_standard: 1.23
  T_min: 298.15
  P_min: 5.0e4
  P_max: 2.0e5
  P_points: 4

enthalpy:
  m_mix: 1.0
  dh_ref: -50000.0
  T0: 298.15
  heat_capacity: {A: 1040.0, B: 1300.0}
  T_min: 298.15
  T_max: 398.15
  n_points: 11

# 日志配置
logging:
  level: WARNING
"""


def display_summary(summary: dict) -> None:
    """显示配置摘要"""
    table = Table(title="配置摘要")
    table.add_column("项目", style="cyan", no_wrap=True)
    table.add_column("取值", style="magenta")
    for key, value in summary.items():
        table.add_row(key, str(value))
    console.print(table)


def display_root_table(rows) -> None:
    """显示可行路径构造失败时的根诊断表"""
    if not rows:
        return
    table = Table(title="根诊断表")
    table.add_column("x", justify="right", style="cyan")
    table.add_column("n_pivot", justify="right")
    table.add_column("可行", style="green")
    for row in rows:
        table.add_row(repr(row.get("x")), repr(row.get("n_pivot")), "✓" if row.get("admissible") else "✗")
    console.print(table)


if __name__ == '__main__':
    cli()
