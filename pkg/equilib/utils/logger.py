#!/usr/bin/env python3
"""
equilib 的日志配置
"""

import logging
import os
import sys
from typing import Optional

LOG_ENV_VAR = "EQUILIB_LOG"

_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}


def resolve_level(level: Optional[str] = None, quiet: bool = False) -> int:
    """
    确定日志级别：quiet 优先，其次显式参数，再次环境变量 EQUILIB_LOG，缺省 WARNING
    """
    if quiet:
        return logging.ERROR
    name = level or os.environ.get(LOG_ENV_VAR) or 'WARNING'
    return _LEVELS.get(name.upper(), logging.WARNING)


def setup_logger(level: Optional[str] = None, log_file: Optional[str] = None,
                 quiet: bool = False) -> logging.Logger:
    """
    设置根日志记录器

    日志写到 stderr，stdout 留给 CSV 输出。

    Args:
        level: 日志级别 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: 日志文件路径 (可选)
        quiet: 只输出错误

    Returns:
        logging.Logger: 配置好的根日志记录器
    """
    logger = logging.getLogger()

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    logger.setLevel(resolve_level(level, quiet))

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
