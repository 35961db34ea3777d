#!/usr/bin/env python3
"""
不安装包时直接运行命令行工具
"""

import sys
from pathlib import Path

# 添加项目根目录到Python路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from equilib.cli.commands import cli


if __name__ == "__main__":
    cli()
