#!/usr/bin/env python3
"""
Julia-Seeker 主程序入口
"""

import sys
from pathlib import Path

# 添加项目根目录到Python路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.cli.commands import main


if __name__ == "__main__":
    main()
