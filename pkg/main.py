#!/usr/bin/env python3
"""
quosyn 主程序入口
"""

import sys
from pathlib import Path

# 添加 src 到 Python 路徑
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.cli.commands import main


if __name__ == "__main__":
    main()
