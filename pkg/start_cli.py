"""
命令行启动脚本
"""

import sys
import os

# 添加项目根目录到路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.cli import main


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n👋 已中断", file=sys.stderr)
        sys.exit(130)
    except Exception as e:
        print(f"❌ 运行失败: {e}", file=sys.stderr)
        sys.exit(1)
