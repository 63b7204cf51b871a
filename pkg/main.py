"""这是应用入口模块。转交给 resonance.cli 处理命令行。"""
"""EN: Application entry point. Hands the command line to resonance.cli."""

import sys

from resonance.cli import main

if __name__ == "__main__":
    sys.exit(main())
