#!/usr/bin/env python3
"""
Author: SEForge contributors
Version: 1.0.0
License: MIT
"""

import sys
from pathlib import Path


current_dir = Path(__file__).parent.absolute()
src_dir = current_dir / "src"
sys.path.insert(0, str(src_dir))

from service.service_handler import cli_main


if __name__ == "__main__":
    sys.exit(cli_main())
