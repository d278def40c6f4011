#!/usr/bin/env python3
"""
Configuration and environment checks for SEForge.
"""

import importlib
from pathlib import Path
from typing import List, Optional, Tuple

from config.config_manager import ConfigManager


DEPENDENCIES: List[Tuple[str, str]] = [

    ('numpy', 'Tensors and random streams'),
    ('scipy', 'Rank data, softmax and distribution tests'),
    ('pandas', 'Result CSVs'),
    ('matplotlib', 'Histogram SVGs'),
    ('yaml', 'Configuration files'),
    ('dotenv', '.env overrides'),
    ('psutil', 'Worker count detection'),
    ('anytree', 'Configuration tree display')
]


class ConfigValidator:

    def __init__( self, config_path: Optional[Path] ):

        self.config_path = Path(config_path) if config_path else None

    def load( self ) -> ConfigManager:

        # Raises ConfigurationError naming every offending key

        manager = ConfigManager(str(self.config_path) if self.config_path else None)
        manager.validate()
        return manager

    def check_requirements( self ) -> bool:

        print("\n[+] Checking SEForge requirements...")
        print("-" * 50)

        missing_items = []

        if self.config_path is not None:

            if self.config_path.exists():
                print(f"[+] Configuration file: {self.config_path}")
            else:
                print(f"[-] Configuration file: {self.config_path}")
                missing_items.append(str(self.config_path))

        for module, description in DEPENDENCIES:

            try:
                importlib.import_module(module)
                print(f"[+] {description}: {module}")

            except ImportError:
                print(f"[-] {description}: {module}")
                missing_items.append(module)

        print("-" * 50)

        if missing_items:

            print(f"\n[x] Missing requirements: {', '.join(missing_items)}")
            print("[+] Install missing packages:")
            print("[+]  pip install -r requirements.txt")
            return False

        print("[+] All requirements satisfied!\n")
        return True
