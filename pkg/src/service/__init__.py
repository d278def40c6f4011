#!/usr/bin/env python3
"""
Service layer for SEForge: command-line handling, orchestration and configuration inspection.
"""

from service.config_validator import ConfigValidator
from service.config_display import ConfigDisplay
from service.forge_core import SEForge
from service.service_handler import ServiceHandler, build_parser, cli_main

__all__ = [

    'ConfigValidator',
    'ConfigDisplay',
    'SEForge',
    'ServiceHandler',
    'build_parser',
    'cli_main'
]
