#!/usr/bin/env python3
"""
Configuration display for SEForge.
Pretty-prints the effective configuration using a tree structure.
"""

from typing import Any, Dict

from anytree import Node, RenderTree

from config.config_manager import THREADS_ENV_VAR, ConfigManager


SECTION_ICONS = {

    'task': "🎯",
    'nes': "🧬",
    'se': "🌐",
    'ddqn': "🤖",
    'td3': "🎲",
    'training': "🏋️ ",
    'hp_variation': "🎛️ ",
    'experiment': "🧪",
    'runtime': "⚙️ ",
    'logging': "📝"
}


class ConfigDisplay:

    def __init__( self, config: ConfigManager, workers: int ):

        self.config = config
        self.workers = workers

    def build_tree( self ) -> Node:

        source = str(self.config.config_path) if self.config.config_path else "built-in defaults"
        root = Node(f"📁 SEForge Configuration ({source})")

        for section, values in self.config.to_dict().items():

            section_node = Node(f"{SECTION_ICONS.get(section, '•')} {section}", parent=root)
            self._add_values(values, section_node)

        runtime_node = Node("🧵 effective", parent=root)
        Node(f"workers: {self.workers}", parent=runtime_node)
        Node(f"{THREADS_ENV_VAR} / .env: {self.config.env_path if self.config.env_path.exists() else 'no .env'}", parent=runtime_node)

        return root

    def _add_values( self, values: Dict[str, Any], parent: Node ) -> None:

        if not values:
            Node("(defaults)", parent=parent)
            return

        for key, value in values.items():

            if isinstance(value, dict):
                self._add_values(value, Node(key, parent=parent))
            else:
                Node(f"{key}: {value}", parent=parent)

    def render( self ) -> str:

        return "\n".join(f"{pre}{node.name}" for pre, _, node in RenderTree(self.build_tree()))

    def show_config( self ) -> None:

        print()
        print(self.render())
        print()
