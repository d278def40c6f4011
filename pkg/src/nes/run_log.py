#!/usr/bin/env python3

import json
from pathlib import Path
from typing import Any, Dict, List


class RunLog:

    # JSON-lines stream, one GenerationReport per line, appended as generations finish


    def __init__( self, path: Path ):

        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text('', encoding='utf-8')


    def append( self, record: Dict[str, Any] ) -> None:

        with self.path.open('a', encoding='utf-8') as f:
            f.write(json.dumps(record) + '\n')


    @staticmethod
    def read( path: Path ) -> List[Dict[str, Any]]:

        with Path(path).open('r', encoding='utf-8') as f:
            return [json.loads(line) for line in f if line.strip()]
