#!/usr/bin/env python3
"""
Worker pool for population and suite evaluation.
Runs one job per item, in a process or thread pool, and hands results back in
item order so that serial and parallel runs aggregate identically.
"""

from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

from utils.error_handler import ConfigurationError
from utils.logger import Logger


EXECUTORS = {

    'process': ProcessPoolExecutor,
    'thread': ThreadPoolExecutor
}


@dataclass
class JobOutcome:

    index: int
    value: Any = None
    error: Optional[BaseException] = None


    @property
    def ok( self ) -> bool:

        return self.error is None


class ProcessManager:


    def __init__( self, workers: int = 1, executor: str = "process", logger: Optional[Logger] = None ):

        if workers < 1:
            raise ConfigurationError(f"Worker count must be >= 1, got {workers}")

        if executor not in EXECUTORS:
            raise ConfigurationError(f"Unknown executor '{executor}'. Use 'process' or 'thread'")

        self.workers = workers
        self.executor = executor
        self.logger = logger


    def run_ordered( self, func: Callable[[Any], Any], items: Sequence[Any] ) -> List[JobOutcome]:

        # A failing job is captured in its outcome; the other jobs still run

        if self.workers == 1 or len(items) <= 1:
            return [self._run_one(index, func, item) for index, item in enumerate(items)]

        outcomes: Dict[int, JobOutcome] = {}
        pool_class = EXECUTORS[self.executor]

        with pool_class(max_workers=min(self.workers, len(items))) as pool:

            futures = {pool.submit(func, item): index for index, item in enumerate(items)}

            for future in as_completed(futures):

                index = futures[future]

                try:
                    outcomes[index] = JobOutcome(index=index, value=future.result())

                except Exception as e:
                    outcomes[index] = self._failed(index, e)

        return [outcomes[index] for index in range(len(items))]


    def _run_one( self, index: int, func: Callable[[Any], Any], item: Any ) -> JobOutcome:

        try:
            return JobOutcome(index=index, value=func(item))

        except Exception as e:
            return self._failed(index, e)


    def _failed( self, index: int, error: BaseException ) -> JobOutcome:

        if self.logger:
            self.logger.debug(f"[!] Job {index} failed: {type(error).__name__}: {error}")

        return JobOutcome(index=index, error=error)
