"""
Concurrent evaluation of a function over a grid of couplings.

Grid points are dispatched to a thread pool from an asyncio event
loop. Results are collected in grid order regardless of completion
order, and a failing point never cancels its siblings.
"""
import asyncio
import concurrent.futures
import dataclasses
import functools
import os
from typing import List  # noqa
from typing import (
    Iterable,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from . import util
from .exception import (
    ContractError,
    RegimesError,
)
from .typing import (
    PointFunction,
    RealArray,
    Row,
)

__all__ = (
    'STATUS_OK',
    'default_threads',
    'coupling_grid',
    'PointResult',
    'GridScan',
    'run_scan',
)

STATUS_OK = 'ok'

_log = util.get_logger('scan')


def default_threads() -> int:
    return os.cpu_count() or 1


def coupling_grid(g_min: float, g_max: float, g_steps: int) -> RealArray:
    """
    Return `g_steps` evenly spaced couplings from `g_min` to `g_max`
    (just `g_min` for a single step).

    Raises :exc:`ContractError` for negative or reversed ranges.
    """
    if isinstance(g_steps, bool) or not isinstance(g_steps, int) or g_steps < 1:
        raise ContractError('Invalid number of steps: {!r} (must be >= 1)'.format(
            g_steps))
    if g_min < 0.0 or g_min > g_max:
        raise ContractError('Invalid coupling range [{}, {}]'.format(g_min, g_max))
    return np.linspace(g_min, g_max, g_steps)


@dataclasses.dataclass(frozen=True)
class PointResult:
    """
    The outcome of a single grid point.

    Arguments:
        - `index`: Position of the point in the grid.
        - `g`: The coupling.
        - `rows`: The rows produced (empty on failure).
        - `error`: The captured error (if any).
    """
    index: int
    g: float
    rows: Tuple[Row, ...] = ()
    error: Optional[RegimesError] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def status(self) -> str:
        if self.error is None:
            return STATUS_OK
        return '{}: {}'.format(type(self.error).__name__, self.error)

    def status_rows(self, key: str = 'g_over_omega') -> List[Row]:
        """
        Return the rows with a `status` column, or a single status row
        carrying just the coupling when the point failed.
        """
        if self.error is not None:
            return [{key: self.g, 'status': self.status}]
        return [dict(row, status=STATUS_OK) for row in self.rows]


class GridScan:
    """
    Evaluates a point function over coupling grids.

    Arguments:
        - `function`: Called with a single coupling, returns the rows
          of that point. Must be thread-safe.
        - `threads`: Maximum number of worker threads. Defaults to the
          number of CPUs.
    """
    __slots__ = ('function', 'threads')

    def __init__(self, function: PointFunction, threads: Optional[int] = None) -> None:
        if threads is None:
            threads = default_threads()
        if threads < 1:
            raise ContractError('Invalid number of threads: {} (must be >= 1)'.format(
                threads))
        self.function = function
        self.threads = threads

    def _evaluate(self, index: int, g: float) -> PointResult:
        try:
            rows = self.function(g)
        except RegimesError as exc:
            _log.error('Grid point g={} failed: {}', g, exc)
            return PointResult(index=index, g=g, error=exc)
        _log.debug('Grid point g={} done ({} rows)', g, len(rows))
        return PointResult(index=index, g=g, rows=tuple(rows))

    async def run(self, grid: Iterable[float]) -> List[PointResult]:
        """
        Evaluate every grid point and return the results in grid
        order.
        """
        loop = asyncio.get_running_loop()
        points = [float(g) for g in grid]
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [
                util.log_exception(
                    loop.run_in_executor(
                        executor, functools.partial(self._evaluate, index, g)),
                    functools.partial(_log.exception, 'Unexpected failure at g={}', g))
                for index, g in enumerate(points)
            ]
            results = await asyncio.gather(*futures)  # type: List[PointResult]
        failed = sum(1 for result in results if not result.ok)
        _log.info('Scanned {} grid points with {} threads ({} failed)',
                  len(points), self.threads, failed)
        return results


def run_scan(
        function: PointFunction,
        grid: Sequence[float],
        threads: Optional[int] = None,
        loop: Optional[asyncio.AbstractEventLoop] = None,
) -> List[PointResult]:
    """
    Run a :class:`GridScan` to completion on a (new) event loop.
    """
    scan = GridScan(function, threads=threads)
    close = loop is None
    if loop is None:
        loop = asyncio.new_event_loop()
    try:
        return loop.run_until_complete(scan.run(grid))
    finally:
        if close:
            loop.close()
