import threading
import time

import logbook
import pytest

from rabi.regimes import (
    STATUS_OK,
    ContractError,
    DomainError,
    GridScan,
    PointResult,
    coupling_grid,
    default_threads,
    run_scan,
)


def _rows(g):
    return [{'g_over_omega': g, 'square': g * g}]


class TestCouplingGrid:
    def test_grid(self):
        assert coupling_grid(0.0, 1.0, 5).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_single_step(self):
        assert coupling_grid(0.3, 2.0, 1).tolist() == [0.3]

    @pytest.mark.parametrize('g_min,g_max,g_steps', [
        (0.0, 1.0, 0),
        (0.0, 1.0, 2.5),
        (0.0, 1.0, True),
        (-0.1, 1.0, 3),
        (2.0, 1.0, 3),
    ])
    def test_invalid(self, g_min, g_max, g_steps):
        with pytest.raises(ContractError):
            coupling_grid(g_min, g_max, g_steps)


class TestPointResult:
    def test_ok(self):
        result = PointResult(index=0, g=0.5, rows=tuple(_rows(0.5)))
        assert result.ok
        assert result.status == STATUS_OK
        assert result.status_rows() == [
            {'g_over_omega': 0.5, 'square': 0.25, 'status': 'ok'}]

    def test_failed(self):
        result = PointResult(index=3, g=0.7, error=DomainError('outside'))
        assert not result.ok
        assert result.status == 'DomainError: outside'
        assert result.status_rows('g') == [{'g': 0.7, 'status': 'DomainError: outside'}]


@pytest.mark.usefixtures('evaluate_log')
class TestGridScan:
    def test_default_threads(self):
        assert default_threads() >= 1
        assert GridScan(_rows).threads == default_threads()

    def test_invalid_threads(self):
        with pytest.raises(ContractError):
            GridScan(_rows, threads=0)

    @pytest.mark.asyncio
    async def test_grid_order(self):
        def slow_first(g):
            # The first point finishes last
            if g == 0.0:
                time.sleep(0.2)
            return _rows(g)

        results = await GridScan(slow_first, threads=4).run(coupling_grid(0.0, 1.0, 5))
        assert [result.index for result in results] == [0, 1, 2, 3, 4]
        assert [result.g for result in results] == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert all(result.ok for result in results)

    @pytest.mark.asyncio
    async def test_thread_limit(self):
        lock = threading.Lock()
        active = [0, 0]

        def track(g):
            with lock:
                active[0] += 1
                active[1] = max(active[1], active[0])
            time.sleep(0.05)
            with lock:
                active[0] -= 1
            return _rows(g)

        await GridScan(track, threads=2).run(coupling_grid(0.0, 1.0, 8))
        assert 1 <= active[1] <= 2

    def test_run_scan(self):
        results = run_scan(_rows, [0.1, 0.2], threads=1)
        assert [result.rows[0]['square'] for result in results] == pytest.approx(
            [0.01, 0.04])


@pytest.mark.usefixtures('evaluate_log')
class TestFailures:
    def test_failure_is_captured(self, log_handler, log_ignore_filter):
        def fail_middle(g):
            if g == 0.5:
                raise DomainError('no boundary at g={}'.format(g))
            return _rows(g)

        log_ignore_filter(lambda record: 'Grid point g=0.5 failed' in record.message)
        results = run_scan(fail_middle, coupling_grid(0.0, 1.0, 3), threads=2)
        assert [result.ok for result in results] == [True, False, True]
        assert isinstance(results[1].error, DomainError)
        assert results[2].rows == tuple(_rows(1.0))
        errors = [record for record in log_handler.records
                  if record.level == logbook.ERROR]
        assert len(errors) == 1

    def test_unexpected_error(self, log_handler, log_ignore_filter):
        def broken(g):
            raise KeyError(g)

        log_ignore_filter(lambda record: 'Unexpected failure' in record.message)
        with pytest.raises(KeyError):
            run_scan(broken, [0.1], threads=1)
        assert any('Unexpected failure at g=0.1' in record.message
                   for record in log_handler.records)
