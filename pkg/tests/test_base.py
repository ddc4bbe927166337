"""
Sanity checks of the typing helpers, the logging setup and the error
hierarchy every other module relies on.
"""
import asyncio
import os
import re

import logbook
import pytest

from rabi.regimes import (
    BoundaryDomainError,
    ContractError,
    DomainError,
    ParityError,
    RegimesError,
    SolverError,
    ThresholdTooLargeError,
    TruncationError,
    delta_sensitivity,
    evolution_plan,
    revival_profile,
    util,
)
from rabi.regimes import typing as typing_module
from rabi.regimes.typing import PointFunction


# noinspection PyStatementEffect
class TestTypes:
    def test_point_function_runtime(self):
        PointFunction.__args__

    def test_aliases_in_use(self):
        package = os.path.dirname(typing_module.__file__)
        sources = ''
        for name in os.listdir(package):
            if name.endswith('.py') and name != 'typing.py':
                with open(os.path.join(package, name), encoding='utf-8') as file:
                    sources += file.read()
        unused = [alias for alias in typing_module.__all__
                  if re.search(r'\b{}\b'.format(alias), sources) is None]
        assert unused == []

    def test_new_types_returned(self, resonant, basis):
        assert isinstance(delta_sensitivity(1, 1.5, 0.01), float)
        plan = evolution_plan(resonant(5.0), basis('g', 0))
        time, _ = revival_profile(plan)[0]
        assert isinstance(time, float)


class TestLogging:
    def test_logger_name(self):
        assert util.get_logger('scan').name == 'rabi.scan'
        assert util.get_logger().name == 'rabi'

    def test_enable_disable(self, log_handler):
        logger = util.get_logger('test')
        logger.info('visible')
        util.disable_logging()
        logger.info('invisible')
        util.enable_logging(level=logbook.WARNING)
        logger.info('filtered')
        logger.warning('warned')
        messages = [record.message for record in log_handler.records]
        assert messages == ['visible', 'warned']

    @pytest.mark.asyncio
    async def test_log_exception(self):
        captured = []

        async def fail():
            raise KeyError('meow')

        with pytest.raises(KeyError):
            await util.log_exception(fail(), captured.append)
        assert len(captured) == 1
        assert isinstance(captured[0], KeyError)

    @pytest.mark.asyncio
    async def test_log_exception_cancelled(self):
        captured = []
        future = asyncio.get_running_loop().create_future()
        future.cancel()
        with pytest.raises(asyncio.CancelledError):
            await util.log_exception(future, captured.append)
        assert len(captured) == 0


class TestExceptions:
    @pytest.mark.parametrize('exc_class', [ContractError, ParityError, DomainError])
    def test_contract_errors_are_value_errors(self, exc_class):
        assert issubclass(exc_class, RegimesError)
        assert issubclass(exc_class, ValueError)

    def test_boundary_domain_error(self):
        exc = BoundaryDomainError(0.5)
        assert isinstance(exc, DomainError)
        assert exc.g_over_omega == 0.5

    def test_truncation_error(self):
        exc = TruncationError(40, 'tail above tolerance', tail=1e-6)
        assert exc.n_max == 40
        assert 'n_max=40' in str(exc)

    def test_threshold_too_large(self):
        exc = ThresholdTooLargeError(2, 0.5, 0.354)
        assert (exc.n, exc.delta_th, exc.maximum) == (2, 0.5, 0.354)

    def test_solver_error(self):
        exc = SolverError(3, 60)
        assert (exc.index, exc.iterations) == (3, 60)
