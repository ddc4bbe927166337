import asyncio
import os
import subprocess
import sys

import logbook
import pytest

from rabi.regimes import (
    JointState,
    ModelParams,
    util,
)

# Seconds a single CLI invocation may take unless --timeout raises it
_cli_timeout = 120.0


class CalledProcessError(subprocess.CalledProcessError):
    def __str__(self):
        return "Command '{}' exited with status {}:\n{}".format(
            self.cmd, self.returncode, self.output)


def pytest_addoption(parser):
    parser.addoption(
        '--long', action='store_true', default=False,
        help='Also run full scale scans and reference table checks')
    parser.addoption(
        '--timeout', action='store',
        help='Lower bound in seconds (float) for the CLI test timeout')


def pytest_configure(config):
    config.addinivalue_line(
        'markers', 'long_test: only runs when --long has been passed')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--long'):
        return
    skip_long = pytest.mark.skip(reason='long test, pass --long to run it')
    for item in items:
        if 'long_test' in item.keywords:
            item.add_marker(skip_long)


def pytest_report_header(config):
    return 'CLI timeout: {}s'.format(_get_timeout(config=config))


def _get_timeout(timeout=None, request=None, config=None):
    if request is not None:
        config = request.config
    timeout = _cli_timeout if timeout is None else timeout
    minimum = config.getoption('--timeout')
    return timeout if minimum is None else max(timeout, float(minimum))


@pytest.fixture
def resonant():
    """
    Return a factory for resonant parameters in units of the cavity
    frequency.
    """
    def _resonant(g_over_omega, omega_q_over_omega=1.0):
        return ModelParams.resonant(g_over_omega, omega_q_over_omega=omega_q_over_omega)
    return _resonant


@pytest.fixture
def basis():
    """
    Return a factory for product basis states (``basis('g', 0, 10)``).
    """
    def _basis(qubit, n, n_max=10):
        return JointState.basis(qubit, n, n_max)
    return _basis


@pytest.fixture
def log_handler(request):
    """
    Capture every record of the ``rabi`` loggers in a
    :class:`logbook.TestHandler` for the duration of a test.
    """
    handler = logbook.TestHandler(level=logbook.DEBUG, bubble=True)
    handler._ignore_filter = lambda _: False
    handler._error_level = logbook.ERROR
    handler.push_application()
    util.enable_logging(level=logbook.TRACE)

    def fin():
        util.disable_logging()
        handler.pop_application()
    request.addfinalizer(fin)
    return handler


@pytest.fixture
def evaluate_log(log_handler):
    """
    Fail the test if it logged an error that has not been ignored
    explicitly.
    """
    yield
    errors = [
        record for record in log_handler.records
        if record.level >= log_handler._error_level
        and not log_handler._ignore_filter(record)
    ]
    assert len(errors) == 0


@pytest.fixture
def log_ignore_filter(log_handler):
    """
    Return a setter for a callback that marks error records as
    expected.
    """
    def _set_filter(callback):
        log_handler._ignore_filter = callback
    return _set_filter


def _strip_tracebacks(output):
    """
    Drop traceback headers and the blank lines that follow them so
    that assertions only see the messages printed by the CLI.
    """
    kept, at_gap = [], True
    for line in output.splitlines(keepends=True):
        if line.startswith('Traceback (most recent call last):'):
            at_gap = True
            continue
        if at_gap and len(line.strip()) == 0:
            continue
        kept.append(line)
        at_gap = False
    output = ''.join(kept).rstrip('\n')
    return output + '\n' if len(output) > 0 else output


@pytest.fixture
def cli(request):
    """
    Return a coroutine function running ``python -m rabi.regimes.bin``
    with the given arguments. Returns the combined output or raises
    :class:`CalledProcessError` on a non-zero exit status.
    """
    async def _run(*args, input=None, timeout=None, env=None):
        timeout = _get_timeout(timeout=timeout, request=request)
        env = os.environ.copy() if env is None else env
        command = [sys.executable, '-m', 'rabi.regimes.bin', *args]
        if isinstance(input, str):
            input = input.encode('utf-8')

        process = await asyncio.create_subprocess_exec(
            *command, env=env, stdin=asyncio.subprocess.PIPE,
            stdout=asyncio.subprocess.PIPE, stderr=asyncio.subprocess.STDOUT)
        try:
            raw, _ = await asyncio.wait_for(process.communicate(input=input), timeout)
        except asyncio.TimeoutError:
            process.kill()
            await process.wait()
            raise

        output = _strip_tracebacks(raw.decode('utf-8'))
        if process.returncode != 0:
            raise CalledProcessError(process.returncode, command, output=output)
        return output
    return _run


@pytest.fixture
def fake_logbook_env(tmpdir):
    """
    Return an environment whose ``PYTHONPATH`` shadows :mod:`logbook`
    with a module that fails to import.
    """
    tmpdir.join('logbook.py').write("raise ImportError('shadowed')")
    env = os.environ.copy()
    env['PYTHONPATH'] = os.pathsep.join((str(tmpdir), env.get('PYTHONPATH', '')))
    return env
