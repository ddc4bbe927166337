"""
Logging for the toolkit and the awaitable error forwarding used by the
concurrent scans.

:mod:`logbook` is optional. Modules always create their loggers through
:func:`get_logger`; without :mod:`logbook` those loggers silently drop
every record and only :func:`enable_logging` complains.
"""
import asyncio
import logging
from typing import (
    Any,
    Awaitable,
    Callable,
    Mapping,
    Optional,
    TypeVar,
)

from .typing import (
    LogbookLevel,
    Logger,
    LoggingLevel,
    NoReturn,
)

__all__ = (
    'have_logging',
    'logger_group',
    'enable_logging',
    'disable_logging',
    'get_logger',
    'log_exception',
)

# Do not export!
T = TypeVar('T')

_ROOT_LOGGER_NAME = 'rabi'
_MISSING_LOGBOOK = 'Please install rabi.regimes[logging] for logging support'


def _logging_error(*_: Any, **__: Any) -> NoReturn:
    raise ImportError(_MISSING_LOGBOOK)


try:
    # noinspection PyUnresolvedReferences
    import logbook
    import logbook.compat
except ImportError:
    have_logging = False
    logbook = None

    class _NullLogger:
        """
        Stands in for :class:`logbook.Logger` and discards every record.
        """
        def __init__(self, name: str) -> None:
            self.name = name
            self.level = 0

        def _discard(self, *_: Any, **__: Any) -> None:
            pass

        trace = debug = info = notice = warn = warning = error = exception = \
            critical = log = _discard

    # noinspection PyPropertyDefinition
    class _NullLoggerGroup:
        """
        Stands in for :class:`logbook.LoggerGroup`. Reading `disabled`
        is fine, everything else requires :mod:`logbook`.
        """
        level = 0
        disabled = property(lambda *_: True, _logging_error)
        add_logger = remove_logger = process_record = _logging_error

    logger_group = _NullLoggerGroup()
    _redirect_handler = None  # type: Optional[logbook.compat.RedirectLoggingHandler]
    _level_converter = None  # type: Optional[logbook.compat.LoggingHandler]
else:
    have_logging = True
    logger_group = logbook.LoggerGroup()
    logger_group.disabled = True
    _redirect_handler = logbook.compat.RedirectLoggingHandler()
    _level_converter = logbook.compat.LoggingHandler()


def _to_logging_level(level: LogbookLevel) -> LoggingLevel:
    if _level_converter is None:
        _logging_error()
    return LoggingLevel(_level_converter.convert_level(level))


def _update_redirects(loggers: Mapping[str, LogbookLevel], attach: bool) -> None:
    """
    Attach the :mod:`logbook` redirect handler to (or detach it from)
    the named :mod:`logging` loggers and set their levels.
    """
    if _redirect_handler is None:
        _logging_error()
    for name, level in loggers.items():
        logger = logging.getLogger(name)
        logger.setLevel(_to_logging_level(level))
        if attach:
            logger.addHandler(_redirect_handler)
        else:
            logger.removeHandler(_redirect_handler)


def enable_logging(
        level: Optional[LogbookLevel] = None,
        redirect_loggers: Optional[Mapping[str, LogbookLevel]] = None,
) -> None:
    """
    Let the loggers of the toolkit emit records.

    Arguments:
        - `level`: Minimum :mod:`logbook` level. Defaults to
          ``WARNING``.
        - `redirect_loggers`: :mod:`logging` logger names (such as
          ``asyncio``) mapped to the :mod:`logbook` level their records
          are forwarded with.

    Raises :class:`ImportError` in case :mod:`logbook` is not
    installed.
    """
    if not have_logging:
        _logging_error()
    logger_group.disabled = False
    logger_group.level = logbook.WARNING if level is None else level
    if redirect_loggers is not None:
        _update_redirects(redirect_loggers, attach=True)


def disable_logging(
        redirect_loggers: Optional[Mapping[str, LogbookLevel]] = None,
) -> None:
    """
    Silence the loggers of the toolkit again and detach the redirect
    handler from `redirect_loggers`. Does nothing without
    :mod:`logbook`.
    """
    if not have_logging:
        return
    logger_group.disabled = True
    if redirect_loggers is not None:
        _update_redirects(redirect_loggers, attach=False)


def get_logger(
        name: Optional[str] = None,
        level: Optional[LogbookLevel] = None,
) -> Logger:
    """
    Return a logger of the toolkit's logger group.

    Arguments:
        - `name`: Sub-logger name, prefixed with ``rabi.``. The root
          logger ``rabi`` is returned if omitted.
        - `level`: A :mod:`logbook` level. Defaults to
          :attr:`logbook.NOTSET`.
    """
    if name is not None:
        name = '.'.join((_ROOT_LOGGER_NAME, name))
    else:
        name = _ROOT_LOGGER_NAME
    if not have_logging:
        return _NullLogger(name)
    logger = logbook.Logger(name=name, level=logbook.NOTSET if level is None else level)
    logger_group.add_logger(logger)
    return logger


async def log_exception(
        awaitable: Awaitable[T],
        log_handler: Callable[[Exception], None],
) -> T:
    """
    Await `awaitable` and hand any exception it raises to `log_handler`
    before re-raising it. Cancellation is passed through untouched.
    """
    try:
        return await awaitable
    except asyncio.CancelledError:
        raise
    except Exception as exc:
        log_handler(exc)
        raise
