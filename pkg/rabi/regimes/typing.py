from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    List,
    NewType,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

if TYPE_CHECKING:
    # noinspection PyUnresolvedReferences
    import logbook  # noqa

__all__ = (
    'NoReturn',
    'RealArray',
    'ComplexArray',
    'FloatOrArray',
    'Coupling',
    'EnergyRatio',
    'Alpha',
    'Time',
    'FitCoefficients',
    'Margins',
    'Row',
    'Column',
    'PointFunction',
    'Logger',
    'LogbookLevel',
    'LoggingLevel',
)

# NoReturn
try:
    from typing import NoReturn
except ImportError:
    NoReturn = None


# Helpers
# -------

# numpy arrays (dtype is not tracked by the type checker)
RealArray = np.ndarray
ComplexArray = np.ndarray
# Functions evaluated elementwise accept and return either
FloatOrArray = Union[float, np.ndarray]


# Physics
# -------

# Coupling strength in units of the cavity frequency (g0 / omega)
Coupling = NewType('Coupling', float)
# An energy in units of the cavity frequency (E / omega)
EnergyRatio = NewType('EnergyRatio', float)
# Dimensionless displacement g0 / omega as used by the adiabatic states
Alpha = NewType('Alpha', float)
# Time in units of 1 / omega
Time = NewType('Time', float)


# Regimes
# -------

# Coefficients (a, b, c) of the quadratic pDSC boundary
FitCoefficients = Tuple[float, float, float]
# Signed distances to each boundary that has been consulted
Margins = Dict[str, float]


# Output & scans
# --------------

# A single output row, keyed by column name
Row = Dict[str, Any]
# Column names of a table in output order
Column = Sequence[str]
# A function evaluated on a single grid point
PointFunction = Callable[[float], List[Row]]


# Util
# ----

# :mod:`logbook` Logger abstraction
Logger = Any
# A :mod:`logbook` log level
LogbookLevel = NewType('LogbookLevel', int)
# A :mod:`logging` log level
LoggingLevel = NewType('LoggingLevel', int)
