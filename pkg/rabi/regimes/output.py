"""
Deterministic CSV and JSON emission of command results.

Every document starts with the schema version and the fully resolved
configuration, so an output file can be reproduced without sidecar
files. Floats are written with :data:`FLOAT_FORMAT` in both formats.
"""
import dataclasses
import enum
import io
import json
import math
import sys
from typing import (
    Any,
    Dict,
    Mapping,
    Optional,
    Sequence,
    TextIO,
    Tuple,
)

import numpy as np
import pandas as pd

from .common import (
    FLOAT_FORMAT,
    SCHEMA_VERSION,
    OutputFormat,
)
from .exception import ContractError
from .typing import (
    Column,
    Row,
)

__all__ = (
    'SCHEMA_LINE',
    'Table',
    'Document',
    'to_plain',
    'write_csv',
    'write_json',
    'render',
    'write_document',
)

SCHEMA_LINE = '# rabi-regimes schema {}'.format(SCHEMA_VERSION)


def _format_float(value: float) -> Any:
    if math.isnan(value):
        return None
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return float(FLOAT_FORMAT % value)


def to_plain(value: Any) -> Any:
    """
    Convert a value into plain JSON data, formatting floats with
    :data:`FLOAT_FORMAT`.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, enum.Enum):
        return to_plain(value.value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, Mapping):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return to_plain(dataclasses.asdict(value))
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    raise ContractError('Cannot serialise value of type {}'.format(type(value)))


@dataclasses.dataclass(frozen=True)
class Table:
    """
    A named table with a fixed column order.

    Raises :exc:`ContractError` if a row carries a column that is not
    declared.
    """
    name: str
    columns: Tuple[str, ...]
    rows: Tuple[Row, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'columns', tuple(self.columns))
        object.__setattr__(self, 'rows', tuple(self.rows))
        declared = set(self.columns)
        for row in self.rows:
            unknown = set(row) - declared
            if len(unknown) > 0:
                raise ContractError('Table {!r}: undeclared columns {}'.format(
                    self.name, sorted(unknown)))

    @classmethod
    def create(cls, name: str, columns: Column, rows: Sequence[Row]) -> 'Table':
        return cls(name=name, columns=tuple(columns), rows=tuple(rows))

    def frame(self) -> pd.DataFrame:
        """
        Return the table as a :class:`pandas.DataFrame` with missing
        cells left empty.
        """
        records = [[_cell(row.get(column)) for column in self.columns]
                   for row in self.rows]
        return pd.DataFrame.from_records(records, columns=list(self.columns))


def _cell(value: Any) -> Any:
    # Formatted here so that integer columns with gaps are not turned into floats
    if value is None:
        return ''
    if isinstance(value, enum.Enum):
        return _cell(value.value)
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return ''
        return FLOAT_FORMAT % value
    return str(value)


@dataclasses.dataclass(frozen=True)
class Document:
    """
    The complete result of a command.

    Arguments:
        - `command`: The name of the command that produced it.
        - `config`: The resolved configuration.
        - `tables`: The result tables in output order.
        - `summary`: Scalar results (fit coefficients, revival peaks,
          labels, ...).
    """
    command: str
    config: Mapping[str, Any]
    tables: Tuple[Table, ...] = ()
    summary: Mapping[str, Any] = dataclasses.field(default_factory=dict)

    def header(self) -> Dict[str, Any]:
        return {'command': self.command, 'config': to_plain(self.config)}


def _dumps(value: Any, **kwargs: Any) -> str:
    return json.dumps(to_plain(value), sort_keys=True, allow_nan=False, **kwargs)


def write_csv(document: Document, stream: TextIO) -> None:
    """
    Write a document as CSV: '#'-prefixed metadata lines followed by
    one block per table, each introduced by a ``# table <name>`` line.
    """
    stream.write(SCHEMA_LINE + '\n')
    stream.write('# config {}\n'.format(_dumps(document.header())))
    if len(document.summary) > 0:
        stream.write('# summary {}\n'.format(_dumps(document.summary)))
    for index, table in enumerate(document.tables):
        if index > 0:
            stream.write('\n')
        stream.write('# table {}\n'.format(table.name))
        table.frame().to_csv(stream, index=False, lineterminator='\n')


def write_json(document: Document, stream: TextIO) -> None:
    """
    Write a document as a single JSON object with sorted keys.
    """
    payload = {
        'schema': SCHEMA_VERSION,
        'command': document.command,
        'config': document.config,
        'summary': document.summary,
        'tables': {
            table.name: {
                'columns': list(table.columns),
                'rows': [[row.get(column) for column in table.columns]
                         for row in table.rows],
            }
            for table in document.tables
        },
    }
    stream.write(_dumps(payload, indent=2))
    stream.write('\n')


def render(document: Document, format_: OutputFormat) -> str:
    """
    Return the serialised document.
    """
    buffer = io.StringIO()
    if format_ is OutputFormat.csv:
        write_csv(document, buffer)
    else:
        write_json(document, buffer)
    return buffer.getvalue()


def write_document(
        document: Document,
        format_: OutputFormat,
        path: Optional[str] = None,
) -> None:
    """
    Write the document to `path` or to standard output.
    """
    text = render(document, format_)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, 'w', encoding='utf-8', newline='') as file:
            file.write(text)
