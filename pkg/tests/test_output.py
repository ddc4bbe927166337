import io
import json
import math

import numpy as np
import pytest

from rabi.regimes import (
    SCHEMA_LINE,
    ContractError,
    Document,
    OutputFormat,
    Parity,
    Region,
    Table,
    render,
    to_plain,
    write_csv,
    write_document,
    write_json,
)


@pytest.fixture
def document():
    table = Table.create('levels', ('g_over_omega', 'energy', 'parity', 'converged'), [
        {'g_over_omega': 0.1, 'energy': -0.505, 'parity': Parity.even,
         'converged': True},
        {'g_over_omega': 0.1, 'energy': 1.0 / 3.0, 'parity': -1},
        {'g_over_omega': 0.2, 'energy': None, 'parity': 1, 'converged': False},
    ])
    return Document(
        command='spectrum',
        config={'omega_q_over_omega': 1.0, 'levels': 2},
        tables=(table,),
        summary={'region': Region.perturbative_usc, 'margin': 0.25},
    )


class TestToPlain:
    @pytest.mark.parametrize('value,expected', [
        (None, None),
        (True, True),
        ('pUSC', 'pUSC'),
        (np.int64(3), 3),
        (1.0 / 3.0, 0.333333333333),
        (math.nan, None),
        (math.inf, 'inf'),
        (-math.inf, '-inf'),
        (Parity.odd, -1),
        ((1, 2.5), [1, 2.5]),
        (np.array([0.5, 1.0]), [0.5, 1.0]),
        ({1: 'a'}, {'1': 'a'}),
    ])
    def test_values(self, value, expected):
        assert to_plain(value) == expected

    def test_unsupported(self):
        with pytest.raises(ContractError):
            to_plain(object())


class TestTable:
    def test_undeclared_column(self):
        with pytest.raises(ContractError) as exc_info:
            Table.create('t', ('a',), [{'a': 1, 'b': 2}])
        assert "['b']" in str(exc_info.value)

    def test_frame(self, document):
        frame = document.tables[0].frame()
        assert list(frame.columns) == ['g_over_omega', 'energy', 'parity', 'converged']
        assert frame.iloc[0].tolist() == ['0.1', '-0.505', '1', 'true']
        assert frame.iloc[1].tolist() == ['0.1', '0.333333333333', '-1', '']
        assert frame.iloc[2].tolist() == ['0.2', '', '1', 'false']


class TestCsv:
    def test_layout(self, document):
        stream = io.StringIO()
        write_csv(document, stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == SCHEMA_LINE
        assert lines[0] == '# rabi-regimes schema 1'
        assert lines[1].startswith('# config ')
        header = json.loads(lines[1][len('# config '):])
        assert header == {
            'command': 'spectrum',
            'config': {'levels': 2, 'omega_q_over_omega': 1.0},
        }
        assert json.loads(lines[2][len('# summary '):]) == {
            'margin': 0.25, 'region': 'PerturbativeUSC'}
        assert lines[3:] == [
            '# table levels',
            'g_over_omega,energy,parity,converged',
            '0.1,-0.505,1,true',
            '0.1,0.333333333333,-1,',
            '0.2,,1,false',
        ]

    def test_multiple_tables(self):
        document = Document('boundaries', {}, tables=(
            Table.create('a', ('x',), [{'x': 1}]),
            Table.create('b', ('y',), [{'y': 2}]),
        ))
        lines = render(document, OutputFormat.csv).splitlines()
        assert lines[2:] == ['# table a', 'x', '1', '', '# table b', 'y', '2']

    def test_deterministic(self, document):
        assert render(document, OutputFormat.csv) == render(document, OutputFormat.csv)


class TestJson:
    def test_payload(self, document):
        stream = io.StringIO()
        write_json(document, stream)
        payload = json.loads(stream.getvalue())
        assert payload['schema'] == 1
        assert payload['command'] == 'spectrum'
        assert payload['summary'] == {'margin': 0.25, 'region': 'PerturbativeUSC'}
        table = payload['tables']['levels']
        assert table['columns'] == ['g_over_omega', 'energy', 'parity', 'converged']
        assert table['rows'][1] == [0.1, 0.333333333333, -1, None]
        assert table['rows'][2] == [0.2, None, 1, False]

    def test_sorted_keys(self, document):
        text = render(document, OutputFormat.json)
        keys = [line.strip().split('"')[1] for line in text.splitlines()
                if line.startswith('  "')]
        assert keys == sorted(keys)

    def test_nan_is_null(self):
        document = Document('classify', {}, summary={'margin': math.nan})
        assert json.loads(render(document, OutputFormat.json))['summary'] == {
            'margin': None}


class TestWriteDocument:
    def test_stdout(self, document, capsys):
        write_document(document, OutputFormat.json)
        assert capsys.readouterr().out == render(document, OutputFormat.json)

    def test_file(self, document, tmpdir):
        path = tmpdir.join('out.csv')
        write_document(document, OutputFormat.csv, str(path))
        assert path.read() == render(document, OutputFormat.csv)
