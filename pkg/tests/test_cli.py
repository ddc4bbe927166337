import json
import subprocess

import pytest

from rabi.regimes import (
    SCHEMA_LINE,
    SCHEMA_VERSION,
    ContractError,
    __version__ as _version,
)
from rabi.regimes.bin import (
    ScanConfig,
    load_state,
)


def _tables(output):
    """
    Split CSV output into its metadata lines and a mapping of table
    names to their lines.
    """
    metadata, tables, name = [], {}, None
    for line in output.splitlines():
        if line.startswith('# table '):
            name = line[len('# table '):]
            tables[name] = []
        elif name is None:
            metadata.append(line)
        elif len(line) > 0:
            tables[name].append(line)
    return metadata, tables


class TestScanConfig:
    def test_header(self):
        config = ScanConfig('spectrum', g_max=0.5, g_steps=3, out='x.csv', threads=2)
        header = config.header()
        assert 'out' not in header
        assert 'threads' not in header
        assert header['schema_version'] == SCHEMA_VERSION
        assert config.grid.tolist() == pytest.approx([0.0, 0.25, 0.5])
        assert config.truncation() is None

    @pytest.mark.parametrize('arguments', [
        {'g_min': 1.0, 'g_max': 0.5},
        {'g_steps': 0},
        {'k_levels': 0},
        {'omega_q_over_omega': 0.0},
        {'n_max': 0},
    ])
    def test_invalid(self, arguments):
        with pytest.raises(ContractError):
            ScanConfig('spectrum', **arguments)


class TestLoadState:
    def test_basis_name(self):
        state = load_state('e3', n_max=10)
        assert state.n_max == 10
        assert state.amplitude('e', 3) == 1.0

    def test_amplitude_file(self, tmpdir):
        path = tmpdir.join('state.txt')
        path.write('0 1\n0 0\n0 0\n0 0\n')
        state = load_state(str(path))
        assert state.amplitude('g', 0) == pytest.approx(1j)

    def test_malformed_file(self, tmpdir):
        path = tmpdir.join('state.txt')
        path.write('1 2 3\n4 5 6\n')
        with pytest.raises(ContractError):
            load_state(str(path))


@pytest.mark.usefixtures('evaluate_log')
class TestCLI:
    @pytest.mark.asyncio
    async def test_invalid_command(self, cli):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('meow')
        assert 'No such command' in exc_info.value.output

    @pytest.mark.asyncio
    async def test_invalid_verbosity(self, cli):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('-v', '8')
        assert 'is not in the range' in exc_info.value.output

    @pytest.mark.asyncio
    async def test_import_error_logbook(self, cli, fake_logbook_env):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('-v', '7', 'version', env=fake_logbook_env)
        assert exc_info.value.returncode == 3
        assert ('Please install rabi.regimes[logging] for '
                'logging support') in exc_info.value.output

    @pytest.mark.asyncio
    async def test_get_version(self, cli):
        output = await cli('-v', '7', '-c', 'version')
        assert 'Version: {}'.format(_version) in output
        assert 'Output schema: {}'.format(SCHEMA_VERSION) in output

    @pytest.mark.asyncio
    async def test_reversed_range(self, cli):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('spectrum', '--g-min', '1.0', '--g-max', '0.5')
        assert exc_info.value.returncode == 2
        assert 'Invalid coupling range' in exc_info.value.output


@pytest.mark.usefixtures('evaluate_log')
class TestSpectrumCommand:
    @pytest.mark.asyncio
    async def test_csv(self, cli):
        output = await cli(
            'spectrum', '--g-min', '0.0', '--g-max', '0.2', '--g-steps', '2',
            '--levels', '3')
        metadata, tables = _tables(output)
        assert metadata[0] == SCHEMA_LINE
        header = json.loads(metadata[1][len('# config '):])
        assert header['command'] == 'spectrum'
        assert header['config']['k_levels'] == 3
        assert 'out' not in header['config']
        assert 'threads' not in header['config']

        lines = tables['spectrum']
        assert lines[0].split(',') == [
            'g_over_omega', 'level', 'parity', 'order', 'energy', 'energy_rescaled',
            'energy_bs', 'energy_bs3', 'energy_adiabatic', 'energy_jc', 'n_max', 'status',
        ]
        assert len(lines) == 1 + 2 * 3
        first = lines[1].split(',')
        assert first[:4] == ['0', '0', '1', '0']
        assert float(first[4]) == pytest.approx(-0.5)
        # No rescaled energy at zero coupling
        assert first[5] == ''
        assert first[-1] == 'ok'
        # Decoupled levels: exact, BS and JC coincide
        for line in lines[1:4]:
            row = line.split(',')
            assert float(row[6]) == pytest.approx(float(row[4]), abs=1e-10)
            assert float(row[9]) == pytest.approx(float(row[4]), abs=1e-10)

    @pytest.mark.asyncio
    async def test_output_independent_of_threads(self, cli, tmpdir):
        paths = []
        for threads in ('1', '3'):
            path = tmpdir.join('spectrum-{}.json'.format(threads))
            await cli('-t', threads, 'spectrum', '--g-max', '0.5', '--g-steps', '4',
                      '--levels', '2', '--format', 'json', '--out', str(path))
            paths.append(path)
        assert paths[0].read() == paths[1].read()
        payload = json.loads(paths[0].read())
        assert payload['schema'] == SCHEMA_VERSION
        assert len(payload['tables']['spectrum']['rows']) == 4 * 2


@pytest.mark.usefixtures('evaluate_log')
class TestClassifyCommand:
    @pytest.mark.asyncio
    @pytest.mark.parametrize('g,energy,region', [
        ('0.1', '-0.5', 'PerturbativeUSC'),
        ('1.0', '-0.5', 'NonPerturbative'),
        ('5.0', '-0.5', 'PerturbativeDSC'),
    ])
    async def test_energy(self, cli, g, energy, region):
        output = await cli('classify', '--g', g, '--energy', energy)
        payload = json.loads(output)
        assert payload['summary']['region'] == region
        assert payload['tables']['label']['rows'][0][-1] == region

    @pytest.mark.asyncio
    async def test_state(self, cli):
        output = await cli('classify', '--g', '5', '--state', 'g0')
        summary = json.loads(output)['summary']
        assert summary['mean_energy'] == pytest.approx(-0.5)
        assert summary['region'] == 'PerturbativeDSC'
        assert summary['boundaries']['pdsc_energy'] > -0.5

    @pytest.mark.asyncio
    @pytest.mark.parametrize('arguments', [
        (),
        ('--state', 'g0', '--energy', '0.0'),
    ])
    async def test_state_or_energy(self, cli, arguments):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('classify', '--g', '0.1', *arguments)
        assert exc_info.value.returncode == 2
        assert 'Exactly one of' in exc_info.value.output

    @pytest.mark.asyncio
    async def test_invalid_state(self, cli):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('classify', '--g', '0.1', '--state', 'x7')
        assert exc_info.value.returncode == 2
        assert 'Invalid basis state name' in exc_info.value.output

    @pytest.mark.asyncio
    async def test_computation_failure(self, cli):
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('classify', '--g', '1.0', '--energy', '0.0', '--delta-th', '0.9')
        assert exc_info.value.returncode == 1
        assert 'Computation failed: FitError' in exc_info.value.output


@pytest.mark.usefixtures('evaluate_log')
class TestObservablesCommand:
    @pytest.mark.asyncio
    async def test_dump(self, cli):
        output = await cli(
            'observables', '--g-min', '0.2', '--g-max', '0.2', '--levels', '2',
            '--dump', '0', '--nmax', '20')
        _, tables = _tables(output)
        assert len(tables['observables']) == 1 + 2
        assert tables['observables'][1].endswith(',PerturbativeUSC,ok')
        distribution = tables['distribution']
        assert distribution[0] == 'g_over_omega,level,m,probability'
        assert all(line.split(',')[1] == '0' for line in distribution[1:])
        total = sum(float(line.split(',')[3]) for line in distribution[1:])
        assert total == pytest.approx(1.0, abs=1e-9)


@pytest.mark.usefixtures('evaluate_log')
class TestDynamicsCommand:
    @pytest.mark.asyncio
    async def test_weak_coupling(self, cli):
        output = await cli('dynamics', '--g', '0.1', '--state', 'g0', '--format', 'json')
        payload = json.loads(output)
        assert payload['summary']['revivals'] == []
        assert payload['summary']['parity'] == 1
        assert payload['summary']['max_leakage'] <= 1e-8
        survival = [row[1] for row in payload['tables']['trace']['rows']]
        assert min(survival) >= 0.98

    @pytest.mark.asyncio
    async def test_short_trace(self, cli):
        output = await cli('dynamics', '--g', '1.0', '--state', 'e1', '--t-max', '1.0',
                           '--t-step', '0.25', '--format', 'json')
        payload = json.loads(output)
        assert payload['summary']['revivals'] is None
        rows = payload['tables']['trace']['rows']
        assert [row[0] for row in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert rows[0][1] == pytest.approx(1.0)

    @pytest.mark.asyncio
    async def test_mixed_parity(self, cli, tmpdir):
        amplitudes = tmpdir.join('mixed.txt')
        amplitudes.write('1\n1\n0\n0\n')
        with pytest.raises(subprocess.CalledProcessError) as exc_info:
            await cli('dynamics', '--g', '1.0', '--state', str(amplitudes))
        assert exc_info.value.returncode == 2
        assert 'no definite parity' in exc_info.value.output


@pytest.mark.usefixtures('evaluate_log')
class TestRegimeCommands:
    @pytest.mark.asyncio
    async def test_boundaries(self, cli):
        output = await cli('boundaries', '--g-min', '0.1', '--g-max', '5.0',
                           '--g-steps', '3', '--juddian', '1')
        metadata, tables = _tables(output)
        summary = json.loads(metadata[2][len('# summary '):])
        assert summary['pdsc_g_min'] == pytest.approx(1.473, abs=1e-3)
        assert len(tables['crossings']) == 1 + 12
        assert tables['crossings'][1].startswith('1,1.473')
        assert len(tables['juddian']) == 1 + 1
        assert len(tables['curves']) == 1 + 3

    @pytest.mark.asyncio
    async def test_regimes(self, cli):
        output = await cli('regimes', '--g-min', '0.1', '--g-max', '5.0',
                           '--g-steps', '3', '--format', 'json')
        payload = json.loads(output)
        regions = [row[4] for row in payload['tables']['regimes']['rows']]
        assert regions == ['PerturbativeUSC', 'NonPerturbative', 'PerturbativeDSC']


@pytest.mark.long_test
@pytest.mark.usefixtures('evaluate_log')
class TestDefaultScans:
    @pytest.mark.asyncio
    async def test_spectrum(self, cli):
        output = await cli('-t', '4', 'spectrum', '--format', 'json')
        rows = json.loads(output)['tables']['spectrum']['rows']
        assert len(rows) == 21 * 8
        assert all(row[-1] == 'ok' for row in rows)

    @pytest.mark.asyncio
    async def test_regimes(self, cli):
        output = await cli('-t', '4', 'regimes', '--format', 'json')
        rows = json.loads(output)['tables']['regimes']['rows']
        assert len(rows) == 100
        assert all(row[-1] == 'ok' for row in rows)
        assert rows[0][4] == 'PerturbativeUSC'
        assert rows[-1][4] == 'PerturbativeDSC'
