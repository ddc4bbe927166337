"""
The command line interface of the regime classification toolkit.
"""
import dataclasses
import enum
import functools
import os
from typing import Dict  # noqa
from typing import List  # noqa
from typing import (
    Any,
    Callable,
    Optional,
    Tuple,
)

import click
import numpy as np

from . import (
    __version__ as _version,
    boundaries,
    dynamics,
    eigensolve,
    observables,
    output,
    perturbative,
    scan,
    util,
)
from .common import (
    DELTA_TH_DEFAULT,
    MODE_PROMINENCE,
    SCHEMA_VERSION,
    TIME_MAX_DEFAULT,
    TIME_STEP_DEFAULT,
    JointState,
    ModelParams,
    OutputFormat,
    Truncation,
    parse_basis_state,
)
from .exception import (
    BoundaryDomainError,
    ContractError,
    ParityError,
    RegimesError,
)
from .typing import (
    LogbookLevel,
    NoReturn,
    Row,
)

__all__ = (
    'ScanConfig',
    'load_state',
    'cli',
    'version',
    'spectrum',
    'boundaries_',
    'classify',
    'observables_',
    'dynamics_',
    'regimes',
    'main',
)

_log = util.get_logger('cli')


def _h(text: str) -> str:
    """
    For some reason, :mod:`click` does not strip new line characters
    from helps in :func:`click.option` (although it does strip them
    from helps for :func:`click.command`). So, we have to do it
    ourselves.
    """
    return text.replace('\n', ' ')


def _get_logging_level(verbosity: int) -> LogbookLevel:
    import logbook
    return LogbookLevel({
        1: logbook.CRITICAL,
        2: logbook.ERROR,
        3: logbook.WARNING,
        4: logbook.NOTICE,
        5: logbook.INFO,
        6: logbook.DEBUG,
        7: logbook.TRACE,
    }[verbosity])


class _ErrorCode(enum.IntEnum):
    computation_failure = 1
    import_error = 3


_logging_levels = 7


@dataclasses.dataclass(frozen=True)
class ScanConfig:
    """
    The resolved options of a command.

    Couplings are given as ``g0 / omega``, energies in units of
    ``omega`` and times as ``omega t``.

    Raises :exc:`ContractError` for reversed coupling ranges, empty
    grids or non-positive level counts.
    """
    command: str
    g_min: float = 0.0
    g_max: float = 1.0
    g_steps: int = 1
    omega_q_over_omega: float = 1.0
    k_levels: int = 8
    delta_th: float = DELTA_TH_DEFAULT
    n_max: Optional[int] = None
    state: Optional[str] = None
    energy: Optional[float] = None
    t_max: float = TIME_MAX_DEFAULT
    t_step: float = TIME_STEP_DEFAULT
    dump_level: Optional[int] = None
    format: OutputFormat = OutputFormat.csv
    out: Optional[str] = None
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        if self.g_min < 0.0 or self.g_min > self.g_max:
            raise ContractError('Invalid coupling range: g_min={} g_max={}'.format(
                self.g_min, self.g_max))
        if self.g_steps < 1:
            raise ContractError('Invalid number of steps: {} (must be >= 1)'.format(
                self.g_steps))
        if self.k_levels < 1:
            raise ContractError('Invalid number of levels: {} (must be >= 1)'.format(
                self.k_levels))
        if self.omega_q_over_omega <= 0.0:
            raise ContractError('Invalid frequency ratio: {} (must be > 0)'.format(
                self.omega_q_over_omega))
        if self.n_max is not None and self.n_max < 1:
            raise ContractError('Invalid n_max: {} (must be >= 1)'.format(self.n_max))

    @property
    def grid(self) -> np.ndarray:
        return scan.coupling_grid(self.g_min, self.g_max, self.g_steps)

    def params(self, g_over_omega: float) -> ModelParams:
        return ModelParams.resonant(
            g_over_omega, omega_q_over_omega=self.omega_q_over_omega)

    def truncation(self) -> Optional[Truncation]:
        return None if self.n_max is None else Truncation(n_max=self.n_max)

    def header(self) -> Dict[str, Any]:
        """
        Return the configuration written to output files. Where the
        output goes and how many threads compute it do not change it.
        """
        values = dataclasses.asdict(self)
        del values['out']
        del values['threads']
        values['schema_version'] = SCHEMA_VERSION
        values['mode_prominence'] = MODE_PROMINENCE
        values['version'] = _version
        return values


def load_state(source: str, n_max: Optional[int] = None) -> JointState:
    """
    Return the state named by a basis ket (e.g. ``g0`` or ``e3``) or
    stored in an amplitude file (one amplitude per line in product
    basis order, either real or as a real and an imaginary column).

    Raises :exc:`ContractError` for malformed sources.
    """
    if os.path.isfile(source):
        try:
            data = np.loadtxt(source, dtype=float, ndmin=1)
        except ValueError as exc:
            raise ContractError('Cannot read amplitude file {!r}: {}'.format(
                source, exc)) from exc
        if data.ndim == 2 and data.shape[1] == 2:
            amps = data[:, 0] + 1j * data[:, 1]
        elif data.ndim == 1:
            amps = data.astype(complex)
        else:
            raise ContractError('Amplitude file {!r} has shape {}'.format(
                source, data.shape))
        state = JointState.from_amplitudes(amps, normalize=True)
        return state if n_max is None else state.with_cutoff(max(n_max, state.n_max))
    qubit, n = parse_basis_state(source)
    if n_max is None:
        n_max = n + 1
    return JointState.basis(qubit, n, max(n_max, n, 1))


def _usage_state(config: ScanConfig) -> JointState:
    if config.state is None:
        raise click.UsageError('Missing option "--state".')
    try:
        return load_state(config.state, n_max=config.n_max)
    except ContractError as exc:
        raise click.BadParameter(str(exc), param_hint='--state') from exc


def _build_config(ctx: click.Context, command: str, **arguments: Any) -> ScanConfig:
    format_ = arguments.pop('format_', None)
    if format_ is not None:
        arguments['format'] = OutputFormat(format_)
    arguments = {key: value for key, value in arguments.items() if value is not None}
    try:
        return ScanConfig(command=command, threads=ctx.obj['threads'], **arguments)
    except ContractError as exc:
        raise click.UsageError(str(exc), ctx=ctx) from exc


def _emit(config: ScanConfig, document: output.Document) -> None:
    output.write_document(document, config.format, path=config.out)


def _run(
        config: ScanConfig,
        function: Callable[[float], List[Row]],
) -> Tuple[List[Row], int]:
    """
    Scan the coupling grid and return the rows (each with a status
    column) and the number of failed grid points.
    """
    results = scan.run_scan(function, config.grid, threads=config.threads)
    rows = []  # type: List[Row]
    for result in results:
        rows.extend(result.status_rows())
    return rows, sum(1 for result in results if not result.ok)


def _finish(ctx: click.Context, failed: int) -> None:
    if failed > 0:
        click.echo('{} grid point(s) failed, see the status column'.format(failed),
                   err=True)
        ctx.exit(code=_ErrorCode.computation_failure)


def _fail(ctx: click.Context, exc: RegimesError) -> NoReturn:
    _log.error('Computation failed: {}', exc)
    click.echo('Computation failed: {}: {}'.format(type(exc).__name__, exc), err=True)
    ctx.exit(code=_ErrorCode.computation_failure)


def _curves(ctx: click.Context, config: ScanConfig) -> boundaries.BoundaryCurves:
    try:
        return boundaries.build_boundary_curves(
            config.delta_th, omega_q_over_omega=config.omega_q_over_omega)
    except RegimesError as exc:
        _fail(ctx, exc)


def _option(*decls: str, **kwargs: Any) -> Callable[[Any], Any]:
    if 'help' in kwargs:
        kwargs['help'] = _h(kwargs['help'])
    return click.option(*decls, **kwargs)


def _grid_options(g_min: float, g_max: float, g_steps: int) -> Callable[[Any], Any]:
    def decorator(function: Any) -> Any:
        for option in reversed((
            _option('--g-min', type=click.FloatRange(min=0.0), default=g_min,
                    show_default=True, help='Smallest coupling g0/omega.'),
            _option('--g-max', type=click.FloatRange(min=0.0), default=g_max,
                    show_default=True, help='Largest coupling g0/omega.'),
            _option('--g-steps', type=click.IntRange(min=1), default=g_steps,
                    show_default=True, help='Number of couplings.'),
        )):
            function = option(function)
        return function
    return decorator


def _common_options(function: Any) -> Any:
    for option in reversed((
        _option('--omega-q', 'omega_q_over_omega', type=float, default=1.0,
                show_default=True, help='Qubit frequency in units of omega.'),
        _option('--nmax', 'n_max', type=click.IntRange(min=1), help="""
Starting photon-number cutoff. Doubled automatically until the results
have converged."""),
        _option('--format', 'format_', type=click.Choice([f.value for f in OutputFormat]),
                default=OutputFormat.csv.value, show_default=True, help='Output format.'),
        _option('--out', type=click.Path(dir_okay=False, writable=True),
                help='Output file. Defaults to standard output.'),
    )):
        function = option(function)
    return function


_levels_option = _option('--levels', 'k_levels', type=click.IntRange(min=1), default=8,
                         show_default=True, help='Number of levels per coupling.')
_delta_th_option = _option('--delta-th', type=click.FloatRange(0.0, 1.0, min_open=True,
                                                               max_open=True),
                           default=DELTA_TH_DEFAULT, show_default=True, help="""
Degeneracy threshold of the pDSC boundary (units of omega).""")
_state_help = """
Basis ket such as g0 or e3, or a file holding one amplitude per line
(real, or real and imaginary column) in product basis order."""


@click.group()
@click.option('-v', '--verbosity', type=click.IntRange(0, _logging_levels),
              default=0, help="Logging verbosity.")
@click.option('-c', '--colored', is_flag=True, help='Colourise logging output.')
@click.option('-t', '--threads', type=click.IntRange(min=1), help=_h("""
Maximum number of grid points evaluated in parallel. Defaults to the
number of CPUs."""))
@click.pass_context
def cli(
        ctx: click.Context,
        verbosity: int,
        colored: bool,
        threads: Optional[int],
) -> None:
    """
    Command Line Interface. Use --help for details.
    """
    ctx.ensure_object(dict)
    ctx.obj.setdefault('logging_handler', None)
    ctx.obj['threads'] = threads
    if verbosity > 0:
        try:
            # noinspection PyUnresolvedReferences
            import logbook.more
        except ImportError:
            click.echo('Please install rabi.regimes[logging] for logging support.',
                       err=True)
            ctx.exit(code=_ErrorCode.import_error)

        # Translate logging level
        level = _get_logging_level(verbosity)

        # Enable asyncio debug logging if verbosity is high enough
        # noinspection PyUnboundLocalVariable
        if level <= logbook.DEBUG:
            os.environ['PYTHONASYNCIODEBUG'] = '1'

        # Enable logging
        util.enable_logging(level=level, redirect_loggers={
            'asyncio': level,
        })

        # Get handler class
        if colored:
            handler_class = logbook.more.ColorizedStderrHandler
        else:
            handler_class = logbook.StderrHandler

        # Set up logging handler
        handler = handler_class(level=level)
        handler.push_application()
        ctx.obj['logging_handler'] = handler


@cli.command(short_help='Show version information.', help="""
Show the current version of the toolkit and the version of the output
schema.
""")
def version() -> None:
    click.echo('Version: {}'.format(_version))
    click.echo('Output schema: {}'.format(SCHEMA_VERSION))


def _spectrum_rows(config: ScanConfig, g: float) -> List[Row]:
    params = config.params(g)
    spectrum_ = eigensolve.converged_spectrum(
        params, config.k_levels, trunc=config.truncation())
    bs = perturbative.bs_levels(params, config.k_levels)
    bs3 = perturbative.bs3_levels(params, config.k_levels)
    jc = perturbative.jc_levels(params, config.k_levels)
    adiabatic = perturbative.adiabatic_levels(params, config.k_levels)
    rows = []  # type: List[Row]
    for index, level in enumerate(spectrum_.levels):
        rows.append({
            'g_over_omega': g,
            'level': index,
            'parity': int(level.parity),
            'order': level.order,
            'energy': level.energy,
            'energy_rescaled': level.energy / g ** 2 if g > 0.0 else None,
            'energy_bs': bs[index],
            'energy_bs3': bs3[index],
            'energy_adiabatic': adiabatic[index],
            'energy_jc': jc[index],
            'n_max': spectrum_.trunc.n_max,
        })
    return rows


_SPECTRUM_COLUMNS = (
    'g_over_omega', 'level', 'parity', 'order', 'energy', 'energy_rescaled', 'energy_bs',
    'energy_bs3', 'energy_adiabatic', 'energy_jc', 'n_max', 'status',
)


@cli.command(short_help='Exact and approximate energies over a coupling grid.', help="""
Compute the lowest levels of the exact spectrum for every coupling of
the grid, next to the second and third order Bloch-Siegert, the
rotating-wave and the adiabatic approximations. Energies are in units
of omega and are also emitted rescaled by g0^2/omega.
""")
@_grid_options(0.0, 1.0, 21)
@_levels_option
@_common_options
@click.pass_context
def spectrum(ctx: click.Context, **arguments: Any) -> None:
    config = _build_config(ctx, 'spectrum', **arguments)
    rows, failed = _run(config, functools.partial(_spectrum_rows, config))
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=(output.Table.create('spectrum', _SPECTRUM_COLUMNS, rows),),
    )
    _emit(config, document)
    _finish(ctx, failed)


@cli.command('boundaries', short_help='Regime boundaries and their fit.', help="""
Solve the pDSC degeneracy condition for n = 1..12, fit the pDSC
boundary, locate the first Juddian points and sample both boundary
curves over the coupling grid.
""")
@_grid_options(0.05, 5.0, 100)
@_delta_th_option
@_option('--juddian', 'juddian_max', type=click.IntRange(min=0), default=4,
         show_default=True, help='Locate the Juddian points n = 1..N (0 to skip).')
@_common_options
@click.pass_context
def boundaries_(ctx: click.Context, juddian_max: int, **arguments: Any) -> None:
    config = _build_config(ctx, 'boundaries', **arguments)
    failed = 0

    # Degeneracy table
    table_rows = []  # type: List[Row]
    for n in boundaries.TABLE_N_VALUES:
        row = {'n': n}  # type: Row
        try:
            g_cross = boundaries.pdsc_crossing(
                n, config.delta_th, config.omega_q_over_omega)
            row.update({
                'g_cross': g_cross,
                'midpoint_energy': boundaries.pdsc_midpoint_energy(n, g_cross),
                'd_alpha_d_delta': boundaries.delta_sensitivity(
                    n, g_cross, 1.0, config.omega_q_over_omega),
                'status': scan.STATUS_OK,
            })
        except RegimesError as exc:
            _log.warning('No crossing for n={}: {}', n, exc)
            row['status'] = '{}: {}'.format(type(exc).__name__, exc)
            failed += 1
        table_rows.append(row)
    curves = _curves(ctx, config)

    # Juddian points
    juddian_rows = []  # type: List[Row]
    for n in range(1, juddian_max + 1):
        numeric = boundaries.juddian_crossing(
            config.omega_q_over_omega, n, trunc=config.truncation())
        juddian_rows.append({
            'n': n,
            'g_approx': boundaries.first_juddian_approx(n),
            'g_bs': boundaries.bs_juddian_crossing(n, config.omega_q_over_omega),
            'g_numeric': None if numeric is None else numeric.g_cross,
            'energy_numeric': None if numeric is None else numeric.energy,
        })

    # Curve samples
    curve_rows = []  # type: List[Row]
    for g in config.grid:
        g = float(g)
        try:
            pusc = curves.pusc_energy(g) if g <= curves.pusc_g_max else None
        except BoundaryDomainError:
            pusc = None
        pdsc = curves.pdsc_energy(g) if g >= curves.pdsc_g_min else None
        curve_rows.append({'g_over_omega': g, 'pusc_energy': pusc, 'pdsc_energy': pdsc})

    a, b, c = curves.pdsc_fit
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=(
            output.Table.create('crossings', (
                'n', 'g_cross', 'midpoint_energy', 'd_alpha_d_delta', 'status'),
                table_rows),
            output.Table.create('juddian', (
                'n', 'g_approx', 'g_bs', 'g_numeric', 'energy_numeric'), juddian_rows),
            output.Table.create('curves', (
                'g_over_omega', 'pusc_energy', 'pdsc_energy'), curve_rows),
        ),
        summary={
            'fit': {'a': a, 'b': b, 'c': c},
            'pusc_g_max': curves.pusc_g_max,
            'pdsc_g_min': curves.pdsc_g_min,
            'delta_th': curves.delta_th,
        },
    )
    _emit(config, document)
    _finish(ctx, failed)


@cli.command(short_help='Classify a point of the regime map.', help="""
Classify the coupling and the mean energy of a state (or a raw energy)
as PerturbativeUSC, NonPerturbative or PerturbativeDSC.
""")
@_option('--g', 'g', type=click.FloatRange(min=0.0), required=True,
         help='Coupling g0/omega.')
@_option('--state', help=_state_help)
@_option('--energy', type=float, help='Mean energy in units of omega.')
@_delta_th_option
@_option('--omega-q', 'omega_q_over_omega', type=float, default=1.0,
         show_default=True, help='Qubit frequency in units of omega.')
@_option('--nmax', 'n_max', type=click.IntRange(min=1),
         help='Photon-number cutoff of the state.')
@_option('--format', 'format_', type=click.Choice([f.value for f in OutputFormat]),
         default=OutputFormat.json.value, show_default=True, help='Output format.')
@_option('--out', type=click.Path(dir_okay=False, writable=True),
         help='Output file. Defaults to standard output.')
@click.pass_context
def classify(ctx: click.Context, g: float, **arguments: Any) -> None:
    config = _build_config(ctx, 'classify', g_min=g, g_max=g, **arguments)
    if (config.state is None) == (config.energy is None):
        raise click.UsageError('Exactly one of "--state" and "--energy" is required.',
                               ctx=ctx)
    params = config.params(g)
    energy = config.energy
    if energy is None:
        energy = boundaries.mean_energy(_usage_state(config), params)
    curves = _curves(ctx, config)
    try:
        label = boundaries.classify(g, energy, curves)
    except RegimesError as exc:
        _fail(ctx, exc)

    summary = label.to_dict()
    summary['boundaries'] = {
        'pusc_g_max': curves.pusc_g_max,
        'pusc_energy': curves.pusc_energy(g) if 0.0 < g <= curves.pusc_g_max else None,
        'pdsc_g_min': curves.pdsc_g_min,
        'pdsc_energy': curves.pdsc_energy(g) if g >= curves.pdsc_g_min else None,
        'pdsc_fit': list(curves.pdsc_fit),
    }
    row = {'g_over_omega': g, 'mean_energy': energy, 'region': label.region.value}
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=(output.Table.create('label', tuple(row), [row]),),
        summary=summary,
    )
    _emit(config, document)


def _observable_rows(
        config: ScanConfig,
        curves: boundaries.BoundaryCurves,
        g: float,
) -> List[Row]:
    params = config.params(g)
    spectrum_ = eigensolve.converged_spectrum(
        params, config.k_levels, trunc=config.truncation())
    rows = []  # type: List[Row]
    for index, level in enumerate(spectrum_.levels):
        state = level.vector
        distribution = observables.photon_distribution(state)
        label = boundaries.classify(g, level.energy / params.omega, curves)
        row = {
            'g_over_omega': g,
            'level': index,
            'parity': int(level.parity),
            'order': level.order,
            'energy': level.energy,
            'excitations': observables.total_excitations(state),
            'fano_mandel': observables.fano_mandel(state),
            'entropy': observables.von_neumann_entropy(
                observables.reduced_qubit_density(state)),
            'mean_photons': observables.distribution_center(distribution),
            'modes': observables.count_modes(distribution),
            'region': label.region.value,
        }  # type: Row
        if config.dump_level is not None and index == config.dump_level:
            row['distribution'] = distribution
        rows.append(row)
    return rows


_OBSERVABLE_COLUMNS = (
    'g_over_omega', 'level', 'parity', 'order', 'energy', 'excitations', 'fano_mandel',
    'entropy', 'mean_photons', 'modes', 'region', 'status',
)


@cli.command('observables', short_help='Static observables of the exact eigenstates.',
             help="""
Compute the total number of excitations, the Fano-Mandel parameter, the
qubit entanglement entropy (bits) and the photon distribution summary of
the lowest exact eigenstates for every coupling of the grid, each
labelled with its region.
""")
@_grid_options(0.0, 1.0, 21)
@_levels_option
@_delta_th_option
@_option('--dump', 'dump_level', type=click.IntRange(min=0), help="""
Additionally emit the full photon distribution of this level (index
within the lowest levels) at every coupling.""")
@_common_options
@click.pass_context
def observables_(ctx: click.Context, **arguments: Any) -> None:
    config = _build_config(ctx, 'observables', **arguments)
    curves = _curves(ctx, config)
    rows, failed = _run(config, functools.partial(_observable_rows, config, curves))

    distribution_rows = []  # type: List[Row]
    for row in rows:
        distribution = row.pop('distribution', None)
        if distribution is None:
            continue
        distribution_rows.extend(
            {'g_over_omega': row['g_over_omega'], 'level': row['level'], 'm': m,
             'probability': probability}
            for m, probability in enumerate(distribution)
        )
    tables = [output.Table.create('observables', _OBSERVABLE_COLUMNS, rows)]
    if config.dump_level is not None:
        tables.append(output.Table.create(
            'distribution', ('g_over_omega', 'level', 'm', 'probability'),
            distribution_rows))
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=tuple(tables),
    )
    _emit(config, document)
    _finish(ctx, failed)


@cli.command('dynamics', short_help='Survival probability of an initial state.', help="""
Evolve a state of definite parity and emit the survival probability, the
probability leaked to the opposite parity chain and a summary of the
revival peaks. Times are in units of 1/omega.
""")
@_option('--g', 'g', type=click.FloatRange(min=0.0), required=True,
         help='Coupling g0/omega.')
@_option('--state', required=True, help=_state_help)
@_option('--t-max', type=click.FloatRange(min=0.0, min_open=True),
         default=TIME_MAX_DEFAULT, show_default=True, help='Largest time.')
@_option('--t-step', type=click.FloatRange(min=0.0, min_open=True),
         default=TIME_STEP_DEFAULT, show_default=True, help='Largest time step.')
@_delta_th_option
@_common_options
@click.pass_context
def dynamics_(ctx: click.Context, g: float, **arguments: Any) -> None:
    config = _build_config(ctx, 'dynamics', g_min=g, g_max=g, **arguments)
    initial = _usage_state(config)
    try:
        parity = dynamics.state_parity(initial)
    except ParityError as exc:
        raise click.BadParameter(str(exc), param_hint='--state') from exc
    params = config.params(g)
    try:
        times = dynamics.time_grid(config.t_max, config.t_step)
        plan = dynamics.evolution_plan(
            params, initial, times=times, trunc=config.truncation())
        survival = dynamics.survival_probabilities(plan)
        leakage = dynamics.parity_leakage(plan, parity)
        revivals = None  # type: Optional[List[List[float]]]
        try:
            revivals = [list(peak) for peak in dynamics.revival_profile(plan)]
        except ContractError as exc:
            _log.notice('Skipping revival detection: {}', exc)
        energy = boundaries.mean_energy(initial, params)
        label = boundaries.classify(g, energy, _curves(ctx, config))
    except RegimesError as exc:
        _fail(ctx, exc)

    rows = [{'t': t, 'survival': p, 'leakage': q}
            for t, p, q in zip(times, survival, leakage)]
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=(output.Table.create('trace', ('t', 'survival', 'leakage'), rows),),
        summary={
            'parity': int(parity),
            'mean_energy': energy,
            'region': label.region.value,
            'revivals': revivals,
            'max_leakage': float(np.max(leakage)),
            'n_max': plan.spectrum.trunc.n_max,
        },
    )
    _emit(config, document)


def _regime_rows(
        config: ScanConfig,
        curves: boundaries.BoundaryCurves,
        state: JointState,
        g: float,
) -> List[Row]:
    params = config.params(g)
    energy = boundaries.mean_energy(state, params)
    label = boundaries.classify(g, energy, curves)
    pusc = None  # type: Optional[float]
    if 0.0 < g <= curves.pusc_g_max:
        pusc = curves.pusc_energy(g)
    pdsc = curves.pdsc_energy(g) if g >= curves.pdsc_g_min else None
    return [{
        'g_over_omega': g,
        'pusc_energy': pusc,
        'pdsc_energy': pdsc,
        'mean_energy': energy,
        'region': label.region.value,
    }]


@cli.command(short_help='Regime map of a state over a coupling grid.', help="""
For every coupling of the grid, emit both boundary energies, the mean
energy of the given state and the region it falls into.
""")
@_grid_options(0.05, 5.0, 100)
@_option('--state', default='g0', show_default=True, help=_state_help)
@_delta_th_option
@_common_options
@click.pass_context
def regimes(ctx: click.Context, **arguments: Any) -> None:
    config = _build_config(ctx, 'regimes', **arguments)
    state = _usage_state(config)
    curves = _curves(ctx, config)
    rows, failed = _run(config, functools.partial(_regime_rows, config, curves, state))
    document = output.Document(
        command=config.command,
        config=config.header(),
        tables=(output.Table.create('regimes', (
            'g_over_omega', 'pusc_energy', 'pdsc_energy', 'mean_energy', 'region',
            'status'), rows),),
        summary={
            'pusc_g_max': curves.pusc_g_max,
            'pdsc_g_min': curves.pdsc_g_min,
            'pdsc_fit': list(curves.pdsc_fit),
        },
    )
    _emit(config, document)
    _finish(ctx, failed)


def main() -> None:
    obj = {'logging_handler': None, 'threads': None}  # type: Dict[str, Any]
    try:
        cli(obj=obj, auto_envvar_prefix='RABI_REGIMES')
    except Exception as exc:
        click.echo('An error occurred:', err=True)
        click.echo(exc, err=True)
        raise
    finally:
        try:
            import logbook  # noqa
        except ImportError:
            pass
        else:
            logging_handler = obj['logging_handler']  # type: Optional[logbook.Handler]
            if logging_handler is not None:
                logging_handler.pop_application()


if __name__ == '__main__':
    main()
