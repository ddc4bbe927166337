"""
Regime boundaries of the resonant Rabi model and the classification of
``(g0 / omega, mean energy / omega)`` points.

The perturbative ultrastrong (pUSC) region is bounded by the first
Juddian points of the Bloch-Siegert spectrum, the perturbative
deep-strong (pDSC) region by the couplings at which the adiabatic
doublets become degenerate within a threshold ``delta``.
"""
import dataclasses
import math
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from scipy import optimize

from . import util
from .common import (
    DELTA_TH_DEFAULT,
    PUSC_G_LIMIT,
    PUSC_G_MAX,
    Branch,
    JointState,
    JuddianMethod,
    ModelParams,
    Parity,
    Region,
    Truncation,
    validate_delta_th,
    validate_photon_number,
)
from .core import build_dense_hamiltonian
from .eigensolve import chain_eigensystem
from .exception import (
    BoundaryDomainError,
    ContractError,
    FitError,
    InternalError,
    SingularSensitivityError,
    ThresholdTooLargeError,
)
from .perturbative import bs_energy
from .special import (
    assoc_laguerre,
    laguerre,
    last_extremum,
    splitting_envelope,
)
from .typing import (
    Alpha,
    Coupling,
    EnergyRatio,
    FitCoefficients,
    Margins,
)

__all__ = (
    'TABLE_N_VALUES',
    'JUDDIAN_XTOL',
    'PDSC_XTOL',
    'JuddianPoint',
    'BoundaryCurves',
    'RegimeLabel',
    'first_juddian_approx',
    'pusc_boundary_energy',
    'chain_energies',
    'juddian_points_numeric',
    'juddian_crossing',
    'bs_juddian_crossing',
    'pdsc_crossing',
    'pdsc_table',
    'delta_sensitivity',
    'pdsc_midpoint_energy',
    'fit_pdsc_boundary',
    'pdsc_boundary_energy',
    'build_boundary_curves',
    'classify',
    'classify_state',
    'mean_energy',
)

TABLE_N_VALUES = tuple(range(1, 13))
JUDDIAN_XTOL = 1e-6
PDSC_XTOL = 1e-10

_log = util.get_logger('boundaries')


@dataclasses.dataclass(frozen=True)
class JuddianPoint:
    """
    A crossing of two levels of opposite parity.

    Arguments:
        - `n`: Crossing index. The crossing ``n`` joins the levels
          ``(n, +)`` and ``(n + 1, -)``.
        - `g_cross`: Coupling ``g0 / omega`` of the crossing.
        - `energy`: Energy at the crossing in units of ``omega`` (`nan`
          for the closed-form approximation).
        - `method`: How the point was obtained.
        - `orders`: Position within the even and the odd chain of the
          two crossing levels (numeric points only).
    """
    n: int
    g_cross: float
    energy: float
    method: JuddianMethod
    orders: Optional[Tuple[int, int]] = None


@dataclasses.dataclass(frozen=True)
class BoundaryCurves:
    """
    The boundaries of the two perturbative regions at a fixed
    degeneracy threshold.

    Arguments:
        - `pusc_g_max`: Largest coupling of the pUSC region.
        - `pdsc_fit`: Coefficients ``(a, b, c)`` of the quadratic
          pDSC boundary ``E + g^2 = a g^2 + b g + c``.
        - `delta_th`: The degeneracy threshold.
        - `pdsc_g_min`: Smallest coupling of the pDSC region (the
          first solved crossing).
        - `crossings`: The solved ``(n, g_cross)`` pairs the fit is
          based on.
        - `omega_q_over_omega`: Qubit to cavity frequency ratio the
          crossings were solved for.
    """
    pusc_g_max: float
    pdsc_fit: FitCoefficients
    delta_th: float
    pdsc_g_min: float
    crossings: Tuple[Tuple[int, float], ...] = ()
    omega_q_over_omega: float = 1.0

    def pusc_energy(self, g_over_omega: float) -> float:
        """
        Return the pUSC boundary energy, ``inf`` at zero coupling.
        """
        if g_over_omega == 0.0:
            return math.inf
        return pusc_boundary_energy(g_over_omega)

    def pdsc_energy(self, g_over_omega: float) -> float:
        return pdsc_boundary_energy(g_over_omega, self.pdsc_fit)


@dataclasses.dataclass(frozen=True)
class RegimeLabel:
    """
    The classification of a single point.

    Arguments:
        - `region`: The assigned region.
        - `margins`: Signed distance to every boundary that has been
          consulted. Non-negative values lie on the perturbative side.
        - `g_over_omega`: The classified coupling.
        - `mean_energy`: The classified energy (units of ``omega``).
    """
    region: Region
    margins: Margins
    g_over_omega: float
    mean_energy: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'region': self.region.value,
            'margins': dict(sorted(self.margins.items())),
            'g_over_omega': self.g_over_omega,
            'mean_energy': self.mean_energy,
        }


def first_juddian_approx(n: int) -> Coupling:
    """
    Return the second order estimate ``1 / sqrt(2 (2n + 1))`` of the
    coupling at which ``(n, +)`` crosses ``(n + 1, -)``.
    """
    n = validate_photon_number(n, minimum=1)
    return Coupling(1.0 / math.sqrt(2.0 * (2 * n + 1)))


def pusc_boundary_energy(g_over_omega: float) -> EnergyRatio:
    """
    Return the energy bounding the pUSC region,

    ``g^-2 (1 - 2 g^4) / 4 - 1 + sqrt((5 - 2 g^2) (1 - 2 g^2)) / 4``.

    Raises :exc:`BoundaryDomainError` outside of ``(0, 1/sqrt(2)]``.
    """
    g = float(g_over_omega)
    if not 0.0 < g <= PUSC_G_LIMIT:
        raise BoundaryDomainError(g_over_omega)
    g2 = g * g
    root = math.sqrt((5.0 - 2.0 * g2) * max(0.0, 1.0 - 2.0 * g2))
    return EnergyRatio(0.25 * (1.0 - 2.0 * g2 * g2) / g2 - 1.0 + 0.25 * root)


def chain_energies(
        params: ModelParams,
        count: int,
        trunc: Optional[Truncation] = None,
) -> Dict[Parity, np.ndarray]:
    """
    Return the lowest `count` eigenvalues of each parity chain at a
    fixed truncation (default: the heuristic cutoff of `params`).
    """
    if trunc is None:
        trunc = Truncation.for_params(params)
    return {
        parity: chain_eigensystem(
            params, trunc, parity, want_vectors=False).values[:count]
        for parity in Parity
    }


def _resonant(g: float, omega_q_over_omega: float) -> ModelParams:
    return ModelParams.resonant(g, omega_q_over_omega=omega_q_over_omega)


def _adjacent(
        energies: Dict[Parity, np.ndarray],
        even: int,
        odd: int,
        count: int,
) -> bool:
    # Both levels are among the lowest `count` and no level lies between them
    merged = np.sort(np.concatenate(list(energies.values())))[:count]
    low, high = sorted((energies[Parity.even][even], energies[Parity.odd][odd]))
    if high > merged[-1]:
        return False
    between = np.count_nonzero((merged > low) & (merged < high))
    return between == 0


def _crossing_index(even: int, odd: int) -> int:
    # (n, +) and (n + 1, -) both sit at order n of their chains
    return max(1, min(even, odd))


def juddian_points_numeric(
        g_values: Sequence[float],
        n_levels: int,
        trunc: Optional[Truncation] = None,
        omega_q_over_omega: float = 1.0,
        xtol: float = JUDDIAN_XTOL,
) -> List[JuddianPoint]:
    """
    Scan the spectrum over the ascending couplings `g_values` and
    return every crossing between opposite parity levels among the
    lowest `n_levels`, refined by bisection to `xtol` in ``g / omega``.

    The spectra are evaluated at a fixed truncation, by default the
    heuristic cutoff of the largest coupling.

    Return the points sorted by coupling. Same-parity levels never
    cross and are not reported.
    """
    grid = np.asarray(g_values, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ContractError('Need at least two couplings to scan')
    if np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
        raise ContractError('Couplings must be positive and ascending')
    if n_levels < 2:
        raise ContractError('Need at least two levels to find a crossing')
    if trunc is None:
        trunc = Truncation.for_params(_resonant(float(grid[-1]), omega_q_over_omega))

    def energies_at(g: float) -> Dict[Parity, np.ndarray]:
        return chain_energies(_resonant(g, omega_q_over_omega), n_levels, trunc)

    points = []  # type: List[JuddianPoint]
    previous = energies_at(float(grid[0]))
    for g_low, g_high in zip(grid[:-1], grid[1:]):
        current = energies_at(float(g_high))
        for even in range(n_levels):
            for odd in range(n_levels):
                before = previous[Parity.even][even] - previous[Parity.odd][odd]
                after = current[Parity.even][even] - current[Parity.odd][odd]
                if before * after > 0.0 or before == 0.0:
                    continue
                if not (_adjacent(previous, even, odd, n_levels)
                        or _adjacent(current, even, odd, n_levels)):
                    continue

                def gap(g: float, even: int = even, odd: int = odd) -> float:
                    values = energies_at(g)
                    return float(values[Parity.even][even] - values[Parity.odd][odd])

                if after == 0.0:
                    g_cross = float(g_high)
                else:
                    g_cross = float(optimize.bisect(gap, g_low, g_high, xtol=xtol))
                energy = float(energies_at(g_cross)[Parity.even][even])
                _log.debug('Crossing of even #{} and odd #{} at g={:.6f}',
                           even, odd, g_cross)
                points.append(JuddianPoint(
                    n=_crossing_index(even, odd), g_cross=g_cross, energy=energy,
                    method=JuddianMethod.numeric, orders=(even, odd)))
        previous = current
    points.sort(key=lambda point: point.g_cross)
    return points


def juddian_crossing(
        omega_q_over_omega: float,
        n: int,
        g_range: Tuple[float, float] = (0.05, 1.0),
        samples: int = 100,
        trunc: Optional[Truncation] = None,
        xtol: float = JUDDIAN_XTOL,
) -> Optional[JuddianPoint]:
    """
    Return the first numeric crossing of ``(n, +)`` and ``(n + 1, -)``
    within `g_range`, or `None` if the levels do not cross there.

    Both levels sit at position `n` of their parity chain: ``(n, +)``
    on the chain ``(-1)^n`` and ``(n + 1, -)`` on the opposite one.
    """
    n = validate_photon_number(n, minimum=1)
    g_low, g_high = g_range
    if not 0.0 < g_low < g_high:
        raise ContractError('Invalid coupling range: {!r}'.format(g_range))
    plus_chain = Parity.even if n % 2 == 0 else Parity.odd
    if trunc is None:
        trunc = Truncation.for_params(_resonant(g_high, omega_q_over_omega))

    def gap(g: float) -> float:
        values = chain_energies(_resonant(g, omega_q_over_omega), n + 1, trunc)
        return float(values[plus_chain][n] - values[plus_chain.opposite][n])

    grid = np.linspace(g_low, g_high, samples)
    previous = gap(float(grid[0]))
    for g_a, g_b in zip(grid[:-1], grid[1:]):
        current = gap(float(g_b))
        if previous * current <= 0.0 and previous != 0.0:
            g_cross = float(optimize.bisect(gap, g_a, g_b, xtol=xtol))
            params = _resonant(g_cross, omega_q_over_omega)
            energy = float(chain_energies(params, n + 1, trunc)[plus_chain][n])
            orders = (n, n)
            return JuddianPoint(n=n, g_cross=g_cross, energy=energy,
                                method=JuddianMethod.numeric, orders=orders)
        previous = current
    return None


def bs_juddian_crossing(
        n: int,
        omega_q_over_omega: float = 1.0,
        g_max: float = 1.5,
        samples: int = 300,
) -> Optional[float]:
    """
    Return the smallest coupling at which the second order BS levels
    ``(n, +)`` and ``(n + 1, -)`` cross, solved without further
    expansion, or `None` below `g_max`.
    """
    n = validate_photon_number(n, minimum=1)

    def gap(g: float) -> float:
        params = _resonant(g, omega_q_over_omega)
        return bs_energy(params, n, Branch.plus) - bs_energy(params, n + 1, Branch.minus)

    grid = np.linspace(0.0, g_max, samples + 1)[1:]
    values = [gap(float(g)) for g in grid]
    for index in range(1, len(grid)):
        if values[index - 1] * values[index] <= 0.0:
            return float(optimize.bisect(gap, grid[index - 1], grid[index], xtol=1e-12))
    return None


def pdsc_crossing(
        n: int,
        delta_th: float = DELTA_TH_DEFAULT,
        omega_q_over_omega: float = 1.0,
) -> Coupling:
    """
    Return the largest ``alpha = g0 / omega`` at which the adiabatic
    doublet ``n`` is split by ``delta_th * omega``:

    ``(Omega / omega) exp(-2 alpha^2) |L_n(4 alpha^2)| = delta_th``.

    The root is bracketed beyond the last maximum of the left side and
    refined by bisection.

    Raises :exc:`ThresholdTooLargeError` if the last maximum lies below
    the threshold.
    """
    n = validate_photon_number(n, minimum=1)
    delta_th = validate_delta_th(delta_th)
    if omega_q_over_omega <= 0.0:
        raise ContractError('Invalid frequency ratio ({} > 0)'.format(omega_q_over_omega))
    target = delta_th / omega_q_over_omega

    alpha_peak, peak = last_extremum(n)
    if peak < target:
        raise ThresholdTooLargeError(n, delta_th, peak * omega_q_over_omega)
    if peak == target:
        return Coupling(alpha_peak)

    def excess(alpha: float) -> float:
        return float(splitting_envelope(n, alpha)) - target

    high = alpha_peak + 0.5
    while excess(high) > 0.0:
        high += 0.5
    return Coupling(float(optimize.bisect(excess, alpha_peak, high, xtol=PDSC_XTOL)))


def pdsc_table(
        delta_th: float = DELTA_TH_DEFAULT,
        n_values: Iterable[int] = TABLE_N_VALUES,
        omega_q_over_omega: float = 1.0,
) -> List[Tuple[int, float]]:
    """
    Return ``(n, g_cross)`` for every `n` in `n_values`.
    """
    return [(n, pdsc_crossing(n, delta_th, omega_q_over_omega)) for n in n_values]


def delta_sensitivity(
        n: int,
        alpha_delta: float,
        d_delta: float,
        omega_q_over_omega: float = 1.0,
) -> Alpha:
    """
    Return the first order shift of the pDSC crossing `alpha_delta`
    when the threshold changes by `d_delta`:

    ``-exp(2 alpha^2) d_delta / (4 alpha s (L_n(4 alpha^2) + 2 L^1_(n-1)(4 alpha^2)))``

    with ``s`` the sign of ``L_n(4 alpha^2)``.

    Raises :exc:`SingularSensitivityError` if the derivative of the
    degeneracy condition vanishes.
    """
    n = validate_photon_number(n, minimum=1)
    x = 4.0 * alpha_delta ** 2
    value = laguerre(n, x)
    sign = math.copysign(1.0, value) if value != 0.0 else 0.0
    slope = value + 2.0 * assoc_laguerre(n - 1, 1, x)
    denominator = 4.0 * alpha_delta * sign * slope * omega_q_over_omega
    if denominator == 0.0 or not math.isfinite(denominator):
        raise SingularSensitivityError(
            'Degeneracy condition is stationary at alpha={!r} (n={})'.format(
                alpha_delta, n))
    if d_delta == 0.0:
        return Alpha(0.0)
    return Alpha(-math.exp(2.0 * alpha_delta ** 2) * d_delta / denominator)


def pdsc_midpoint_energy(n: int, g_over_omega: float) -> EnergyRatio:
    """
    Return the centre ``n - alpha^2`` of the adiabatic doublet `n`.
    """
    return EnergyRatio(n - g_over_omega ** 2)


def fit_pdsc_boundary(points: Sequence[Tuple[float, float]]) -> FitCoefficients:
    """
    Fit ``E + g^2 = a g^2 + b g + c`` to ``(g, E)`` points by ordinary
    least squares, solving the normal equations directly.

    Raises :exc:`FitError` if fewer than three distinct couplings are
    given.
    """
    data = np.array(points, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ContractError('Points must be (g, energy) pairs')
    g, energy = data[:, 0], data[:, 1]
    design = np.column_stack([g ** 2, g, np.ones_like(g)])
    if data.shape[0] < 3 or np.linalg.matrix_rank(design) < 3:
        raise FitError('Design matrix is rank deficient ({} points, {} distinct)'.format(
            data.shape[0], np.unique(g).size))
    target = energy + g ** 2
    a, b, c = np.linalg.solve(design.T @ design, design.T @ target)
    return float(a), float(b), float(c)


def pdsc_boundary_energy(
        g_over_omega: float,
        coefficients: FitCoefficients,
) -> EnergyRatio:
    """
    Return the pDSC boundary energy ``(a - 1) g^2 + b g + c``.
    """
    a, b, c = coefficients
    g = g_over_omega
    return EnergyRatio((a - 1.0) * g * g + b * g + c)


def build_boundary_curves(
        delta_th: float = DELTA_TH_DEFAULT,
        n_values: Iterable[int] = TABLE_N_VALUES,
        omega_q_over_omega: float = 1.0,
) -> BoundaryCurves:
    """
    Solve the pDSC crossings for `n_values` and fit the pDSC boundary
    through their doublet centres. Values of `n` without a crossing
    are skipped.

    Raises :exc:`FitError` if fewer than three crossings remain.
    """
    delta_th = validate_delta_th(delta_th)
    crossings = []  # type: List[Tuple[int, float]]
    for n in n_values:
        try:
            crossings.append((n, pdsc_crossing(n, delta_th, omega_q_over_omega)))
        except ThresholdTooLargeError as exc:
            _log.warning('Skipping n={}: {}', n, exc)
    if len(crossings) < 3:
        raise FitError('Only {} crossings solved for delta_th={}'.format(
            len(crossings), delta_th))

    points = [(g, pdsc_midpoint_energy(n, g)) for n, g in crossings]
    fit = fit_pdsc_boundary(points)
    g_min = min(g for _, g in crossings)
    _log.info('pDSC boundary for delta_th={}: a={:.6g}, b={:.6g}, c={:.6g}, g_min={:.6g}',
              delta_th, fit[0], fit[1], fit[2], g_min)
    return BoundaryCurves(
        pusc_g_max=PUSC_G_MAX,
        pdsc_fit=fit,
        delta_th=delta_th,
        pdsc_g_min=g_min,
        crossings=tuple(crossings),
        omega_q_over_omega=omega_q_over_omega,
    )


def classify(
        g_over_omega: float,
        mean_energy_over_omega: float,
        curves: BoundaryCurves,
) -> RegimeLabel:
    """
    Classify the point ``(g / omega, E / omega)``.

    A point is PerturbativeUSC if ``g <= pusc_g_max`` and ``E`` lies on
    or below the pUSC boundary, PerturbativeDSC if ``g >= pdsc_g_min``
    and ``E`` lies on or below the pDSC boundary and NonPerturbative
    otherwise.

    Raises :exc:`InternalError` if both perturbative conditions hold.
    """
    g = float(g_over_omega)
    energy = float(mean_energy_over_omega)
    if not math.isfinite(g) or g < 0.0:
        raise ContractError('Invalid coupling: {!r}'.format(g_over_omega))
    if not math.isfinite(energy):
        raise ContractError('Invalid energy: {!r}'.format(mean_energy_over_omega))

    margins = {}  # type: Margins
    margins['pusc_coupling'] = curves.pusc_g_max - g
    is_pusc = False
    if margins['pusc_coupling'] >= 0.0:
        margins['pusc_energy'] = curves.pusc_energy(g) - energy
        is_pusc = margins['pusc_energy'] >= 0.0

    margins['pdsc_coupling'] = g - curves.pdsc_g_min
    is_pdsc = False
    if margins['pdsc_coupling'] >= 0.0:
        margins['pdsc_energy'] = curves.pdsc_energy(g) - energy
        is_pdsc = margins['pdsc_energy'] >= 0.0

    if is_pusc and is_pdsc:
        raise InternalError('Point (g={}, E={}) lies in both perturbative regions'.format(
            g, energy))
    if is_pusc:
        region = Region.perturbative_usc
    elif is_pdsc:
        region = Region.perturbative_dsc
    else:
        region = Region.non_perturbative
    return RegimeLabel(region=region, margins=margins, g_over_omega=g, mean_energy=energy)


def classify_state(
        params: ModelParams,
        mean_energy_value: float,
        curves: BoundaryCurves,
) -> RegimeLabel:
    """
    Classify a mean energy given in the units of `params`.

    Raises :exc:`ContractError` if the frequency ratio of `params`
    differs from the one the curves were built for.
    """
    ratio = params.omega_q / params.omega
    if not math.isclose(ratio, curves.omega_q_over_omega, rel_tol=1e-9):
        raise ContractError('Curves were built for Omega/omega={} (got {})'.format(
            curves.omega_q_over_omega, ratio))
    return classify(params.g0 / params.omega, mean_energy_value / params.omega, curves)


def mean_energy(
        state: JointState,
        params: ModelParams,
        trunc: Optional[Truncation] = None,
) -> float:
    """
    Return ``<psi|H|psi>`` evaluated with the dense Hamiltonian.
    """
    if trunc is None:
        trunc = Truncation(n_max=state.n_max)
    elif trunc.dim != state.dim:
        raise ContractError('State dimension {} does not match truncation ({})'.format(
            state.dim, trunc.dim))
    hamiltonian = build_dense_hamiltonian(params, trunc)
    return float(np.vdot(state.amps, hamiltonian @ state.amps).real)
