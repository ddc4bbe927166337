"""
Time evolution of joint states by spectral decomposition, survival
probabilities and the collapse-revival characterisation built on top
of them.

Times are given in units of ``1 / omega`` throughout. The survival
probability is the squared modulus ``|<psi_0|psi(t)>|^2``.
"""
import dataclasses
import math
from typing import (
    Any,
    List,
    Optional,
    Tuple,
)

import numpy as np
from scipy import signal

from . import util
from .common import (
    N_MAX_CAP,
    NORM_TOL,
    REVIVAL_HEIGHT,
    REVIVAL_PROMINENCE,
    TIME_MAX_DEFAULT,
    TIME_STEP_DEFAULT,
    JointState,
    ModelParams,
    Parity,
    Truncation,
)
from .core import chain_basis_indices
from .eigensolve import (
    Level,
    Spectrum,
    chain_eigensystem,
)
from .exception import (
    ContractError,
    ParityError,
    TruncationError,
)
from .typing import (
    ComplexArray,
    RealArray,
    Time,
)

__all__ = (
    'NORM_DRIFT_TOL',
    'REVIVAL_MAX_STEP',
    'REVIVAL_MIN_SPAN',
    'EvolutionPlan',
    'time_grid',
    'chain_weights',
    'state_parity',
    'evolution_plan',
    'evolve',
    'survival_probability',
    'survival_probabilities',
    'revival_profile',
    'parity_leakage',
    'parity_confinement',
)

# Largest norm drift tolerated before an evolved state is renormalised
NORM_DRIFT_TOL = 1e-8
# Time grid needed for revival detection
REVIVAL_MAX_STEP = 0.01
REVIVAL_MIN_SPAN = 4.0 * math.pi

_log = util.get_logger('dynamics')


@dataclasses.dataclass(frozen=True, eq=False)
class EvolutionPlan:
    """
    The spectral decomposition of an initial state.

    Arguments:
        - `spectrum`: Every eigenpair of each parity chain the initial
          state has weight on.
        - `initial`: The initial state at the cutoff of `spectrum`.
        - `projections`: ``c_k = <phi_k|psi_0>`` in the level order
          of `spectrum`.
        - `times`: The sample grid (units of ``1 / omega``).
    """
    spectrum: Spectrum
    initial: JointState
    projections: ComplexArray
    times: RealArray
    vectors: np.ndarray = dataclasses.field(repr=False)

    def __post_init__(self) -> None:
        if self.projections.shape != (len(self.spectrum),):
            raise ContractError('Projection count {} does not match the spectrum ({})'
                                .format(self.projections.size, len(self.spectrum)))
        for array in (self.projections, self.times, self.vectors):
            array.setflags(write=False)

    @property
    def params(self) -> ModelParams:
        return self.spectrum.params

    @property
    def weights(self) -> RealArray:
        """
        Return ``|c_k|^2``.
        """
        return np.abs(self.projections) ** 2

    @property
    def scaled_energies(self) -> RealArray:
        """
        Return the eigenvalues in units of ``omega``.
        """
        return self.spectrum.energies / self.params.omega

    def phases(self, times: Any) -> np.ndarray:
        """
        Return ``exp(-i E_k t)`` with one row per time.
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        return np.exp(-1j * np.outer(times, self.scaled_energies))


def time_grid(
        t_max: float = TIME_MAX_DEFAULT,
        t_step: float = TIME_STEP_DEFAULT,
) -> RealArray:
    """
    Return an evenly spaced grid from ``0`` to `t_max` whose spacing
    does not exceed `t_step`.
    """
    if not t_max > 0.0 or not t_step > 0.0:
        raise ContractError('Invalid time grid (t_max={!r}, t_step={!r})'.format(
            t_max, t_step))
    steps = int(math.ceil(t_max / t_step - 1e-9))
    return np.linspace(0.0, t_max, steps + 1)


def chain_weights(state: JointState) -> Tuple[Tuple[Parity, float], ...]:
    """
    Return the probability the state carries on each parity chain.
    """
    probabilities = state.probabilities
    return tuple(
        (parity, float(np.sum(probabilities[chain_basis_indices(parity, state.n_max)])))
        for parity in Parity
    )


def state_parity(state: JointState) -> Parity:
    """
    Return the parity of a state of definite parity.

    Raises :exc:`ParityError` if both chains carry more than the
    normalisation tolerance.
    """
    weights = chain_weights(state)
    definite = [parity for parity, weight in weights if weight > NORM_TOL]
    if len(definite) != 1:
        raise ParityError('State has no definite parity (chain weights: {})'.format(
            ', '.join('{:+d}: {:.3e}'.format(int(parity), weight)
                      for parity, weight in weights)))
    return definite[0]


def _decompose(
        params: ModelParams,
        initial: JointState,
        trunc: Truncation,
) -> Tuple[List[Level], ComplexArray, float]:
    levels = []  # type: List[Level]
    projections = []  # type: List[complex]
    tail = 0.0
    for parity, weight in chain_weights(initial):
        if weight == 0.0:
            continue
        system = chain_eigensystem(params, trunc, parity)
        on_chain = initial.amps[chain_basis_indices(parity, trunc.n_max)]
        coefficients = system.vectors.T @ on_chain
        tail += float(np.dot(np.abs(coefficients) ** 2, system.tail_probabilities()))
        for order, (energy, coefficient) in enumerate(zip(system.values, coefficients)):
            levels.append(Level(energy=float(energy), parity=parity, order=order,
                                vector=system.state(order)))
            projections.append(complex(coefficient))
    ranking = sorted(range(len(levels)), key=lambda index: levels[index].sort_key)
    return (
        [levels[index] for index in ranking],
        np.array([projections[index] for index in ranking]),
        tail,
    )


def evolution_plan(
        params: ModelParams,
        initial: JointState,
        times: Optional[Any] = None,
        trunc: Optional[Truncation] = None,
        n_max_cap: int = N_MAX_CAP,
) -> EvolutionPlan:
    """
    Decompose `initial` into the eigenstates of the chains it has
    weight on. The cutoff is doubled until the weighted tail
    probability of those eigenstates satisfies the tail tolerance.

    Arguments:
        - `params`: Model parameters.
        - `initial`: The initial state (any cutoff).
        - `times`: The sample grid. Defaults to :func:`time_grid`.
        - `trunc`: Starting truncation. Defaults to the heuristic of
          :meth:`Truncation.for_params` (never below the cutoff of
          `initial`).
        - `n_max_cap`: Hard cap of the cutoff.

    Raises :exc:`TruncationError` if the cap would be exceeded or the
    projections do not sum to one.
    """
    times = time_grid() if times is None else np.array(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ContractError('Times must be a non-empty sequence')
    if trunc is None:
        trunc = Truncation.for_params(params)
    if trunc.n_max < initial.n_max:
        trunc = dataclasses.replace(trunc, n_max=initial.n_max)
    if trunc.n_max > n_max_cap:
        raise TruncationError(trunc.n_max, 'initial cutoff exceeds the cap of {}'.format(
            n_max_cap))

    while True:
        state = initial.with_cutoff(trunc.n_max)
        levels, projections, tail = _decompose(params, state, trunc)
        if tail <= trunc.tail_tol:
            break
        bigger = trunc.doubled()
        if bigger.n_max > n_max_cap:
            raise TruncationError(
                trunc.n_max, 'weighted eigenvector tail above tolerance', tail=tail)
        _log.debug('Weighted tail {:.3e} above tolerance at n_max {}', tail, trunc.n_max)
        trunc = bigger

    total = float(np.sum(np.abs(projections) ** 2))
    if abs(total - 1.0) > trunc.tail_tol:
        raise TruncationError(trunc.n_max, 'projections sum to {!r}'.format(total))

    spectrum = Spectrum(params=params, trunc=trunc, levels=tuple(levels))
    _log.info('Evolution plan with {} eigenstates at n_max {}', len(levels), trunc.n_max)
    return EvolutionPlan(
        spectrum=spectrum, initial=state, projections=projections, times=times,
        vectors=spectrum.vector_matrix())


def evolve(plan: EvolutionPlan, t: float) -> JointState:
    """
    Return ``sum_k exp(-i E_k t) c_k |phi_k>``.
    """
    amps = plan.vectors @ (plan.phases(t)[0] * plan.projections)
    drift = abs(float(np.vdot(amps, amps).real) - 1.0)
    if drift > NORM_DRIFT_TOL:
        _log.warning('Norm drift {:.3e} at t={}', drift, t)
    return JointState.from_amplitudes(amps, normalize=True)


def survival_probabilities(
        plan: EvolutionPlan,
        times: Optional[Any] = None,
) -> RealArray:
    """
    Return ``|sum_k |c_k|^2 exp(-i E_k t)|^2`` at every time of
    `times` (defaults to the plan's grid).
    """
    if times is None:
        times = plan.times
    amplitudes = plan.phases(times) @ plan.weights
    return np.clip(np.abs(amplitudes) ** 2, 0.0, 1.0)


def survival_probability(plan: EvolutionPlan, t: float) -> float:
    return float(survival_probabilities(plan, [t])[0])


def revival_profile(plan: EvolutionPlan) -> Tuple[Tuple[Time, float], ...]:
    """
    Return ``(time, height)`` of every survival maximum of the plan's
    grid with a height of at least 0.2 and a prominence of at least
    0.1. The initial time is never reported.

    Raises :exc:`ContractError` if the grid does not cover
    ``[0, 4 pi]`` with a spacing of at most 0.01.
    """
    times = plan.times
    if times[0] > 0.0 or times[-1] < REVIVAL_MIN_SPAN - 1e-9:
        raise ContractError('Time grid must cover [0, 4 pi] (covers [{}, {}])'.format(
            times[0], times[-1]))
    if times.size > 1 and float(np.max(np.diff(times))) > REVIVAL_MAX_STEP + 1e-12:
        raise ContractError('Time grid spacing must not exceed {}'.format(
            REVIVAL_MAX_STEP))
    survival = survival_probabilities(plan)
    peaks, properties = signal.find_peaks(
        survival, height=REVIVAL_HEIGHT, prominence=REVIVAL_PROMINENCE)
    return tuple(
        (Time(float(times[index])), float(height))
        for index, height in zip(peaks, properties['peak_heights'])
        if times[index] > 0.0
    )


def parity_leakage(plan: EvolutionPlan, parity: Parity) -> RealArray:
    """
    Return the probability the evolved state carries on the chain
    opposite to `parity` at every time of the plan's grid.
    """
    indices = chain_basis_indices(parity.opposite, plan.spectrum.trunc.n_max)
    coefficients = plan.phases(plan.times) * plan.projections
    amplitudes = coefficients @ plan.vectors[indices].T
    return np.sum(np.abs(amplitudes) ** 2, axis=1)


def parity_confinement(plan: EvolutionPlan) -> float:
    """
    Return the largest probability the evolved state carries on the
    chain opposite to the one it started on.

    Raises :exc:`ParityError` if the initial state has no definite
    parity.
    """
    parity = state_parity(plan.initial)
    return float(np.max(parity_leakage(plan, parity)))
