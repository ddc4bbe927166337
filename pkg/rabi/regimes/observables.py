"""
Static properties of joint qubit-oscillator states and the closed
forms they take in the two perturbative regimes.
"""
import dataclasses
import math
from typing import (
    Any,
    Optional,
    Tuple,
)

import numpy as np
import scipy.linalg
from scipy import signal

from .common import (
    MODE_PROMINENCE,
    NORM_TOL,
    VACUUM_TOL,
    JointState,
    validate_branch,
    validate_photon_number,
)
from .core import excitation_numbers
from .exception import (
    ContractError,
    DomainError,
)
from .special import laguerre
from .typing import RealArray

__all__ = (
    'ENTROPY_TOL',
    'QubitDensity',
    'total_excitations',
    'photon_distribution',
    'photon_moments',
    'fano_mandel',
    'reduced_qubit_density',
    'von_neumann_entropy',
    'binary_entropy',
    'fidelity',
    'count_modes',
    'distribution_center',
    'pusc_alpha_bound',
    'pusc_entropy_validator',
    'pdsc_entropy_validator',
    'pusc_q_sign_validator',
    'pusc_qubit_density_validator',
    'pdsc_excitation_validator',
    'pdsc_moments',
    'pdsc_qubit_eigenvalues',
)

# Eigenvalues below this are treated as zero (0 log 0 = 0)
ENTROPY_TOL = 1e-14


@dataclasses.dataclass(frozen=True, eq=False)
class QubitDensity:
    """
    A reduced qubit density matrix in ``(g, e)`` order.

    Raises :exc:`ContractError` unless the matrix is a 2x2 Hermitian
    matrix of unit trace.
    """
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ContractError('Density matrix must be 2x2 (shape is {})'.format(
                matrix.shape))
        if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=NORM_TOL):
            raise ContractError('Density matrix is not Hermitian')
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > NORM_TOL:
            raise ContractError('Density matrix trace is {!r}'.format(trace))
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def diagonal(cls, p_g: float, p_e: float) -> 'QubitDensity':
        return cls(np.diag([p_g, p_e]))

    @property
    def eigenvalues(self) -> RealArray:
        """
        Return the ascending eigenvalues, clipped to ``[0, 1]``.
        """
        values = scipy.linalg.eigvalsh(self.matrix)
        return np.clip(values, 0.0, 1.0)

    @property
    def populations(self) -> Tuple[float, float]:
        return float(self.matrix[0, 0].real), float(self.matrix[1, 1].real)


def total_excitations(state: JointState) -> float:
    """
    Return ``<a^dagger a + sigma_+ sigma_->``.
    """
    return float(np.dot(state.probabilities, excitation_numbers(state.n_max)))


def photon_distribution(state: JointState) -> RealArray:
    """
    Return ``P_m = |<g,m|psi>|^2 + |<e,m|psi>|^2`` for
    ``m = 0 .. n_max``.
    """
    probabilities = state.probabilities
    return probabilities[0::2] + probabilities[1::2]


def photon_moments(distribution: Any) -> Tuple[float, float]:
    """
    Return ``<n>`` and ``<n^2>`` of a photon distribution.
    """
    distribution = np.asarray(distribution, dtype=float)
    m = np.arange(distribution.size, dtype=float)
    return float(np.dot(m, distribution)), float(np.dot(m * m, distribution))


def fano_mandel(state: JointState) -> Optional[float]:
    """
    Return the Fano-Mandel parameter ``(<n^2> - <n>^2) / <n> - 1`` of
    the field, or `None` for (numerically) vacuum fields.
    """
    mean, second = photon_moments(photon_distribution(state))
    if mean < VACUUM_TOL:
        return None
    return (second - mean * mean) / mean - 1.0


def reduced_qubit_density(state: JointState) -> QubitDensity:
    """
    Trace out the oscillator.
    """
    g_amps, e_amps = state.components
    matrix = np.array([
        [np.vdot(g_amps, g_amps), np.vdot(e_amps, g_amps)],
        [np.vdot(g_amps, e_amps), np.vdot(e_amps, e_amps)],
    ])
    return QubitDensity(matrix)


def von_neumann_entropy(rho: QubitDensity) -> float:
    """
    Return ``-sum(lambda log2 lambda)`` in bits.
    """
    values = rho.eigenvalues
    return -sum(value * math.log2(value) for value in values if value >= ENTROPY_TOL)


def binary_entropy(p: float) -> float:
    """
    Return the entropy in bits of a two-outcome distribution
    ``(p, 1 - p)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ContractError('Invalid probability: {!r}'.format(p))
    values = (p, 1.0 - p)
    return -sum(value * math.log2(value) for value in values if value >= ENTROPY_TOL)


def fidelity(a: JointState, b: JointState) -> float:
    """
    Return ``|<a|b>|^2``.
    """
    return abs(a.inner(b)) ** 2


def count_modes(distribution: Any, prominence: float = MODE_PROMINENCE) -> int:
    """
    Return the number of local maxima of a distribution whose
    prominence reaches `prominence`. Boundary maxima are counted.
    """
    padded = np.concatenate(([0.0], np.asarray(distribution, dtype=float), [0.0]))
    peaks, _ = signal.find_peaks(padded, prominence=prominence)
    return int(peaks.size)


def distribution_center(distribution: Any) -> float:
    """
    Return the mean photon number of a distribution.
    """
    return photon_moments(distribution)[0]


def pusc_alpha_bound(n: int) -> float:
    """
    Return ``1 / sqrt(2 (2n + 1))``, the largest ``alpha`` for which
    the pUSC closed forms of manifold `n` hold.
    """
    return 1.0 / math.sqrt(2.0 * (2 * n + 1))


def _validate_pusc(n: Any, alpha: float) -> int:
    n = validate_photon_number(n, minimum=1)
    if not 0.0 <= alpha <= pusc_alpha_bound(n):
        raise DomainError(
            'alpha={!r} outside of the pUSC domain of n={} (0 <= alpha <= {:.6g})'
            .format(alpha, n, pusc_alpha_bound(n)))
    return n


def pusc_entropy_validator(n: int, alpha: float) -> float:
    """
    Return the second order entanglement entropy ``1 - n alpha^2 / 8``
    (bits) of the BS eigenstates of manifold `n`.

    Raises :exc:`DomainError` outside ``0 <= alpha <= 1/sqrt(2(2n+1))``.
    """
    n = _validate_pusc(n, alpha)
    return 1.0 - n * alpha ** 2 / 8.0


def pdsc_entropy_validator(n: int, alpha: float) -> float:
    """
    Return the leading order entanglement entropy
    ``1 - exp(-4 alpha^2) L_n(4 alpha^2)^2 / 2`` of the adiabatic
    states ``(n, +-)``.
    """
    n = validate_photon_number(n)
    return 1.0 - 0.5 * math.exp(-4.0 * alpha ** 2) * laguerre(n, 4.0 * alpha ** 2) ** 2


def pusc_q_sign_validator(n: int, alpha: float, branch: Any) -> int:
    """
    Return the sign of the second order expression for
    ``<n^2> - <n>^2 - <n>`` of the BS eigenstate ``(n, branch)``,

    ``(3/4 - n) +- alpha sqrt(n) / 4 - alpha^2 (4n^3 - 8n^2 - 13n + 10) / 16``.

    Raises :exc:`DomainError` outside of the pUSC domain.
    """
    n = _validate_pusc(n, alpha)
    branch = validate_branch(branch)
    cubic = 4 * n ** 3 - 8 * n ** 2 - 13 * n + 10
    linear = branch.sign * alpha * math.sqrt(n) / 4.0
    value = (0.75 - n) + linear - alpha ** 2 * cubic / 16.0
    return int(np.sign(value))


def pusc_qubit_density_validator(n: int, alpha: float, branch: Any) -> QubitDensity:
    """
    Return the second order reduced qubit density of the BS eigenstate
    ``(n, branch)``, diagonal with
    ``rho_ee = 1/2 +- alpha sqrt(n) / 4 + alpha^2 / 4``.
    """
    n = _validate_pusc(n, alpha)
    branch = validate_branch(branch)
    p_e = 0.5 + branch.sign * alpha * math.sqrt(n) / 4.0 + alpha ** 2 / 4.0
    return QubitDensity.diagonal(1.0 - p_e, p_e)


def pdsc_excitation_validator(n: int, alpha: float, branch: Any) -> float:
    """
    Return the total excitation number of the adiabatic state
    ``(n, branch)``: ``n + 1/2 + alpha^2 +- exp(-2 alpha^2) L_n(4 alpha^2) / 2``.
    """
    n = validate_photon_number(n)
    branch = validate_branch(branch)
    overlap = math.exp(-2.0 * alpha ** 2) * laguerre(n, 4.0 * alpha ** 2)
    return n + 0.5 + alpha ** 2 + 0.5 * branch.sign * overlap


def pdsc_moments(n: int, alpha: float) -> Tuple[float, float]:
    """
    Return ``<n> = n + alpha^2`` and
    ``<n^2> = n^2 + alpha^4 + alpha^2 (4n + 1)`` of the field of the
    adiabatic states ``(n, +-)``.
    """
    n = validate_photon_number(n)
    a2 = alpha ** 2
    return n + a2, n ** 2 + a2 ** 2 + a2 * (4 * n + 1)


def pdsc_qubit_eigenvalues(n: int, alpha: float) -> Tuple[float, float]:
    """
    Return the reduced qubit eigenvalues
    ``(1 +- exp(-2 alpha^2) L_n(4 alpha^2)) / 2`` of the adiabatic states
    ``(n, +-)`` (``+`` first).
    """
    n = validate_photon_number(n)
    overlap = math.exp(-2.0 * alpha ** 2) * laguerre(n, 4.0 * alpha ** 2)
    return 0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap)
