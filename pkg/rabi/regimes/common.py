"""
Constants, enumerations and the immutable value types shared by all
modules: model parameters, truncation settings and joint
qubit-oscillator states.

The product basis is ordered as ``index = 2 * n + q`` where ``n`` is
the photon number and ``q`` is 0 for the qubit ground state ``g`` and
1 for the excited state ``e``.
"""
import dataclasses
import enum
import math
import numbers
import re
from typing import (
    Any,
    Tuple,
    Union,
)

import numpy as np

from .exception import ContractError
from .typing import ComplexArray

__all__ = (
    'SCHEMA_VERSION',
    'FLOAT_FORMAT',
    'NORM_TOL',
    'TAIL_TOL_DEFAULT',
    'TAIL_LEVELS',
    'ENERGY_TOL_DEFAULT',
    'N_MAX_CAP',
    'DELTA_TH_DEFAULT',
    'PUSC_G_MAX',
    'PUSC_G_LIMIT',
    'TIME_STEP_DEFAULT',
    'TIME_MAX_DEFAULT',
    'REVIVAL_HEIGHT',
    'REVIVAL_PROMINENCE',
    'MODE_PROMINENCE',
    'VACUUM_TOL',
    'Qubit',
    'Parity',
    'Branch',
    'Region',
    'JuddianMethod',
    'OutputFormat',
    'ModelParams',
    'Truncation',
    'JointState',
    'default_n_max',
    'validate_parity',
    'validate_branch',
    'validate_qubit',
    'validate_photon_number',
    'validate_delta_th',
    'parse_basis_state',
)

SCHEMA_VERSION = 1
FLOAT_FORMAT = '%.12g'
NORM_TOL = 1e-10
TAIL_TOL_DEFAULT = 1e-10
TAIL_LEVELS = 2
ENERGY_TOL_DEFAULT = 1e-8
N_MAX_CAP = 4096
DELTA_TH_DEFAULT = 0.1
PUSC_G_MAX = 1.0 / math.sqrt(6.0)
PUSC_G_LIMIT = 1.0 / math.sqrt(2.0)
TIME_STEP_DEFAULT = 0.005
TIME_MAX_DEFAULT = 4.0 * math.pi
REVIVAL_HEIGHT = 0.2
REVIVAL_PROMINENCE = 0.1
MODE_PROMINENCE = 1e-3
VACUUM_TOL = 1e-12

_basis_state_pattern = re.compile(r'^\s*([ge])\s*,?\s*(\d+)\s*$')


@enum.unique
class Qubit(enum.IntEnum):
    g = 0
    e = 1


@enum.unique
class Parity(enum.IntEnum):
    """
    Eigenvalue of the parity operator ``-sigma_z (-1)^(a^dagger a)``.
    """
    even = 1
    odd = -1

    @property
    def opposite(self) -> 'Parity':
        return Parity(-self)


@enum.unique
class Branch(enum.Enum):
    plus = '+'
    minus = '-'

    @property
    def sign(self) -> int:
        return 1 if self is Branch.plus else -1


@enum.unique
class Region(enum.Enum):
    perturbative_usc = 'PerturbativeUSC'
    non_perturbative = 'NonPerturbative'
    perturbative_dsc = 'PerturbativeDSC'


@enum.unique
class JuddianMethod(enum.Enum):
    approximate = 'approximate'
    numeric = 'numeric'


@enum.unique
class OutputFormat(enum.Enum):
    csv = 'csv'
    json = 'json'


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """
    Physical parameters of the Rabi Hamiltonian (hbar = 1).

    Arguments:
        - `omega`: Cavity frequency, must be positive.
        - `omega_q`: Qubit frequency, must not be negative.
        - `g0`: Coupling strength, must not be negative.
    """
    omega: float
    omega_q: float
    g0: float

    def __post_init__(self) -> None:
        for name in ('omega', 'omega_q', 'g0'):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise ContractError('Invalid {}: Must be a finite number (is {!r})'
                                    .format(name, value))
            object.__setattr__(self, name, float(value))
        if self.omega <= 0.0:
            raise ContractError('Invalid omega ({} > 0)'.format(self.omega))
        if self.omega_q < 0.0:
            raise ContractError('Invalid omega_q ({} >= 0)'.format(self.omega_q))
        if self.g0 < 0.0:
            raise ContractError('Invalid g0 ({} >= 0)'.format(self.g0))

    @classmethod
    def resonant(
            cls,
            g_over_omega: float,
            omega_q_over_omega: float = 1.0,
    ) -> 'ModelParams':
        """
        Return parameters in units of the cavity frequency.
        """
        return cls(omega=1.0, omega_q=omega_q_over_omega, g0=g_over_omega)

    @property
    def detuning(self) -> float:
        return self.omega_q - self.omega

    @property
    def sum(self) -> float:
        return self.omega_q + self.omega

    @property
    def alpha(self) -> float:
        return self.g0 / self.omega

    def with_coupling(self, g0: float) -> 'ModelParams':
        return dataclasses.replace(self, g0=g0)

    def scaled(self, factor: float) -> 'ModelParams':
        if factor <= 0.0:
            raise ContractError('Invalid scale factor ({} > 0)'.format(factor))
        return ModelParams(
            omega=self.omega * factor, omega_q=self.omega_q * factor, g0=self.g0 * factor)


def default_n_max(alpha: float) -> int:
    """
    Return the default photon-number cutoff for a displacement of
    `alpha`, which covers displaced Fock states centred near
    ``alpha**2``.
    """
    return int(math.ceil(alpha ** 2 + 10.0 * alpha + 30.0))


@dataclasses.dataclass(frozen=True)
class Truncation:
    """
    Photon-number cutoff of the truncated Fock space.

    Arguments:
        - `n_max`: Highest photon number kept (at least 1).
        - `tail_tol`: Largest probability any produced eigenvector may
          carry on the top two Fock levels.
    """
    n_max: int
    tail_tol: float = TAIL_TOL_DEFAULT

    def __post_init__(self) -> None:
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, (int, np.integer)):
            raise ContractError('Invalid n_max: Must be `int` (is `{}`)'.format(
                type(self.n_max)))
        object.__setattr__(self, 'n_max', int(self.n_max))
        if self.n_max < 1:
            raise ContractError('Invalid n_max ({} >= 1)'.format(self.n_max))
        if not 0.0 < self.tail_tol < 1.0:
            raise ContractError('Invalid tail_tol (0 < {} < 1)'.format(self.tail_tol))

    @classmethod
    def for_params(
            cls,
            params: ModelParams,
            tail_tol: float = TAIL_TOL_DEFAULT,
    ) -> 'Truncation':
        return cls(n_max=default_n_max(params.alpha), tail_tol=tail_tol)

    @property
    def dim(self) -> int:
        """
        Dimension of the product space.
        """
        return 2 * (self.n_max + 1)

    def doubled(self) -> 'Truncation':
        return dataclasses.replace(self, n_max=2 * self.n_max)


@dataclasses.dataclass(frozen=True, eq=False)
class JointState:
    """
    A normalised pure state of the qubit and the oscillator.

    The amplitudes are stored as a read-only complex array in product
    basis order (``index = 2 * n + q``).
    """
    amps: ComplexArray

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size < 4 or amps.size % 2 != 0:
            raise ContractError('Invalid amplitudes: Need an even length of at least 4 '
                                '(shape is {})'.format(amps.shape))
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractError('State not normalised (norm^2 = {!r})'.format(norm))
        amps.setflags(write=False)
        object.__setattr__(self, 'amps', amps)

    @classmethod
    def from_amplitudes(cls, amps: Any, normalize: bool = False) -> 'JointState':
        """
        Create a state from an amplitude sequence.

        Arguments:
            - `amps`: Amplitudes in product basis order.
            - `normalize`: Rescale the amplitudes to unit norm first.

        Raises :exc:`ContractError` for zero vectors.
        """
        amps = np.array(amps, dtype=complex)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0.0:
                raise ContractError('Cannot normalise the zero vector')
            amps = amps / norm
        return cls(amps)

    @classmethod
    def from_components(
            cls,
            g_amps: Any,
            e_amps: Any,
            normalize: bool = False,
    ) -> 'JointState':
        """
        Create a state from the oscillator amplitudes accompanying the
        qubit ground and excited states.
        """
        g_amps = np.asarray(g_amps, dtype=complex)
        e_amps = np.asarray(e_amps, dtype=complex)
        if g_amps.shape != e_amps.shape or g_amps.ndim != 1:
            raise ContractError('Component shapes differ ({} != {})'.format(
                g_amps.shape, e_amps.shape))
        amps = np.empty(2 * g_amps.size, dtype=complex)
        amps[0::2] = g_amps
        amps[1::2] = e_amps
        return cls.from_amplitudes(amps, normalize=normalize)

    @classmethod
    def basis(cls, qubit: Union[Qubit, str], n: int, n_max: int) -> 'JointState':
        """
        Return the product basis state ``|q, n>``.
        """
        qubit = validate_qubit(qubit)
        validate_photon_number(n)
        if n > n_max:
            raise ContractError('Photon number {} exceeds n_max={}'.format(n, n_max))
        amps = np.zeros(2 * (n_max + 1), dtype=complex)
        amps[2 * n + qubit] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return int(self.amps.size)

    @property
    def n_max(self) -> int:
        return self.dim // 2 - 1

    @property
    def components(self) -> Tuple[ComplexArray, ComplexArray]:
        """
        Return the oscillator amplitudes of the ``g`` and ``e``
        components.
        """
        return self.amps[0::2], self.amps[1::2]

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def amplitude(self, qubit: Union[Qubit, str], n: int) -> complex:
        qubit = validate_qubit(qubit)
        if not 0 <= n <= self.n_max:
            return 0j
        return complex(self.amps[2 * n + qubit])

    def tail_probability(self, levels: int = TAIL_LEVELS) -> float:
        """
        Return the probability carried by the top `levels` Fock
        levels.
        """
        return float(np.sum(self.probabilities[-2 * levels:]))

    def inner(self, other: 'JointState') -> complex:
        """
        Return ``<self|other>``.

        Raises :exc:`ContractError` if the dimensions differ.
        """
        if self.dim != other.dim:
            raise ContractError('Dimension mismatch ({} != {})'.format(
                self.dim, other.dim))
        return complex(np.vdot(self.amps, other.amps))

    def with_cutoff(self, n_max: int) -> 'JointState':
        """
        Return the state embedded in a space with a different cutoff.
        Shrinking is only allowed when the dropped levels carry no
        more than the normalisation tolerance.
        """
        dim = 2 * (n_max + 1)
        if dim >= self.dim:
            amps = np.zeros(dim, dtype=complex)
            amps[:self.dim] = self.amps
            return JointState(amps)
        dropped = float(np.sum(self.probabilities[dim:]))
        if dropped > NORM_TOL:
            raise ContractError('Cannot cut state to n_max={}: {:.3e} would be lost'
                                .format(n_max, dropped))
        return JointState.from_amplitudes(self.amps[:dim], normalize=True)

    def __repr__(self) -> str:
        return '<JointState n_max={}>'.format(self.n_max)


def validate_parity(parity: Any) -> Parity:
    try:
        return Parity(parity)
    except ValueError as exc:
        message = 'Invalid parity: {!r} (must be +1 or -1)'.format(parity)
        raise ContractError(message) from exc


def validate_branch(branch: Any) -> Branch:
    if isinstance(branch, Branch):
        return branch
    if isinstance(branch, int) and not isinstance(branch, bool) and branch in (1, -1):
        return Branch.plus if branch == 1 else Branch.minus
    try:
        return Branch(branch)
    except ValueError as exc:
        raise ContractError('Invalid branch: {!r}'.format(branch)) from exc


def validate_qubit(qubit: Any) -> Qubit:
    if isinstance(qubit, str):
        try:
            return Qubit[qubit]
        except KeyError as exc:
            raise ContractError('Invalid qubit level: {!r}'.format(qubit)) from exc
    try:
        return Qubit(qubit)
    except ValueError as exc:
        raise ContractError('Invalid qubit level: {!r}'.format(qubit)) from exc


def validate_photon_number(n: Any, minimum: int = 0) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ContractError('Invalid photon number: Must be `int` (is `{}`)'.format(
            type(n)))
    if n < minimum:
        raise ContractError('Invalid photon number ({} >= {})'.format(n, minimum))
    return int(n)


def validate_delta_th(delta_th: Any) -> float:
    if not isinstance(delta_th, numbers.Real) or not 0.0 < delta_th < 1.0:
        raise ContractError('Invalid threshold (0 < {!r} < 1)'.format(delta_th))
    return float(delta_th)


def parse_basis_state(name: str) -> Tuple[Qubit, int]:
    """
    Parse a basis ket name such as ``g0`` or ``e3``.

    Raises :exc:`ContractError` for malformed names.
    """
    match = _basis_state_pattern.match(name)
    if match is None:
        raise ContractError('Invalid basis state name: {!r}'.format(name))
    qubit, n = match.groups()
    return Qubit[qubit], int(n)

