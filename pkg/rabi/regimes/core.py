"""
Builds the Rabi Hamiltonian in the truncated product basis and in the
two tridiagonal parity chains, plus the elementary operators used by
the other modules.
"""
import dataclasses
from typing import (
    Any,
    Union,
)

import numpy as np

from .common import (
    JointState,
    ModelParams,
    Parity,
    Qubit,
    Truncation,
    validate_parity,
    validate_photon_number,
    validate_qubit,
)
from .exception import ContractError
from .typing import RealArray

__all__ = (
    'SIGMA_Z',
    'SIGMA_PLUS',
    'SIGMA_MINUS',
    'SIGMA_X',
    'annihilation',
    'field_operator',
    'qubit_operator',
    'photon_numbers',
    'excitation_numbers',
    'basis_parities',
    'parity_of_basis_state',
    'parity_expectation',
    'ParityChain',
    'chain_basis_indices',
    'build_dense_hamiltonian',
    'build_parity_chain',
    'embed_chain_state',
)

# Qubit operators in (g, e) order
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]])
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS


def annihilation(n_max: int) -> np.ndarray:
    """
    Return the truncated annihilation operator ``a`` on the Fock
    levels ``0 .. n_max``.
    """
    return np.diag(np.sqrt(np.arange(1.0, n_max + 1.0)), k=1)


def field_operator(operator: np.ndarray) -> np.ndarray:
    """
    Lift an oscillator operator to the product space.
    """
    return np.kron(operator, np.eye(2))


def qubit_operator(operator: np.ndarray, n_max: int) -> np.ndarray:
    """
    Lift a 2x2 qubit operator to the product space.
    """
    return np.kron(np.eye(n_max + 1), operator)


def photon_numbers(n_max: int) -> RealArray:
    """
    Return the photon number of every product basis state.
    """
    return np.repeat(np.arange(n_max + 1, dtype=float), 2)


def excitation_numbers(n_max: int) -> RealArray:
    """
    Return ``n + (1 if q == e else 0)`` for every product basis state.
    """
    return photon_numbers(n_max) + np.tile([0.0, 1.0], n_max + 1)


def parity_of_basis_state(qubit: Union[Qubit, str], n: int) -> Parity:
    """
    Return the parity eigenvalue of ``|q, n>``: ``(-1)^n`` for ``g``
    and ``(-1)^(n+1)`` for ``e``.
    """
    qubit = validate_qubit(qubit)
    n = validate_photon_number(n)
    return Parity(1 if (n + qubit) % 2 == 0 else -1)


def basis_parities(n_max: int) -> RealArray:
    """
    Return the diagonal of the parity operator in the product basis.
    """
    index = np.arange(2 * (n_max + 1))
    n, q = index // 2, index % 2
    return np.where((n + q) % 2 == 0, 1.0, -1.0)


def parity_expectation(state: JointState) -> float:
    return float(np.dot(state.probabilities, basis_parities(state.n_max)))


def chain_basis_indices(parity: Any, n_max: int) -> np.ndarray:
    """
    Return the product basis index visited by each chain index.

    Chain ``+1`` traverses ``|g,0>, |e,1>, |g,2>, ...`` and chain
    ``-1`` traverses ``|e,0>, |g,1>, |e,2>, ...``.
    """
    parity = validate_parity(parity)
    n = np.arange(n_max + 1)
    signs = np.where(n % 2 == 0, 1, -1)
    qubit = np.where(signs == int(parity), int(Qubit.g), int(Qubit.e))
    return 2 * n + qubit


@dataclasses.dataclass(frozen=True, eq=False)
class ParityChain:
    """
    One parity sector of the Hamiltonian as a symmetric tridiagonal
    matrix.

    Arguments:
        - `parity`: The parity eigenvalue of the sector.
        - `diag`: ``omega n - (Omega / 2) (-1)^n p``.
        - `offdiag`: ``g0 sqrt(n + 1)``.
    """
    parity: Parity
    diag: RealArray
    offdiag: RealArray

    def __post_init__(self) -> None:
        if self.offdiag.size != self.diag.size - 1:
            raise ContractError('Chain off-diagonal has length {} (expected {})'.format(
                self.offdiag.size, self.diag.size - 1))
        self.diag.setflags(write=False)
        self.offdiag.setflags(write=False)

    @property
    def n_max(self) -> int:
        return int(self.diag.size) - 1

    @property
    def basis_indices(self) -> np.ndarray:
        return chain_basis_indices(self.parity, self.n_max)

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def build_dense_hamiltonian(params: ModelParams, trunc: Truncation) -> np.ndarray:
    """
    Return the real symmetric Rabi Hamiltonian
    ``omega a^dagger a + (Omega / 2) sigma_z + g0 (a + a^dagger) sigma_x``
    of dimension ``2 (n_max + 1)``.
    """
    a = annihilation(trunc.n_max)
    hamiltonian = params.omega * field_operator(a.T @ a)
    hamiltonian += 0.5 * params.omega_q * qubit_operator(SIGMA_Z, trunc.n_max)
    hamiltonian += params.g0 * np.kron(a + a.T, SIGMA_X)
    return hamiltonian


def build_parity_chain(
        params: ModelParams,
        trunc: Truncation,
        parity: Any,
) -> ParityChain:
    """
    Return the tridiagonal parity sector `parity` of the Hamiltonian.
    """
    parity = validate_parity(parity)
    n = np.arange(trunc.n_max + 1, dtype=float)
    signs = np.where(np.arange(trunc.n_max + 1) % 2 == 0, 1.0, -1.0)
    diag = params.omega * n - 0.5 * params.omega_q * signs * int(parity)
    offdiag = params.g0 * np.sqrt(n[1:])
    return ParityChain(parity=parity, diag=diag, offdiag=offdiag)


def embed_chain_state(chain_vector: Any, parity: Any, trunc: Truncation) -> JointState:
    """
    Place the amplitudes of a chain vector onto the product basis
    states the chain `parity` traverses.

    Raises :exc:`ContractError` if the vector length does not match
    the truncation.
    """
    parity = validate_parity(parity)
    chain_vector = np.asarray(chain_vector)
    if chain_vector.shape != (trunc.n_max + 1,):
        raise ContractError('Chain vector has shape {} (expected ({},))'.format(
            chain_vector.shape, trunc.n_max + 1))
    amps = np.zeros(trunc.dim, dtype=complex)
    amps[chain_basis_indices(parity, trunc.n_max)] = chain_vector
    return JointState.from_amplitudes(amps, normalize=True)
