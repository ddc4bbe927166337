"""
Closed-form perturbative spectra and eigenstates of the Rabi model.

Two regimes are covered: the Bloch-Siegert (BS) expansion in
``g0 / (omega + Omega)`` (second and third order, plus the
rotating-wave limit) that describes the perturbative ultrastrong
regime, and the adiabatic expansion in ``Omega`` that describes the
perturbative deep-strong regime.
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

from .common import (
    Branch,
    JointState,
    ModelParams,
    Parity,
    Truncation,
    validate_branch,
    validate_parity,
    validate_photon_number,
)
from .core import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    annihilation,
    field_operator,
    qubit_operator,
)
from .exception import (
    ContractError,
    TruncationError,
)
# Re-exported, these belong to the perturbative surface as well
from .special import (  # noqa: F401
    adiabatic_photon_distribution,
    assoc_laguerre,
    displacement_element,
    displacement_matrix,
    kummer_1f1_neg_n,
    laguerre,
)

__all__ = (
    'BS_MARGIN',
    'BsLevel',
    'AdiabaticLevel',
    'bs_shift',
    'bs_detuning',
    'bs_energy',
    'bs_mixing_angle',
    'bs_level',
    'bs_levels',
    'bs_generator',
    'bs_unitary',
    'bs_eigenstate',
    'bs3_coupling',
    'bs3_energy',
    'bs3_levels',
    'build_bs3_hamiltonian',
    'jc_energy',
    'jc_levels',
    'adiabatic_energy',
    'adiabatic_level',
    'adiabatic_levels',
    'adiabatic_state',
    'adiabatic_parity',
    'adiabatic_label',
)

# Fock levels a BS eigenstate needs above its manifold
BS_MARGIN = 4


@dataclasses.dataclass(frozen=True)
class BsLevel:
    """
    A level of the second order Bloch-Siegert Hamiltonian.

    Arguments:
        - `n`: Manifold index (0 for the ground level).
        - `branch`: ``+`` or ``-``, `None` for the ground level.
        - `energy`: The energy.
        - `mixing_angle`: The mixing angle of the dressed states
          (0 for the ground level).
    """
    n: int
    branch: Optional[Branch]
    energy: float
    mixing_angle: float


@dataclasses.dataclass(frozen=True)
class AdiabaticLevel:
    """
    A level of the adiabatic (deep-strong) approximation.
    """
    n: int
    branch: Branch
    energy: float

    @property
    def parity(self) -> Parity:
        return adiabatic_parity(self.n, self.branch)


def _validate_manifold(n: Any, branch: Any) -> Optional[Branch]:
    n = validate_photon_number(n)
    if n == 0:
        if branch is not None and validate_branch(branch) is not Branch.minus:
            raise ContractError('The ground manifold has no + branch')
        return None
    return validate_branch(branch)


def bs_shift(params: ModelParams) -> float:
    """
    Return the Bloch-Siegert shift ``g0^2 / (Omega + omega)``.
    """
    return params.g0 ** 2 / params.sum


def bs_detuning(params: ModelParams, n: int) -> float:
    """
    Return the shifted detuning ``delta + 2 omega_BS n`` of manifold
    `n`.
    """
    return params.detuning + 2.0 * bs_shift(params) * n


def _dressed_energy(params: ModelParams, n: int, branch: Branch, shift: float,
                    coupling: float) -> float:
    detuning = params.detuning + 2.0 * shift * n
    root = math.sqrt(detuning ** 2 + 4.0 * coupling ** 2 * n)
    return (n - 0.5) * params.omega - shift + 0.5 * branch.sign * root


def bs_energy(params: ModelParams, n: int, branch: Any = None) -> float:
    """
    Return the energy of the BS level ``(n, branch)``.

    The ground level (``n = 0``) lies at ``-Omega / 2 - omega_BS``,
    every other manifold is split into two dressed levels.
    """
    branch = _validate_manifold(n, branch)
    shift = bs_shift(params)
    if branch is None:
        return -0.5 * params.omega_q - shift
    return _dressed_energy(params, n, branch, shift, params.g0)


def jc_energy(params: ModelParams, n: int, branch: Any = None) -> float:
    """
    Return the rotating-wave (Jaynes-Cummings) energy of the level
    ``(n, branch)``.
    """
    branch = _validate_manifold(n, branch)
    if branch is None:
        return -0.5 * params.omega_q
    return _dressed_energy(params, n, branch, 0.0, params.g0)


def bs_mixing_angle(params: ModelParams, n: int) -> float:
    """
    Return the mixing angle ``atan2(2 g0 sqrt(n), delta_n)`` of the
    dressed states of manifold `n`.
    """
    n = validate_photon_number(n, minimum=1)
    return math.atan2(2.0 * params.g0 * math.sqrt(n), bs_detuning(params, n))


def bs_level(params: ModelParams, n: int, branch: Any = None) -> BsLevel:
    branch = _validate_manifold(n, branch)
    angle = 0.0 if branch is None else bs_mixing_angle(params, n)
    return BsLevel(n=n, branch=branch, energy=bs_energy(params, n, branch),
                   mixing_angle=angle)


def _lowest(energies: List[float], count: int) -> np.ndarray:
    return np.sort(np.array(energies))[:count]


def jc_levels(params: ModelParams, count: int) -> np.ndarray:
    energies = [jc_energy(params, 0)]
    for n in range(1, count + 1):
        energies.extend(jc_energy(params, n, branch) for branch in Branch)
    return _lowest(energies, count)


def bs_levels(params: ModelParams, count: int) -> np.ndarray:
    """
    Return the lowest `count` BS energies in ascending order.
    """
    energies = [bs_energy(params, 0)]
    for n in range(1, count + 1):
        energies.extend(bs_energy(params, n, branch) for branch in Branch)
    return _lowest(energies, count)


def bs_generator(params: ModelParams, trunc: Truncation) -> np.ndarray:
    """
    Return the real antisymmetric generator
    ``Lambda (a sigma_- - a^dagger sigma_+) + xi (a^2 - a^dagger^2) sigma_z``
    with ``Lambda = g0 / (omega + Omega)`` and
    ``xi = g0 Lambda / (2 omega)``.
    """
    a = annihilation(trunc.n_max)
    lam = params.g0 / params.sum
    xi = params.g0 * lam / (2.0 * params.omega)
    generator = lam * (np.kron(a, SIGMA_MINUS) - np.kron(a.T, SIGMA_PLUS))
    generator += xi * np.kron(a @ a - a.T @ a.T, SIGMA_Z)
    return generator


def bs_unitary(params: ModelParams, trunc: Truncation) -> np.ndarray:
    """
    Return ``U = exp(G)`` of the BS generator, exponentiated through the
    eigen-decomposition of the Hermitian matrix ``i G``.
    """
    hermitian = 1j * bs_generator(params, trunc)
    values, vectors = np.linalg.eigh(hermitian)
    unitary = (vectors * np.exp(-1j * values)) @ vectors.conj().T
    # exp of a real matrix is real
    return unitary.real


def bs_eigenstate(
        params: ModelParams,
        n: int,
        branch: Any = None,
        trunc: Optional[Truncation] = None,
) -> JointState:
    """
    Return the BS eigenstate ``U |branch, n>`` in the laboratory frame.

    The dressed states are
    ``|+, n> = cos(theta/2) |e, n-1> + sin(theta/2) |g, n>`` and
    ``|-, n> = sin(theta/2) |e, n-1> - cos(theta/2) |g, n>``; the ground
    level is ``|g, 0>``.

    Raises :exc:`TruncationError` if ``n + 4`` exceeds the cutoff.
    """
    branch = _validate_manifold(n, branch)
    if trunc is None:
        trunc = Truncation.for_params(params)
    if n + BS_MARGIN > trunc.n_max:
        raise TruncationError(trunc.n_max, 'BS state of manifold {} needs n_max >= {}'
                              .format(n, n + BS_MARGIN))

    dressed = np.zeros(trunc.dim)
    if branch is None:
        dressed[0] = 1.0
    else:
        half = 0.5 * bs_mixing_angle(params, n)
        excited, ground = 2 * (n - 1) + 1, 2 * n
        if branch is Branch.plus:
            dressed[excited], dressed[ground] = math.cos(half), math.sin(half)
        else:
            dressed[excited], dressed[ground] = math.sin(half), -math.cos(half)
    if params.g0 == 0.0:
        return JointState.from_amplitudes(dressed)
    return JointState.from_amplitudes(bs_unitary(params, trunc) @ dressed, normalize=True)


def bs3_coupling(params: ModelParams, n: int) -> float:
    """
    Return the third order coupling ``g0 sqrt(n) (1 - (n-1) omega_BS / 2 omega)``
    between ``|e, n-1>`` and ``|g, n>``.
    """
    n = validate_photon_number(n, minimum=1)
    reduction = 1.0 - (n - 1) * bs_shift(params) / (2.0 * params.omega)
    return params.g0 * math.sqrt(n) * reduction


def bs3_energy(params: ModelParams, n: int, branch: Any = None) -> float:
    """
    Return the energy of level ``(n, branch)`` of the third order BS
    Hamiltonian. Its ground level coincides with the second order one.
    """
    branch = _validate_manifold(n, branch)
    shift = bs_shift(params)
    if branch is None:
        return -0.5 * params.omega_q - shift
    coupling = bs3_coupling(params, n) / math.sqrt(n)
    return _dressed_energy(params, n, branch, shift, coupling)


def bs3_levels(params: ModelParams, count: int) -> np.ndarray:
    energies = [bs3_energy(params, 0)]
    for n in range(1, count + 1):
        energies.extend(bs3_energy(params, n, branch) for branch in Branch)
    return _lowest(energies, count)


def build_bs3_hamiltonian(params: ModelParams, trunc: Truncation) -> np.ndarray:
    """
    Return the dense third order BS Hamiltonian

    ``omega a^dagger a + (Omega/2) sigma_z
    + omega_BS (sigma_z a^dagger a + (sigma_z - 1) / 2)
    + a^dagger sigma_- g(n) + g(n) a sigma_+``

    with the photon-dependent coupling
    ``g(n) = g0 (1 - n omega_BS / 2 omega)``.
    """
    n_max = trunc.n_max
    shift = bs_shift(params)
    a = annihilation(n_max)
    number = np.diag(np.arange(n_max + 1, dtype=float))
    reduction = 1.0 - np.arange(n_max + 1) * shift / (2.0 * params.omega)
    coupling = np.diag(params.g0 * reduction)

    hamiltonian = params.omega * field_operator(number)
    hamiltonian += 0.5 * params.omega_q * qubit_operator(SIGMA_Z, n_max)
    hamiltonian += shift * (np.kron(number, SIGMA_Z)
                            + 0.5 * qubit_operator(SIGMA_Z - np.eye(2), n_max))
    hamiltonian += np.kron(a.T @ coupling, SIGMA_MINUS)
    hamiltonian += np.kron(coupling @ a, SIGMA_PLUS)
    return hamiltonian


def adiabatic_energy(params: ModelParams, n: int, branch: Any) -> float:
    """
    Return ``(n - alpha^2) omega +- (Omega / 2) exp(-2 alpha^2) L_n(4 alpha^2)``.
    """
    n = validate_photon_number(n)
    branch = validate_branch(branch)
    alpha = params.alpha
    envelope = math.exp(-2.0 * alpha ** 2) * laguerre(n, 4.0 * alpha ** 2)
    splitting = 0.5 * params.omega_q * envelope
    return (n - alpha ** 2) * params.omega + branch.sign * splitting


def adiabatic_level(params: ModelParams, n: int, branch: Any) -> AdiabaticLevel:
    branch = validate_branch(branch)
    return AdiabaticLevel(n=n, branch=branch, energy=adiabatic_energy(params, n, branch))


def adiabatic_levels(params: ModelParams, count: int) -> np.ndarray:
    """
    Return the lowest `count` adiabatic energies in ascending order.
    """
    energies = [adiabatic_energy(params, n, branch)
                for n in range(count + 1) for branch in Branch]
    return _lowest(energies, count)


def adiabatic_state(
        params: ModelParams,
        n: int,
        branch: Any,
        trunc: Optional[Truncation] = None,
) -> JointState:
    """
    Return the cat state
    ``(|+> D(-alpha) |n> +- |-> D(alpha) |n>) / sqrt(2)`` with
    ``|+-> = (|e> +- |g>) / sqrt(2)``.

    Raises :exc:`TruncationError` if ``alpha^2 + 6 alpha + n`` exceeds
    the cutoff.
    """
    n = validate_photon_number(n)
    branch = validate_branch(branch)
    alpha = params.alpha
    if trunc is None:
        trunc = Truncation.for_params(params)
    support = alpha ** 2 + 6.0 * alpha + n
    if support > trunc.n_max:
        raise TruncationError(
            trunc.n_max, 'displaced support reaches {:.1f}'.format(support))

    left = displacement_matrix(-alpha, trunc.n_max)[:, n]
    right = displacement_matrix(alpha, trunc.n_max)[:, n]
    sign = branch.sign
    e_amps = 0.5 * (left + sign * right)
    g_amps = 0.5 * (left - sign * right)
    return JointState.from_components(g_amps, e_amps, normalize=True)


def adiabatic_parity(n: int, branch: Any) -> Parity:
    """
    Return the parity of the adiabatic state ``(n, branch)``: ``(-1)^n``
    for the ``-`` branch and ``-(-1)^n`` for the ``+`` branch.
    """
    n = validate_photon_number(n)
    branch = validate_branch(branch)
    base = 1 if n % 2 == 0 else -1
    return Parity(base if branch is Branch.minus else -base)


def adiabatic_label(parity: Any, order: int) -> Tuple[int, Branch]:
    """
    Map the position `order` within parity chain `parity` to the
    adiabatic label ``(n, branch)`` the exact state approaches for
    large couplings.
    """
    parity = validate_parity(parity)
    order = validate_photon_number(order)
    base = 1 if order % 2 == 0 else -1
    branch = Branch.minus if base == int(parity) else Branch.plus
    return order, branch

