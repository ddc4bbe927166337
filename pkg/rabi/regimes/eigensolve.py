"""
Symmetric eigensolvers (implicit-shift QL for tridiagonal matrices,
Householder reduction for dense ones) and the truncation control that
turns the parity chains into converged spectra.
"""
import dataclasses
import math
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from . import util
from .common import (
    ENERGY_TOL_DEFAULT,
    N_MAX_CAP,
    TAIL_LEVELS,
    JointState,
    ModelParams,
    Parity,
    Truncation,
    validate_parity,
)
from .core import (
    build_parity_chain,
    embed_chain_state,
)
from .exception import (
    ContractError,
    SolverError,
    TruncationError,
)
from .typing import RealArray

__all__ = (
    'MAX_ITERATIONS',
    'SYMMETRY_TOL',
    'tridiag_eigen',
    'householder_tridiagonalize',
    'dense_sym_eigen',
    'ChainEigensystem',
    'chain_eigensystem',
    'Level',
    'Spectrum',
    'converged_chain_energies',
    'converged_spectrum',
)

MAX_ITERATIONS = 30
SYMMETRY_TOL = 1e-12

# Relative gap below which eigenvectors are re-orthogonalised together
_CLUSTER_TOL = 1e-9

_log = util.get_logger('eigensolve')


def _as_vector(values: Any, name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != 1:
        raise ContractError('{} must be one-dimensional (shape is {})'.format(
            name, array.shape))
    return array


def _reorthogonalize_clusters(values: np.ndarray, vectors: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    start = 0
    for index in range(1, values.size + 1):
        if index < values.size:
            if values[index] - values[index - 1] <= _CLUSTER_TOL * scale:
                continue
        if index - start > 1:
            q, _ = np.linalg.qr(vectors[:, start:index])
            vectors[:, start:index] = q
        start = index


def tridiag_eigen(
        diag: Sequence[float],
        offdiag: Sequence[float],
        want_vectors: bool = False,
        initial_vectors: Optional[np.ndarray] = None,
) -> Tuple[RealArray, Optional[np.ndarray]]:
    """
    Diagonalise a real symmetric tridiagonal matrix with the implicit
    QL algorithm and a shift taken from the leading 2x2 block.

    Arguments:
        - `diag`: The diagonal (length ``n``).
        - `offdiag`: The first off-diagonal (length ``n - 1``).
        - `want_vectors`: Also return the eigenvectors as columns.
        - `initial_vectors`: Accumulate the rotations onto this
          orthogonal matrix instead of the identity (used after a
          Householder reduction).

    Return the ascending eigenvalues and (optionally) the matching
    orthonormal eigenvectors.

    Raises :exc:`SolverError` if an eigenvalue does not converge
    within :data:`MAX_ITERATIONS` sweeps and :exc:`ContractError` for
    mismatched lengths.
    """
    d = _as_vector(diag, 'diag')
    off = _as_vector(offdiag, 'offdiag')
    n = d.size
    if n == 0:
        raise ContractError('Cannot diagonalise an empty matrix')
    if off.size != n - 1:
        raise ContractError('Off-diagonal has length {} (expected {})'.format(
            off.size, n - 1))

    want_vectors = want_vectors or initial_vectors is not None
    zt = None  # type: Optional[np.ndarray]
    if want_vectors:
        if initial_vectors is None:
            zt = np.eye(n)
        else:
            zt = np.array(initial_vectors, dtype=float).T
        if zt.shape[1] != n:
            raise ContractError('Initial vectors have shape {} (expected (*, {}))'.format(
                zt.T.shape, n))

    # Python scalars are considerably faster than numpy scalars in this loop
    dl = d.tolist()  # type: List[float]
    el = off.tolist() + [0.0]  # type: List[float]
    eps = float(np.finfo(float).eps)

    for l in range(n):  # noqa: E741
        iteration = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(dl[m]) + abs(dl[m + 1])
                if abs(el[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if iteration == MAX_ITERATIONS:
                raise SolverError(l, iteration)
            iteration += 1

            g = (dl[l + 1] - dl[l]) / (2.0 * el[l])
            r = math.hypot(g, 1.0)
            g = dl[m] - dl[l] + el[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * el[i]
                b = c * el[i]
                r = math.hypot(f, g)
                el[i + 1] = r
                if r == 0.0:
                    dl[i + 1] -= p
                    el[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = dl[i + 1] - p
                r = (dl[i] - g) * s + 2.0 * c * b
                p = s * r
                dl[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    upper = zt[i + 1].copy()
                    zt[i + 1] = s * zt[i] + c * upper
                    zt[i] = c * zt[i] - s * upper
                i -= 1
            if underflow:
                continue
            dl[l] -= p
            el[l] = g
            el[m] = 0.0

    values = np.array(dl)
    order = np.argsort(values, kind='stable')
    values = values[order]
    if zt is None:
        return values, None

    vectors = np.ascontiguousarray(zt[order].T)
    _reorthogonalize_clusters(values, vectors)
    vectors /= np.linalg.norm(vectors, axis=0)
    return values, vectors


def householder_tridiagonalize(
        matrix: np.ndarray,
) -> Tuple[RealArray, RealArray, np.ndarray]:
    """
    Reduce a real symmetric matrix ``A`` to tridiagonal form
    ``T = P^T A P`` by Householder reflections.

    Return the diagonal and off-diagonal of ``T`` and the orthogonal
    matrix ``P``.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    for k in range(n - 2):
        u = a[k + 1:n, k]
        u_mag = math.sqrt(float(np.dot(u, u)))
        if u_mag == 0.0:
            continue
        if u[0] < 0.0:
            u_mag = -u_mag
        u[0] += u_mag
        h = float(np.dot(u, u)) / 2.0
        v = np.dot(a[k + 1:n, k + 1:n], u) / h
        g = float(np.dot(u, v)) / (2.0 * h)
        v = v - g * u
        a[k + 1:n, k + 1:n] -= np.outer(v, u) + np.outer(u, v)
        a[k, k + 1] = -u_mag

    # Accumulate the reflections stored below the diagonal
    p = np.eye(n)
    for k in range(n - 2):
        u = a[k + 1:n, k]
        h = float(np.dot(u, u)) / 2.0
        if h == 0.0:
            continue
        v = np.dot(p[1:n, k + 1:n], u) / h
        p[1:n, k + 1:n] -= np.outer(v, u)
    return np.diagonal(a).copy(), np.diagonal(a, 1).copy(), p


def dense_sym_eigen(
        matrix: Any,
        want_vectors: bool = False,
) -> Tuple[RealArray, Optional[np.ndarray]]:
    """
    Diagonalise a dense real symmetric matrix by Householder reduction
    followed by :func:`tridiag_eigen` with accumulated
    transformations.

    Raises :exc:`ContractError` for non-square or asymmetric input
    and :exc:`SolverError` on non-convergence.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ContractError('Matrix must be square (shape is {})'.format(a.shape))
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > SYMMETRY_TOL:
        raise ContractError('Matrix is not symmetric (max |A - A^T| = {:.3e})'.format(
            asymmetry))
    diag, offdiag, p = householder_tridiagonalize(a)
    if not want_vectors:
        return tridiag_eigen(diag, offdiag)
    return tridiag_eigen(diag, offdiag, initial_vectors=p)


@dataclasses.dataclass(frozen=True, eq=False)
class ChainEigensystem:
    """
    Every eigenpair of one parity chain at a fixed truncation.
    Eigenvectors are stored as columns in chain coordinates.
    """
    parity: Parity
    trunc: Truncation
    values: RealArray
    vectors: np.ndarray

    def tail_probabilities(self, count: Optional[int] = None) -> RealArray:
        """
        Return the weight of each of the lowest `count` eigenvectors
        on the top Fock levels.
        """
        vectors = self.vectors if count is None else self.vectors[:, :count]
        return np.sum(vectors[-TAIL_LEVELS:] ** 2, axis=0)

    def state(self, order: int) -> JointState:
        return embed_chain_state(self.vectors[:, order], self.parity, self.trunc)


def chain_eigensystem(
        params: ModelParams,
        trunc: Truncation,
        parity: Any,
        want_vectors: bool = True,
) -> ChainEigensystem:
    """
    Diagonalise the parity chain `parity` at truncation `trunc`.
    """
    chain = build_parity_chain(params, trunc, parity)
    values, vectors = tridiag_eigen(chain.diag, chain.offdiag, want_vectors=want_vectors)
    if vectors is None:
        vectors = np.empty((chain.diag.size, 0))
    return ChainEigensystem(
        parity=chain.parity, trunc=trunc, values=values, vectors=vectors)


@dataclasses.dataclass(frozen=True, eq=False)
class Level:
    """
    An exact eigenstate.

    Arguments:
        - `energy`: The eigenvalue.
        - `parity`: The parity chain it belongs to.
        - `order`: Its position (from 0) within the chain.
        - `vector`: The normalised eigenvector.
    """
    energy: float
    parity: Parity
    order: int
    vector: JointState

    @property
    def sort_key(self) -> Tuple[float, int, int]:
        """
        Ascending energy, parity +1 first on ties.
        """
        return self.energy, -int(self.parity), self.order


@dataclasses.dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Ascending, parity-labelled eigenpairs of the truncated Hamiltonian.
    Equal energies are ordered with parity +1 first. The spectrum of an
    evolution plan holds every eigenpair of the chains it uses, those
    near the cutoff included.
    """
    params: ModelParams
    trunc: Truncation
    levels: Tuple[Level, ...]

    @property
    def energies(self) -> RealArray:
        return np.array([level.energy for level in self.levels])

    @property
    def parities(self) -> np.ndarray:
        return np.array([int(level.parity) for level in self.levels])

    def by_parity(self, parity: Any) -> Tuple[Level, ...]:
        parity = validate_parity(parity)
        return tuple(level for level in self.levels if level.parity is parity)

    def level(self, parity: Any, order: int) -> Level:
        """
        Return the eigenstate at position `order` of the chain
        `parity`.

        Raises :exc:`ContractError` if it is not part of this
        spectrum.
        """
        parity = validate_parity(parity)
        for level in self.levels:
            if level.parity is parity and level.order == order:
                return level
        raise ContractError('Level (parity={}, order={}) not in spectrum'.format(
            int(parity), order))

    def vector_matrix(self) -> np.ndarray:
        """
        Return the eigenvectors as the columns of a matrix.
        """
        return np.stack([level.vector.amps for level in self.levels], axis=1)

    def __len__(self) -> int:
        return len(self.levels)


def _validate_setup(
        params: ModelParams,
        k_levels: int,
        trunc: Optional[Truncation],
        n_max_cap: int,
) -> Truncation:
    if isinstance(k_levels, bool) or not isinstance(k_levels, int) or k_levels < 1:
        raise ContractError('Invalid level count: {!r} (must be >= 1)'.format(k_levels))
    if trunc is None:
        trunc = Truncation.for_params(params)
    minimum = k_levels + TAIL_LEVELS
    if trunc.n_max < minimum:
        trunc = dataclasses.replace(trunc, n_max=minimum)
    if trunc.n_max > n_max_cap:
        raise TruncationError(trunc.n_max, 'initial cutoff exceeds the cap of {}'.format(
            n_max_cap))
    return trunc


def _lowest_values(
        params: ModelParams,
        trunc: Truncation,
        count: int,
) -> Dict[Parity, RealArray]:
    return {
        parity: chain_eigensystem(
            params, trunc, parity, want_vectors=False).values[:count]
        for parity in Parity
    }


def converged_chain_energies(
        params: ModelParams,
        k_levels: int,
        energy_tol: Optional[float] = None,
        trunc: Optional[Truncation] = None,
        n_max_cap: int = N_MAX_CAP,
) -> Tuple[Dict[Parity, RealArray], Truncation]:
    """
    Return the lowest `k_levels` eigenvalues of each parity chain,
    recomputed with a doubled cutoff until none of them moves by
    `energy_tol` (default ``1e-8 * omega``) or more, and the cutoff
    they were taken at.

    Raises :exc:`TruncationError` if the cap would be exceeded.
    """
    trunc = _validate_setup(params, k_levels, trunc, n_max_cap)
    if energy_tol is None:
        energy_tol = ENERGY_TOL_DEFAULT * params.omega

    previous = _lowest_values(params, trunc, k_levels)
    while True:
        bigger = trunc.doubled()
        if bigger.n_max > n_max_cap:
            raise TruncationError(trunc.n_max, 'energies did not converge below the cap')
        current = _lowest_values(params, bigger, k_levels)
        change = max(float(np.max(np.abs(current[parity] - previous[parity])))
                     for parity in Parity)
        _log.debug('n_max {} -> {}: max energy change {:.3e}', trunc.n_max, bigger.n_max,
                   change)
        trunc, previous = bigger, current
        if change < energy_tol:
            return current, trunc


def converged_spectrum(
        params: ModelParams,
        k_levels: int,
        energy_tol: Optional[float] = None,
        trunc: Optional[Truncation] = None,
        n_max_cap: int = N_MAX_CAP,
        keep_all: bool = False,
) -> Spectrum:
    """
    Return the lowest `k_levels` eigenpairs, recomputed with a doubled
    cutoff until every requested eigenvalue moves less than
    `energy_tol` and every eigenvector satisfies the tail tolerance.

    Arguments:
        - `params`: Model parameters.
        - `k_levels`: Number of levels requested from each chain.
        - `energy_tol`: Convergence tolerance. Defaults to
          ``1e-8 * omega``.
        - `trunc`: Starting truncation. Defaults to the heuristic of
          :meth:`Truncation.for_params`.
        - `n_max_cap`: Hard cap of the cutoff.
        - `keep_all`: Keep the lowest `k_levels` of both chains
          instead of the lowest `k_levels` overall.

    Raises :exc:`TruncationError` if the cap would be exceeded.
    """
    # Energies first (cheap), vectors once the energies have settled
    _, trunc = converged_chain_energies(
        params, k_levels, energy_tol=energy_tol, trunc=trunc, n_max_cap=n_max_cap)

    while True:
        systems = [chain_eigensystem(params, trunc, parity) for parity in Parity]
        tail = max(float(np.max(system.tail_probabilities(k_levels)))
                   for system in systems)
        if tail <= trunc.tail_tol:
            break
        bigger = trunc.doubled()
        if bigger.n_max > n_max_cap:
            raise TruncationError(
                trunc.n_max, 'eigenvector tail above tolerance', tail=tail)
        _log.debug('Tail {:.3e} above tolerance at n_max {}', tail, trunc.n_max)
        trunc = bigger

    levels = [
        Level(energy=float(system.values[order]), parity=system.parity, order=order,
              vector=system.state(order))
        for system in systems
        for order in range(k_levels)
    ]
    levels.sort(key=lambda level: level.sort_key)
    if not keep_all:
        levels = levels[:k_levels]
    _log.info('Converged spectrum of {} levels at n_max {}', len(levels), trunc.n_max)
    return Spectrum(params=params, trunc=trunc, levels=tuple(levels))
