"""
Special functions required by the perturbative spectra: Laguerre
polynomials, displacement operator matrix elements and the scaled
Laguerre envelope that controls the pDSC level splitting.
"""
import math
from typing import (
    Tuple,
)

import numpy as np
from scipy import optimize

from .common import validate_photon_number
from .exception import ContractError
from .typing import FloatOrArray

__all__ = (
    'laguerre',
    'assoc_laguerre',
    'laguerre_table',
    'kummer_1f1_neg_n',
    'displacement_element',
    'displacement_matrix',
    'adiabatic_photon_distribution',
    'splitting_envelope',
    'last_extremum',
)

# Grid density used to locate the last maximum of the splitting envelope
_ENVELOPE_SAMPLES = 4001


def _validate_order(a: int) -> int:
    if isinstance(a, bool) or not isinstance(a, (int, np.integer)) or a < 0:
        raise ContractError('Invalid Laguerre order: {!r} (must be a non-negative int)'
                            .format(a))
    return int(a)


def laguerre_table(n: int, a: int, x: FloatOrArray) -> np.ndarray:
    """
    Return ``L_0^(a)(x), ..., L_n^(a)(x)`` stacked along the first
    axis, evaluated with the three-term upward recurrence.
    """
    n = validate_photon_number(n)
    a = _validate_order(a)
    x = np.asarray(x, dtype=float)
    table = np.empty((n + 1,) + x.shape, dtype=float)
    table[0] = 1.0
    if n >= 1:
        table[1] = 1.0 + a - x
    for k in range(1, n):
        table[k + 1] = ((2 * k + 1 + a - x) * table[k] - (k + a) * table[k - 1]) / (k + 1)
    return table


def assoc_laguerre(n: int, a: int, x: FloatOrArray) -> FloatOrArray:
    """
    Return the generalised Laguerre polynomial ``L_n^(a)(x)``.

    Arguments:
        - `n`: Degree, non-negative.
        - `a`: Non-negative integer order.
        - `x`: Scalar or array argument.
    """
    value = laguerre_table(n, a, x)[-1]
    if np.ndim(x) == 0:
        return float(value)
    return value


def laguerre(n: int, x: FloatOrArray) -> FloatOrArray:
    """
    Return the Laguerre polynomial ``L_n(x)``.
    """
    return assoc_laguerre(n, 0, x)


def kummer_1f1_neg_n(n: int, z: float) -> float:
    """
    Return the confluent hypergeometric function ``1F1(-n; 1; z)``
    which reduces to ``L_n(z)`` for a non-positive integer first
    parameter.
    """
    return float(laguerre(n, z))


def _displacement_lower(m: int, n: int, alpha: float) -> float:
    # m >= n
    k = m - n
    if alpha == 0.0:
        return 1.0 if k == 0 else 0.0
    log_prefactor = (0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1))
                     + k * math.log(abs(alpha)) - 0.5 * alpha * alpha)
    sign = -1.0 if (alpha < 0.0 and k % 2 == 1) else 1.0
    return sign * math.exp(log_prefactor) * assoc_laguerre(n, k, alpha * alpha)


def displacement_element(m: int, n: int, alpha: float) -> float:
    """
    Return the Fock matrix element ``<m|D(alpha)|n>`` of the
    displacement operator for real `alpha`.

    The element is evaluated for ``m >= n`` and extended by
    ``<m|D|n> = (-1)^(n-m) <n|D|m>``.
    """
    m = validate_photon_number(m)
    n = validate_photon_number(n)
    alpha = float(alpha)
    if m >= n:
        return _displacement_lower(m, n, alpha)
    return (-1.0) ** (n - m) * _displacement_lower(n, m, alpha)


def displacement_matrix(alpha: float, n_max: int) -> np.ndarray:
    """
    Return the ``(n_max + 1) x (n_max + 1)`` matrix of
    ``<m|D(alpha)|n>`` (rows ``m``, columns ``n``).
    """
    n_max = validate_photon_number(n_max)
    alpha = float(alpha)
    size = n_max + 1
    matrix = np.zeros((size, size), dtype=float)
    if alpha == 0.0:
        np.fill_diagonal(matrix, 1.0)
        return matrix

    x = alpha * alpha
    log_abs = math.log(abs(alpha))
    log_factorial = np.array([math.lgamma(j + 1) for j in range(size)])
    for k in range(size):
        table = laguerre_table(n_max - k, k, x)
        n = np.arange(n_max - k + 1)
        m = n + k
        sign = -1.0 if (alpha < 0.0 and k % 2 == 1) else 1.0
        log_ratio = 0.5 * (log_factorial[n] - log_factorial[m])
        prefactor = np.exp(log_ratio + k * log_abs - 0.5 * x)
        lower = sign * prefactor * table
        matrix[m, n] = lower
        if k > 0:
            matrix[n, m] = (-1.0) ** k * lower
    return matrix


def adiabatic_photon_distribution(n: int, alpha: float, n_max: int) -> np.ndarray:
    """
    Return the photon-number distribution ``|<m|D(alpha)|n>|^2`` for
    ``m = 0 .. n_max`` shared by both adiabatic branches of index `n`.
    """
    n = validate_photon_number(n)
    if n > n_max:
        raise ContractError('Oscillator index {} exceeds n_max={}'.format(n, n_max))
    return displacement_matrix(alpha, n_max)[:, n] ** 2


def splitting_envelope(n: int, alpha: FloatOrArray) -> FloatOrArray:
    """
    Return ``exp(-2 alpha^2) |L_n(4 alpha^2)|``, the adiabatic level
    splitting in units of the qubit frequency.
    """
    alpha = np.asarray(alpha, dtype=float)
    value = np.exp(-2.0 * alpha ** 2) * np.abs(laguerre(n, 4.0 * alpha ** 2))
    if value.ndim == 0:
        return float(value)
    return value


def last_extremum(n: int) -> Tuple[float, float]:
    """
    Return the location ``alpha`` and height of the last maximum of
    :func:`splitting_envelope` on ``alpha >= 0``. Beyond it the
    envelope decreases monotonically.
    """
    n = validate_photon_number(n)
    if n == 0:
        return 0.0, 1.0

    # All zeros of L_n(x) lie below x = 4n + 2, i.e. alpha < sqrt(n + 1)
    alpha_hi = math.sqrt(n + 1.0) + 2.0
    grid = np.linspace(0.0, alpha_hi, _ENVELOPE_SAMPLES)
    values = splitting_envelope(n, grid)
    inner = np.nonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:]))[0]
    if inner.size == 0:
        return 0.0, float(values[0])
    index = int(inner[-1]) + 1
    result = optimize.minimize_scalar(
        lambda alpha: -splitting_envelope(n, alpha),
        bounds=(grid[index - 1], grid[index + 1]),
        method='bounded',
        options={'xatol': 1e-12},
    )
    alpha = float(result.x)
    return alpha, float(splitting_envelope(n, alpha))
