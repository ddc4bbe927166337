import math

import mpmath
import numpy as np
import pytest
from scipy import (
    linalg,
    special,
)

from rabi.regimes import (
    ContractError,
    adiabatic_photon_distribution,
    annihilation,
    assoc_laguerre,
    displacement_element,
    displacement_matrix,
    kummer_1f1_neg_n,
    laguerre,
    laguerre_table,
    last_extremum,
    splitting_envelope,
)


class TestLaguerre:
    @pytest.mark.parametrize('n,a,x', [
        (0, 0, 2.5),
        (1, 0, 0.3),
        (3, 0, 1.7),
        (5, 2, 4.0),
        (8, 1, 11.0),
        (12, 0, 20.0),
        (7, 5, 0.01),
    ])
    def test_matches_scipy(self, n, a, x):
        assert assoc_laguerre(n, a, x) == pytest.approx(
            special.eval_genlaguerre(n, a, x), rel=1e-10, abs=1e-12)

    def test_table(self):
        x = np.array([0.0, 0.5, 3.0])
        table = laguerre_table(4, 1, x)
        assert table.shape == (5, 3)
        for n in range(5):
            assert table[n] == pytest.approx(special.eval_genlaguerre(n, 1, x))

    def test_at_zero(self):
        # L_n(0) = 1
        for n in range(10):
            assert laguerre(n, 0.0) == pytest.approx(1.0)

    def test_array(self):
        x = np.linspace(0.0, 10.0, 7)
        values = laguerre(6, x)
        assert isinstance(values, np.ndarray)
        assert values == pytest.approx(special.eval_laguerre(6, x))
        assert isinstance(laguerre(6, 2.0), float)

    def test_large_argument(self):
        alpha = 3.584
        x = 4.0 * alpha ** 2
        with mpmath.workdps(50):
            expected = float(mpmath.laguerre(12, 0, mpmath.mpf(x)))
        assert laguerre(12, x) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize('n,a', [(-1, 0), (2, -1), (1.5, 0), (2, 0.5), (2, True)])
    def test_invalid(self, n, a):
        with pytest.raises(ContractError):
            assoc_laguerre(n, a, 1.0)

    def test_kummer(self):
        with mpmath.workdps(30):
            expected = float(mpmath.hyp1f1(-7, 1, 10))
        assert kummer_1f1_neg_n(7, 10.0) == pytest.approx(expected, rel=1e-10)


class TestDisplacement:
    def test_matches_matrix_exponential(self):
        alpha, size = 1.5, 40
        # Exponentiate in a larger space so the kept block is free of edge effects
        a = annihilation(119)
        expected = linalg.expm(alpha * (a.T - a))[:size, :size]
        assert displacement_matrix(alpha, size - 1) == pytest.approx(expected, abs=1e-8)

    def test_vacuum_column_is_coherent_state(self):
        alpha = 1.2
        column = displacement_matrix(alpha, 30)[:, 0]
        expected = [math.exp(-alpha ** 2 / 2) * alpha ** m / math.sqrt(math.factorial(m))
                    for m in range(31)]
        assert column == pytest.approx(expected, abs=1e-14)

    def test_negative_alpha_is_transpose(self):
        matrix = displacement_matrix(0.9, 20)
        assert displacement_matrix(-0.9, 20) == pytest.approx(matrix.T, abs=1e-14)

    def test_identity_at_zero(self):
        assert np.array_equal(displacement_matrix(0.0, 5), np.eye(6))
        assert displacement_element(3, 3, 0.0) == 1.0
        assert displacement_element(3, 2, 0.0) == 0.0

    @pytest.mark.parametrize('m,n', [(0, 0), (4, 1), (1, 4), (7, 7), (2, 9)])
    def test_element_matches_matrix(self, m, n):
        matrix = displacement_matrix(-1.1, 12)
        assert displacement_element(m, n, -1.1) == pytest.approx(matrix[m, n], abs=1e-14)

    def test_orthogonal(self):
        matrix = displacement_matrix(2.0, 150)
        block = (matrix.T @ matrix)[:40, :40]
        assert block == pytest.approx(np.eye(40), abs=1e-10)

    def test_large_alpha_finite(self):
        matrix = displacement_matrix(5.0, 200)
        assert np.all(np.isfinite(matrix))

    def test_adiabatic_distribution(self):
        distribution = adiabatic_photon_distribution(1, 2.0, 80)
        assert distribution.sum() == pytest.approx(1.0, abs=1e-10)
        mean = float(np.dot(np.arange(81), distribution))
        assert mean == pytest.approx(1.0 + 4.0, abs=1e-8)

    def test_adiabatic_distribution_cutoff(self):
        with pytest.raises(ContractError):
            adiabatic_photon_distribution(5, 1.0, 4)


class TestSplittingEnvelope:
    def test_ground(self):
        assert splitting_envelope(0, 1.0) == pytest.approx(math.exp(-2.0))

    def test_array(self):
        alpha = np.array([0.0, 0.5, 1.0])
        values = splitting_envelope(2, alpha)
        expected = np.exp(-2 * alpha ** 2) * np.abs(
            special.eval_laguerre(2, 4 * alpha ** 2))
        assert values == pytest.approx(expected)

    def test_last_extremum_ground(self):
        assert last_extremum(0) == (0.0, 1.0)

    def test_last_extremum_first(self):
        # exp(-x/2) (x - 1) peaks at x = 4 alpha^2 = 3
        alpha, height = last_extremum(1)
        assert alpha == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-6)
        assert height == pytest.approx(2.0 * math.exp(-1.5), abs=1e-10)

    @pytest.mark.parametrize('n', [2, 5, 12])
    def test_last_extremum_monotone_beyond(self, n):
        alpha, height = last_extremum(n)
        grid = np.linspace(alpha, alpha + 4.0, 400)
        values = splitting_envelope(n, grid)
        assert values[0] == pytest.approx(height)
        assert np.all(np.diff(values) <= 1e-12)
