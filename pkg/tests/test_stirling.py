"""Tests for the Stirling number and distinct-type distribution module."""
import itertools
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from src.errors import ParameterError, PrecisionError
from src.stirling import (
    Pmf,
    StirlingTable,
    distinct_type_pmf,
    distinct_type_pmf_sequence,
    log_factorial,
    log_falling_factorial,
    log_stirling2,
    log_stirling2_row,
    stirling2_alternating,
    stirling2_asymptotic_fixed_y,
    stirling2_exact,
    stirling2_row,
    stirling_power_series,
    stirling_power_series_limit,
)


def _enumerated_pmf(m, k):
    """Exact distinct-count law, by enumeration when small and by exact DP otherwise."""
    if m ** k <= 50_000:
        counts = [0] * (m + 1)
        for seq in itertools.product(range(m), repeat=k):
            counts[len(set(seq))] += 1
        return [Fraction(c, m ** k) for c in counts]
    probs = [Fraction(0)] * (m + 1)
    probs[0] = Fraction(1)
    for _ in range(k):
        nxt = [Fraction(0)] * (m + 1)
        for y, p in enumerate(probs):
            if p:
                nxt[y] += p * Fraction(y, m)
                if y < m:
                    nxt[y + 1] += p * Fraction(m - y, m)
        probs = nxt
    return probs


class TestStirlingNumbers:
    """Exact values, identities and log-space forms."""

    def test_known_values(self):
        """Small Stirling numbers and a full row."""
        assert stirling2_exact(4, 2) == 7
        assert stirling2_exact(0, 0) == 1
        assert stirling2_exact(5, 0) == 0
        assert stirling2_exact(3, 5) == 0
        assert stirling2_row(5) == (0, 1, 15, 25, 10, 1)

    def test_bounded_row_is_prefix_of_full_row(self):
        """A bounded row is the prefix of the full row."""
        for k in range(0, 16):
            full = stirling2_row(k)
            for y_max in range(0, k + 3):
                assert stirling2_row(k, y_max) == full[:min(k, y_max) + 1]

    def test_recurrence_matches_alternating_sum(self):
        """The recurrence agrees with the alternating sum."""
        for k in range(0, 21):
            row = stirling2_row(k)
            for y in range(0, k + 1):
                assert row[y] == stirling2_alternating(k, y) == stirling2_exact(k, y)

    def test_table_matches_row(self):
        """Table rows equal computed rows."""
        table = StirlingTable(12)
        for k in range(13):
            assert table.row(k) == stirling2_row(k)
        assert table.entry(6, 9) == 0
        assert table.column(1)[1:] == [1] * 12
        with pytest.raises(ParameterError):
            table.row(13)

    def test_falling_factorial_identity_is_exact(self):
        """Summing (m)_y {k brace y} over y gives m^k exactly."""
        for m in range(1, 9):
            for k in range(0, 13):
                row = stirling2_row(k)
                total = sum(math.perm(m, y) * row[y] for y in range(0, min(k, m) + 1))
                assert total == m ** k

    def test_negative_arguments_raise(self):
        """Negative arguments raise ParameterError."""
        with pytest.raises(ParameterError):
            stirling2_exact(-1, 0)
        with pytest.raises(ParameterError):
            stirling2_asymptotic_fixed_y(10, 0)

    @pytest.mark.parametrize("k,y", [(30, 7), (120, 60), (500, 2), (500, 10), (500, 250), (500, 499)])
    def test_log_stirling_matches_exact(self, k, y):
        """Log-space values match exact logs."""
        expected = math.log(stirling2_exact(k, y))
        assert log_stirling2(k, y) == pytest.approx(expected, rel=1e-10)

    def test_log_stirling_row_matches_exact(self):
        """The log-space row matches exact logs."""
        row = log_stirling2_row(40, 40)
        exact = stirling2_row(40)
        assert row[0] == -np.inf
        for y in range(1, 41):
            assert row[y] == pytest.approx(math.log(exact[y]), rel=1e-12)

    def test_log_stirling_undefined_for_zero_values(self):
        """Logs of zero Stirling numbers raise."""
        assert log_stirling2(0, 0) == 0.0
        with pytest.raises(ParameterError):
            log_stirling2(5, 6)
        with pytest.raises(ParameterError):
            log_stirling2(5, 0)

    def test_asymptotic_form(self):
        """Large k approaches y^k / y!."""
        # {k brace 2} = 2^(k-1) - 1
        assert stirling2_asymptotic_fixed_y(60, 2) == pytest.approx(59 * math.log(2), rel=1e-15)

    def test_log_factorials(self):
        """Log factorials and falling factorials."""
        assert log_factorial(0) == 0.0
        assert log_factorial(10) == pytest.approx(math.log(3628800))
        assert log_falling_factorial(10, 3) == pytest.approx(math.log(720))
        assert log_falling_factorial(3, 4) == -np.inf

    def test_power_series_converges_to_closed_form(self):
        """The generating series converges to its closed form."""
        for ell, x in [(0, 0.3), (2, 0.1), (4, 0.05)]:
            assert stirling_power_series(ell, x, 300) == pytest.approx(
                stirling_power_series_limit(ell, x), rel=1e-12
            )


class TestPmf:
    """Validation and summaries of probability vectors."""

    def test_rejects_bad_mass(self):
        """Negative, non-finite and unnormalized masses are rejected."""
        with pytest.raises(PrecisionError):
            Pmf(np.array([0.5, 0.4]))
        with pytest.raises(PrecisionError):
            Pmf(np.array([1.5, -0.5]))
        with pytest.raises(ParameterError):
            Pmf(np.array([]))

    def test_mass_is_read_only(self):
        """The mass vector cannot be written."""
        pmf = Pmf(np.array([0.25, 0.75]))
        with pytest.raises(ValueError):
            pmf.mass[0] = 1.0

    def test_summaries(self):
        """Mean, variance, cdf and mode."""
        pmf = Pmf(np.array([0.25, 0.5, 0.25]))
        assert pmf.m == 2
        assert pmf.mean() == pytest.approx(1.0)
        assert pmf.variance() == pytest.approx(0.5)
        assert pmf.cdf(0) == pytest.approx(0.25)
        assert pmf.cdf(-1) == 0.0
        assert pmf.cdf(5) == 1.0
        assert pmf.mode() == 1
        assert pmf.rows() == [(0, 0.25), (1, 0.5), (2, 0.25)]

    def test_from_log_weights_detects_drift(self):
        """Log weights far from normalized raise PrecisionError."""
        weights = np.log([0.5, 0.6])
        with pytest.raises(PrecisionError):
            Pmf.from_log_weights(weights)
        pmf = Pmf.from_log_weights(weights, check_total=False)
        assert pmf.mass[1] == pytest.approx(0.6 / 1.1)

    def test_point_mass(self):
        """Point masses sit where asked."""
        pmf = Pmf.point_mass(4, 4)
        assert pmf.mean() == 4.0


class TestDistinctTypePmf:
    """P_{m,k} against exact enumeration and the one-step recursion."""

    @pytest.mark.parametrize("m", range(1, 9))
    def test_matches_enumeration(self, m):
        """P_{m,k} equals exhaustive enumeration."""
        for k in range(0, 13):
            pmf = distinct_type_pmf(m, k)
            expected = _enumerated_pmf(m, k)
            for y in range(m + 1):
                assert abs(pmf.mass[y] - float(expected[y])) <= 1e-12

    def test_zero_selections(self):
        """No selections means no types."""
        assert distinct_type_pmf(5, 0).mass[0] == 1.0

    def test_log_path_matches_recursion(self):
        """The log-space path agrees with the one-step recursion."""
        # 200 * ln 50 > 700, so this goes through log space
        pmf = distinct_type_pmf(50, 200)
        *_, last = distinct_type_pmf_sequence(50, 200)
        assert np.allclose(pmf.mass, last.mass, atol=1e-10, rtol=0)

    def test_sequence_matches_direct(self):
        """The sequence agrees with direct computation."""
        for k, pmf in enumerate(distinct_type_pmf_sequence(6, 15)):
            assert np.allclose(pmf.mass, distinct_type_pmf(6, k).mass, atol=1e-13, rtol=0)

    def test_mean_matches_occupancy_formula(self):
        """Mean is m(1 - (1 - 1/m)^k)."""
        m, k = 30, 45
        expected = m * (1.0 - (1.0 - 1.0 / m) ** k)
        assert distinct_type_pmf(m, k).mean() == pytest.approx(expected, rel=1e-12)

    def test_invalid_arguments(self):
        """m < 1 or negative k raise."""
        with pytest.raises(ParameterError):
            distinct_type_pmf(0, 3)
        with pytest.raises(ParameterError):
            list(distinct_type_pmf_sequence(3, -1))

    def test_single_type_needs_no_full_row(self):
        """One type and many selections is a point mass at 1."""
        pmf = distinct_type_pmf(1, 10_000)
        assert pmf.mass.tolist() == [0.0, 1.0]

    def test_two_types_many_selections(self):
        """Two types: one seen only with probability 2^(1-k)."""
        pmf = distinct_type_pmf(2, 1000)
        assert pmf.mass[1] == pytest.approx(2.0 ** -999, rel=1e-12)
        assert pmf.mass[2] == 1.0

    @pytest.mark.parametrize("m", range(1, 11))
    def test_mode_is_m_when_selections_dominate(self, m):
        """With k >= 10 m the mode is m."""
        for k in (10 * m, 20 * m):
            assert distinct_type_pmf(m, k).mode() == m

    @pytest.mark.parametrize("m", [10, 50, 100, 1000])
    def test_mode_when_types_dominate(self, m):
        """With m >= 10 k the mode is k unless collisions are expected."""
        # P(k-1)/P(k) = C(k,2)/(m-k+1), so the mode is k only while few collisions are expected
        for k in range(1, m // 10 + 1):
            mode = distinct_type_pmf(m, k).mode()
            if math.comb(k, 2) < m - k + 1:
                assert mode == k
            else:
                assert k - k * k / m <= mode < k

    def test_mode_slips_below_k_for_large_k(self):
        """Expected collisions pull the mode below k."""
        assert distinct_type_pmf(1000, 50).mode() == 49
        assert distinct_type_pmf(1000, 100).mode() == 96

    def test_square_case_logs_mode(self, caplog):
        """k = m logs how far the mode sits below m."""
        with caplog.at_level(logging.INFO, logger="src.stirling.pmf"):
            distinct_type_pmf(25, 25)
        assert "P_{25,25}: mode" in caplog.text
