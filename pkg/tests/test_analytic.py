"""Tests for the closed-form analytic module."""
import math

import numpy as np
import pytest

from src.analytic import (
    CltParams,
    ModelParams,
    clt_mean_approx,
    conditional_mean_given_T,
    expected_y_after_k,
    k_pmf_deterministic,
    k_pmf_poisson,
    k_weights,
    mean_known_deterministic,
    mean_known_periodic_stationary_phase,
    mean_known_poisson,
    mean_known_poisson_quadrature,
    mean_known_selective,
    mixture_pmf,
    not_found_threshold,
    prob_fraction_not_found,
    stationary_pmf_deterministic,
    stationary_pmf_poisson,
    stationary_pmf_poisson_mixture,
)
from src.errors import ParameterError, ValidityError
from src.sim import estimate_prob_fraction_not_found
from src.stirling import distinct_type_pmf
from src.utils import rho_sweep


class TestModelParams:
    """Parameter validation."""

    def test_rho_is_derived(self):
        """rho is beta over delta in both constructors."""
        params = ModelParams(m=25, beta=5.0, delta=0.1)
        assert params.rho == pytest.approx(50.0)
        assert ModelParams.from_rho(25, 50.0, delta=2.0).beta == pytest.approx(100.0)

    @pytest.mark.parametrize("kwargs", [
        dict(m=0, beta=1.0, delta=1.0),
        dict(m=2.5, beta=1.0, delta=1.0),
        dict(m=5, beta=0.0, delta=1.0),
        dict(m=5, beta=1.0, delta=-1.0),
        dict(m=5, beta=1.0, delta=math.inf),
        dict(m=5, beta=1.0, delta=1.0, r=1.5),
    ])
    def test_invalid_parameters(self, kwargs):
        """Out-of-range parameters raise ParameterError."""
        with pytest.raises(ParameterError):
            ModelParams(**kwargs)

    def test_parameter_error_is_value_error(self):
        """ParameterError is also a ValueError."""
        with pytest.raises(ValueError):
            ModelParams(m=-1, beta=1.0, delta=1.0)


class TestStationaryMeans:
    """Stationary means for each probing and replacement variant."""

    @pytest.mark.parametrize("rho,pct", [(5.0, 16.67), (25.0, 50.00), (50.0, 66.67)])
    def test_poisson_probing_fractions(self, rho, pct):
        """Poisson-probing means reproduce the reference percentages."""
        params = ModelParams.from_rho(25, rho)
        assert round(100.0 * mean_known_poisson(params) / 25, 2) == pct

    def test_poisson_probing_value(self):
        """m rho/(m + rho) at m=25, rho=50."""
        assert mean_known_poisson(ModelParams.from_rho(25, 50.0)) == pytest.approx(50.0 / 3.0)

    def test_deterministic_probing(self):
        """Constant-rate probing keeps 66.44% known at m=25, rho=50."""
        value = mean_known_deterministic(ModelParams.from_rho(25, 50.0))
        assert 100.0 * value / 25 == pytest.approx(66.44, abs=0.01)

    def test_deterministic_single_proxy(self):
        """With one proxy the mean is e^(-1/rho)."""
        value = mean_known_deterministic(ModelParams.from_rho(1, 2.0))
        assert value == pytest.approx(math.exp(-0.5), rel=1e-12)

    def test_periodic_with_stationary_phase(self):
        """Stationary-phase periodic probing exceeds the constant-rate mean by rho expm1(1/rho)."""
        params = ModelParams.from_rho(25, 50.0)
        value = mean_known_periodic_stationary_phase(params)
        assert 100.0 * value / 25 == pytest.approx(67.11, abs=0.01)
        ratio = value / mean_known_deterministic(params)
        assert ratio == pytest.approx(50.0 * math.expm1(1.0 / 50.0), rel=1e-12)

    def test_selective_replacement(self):
        """Selective means at r=0, r=1 and a hand-computed r=0.5 case."""
        assert mean_known_selective(ModelParams.from_rho(25, 50.0, r=0.0)) == pytest.approx(25.0)
        full = ModelParams.from_rho(25, 50.0, r=1.0)
        assert mean_known_selective(full) == pytest.approx(mean_known_poisson(full))
        half = ModelParams.from_rho(10, 20.0, r=0.5)
        assert mean_known_selective(half) == pytest.approx(8.0)

    def test_quadrature_agrees_with_closed_form(self):
        """Integrating over the cycle length recovers the Poisson closed form."""
        for m, rho in [(2, 1.0), (25, 50.0), (1000, 300.0)]:
            params = ModelParams.from_rho(m, rho, delta=0.5)
            assert mean_known_poisson_quadrature(params) == pytest.approx(
                mean_known_poisson(params), rel=1e-7
            )

    def test_conditional_mean(self):
        """E[Y | T] at the ends of its range."""
        assert conditional_mean_given_T(10, 3.0, 0.0) == 0.0
        assert conditional_mean_given_T(10, 3.0, 1e6) == pytest.approx(10.0)
        with pytest.raises(ParameterError):
            conditional_mean_given_T(10, 3.0, -1.0)

    def test_expected_y_after_k(self):
        """Expected distinct count after k more selections."""
        assert expected_y_after_k(10, 0, 4) == 4
        assert expected_y_after_k(1, 3, 0) == 1.0
        assert expected_y_after_k(30, 45, 0) == pytest.approx(distinct_type_pmf(30, 45).mean())
        with pytest.raises(ParameterError):
            expected_y_after_k(5, 2, 6)

    @pytest.mark.parametrize("m", [2, 5, 25, 1000])
    @pytest.mark.parametrize("rho", [0.1, 1.0, 50.0, 1e4])
    def test_deterministic_below_poisson(self, m, rho):
        """Constant-rate probing always knows fewer proxies than Poisson probing."""
        params = ModelParams.from_rho(m, rho)
        assert mean_known_deterministic(params) < mean_known_poisson(params)

    @pytest.mark.parametrize("m", [2, 25, 1000])
    def test_selective_monotone_in_r_and_rho(self, m):
        """The selective mean falls with r and rises with rho."""
        by_r = [mean_known_selective(ModelParams.from_rho(m, 50.0, r=float(r)))
                for r in np.linspace(0.0, 1.0, 21)]
        assert all(b <= a for a, b in zip(by_r, by_r[1:]))
        by_rho = [mean_known_selective(ModelParams.from_rho(m, rho, r=0.5))
                  for rho in rho_sweep(-1, 4, 2)]
        assert all(b >= a for a, b in zip(by_rho, by_rho[1:]))

    def test_many_proxies_few_probes(self):
        """With m much larger than rho about rho proxies are known."""
        value = mean_known_poisson(ModelParams.from_rho(10 ** 6, 10.0))
        assert value == pytest.approx(9.9999, abs=1e-4)
        assert value < 10.0


class TestProbeCountLaws:
    """Geometric laws of the number of probes per cycle."""

    @pytest.mark.parametrize("k_pmf", [k_pmf_poisson, k_pmf_deterministic])
    def test_sums_to_one(self, k_pmf):
        """Both probe-count laws are normalized and vanish below zero."""
        total = math.fsum(k_pmf(3.0, k) for k in range(400))
        assert total == pytest.approx(1.0, abs=1e-12)
        assert k_pmf(3.0, -1) == 0.0

    def test_poisson_law_mean_is_rho(self):
        """The Poisson-probing count has mean rho."""
        mean = math.fsum(k * k_pmf_poisson(4.0, k) for k in range(1000))
        assert mean == pytest.approx(4.0, rel=1e-10)

    def test_nonpositive_rho_raises(self):
        """rho must be positive."""
        with pytest.raises(ParameterError):
            k_pmf_poisson(0.0, 1)


class TestStationaryDistribution:
    """The closed-form law of Y and its oracles."""

    @pytest.mark.parametrize("m", [2, 25, 100, 1000])
    @pytest.mark.parametrize("rho", [1.0, 5.0, 50.0, 500.0])
    def test_normalized_with_known_mean(self, m, rho):
        """The closed-form law sums to 1 and has the closed-form mean."""
        params = ModelParams.from_rho(m, rho)
        pmf = stationary_pmf_poisson(params)
        assert abs(math.fsum(pmf.mass) - 1.0) <= 1e-10
        assert abs(pmf.mean() - m * rho / (m + rho)) <= 1e-8

    def test_empty_state_probability(self):
        """P(Y = 0) = 1/(rho + 1)."""
        pmf = stationary_pmf_poisson(ModelParams.from_rho(25, 50.0))
        assert pmf.mass[0] == pytest.approx(1.0 / 51.0, rel=1e-12)

    def test_small_instance_values(self):
        """Exact masses for m=2, rho=1."""
        pmf = stationary_pmf_poisson(ModelParams.from_rho(2, 1.0))
        assert np.allclose(pmf.mass, [1.0 / 2.0, 1.0 / 3.0, 1.0 / 6.0], atol=1e-14)

    @pytest.mark.parametrize("m,rho", [(2, 1.0), (3, 2.0), (5, 5.0)])
    def test_matches_geometric_mixture(self, m, rho):
        """The closed form equals the geometric mixture of P_{m,k}."""
        params = ModelParams.from_rho(m, rho)
        closed = stationary_pmf_poisson(params)
        mixture = stationary_pmf_poisson_mixture(params, k_max=200)
        assert np.allclose(closed.mass, mixture.mass, atol=1e-8, rtol=0)

    def test_mixture_of_single_count(self):
        """A point-mass count law returns P_{m,k} itself."""
        pmf = mixture_pmf(4, [0.0, 0.0, 0.0, 1.0])
        assert np.allclose(pmf.mass, distinct_type_pmf(4, 3).mass)

    def test_requires_all_at_once(self):
        """Selective replacement is rejected."""
        with pytest.raises(ParameterError):
            stationary_pmf_poisson(ModelParams.from_rho(5, 2.0, r=0.5))

    def test_deterministic_probing_distribution(self):
        """The constant-rate law has the constant-rate mean and P(K = 0) at zero."""
        params = ModelParams.from_rho(25, 50.0)
        pmf = stationary_pmf_deterministic(params)
        assert pmf.mean() == pytest.approx(mean_known_deterministic(params), abs=1e-8)
        # no probe in a cycle: P(K = 0) = 1 - e^(-1/rho)
        assert pmf.mass[0] == pytest.approx(-math.expm1(-1.0 / 50.0), rel=1e-10)

    def test_deterministic_distribution_large_rho(self):
        """Huge rho finishes quickly and keeps the closed-form mean."""
        params = ModelParams.from_rho(20, 1e6)
        pmf = stationary_pmf_deterministic(params)
        assert pmf.mean() == pytest.approx(mean_known_deterministic(params), abs=1e-8)
        assert pmf.mass[20] > 0.999

    def test_saturated_mixture_matches_full_sum(self):
        """Stopping at saturation matches summing the whole geometric tail."""
        params = ModelParams.from_rho(2, 100.0)
        full = mixture_pmf(2, k_weights(k_pmf_deterministic, 100.0, 3000))
        assert np.allclose(stationary_pmf_deterministic(params).mass, full.mass,
                           atol=1e-12, rtol=0)


class TestTailProbability:
    """P(at least a fraction of proxies unknown) over a rho sweep."""

    def test_threshold(self):
        """Largest Y leaving the requested fraction unknown."""
        assert not_found_threshold(1000, 0.2) == 800
        assert not_found_threshold(25, 0.2) == 20
        with pytest.raises(ParameterError):
            not_found_threshold(25, 1.0)

    def test_monotone_over_sweep(self):
        """The tail probability falls as rho grows."""
        values = [prob_fraction_not_found(ModelParams.from_rho(1000, rho), 0.2)
                  for rho in rho_sweep(-3, 5, 4)]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_limits(self):
        """Tail probability at the extremes of rho and fraction."""
        assert prob_fraction_not_found(ModelParams.from_rho(1000, 1e-3), 0.2) > 0.999
        # the rho = 1e5 tail is set by P(K <= m ln 5), about 1.6%
        high = prob_fraction_not_found(ModelParams.from_rho(1000, 1e5), 0.2)
        assert 0.01 < high < 0.025

    def test_monte_carlo_agrees(self):
        """Direct sampling of cycle ends agrees with the exact tail."""
        params = ModelParams.from_rho(1000, 2000.0)
        exact = prob_fraction_not_found(params, 0.2)
        rng = np.random.default_rng(12345)
        p, se = estimate_prob_fraction_not_found(1000, 2000.0, 0.2, 4000, rng)
        assert abs(p - exact) <= 3.0 * se


class TestCltApproximation:
    """Renewal-probing approximation."""

    def test_zero_variance_matches_deterministic(self):
        """Zero variance reduces the approximation to the constant-rate mean."""
        base = ModelParams.from_rho(1000, 1000.0)
        approx = clt_mean_approx(CltParams(base, sigma=0.0))
        exact = mean_known_deterministic(base)
        assert abs(approx - exact) / exact < 0.005

    def test_variance_lowers_the_mean(self):
        """More inter-probe variance means fewer proxies known."""
        base = ModelParams(m=25, beta=50.0 / 30.0, delta=1.0 / 30.0)
        low = clt_mean_approx(CltParams(base, sigma=0.0))
        high = clt_mean_approx(CltParams(base, sigma=1.0))
        assert high < low

    def test_outside_validity_region_raises(self):
        """Parameters outside the approximation's range raise ValidityError."""
        base = ModelParams.from_rho(1000, 1000.0)
        params = CltParams(base, sigma=1.0)
        assert not params.is_valid()
        with pytest.raises(ValidityError):
            clt_mean_approx(params)

    def test_needs_two_proxies(self):
        """The approximation needs m >= 2."""
        with pytest.raises(ParameterError):
            CltParams(ModelParams.from_rho(1, 1.0), sigma=0.0)
