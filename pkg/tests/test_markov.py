"""Tests for the Markov chain module."""
import numpy as np
import pytest

from src.analytic import ModelParams, mean_known_selective, stationary_pmf_poisson
from src.errors import ParameterError, SingularityError
from src.markov import (
    Generator,
    birth_death_closed_form,
    build_birth_death_generator,
    build_selective_generator,
    stationary_distribution,
)


class TestGenerator:
    """Construction and structural checks of generator matrices."""

    def test_rows_sum_to_zero(self):
        """Generator rows sum to zero."""
        g = build_selective_generator(ModelParams.from_rho(6, 3.0, r=0.4))
        assert np.allclose(g.rates.sum(axis=1), 0.0, atol=1e-12)
        assert g.rates.shape == (7, 7)

    def test_upward_rates(self):
        """A probe finds a new proxy at rate beta (m - k)/m."""
        params = ModelParams(m=4, beta=2.0, delta=1.0)
        g = build_birth_death_generator(params)
        for k in range(4):
            assert g.rates[k, k + 1] == pytest.approx((4 - k) / 4 * 2.0)
        assert g.rates[3, 2] == pytest.approx(3.0)
        assert g.rates[3, 1] == 0.0

    def test_selective_downward_rates(self):
        """Downward rates follow the binomial replacement kernel."""
        params = ModelParams(m=3, beta=1.0, delta=2.0, r=0.5)
        g = build_selective_generator(params)
        # from 2 known: drop to 0 w.p. 1/4, to 1 w.p. 1/2
        assert g.rates[2, 0] == pytest.approx(0.5)
        assert g.rates[2, 1] == pytest.approx(1.0)

    def test_rejects_invalid_matrices(self):
        """Positive diagonals and negative off-diagonals are rejected."""
        with pytest.raises(ParameterError):
            Generator(m=1, rates=np.array([[-1.0, 1.0], [1.0, 0.0]]))
        with pytest.raises(ParameterError):
            Generator(m=1, rates=np.array([[1.0, -1.0], [0.0, 0.0]]))
        with pytest.raises(ParameterError):
            Generator(m=2, rates=np.zeros((2, 2)))

    def test_irreducibility(self):
        """Replacement makes the chain irreducible; r=0 does not."""
        assert build_selective_generator(ModelParams.from_rho(5, 2.0)).is_irreducible()
        assert build_birth_death_generator(ModelParams.from_rho(5, 2.0)).is_irreducible()
        assert not build_selective_generator(ModelParams.from_rho(5, 2.0, r=0.0)).is_irreducible()

    def test_scaling_keeps_stationary_law(self):
        """Rescaling all rates leaves the stationary law unchanged."""
        g = build_selective_generator(ModelParams.from_rho(5, 3.0, r=0.7))
        base = stationary_distribution(g)
        scaled = stationary_distribution(g.scaled(40.0))
        assert np.allclose(base.mass, scaled.mass, atol=1e-12)
        with pytest.raises(ParameterError):
            g.scaled(0.0)


class TestStationaryDistribution:
    """Solver results against closed forms."""

    @pytest.mark.parametrize("m,rho", [(2, 1.0), (3, 2.0), (5, 5.0)])
    def test_full_replacement_matches_closed_form(self, m, rho):
        """r=1 reproduces the closed-form stationary law."""
        params = ModelParams.from_rho(m, rho)
        solved = stationary_distribution(build_selective_generator(params))
        assert np.allclose(solved.mass, stationary_pmf_poisson(params).mass, atol=1e-8, rtol=0)

    @pytest.mark.parametrize("m", [2, 5, 25])
    @pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
    @pytest.mark.parametrize("rho", [1.0, 10.0, 50.0])
    def test_selective_mean(self, m, r, rho):
        """The solved mean equals m rho/(r m + rho)."""
        params = ModelParams.from_rho(m, rho, r=r)
        solved = stationary_distribution(build_selective_generator(params))
        assert abs(solved.mean() - mean_known_selective(params)) <= 1e-8

    def test_no_replacement_absorbs_at_m(self):
        """Without replacement all mass ends at m."""
        params = ModelParams.from_rho(25, 50.0, r=0.0)
        solved = stationary_distribution(build_selective_generator(params))
        assert solved.mass[25] == pytest.approx(1.0)
        assert solved.mean() == pytest.approx(25.0)

    @pytest.mark.parametrize("m", [1, 5, 20, 100])
    @pytest.mark.parametrize("rho", [0.5, 7.0, 100.0])
    def test_birth_death_is_binomial(self, m, rho):
        """Independent proxy clocks give a binomial law."""
        params = ModelParams.from_rho(m, rho)
        solved = stationary_distribution(build_birth_death_generator(params))
        closed = birth_death_closed_form(params)
        assert np.allclose(solved.mass, closed.mass, atol=1e-10, rtol=0)
        assert closed.mean() == pytest.approx(m * rho / (m + rho))

    def test_disconnected_chain_is_singular(self):
        """Two absorbing states have no unique stationary law."""
        # two absorbing states: no unique stationary law
        g = Generator(m=2, rates=np.array([[0.0, 0.0, 0.0],
                                           [1.0, -2.0, 1.0],
                                           [0.0, 0.0, 0.0]]))
        with pytest.raises(SingularityError):
            stationary_distribution(g)
