"""Closed-form stationary means, distributions and approximations."""
from .distribution import (
    k_weights,
    mixture_pmf,
    not_found_threshold,
    prob_fraction_not_found,
    stationary_pmf_deterministic,
    stationary_pmf_poisson,
    stationary_pmf_poisson_mixture,
)
from .means import (
    clt_mean_approx,
    conditional_mean_given_T,
    expected_y_after_k,
    k_pmf_deterministic,
    k_pmf_poisson,
    mean_known_deterministic,
    mean_known_periodic_stationary_phase,
    mean_known_poisson,
    mean_known_poisson_quadrature,
    mean_known_selective,
)
from .params import CltParams, ModelParams

__all__ = [
    'ModelParams', 'CltParams',
    'mean_known_poisson', 'mean_known_deterministic', 'mean_known_selective',
    'mean_known_periodic_stationary_phase', 'mean_known_poisson_quadrature',
    'k_pmf_deterministic', 'k_pmf_poisson', 'conditional_mean_given_T',
    'expected_y_after_k', 'clt_mean_approx',
    'stationary_pmf_poisson', 'stationary_pmf_poisson_mixture',
    'stationary_pmf_deterministic', 'mixture_pmf', 'k_weights',
    'prob_fraction_not_found', 'not_found_threshold',
]
