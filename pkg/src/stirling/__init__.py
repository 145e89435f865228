"""Stirling numbers of the second kind and the distinct-type distribution."""
from .numbers import (
    StirlingTable,
    log_factorial,
    log_falling_factorial,
    log_falling_factorials,
    log_stirling2,
    log_stirling2_row,
    stirling2_alternating,
    stirling2_asymptotic_fixed_y,
    stirling2_exact,
    stirling2_row,
    stirling_power_series,
    stirling_power_series_limit,
)
from .pmf import Pmf, distinct_type_pmf, distinct_type_pmf_sequence

__all__ = [
    'StirlingTable', 'stirling2_exact', 'stirling2_alternating', 'stirling2_row',
    'log_stirling2', 'log_stirling2_row', 'stirling2_asymptotic_fixed_y',
    'log_factorial', 'log_falling_factorial', 'log_falling_factorials',
    'stirling_power_series', 'stirling_power_series_limit',
    'Pmf', 'distinct_type_pmf', 'distinct_type_pmf_sequence',
]
