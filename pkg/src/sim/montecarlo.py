"""
Direct Monte Carlo of the known-proxy count at the end of a replacement cycle.

Under Poisson probing and all-at-once replacement the probes of one cycle
form a geometric count K, and Y is the number of distinct slots hit by K
uniform draws. No event loop is needed.
"""
import math
from typing import Tuple

import numpy as np

from ..analytic.distribution import not_found_threshold
from ..errors import ParameterError


def sample_cycle_end_known(m: int, rho: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw n independent values of Y just before a replacement.

    Args:
        m: Number of proxies
        rho: Probes per replacement cycle, beta / delta
        n: Sample size
        rng: Random stream

    Returns:
        Integer array of length n with values in {0, ..., m}
    """
    if m < 1 or n < 1 or not (math.isfinite(rho) and rho > 0):
        raise ParameterError(f"need m >= 1, n >= 1 and rho > 0, got m={m}, n={n}, rho={rho}")
    # numpy's geometric counts trials, so subtract one for failures
    probes = rng.geometric(1.0 / (rho + 1.0), size=n) - 1
    known = np.empty(n, dtype=np.int64)
    for i, k in enumerate(probes):
        known[i] = np.count_nonzero(np.bincount(rng.integers(m, size=k), minlength=m))
    return known


def estimate_prob_fraction_not_found(m: int, rho: float, fraction: float, n: int,
                                     rng: np.random.Generator) -> Tuple[float, float]:
    """
    Monte Carlo estimate of P(Y <= floor((1 - fraction) m)).

    Returns:
        (estimate, binomial standard error)
    """
    threshold = not_found_threshold(m, fraction)
    hits = sample_cycle_end_known(m, rho, n, rng) <= threshold
    p = float(np.mean(hits))
    return p, math.sqrt(p * (1.0 - p) / n)
