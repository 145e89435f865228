"""
Stationary distributions of Y under all-at-once replacement.

The Poisson-probing law has a closed form; any other probe-count law K can
be pushed through the distinct-type distribution as a mixture
sum_k P(K = k) P_{m,k}.
"""
import logging
import math
from typing import Callable, Sequence

import numpy as np

from ..errors import ParameterError
from ..stirling import Pmf, distinct_type_pmf_sequence
from .means import k_pmf_deterministic, k_pmf_poisson
from .params import ModelParams

logger = logging.getLogger(__name__)

# Mass outside state m below which P_{m,k} counts as saturated
SATURATION_SLACK = 1e-15


def _require_all_at_once(params: ModelParams) -> None:
    if params.r != 1.0:
        raise ParameterError(
            f"this distribution assumes all types are replaced together (r = 1), got r={params.r}"
        )


def stationary_pmf_poisson(params: ModelParams) -> Pmf:
    """
    Stationary law of Y under Poisson probing and all-at-once replacement.

    With a = m (rho + 1)/rho,

        P(Y = ell) = (m/rho) (m)_ell / (a (a-1) ... (a-ell)),   0 <= ell <= m,

    which is the printed product with its m/(m-ell) prefactor cancelled
    against the last numerator factor, so ell = m is finite. ell = 0 gives
    1/(rho + 1), i.e. P(K = 0). The vector is accumulated as log-ratios
    ln((m-ell+1)/(a-ell)) so nothing underflows for m in the thousands.

    Raises:
        ParameterError: if r != 1
        PrecisionError: if the total drifts from 1 by more than 1e-8
    """
    _require_all_at_once(params)
    m, rho = params.m, params.rho
    c = m / rho
    remaining = np.arange(m - 1, -1, -1, dtype=float)   # m - ell for ell = 1..m
    log_ratios = np.log1p((1.0 - c) / (remaining + c))
    log_mass = np.empty(m + 1)
    log_mass[0] = -math.log1p(rho)
    log_mass[1:] = log_mass[0] + np.cumsum(log_ratios)
    return Pmf.from_log_weights(log_mass)


def mixture_pmf(m: int, k_weights: Sequence[float]) -> Pmf:
    """
    sum_k k_weights[k] * P_{m,k}, for k = 0 .. len(k_weights) - 1.

    The weights are a (possibly truncated) probe-count law; a truncation that
    leaves more than 1e-8 of mass behind is reported as a precision failure.
    """
    weights = np.asarray(k_weights, dtype=float)
    if weights.ndim != 1 or weights.size == 0 or np.any(weights < 0):
        raise ParameterError("k_weights must be a nonempty vector of nonnegative numbers")
    acc = np.zeros(m + 1)
    for w, pmf in zip(weights, distinct_type_pmf_sequence(m, weights.size - 1)):
        acc += w * pmf.mass
    with np.errstate(divide='ignore'):
        return Pmf.from_log_weights(np.log(acc))


def k_weights(k_pmf: Callable[[float, int], float], rho: float, k_max: int) -> np.ndarray:
    """[k_pmf(rho, k) for k = 0..k_max]."""
    return np.array([k_pmf(rho, k) for k in range(k_max + 1)])


def stationary_pmf_poisson_mixture(params: ModelParams, k_max: int = 200) -> Pmf:
    """Poisson-probing law rebuilt as the geometric mixture of P_{m,k}, truncated at k_max."""
    _require_all_at_once(params)
    return mixture_pmf(params.m, k_weights(k_pmf_poisson, params.rho, k_max))


def stationary_pmf_deterministic(params: ModelParams, tail: float = 1e-13) -> Pmf:
    """
    Stationary law of Y under constant-rate probing and all-at-once replacement.

    K = [beta T] is geometric with ratio e^(-1/rho); the mixture is truncated
    where P(K > k) = e^(-(k+1)/rho) drops below `tail`. Once P_{m,k} leaves
    less than SATURATION_SLACK outside state m, every later P_{m,j} is taken
    as the point mass at m and the remaining weight P(K > k) goes there, so
    large rho costs O(m log m) steps rather than O(rho).
    """
    _require_all_at_once(params)
    if not 0 < tail < 1e-8:
        raise ParameterError(f"tail must lie in (0, 1e-8), got {tail!r}")
    m, rho = params.m, params.rho
    k_max = max(1, math.ceil(rho * math.log(1.0 / tail)))
    acc = np.zeros(m + 1)
    for k, pmf in enumerate(distinct_type_pmf_sequence(m, k_max)):
        acc += k_pmf_deterministic(rho, k) * pmf.mass
        if math.fsum(pmf.mass[:m]) <= SATURATION_SLACK:
            acc[m] += math.exp(-(k + 1) / rho)
            logger.debug("deterministic-probing mixture saturated at k=%d", k)
            break
    else:
        logger.debug("deterministic-probing mixture truncated at k=%d", k_max)
    with np.errstate(divide='ignore'):
        return Pmf.from_log_weights(np.log(acc))


def not_found_threshold(m: int, fraction: float) -> int:
    """Largest Y with at least `fraction` of the m proxies still unknown."""
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"fraction must lie in (0, 1), got {fraction!r}")
    return math.floor((1.0 - fraction) * m + 1e-9)


def prob_fraction_not_found(params: ModelParams, fraction: float) -> float:
    """
    P(at least `fraction` of the m proxies are unknown) = P(Y <= floor((1 - fraction) m)).
    """
    return stationary_pmf_poisson(params).cdf(not_found_threshold(params.m, fraction))
