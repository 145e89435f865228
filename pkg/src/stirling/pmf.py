"""
Probability mass functions on {0, ..., m} and the distinct-type distribution.

P_{m,k}(y) is the probability that k uniform selections among m coupon types
produce exactly y distinct types:

    P_{m,k}(y) = (m)_y {k brace y} / m^k,   1 <= y <= min(k, m).
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import ParameterError, PrecisionError
from .numbers import log_falling_factorials, log_stirling2_row, stirling2_row

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-10
RENORMALIZATION_TOLERANCE = 1e-8

# k * ln(m) above this switches distinct_type_pmf to log space
LOG_SPACE_THRESHOLD = 700.0


@dataclass(frozen=True, eq=False)
class Pmf:
    """
    A probability mass function on {0, ..., m}.

    Attributes:
        mass: Read-only vector of probabilities indexed by state
    """

    mass: np.ndarray

    def __post_init__(self):
        mass = np.array(self.mass, dtype=float)
        if mass.ndim != 1 or mass.size == 0:
            raise ParameterError("mass must be a nonempty vector")
        if np.any(mass < 0) or not np.all(np.isfinite(mass)):
            raise PrecisionError("pmf has negative or non-finite entries")
        total = math.fsum(mass)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise PrecisionError(f"pmf sums to {total!r}, not 1")
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_log_weights(cls, log_weights, *, check_total: bool = True,
                         tolerance: float = RENORMALIZATION_TOLERANCE) -> "Pmf":
        """
        Build a pmf by exponentiating log weights and renormalizing.

        Args:
            log_weights: ln of the unnormalized masses (-inf allowed)
            check_total: If True, the weights are expected to sum to 1 already
                and a renormalization factor further than `tolerance` from 1
                is treated as a precision failure
            tolerance: Allowed drift of the total from 1

        Raises:
            PrecisionError: if check_total and the total drifted too far
        """
        log_weights = np.asarray(log_weights, dtype=float)
        log_total = float(logsumexp(log_weights))
        if not math.isfinite(log_total):
            raise PrecisionError("log weights have no finite total")
        if check_total and abs(math.expm1(log_total)) > tolerance:
            raise PrecisionError(
                f"normalization factor {math.exp(log_total)!r} deviates from 1 "
                f"by more than {tolerance:g}"
            )
        mass = np.exp(log_weights - log_total)
        return cls(mass / math.fsum(mass))

    @classmethod
    def point_mass(cls, m: int, at: int) -> "Pmf":
        """Degenerate pmf on {0..m} concentrated at `at`."""
        mass = np.zeros(m + 1)
        mass[at] = 1.0
        return cls(mass)

    @property
    def m(self) -> int:
        """Upper end of the support."""
        return self.mass.size - 1

    def mean(self) -> float:
        return math.fsum(self.mass * np.arange(self.mass.size))

    def variance(self) -> float:
        states = np.arange(self.mass.size)
        mu = self.mean()
        return math.fsum(self.mass * (states - mu) ** 2)

    def cdf(self, ell: int) -> float:
        """P(Y <= ell)."""
        if ell < 0:
            return 0.0
        return min(1.0, math.fsum(self.mass[:ell + 1]))

    def mode(self) -> int:
        return int(np.argmax(self.mass))

    def rows(self) -> List[Tuple[int, float]]:
        """(ell, probability) pairs, for CSV output."""
        return [(ell, float(p)) for ell, p in enumerate(self.mass)]


def distinct_type_pmf(m: int, k: int) -> Pmf:
    """
    Distribution of the number of distinct types among k uniform selections.

    Uses exact integer arithmetic while m^k stays within float range
    (k ln m <= 700) and log space beyond.

    Args:
        m: Number of coupon types, m >= 1
        k: Number of selections, k >= 0

    Returns:
        Pmf on {0, ..., m}
    """
    if m < 1 or k < 0:
        raise ParameterError(f"need m >= 1 and k >= 0, got m={m}, k={k}")
    if k == 0:
        return Pmf.point_mass(m, 0)

    top = min(k, m)
    if k * math.log(m) <= LOG_SPACE_THRESHOLD:
        row = stirling2_row(k, top)
        m_pow_k = m ** k
        mass = np.zeros(m + 1)
        falling = 1
        for y in range(1, top + 1):
            falling *= m - y + 1
            # int / int division is correctly rounded
            mass[y] = falling * row[y] / m_pow_k
        pmf = Pmf(mass)
    else:
        log_mass = np.full(m + 1, -np.inf)
        log_mass[1:top + 1] = (
            log_falling_factorials(m, top)[1:]
            + log_stirling2_row(k, top)[1:]
            - k * math.log(m)
        )
        pmf = Pmf.from_log_weights(log_mass)

    if k == m:
        logger.info("P_{%d,%d}: mode %d sits %.1f%% below m",
                    m, k, pmf.mode(), 100.0 * (m - pmf.mode()) / m)
    return pmf


def distinct_type_pmf_sequence(m: int, k_max: int) -> Iterator[Pmf]:
    """
    Yield P_{m,0}, P_{m,1}, ..., P_{m,k_max}.

    Each step applies one uniform selection: from y distinct types the next
    selection is new with probability (m - y)/m.
    """
    if m < 1 or k_max < 0:
        raise ParameterError(f"need m >= 1 and k_max >= 0, got m={m}, k_max={k_max}")
    states = np.arange(m + 1)
    stay = states / m
    advance = (m - states) / m
    current = np.zeros(m + 1)
    current[0] = 1.0
    for k in range(k_max + 1):
        yield Pmf(current)
        nxt = current * stay
        nxt[1:] += current[:-1] * advance[:-1]
        current = nxt
