"""
Stirling numbers of the second kind.

{k brace y} counts the partitions of a k-set into y nonempty blocks. Exact
values use Python integers and the additive recurrence
{k brace y} = y {k-1 brace y} + {k-1 brace y-1}; the alternating-sum formula
is kept as a cross-check only, since it cancels catastrophically in floating
point. Log-space and asymptotic forms serve the large-k probability code.
"""
import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import special

from ..errors import ParameterError

logger = logging.getLogger(__name__)

# Largest k for which log_stirling2 goes through exact big integers.
EXACT_LOG_LIMIT = 400

# The fixed-y asymptotic form is used once its dropped correction,
# y * ((y-1)/y)**k, is below this relative size.
ASYMPTOTIC_TOLERANCE = 1e-17


class StirlingTable:
    """
    Immutable triangular table of {k brace y} for 0 <= y <= k <= max_k.

    Attributes:
        max_k: Largest row index held
    """

    def __init__(self, max_k: int):
        if max_k < 0:
            raise ParameterError(f"max_k must be >= 0, got {max_k}")
        self.max_k = max_k
        rows: List[Tuple[int, ...]] = [(1,)]
        for k in range(1, max_k + 1):
            prev = rows[-1]
            row = [0] * (k + 1)
            for y in range(1, k + 1):
                above = prev[y] if y < k else 0
                row[y] = y * above + prev[y - 1]
            rows.append(tuple(row))
        self._rows: Tuple[Tuple[int, ...], ...] = tuple(rows)

    def entry(self, k: int, y: int) -> int:
        """Return {k brace y}; zero outside the triangle."""
        if not 0 <= k <= self.max_k:
            raise ParameterError(f"row {k} outside table (max_k={self.max_k})")
        if y < 0 or y > k:
            return 0
        return self._rows[k][y]

    def row(self, k: int) -> Tuple[int, ...]:
        """Return the full row ({k brace 0}, ..., {k brace k})."""
        if not 0 <= k <= self.max_k:
            raise ParameterError(f"row {k} outside table (max_k={self.max_k})")
        return self._rows[k]

    def column(self, y: int) -> List[int]:
        """Return [{k brace y} for k = 0..max_k]."""
        return [self.entry(k, y) for k in range(self.max_k + 1)]


def _check_nonnegative(k: int, y: int) -> None:
    if k < 0 or y < 0:
        raise ParameterError(f"k and y must be nonnegative, got k={k}, y={y}")


@lru_cache(maxsize=256)
def stirling2_row(k: int, y_max: Optional[int] = None) -> Tuple[int, ...]:
    """
    Exact row ({k brace 0}, ..., {k brace top}) by the additive recurrence.

    Entries above y_max never feed the ones below it, so a bounded row costs
    O(k * y_max) instead of O(k^2).

    Args:
        k: Row index, k >= 0
        y_max: Last entry to compute; defaults to k. top = min(k, y_max)

    Returns:
        Tuple of top + 1 nonnegative integers
    """
    _check_nonnegative(k, 0 if y_max is None else y_max)
    top = k if y_max is None else min(k, y_max)
    row = [1] + [0] * top
    for n in range(1, k + 1):
        # descending j keeps row[j - 1] at its previous-row value
        for j in range(min(n, top), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return tuple(row)


def stirling2_exact(k: int, y: int) -> int:
    """
    Exact Stirling number of the second kind, 0 when y > k.

    Examples:
        >>> stirling2_exact(4, 2)
        7
    """
    _check_nonnegative(k, y)
    if y > k:
        return 0
    if y == 0:
        return 1 if k == 0 else 0
    if y == 1 or y == k:
        return 1
    return stirling2_row(k, y)[y]


def stirling2_alternating(k: int, y: int) -> int:
    """
    {k brace y} = (1/y!) sum_j (-1)^(y-j) C(y, j) j^k, in exact integers.

    Only meant for small arguments; used to cross-check the recurrence.
    """
    _check_nonnegative(k, y)
    if y > k:
        return 0
    total = sum((-1) ** (y - j) * math.comb(y, j) * j ** k for j in range(y + 1))
    value, remainder = divmod(total, math.factorial(y))
    assert remainder == 0
    return value


def log_factorial(n: int) -> float:
    """ln(n!) through the log-gamma function."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return float(special.gammaln(n + 1))


def log_falling_factorials(m: int, ell_max: int) -> np.ndarray:
    """
    Vector of ln (m)_ell for ell = 0..ell_max, where (m)_ell = m(m-1)...(m-ell+1).

    Entries with ell > m are -inf.
    """
    if m < 0 or ell_max < 0:
        raise ParameterError(f"m and ell_max must be >= 0, got m={m}, ell_max={ell_max}")
    out = np.full(ell_max + 1, -np.inf)
    out[0] = 0.0
    top = min(ell_max, m)
    if top > 0:
        out[1:top + 1] = np.cumsum(np.log(np.arange(m, m - top, -1, dtype=float)))
    return out


def log_falling_factorial(m: int, ell: int) -> float:
    """ln (m)_ell; -inf when ell > m."""
    return float(log_falling_factorials(m, ell)[ell])


def stirling2_asymptotic_fixed_y(k: int, y: int) -> float:
    """
    Log of the fixed-y asymptotic form {k brace y} ~ y^k / y!.

    Returns:
        k ln(y) - ln(y!)
    """
    if y < 1:
        raise ParameterError(f"y must be >= 1, got {y}")
    return k * math.log(y) - log_factorial(y)


def _asymptotic_correction(k: int, y: int) -> float:
    if y == 1:
        return 0.0
    return y * math.exp(k * math.log1p(-1.0 / y))


def log_stirling2_row(k: int, y_max: int) -> np.ndarray:
    """
    ln {k brace y} for y = 0..y_max via the log-space recurrence.

    Zero entries come out as -inf.
    """
    _check_nonnegative(k, y_max)
    logs = np.full(y_max + 1, -np.inf)
    logs[0] = 0.0
    if y_max == 0:
        return logs if k == 0 else np.full(1, -np.inf)

    log_j = np.log(np.arange(1, y_max + 1, dtype=float))
    for n in range(1, k + 1):
        top = min(n, y_max)
        new = np.full(y_max + 1, -np.inf)
        with np.errstate(invalid="ignore"):
            new[1:top + 1] = np.logaddexp(log_j[:top] + logs[1:top + 1], logs[:top])
        logs = new
    return logs


def log_stirling2(k: int, y: int) -> float:
    """
    Natural log of {k brace y}.

    Small k goes through exact integers; large k with a negligible
    asymptotic correction uses the fixed-y form; everything else runs the
    log-space recurrence.

    Raises:
        ParameterError: if y > k, or y = 0 with k > 0 (the value is zero)
    """
    _check_nonnegative(k, y)
    if y > k or (y == 0 and k > 0):
        raise ParameterError(f"ln {{{k} brace {y}}} is undefined (value is zero)")
    if y == k or y == 1:
        return 0.0
    if k <= EXACT_LOG_LIMIT:
        return math.log(stirling2_exact(k, y))
    if _asymptotic_correction(k, y) < ASYMPTOTIC_TOLERANCE:
        return stirling2_asymptotic_fixed_y(k, y)
    logger.debug("log-space recurrence for {%d brace %d}", k, y)
    return float(log_stirling2_row(k, y)[y])


def stirling_power_series(ell: int, x: float, terms: int) -> float:
    """
    Partial sum sum_{k=0}^{terms} {k brace ell} x^(k+1).

    Converges for |x| < 1/ell to stirling_power_series_limit(ell, x).
    """
    if ell < 0 or terms < 0:
        raise ParameterError("ell and terms must be nonnegative")
    column = StirlingTable(terms).column(ell)
    return math.fsum(float(s) * x ** (k + 1) for k, s in enumerate(column) if s)


def stirling_power_series_limit(ell: int, x: float) -> float:
    """
    1 / (1/x)_(ell+1), with (a)_n = a(a-1)...(a-n+1).
    """
    a = 1.0 / x
    denom = 1.0
    for j in range(ell + 1):
        denom *= a - j
    return 1.0 / denom
