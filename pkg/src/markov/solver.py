"""
Stationary distributions of the generators in this package.
"""
import logging
import warnings

import numpy as np
from scipy import linalg, stats

from ..analytic.params import ModelParams
from ..errors import SingularityError
from ..stirling import Pmf
from .generator import Generator

logger = logging.getLogger(__name__)

NEGATIVE_CLAMP = 1e-12


def stationary_distribution(g: Generator) -> Pmf:
    """
    Solve pi^T Q = 0 with sum(pi) = 1.

    The last balance equation is replaced by the normalization row and the
    dense system is solved directly. Entries in [-1e-12, 0) are rounded to
    zero.

    Raises:
        SingularityError: if the system is singular or ill-conditioned, or a
            component comes out below -1e-12
    """
    n = g.m + 1
    a = g.rates.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0

    with warnings.catch_warnings():
        warnings.simplefilter('error', linalg.LinAlgWarning)
        try:
            pi = linalg.solve(a, b)
        except (linalg.LinAlgError, linalg.LinAlgWarning) as e:
            raise SingularityError(f"balance equations are rank-deficient: {e}") from e

    if not np.all(np.isfinite(pi)):
        raise SingularityError("stationary vector has non-finite entries")
    if pi.min() < -NEGATIVE_CLAMP:
        raise SingularityError(f"stationary vector has entry {pi.min()!r} < 0")
    pi = np.where(pi < 0, 0.0, pi)
    return Pmf(pi / pi.sum())


def birth_death_closed_form(params: ModelParams) -> Pmf:
    """
    pi(k) = pi(0) C(m, k) (rho/m)^k, i.e. Binomial(m, rho/(m + rho)),
    evaluated through the binomial log-pmf.
    """
    m, rho = params.m, params.rho
    p = rho / (m + rho)
    log_mass = stats.binom.logpmf(np.arange(m + 1), m, p)
    return Pmf.from_log_weights(log_mass)
