"""
Closed-form stationary means of the number Y of currently valid proxy
identities known to the botnet, and the probe-count laws behind them.

K denotes the number of probes in one replacement cycle T ~ exp(delta).
Every mean below is the expectation of Y just before a replacement; since
replacement epochs form a Poisson process this is also the time average.
"""
import math

from scipy import integrate

from ..errors import ParameterError, ValidityError
from .params import CltParams, ModelParams


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise ParameterError(f"rho must be > 0, got {rho!r}")


def k_pmf_deterministic(rho: float, k: int) -> float:
    """
    P(K = k) = e^(-k/rho) (1 - e^(-1/rho)) for constant-rate probing, K = [beta T].
    """
    _check_rho(rho)
    if k < 0:
        return 0.0
    return math.exp(-k / rho) * -math.expm1(-1.0 / rho)


def k_pmf_poisson(rho: float, k: int) -> float:
    """
    P(K = k) = (rho/(rho+1))^k / (rho+1) for Poisson probing.
    """
    _check_rho(rho)
    if k < 0:
        return 0.0
    return math.exp(k * math.log1p(-1.0 / (rho + 1.0))) / (rho + 1.0)


def mean_known_poisson(params: ModelParams) -> float:
    """
    Stationary mean under Poisson probing and all-at-once replacement:
    m rho / (m + rho).
    """
    m, rho = params.m, params.rho
    return m * rho / (m + rho)


def mean_known_deterministic(params: ModelParams) -> float:
    """
    Stationary mean under constant-rate probing and all-at-once replacement:
    1 / (e^(1/rho) - (1 - 1/m)).
    """
    return 1.0 / (math.expm1(1.0 / params.rho) + 1.0 / params.m)


def mean_known_periodic_stationary_phase(params: ModelParams) -> float:
    """
    Stationary mean for periodic probing whose phase is uniform relative to
    the replacement epochs.

    The first probe of a cycle then arrives after a uniform fraction of a
    period instead of a full period, which gives

        rho (1 - e^(-1/rho)) / (1 - (1 - 1/m) e^(-1/rho)),

    a factor rho (e^(1/rho) - 1) above mean_known_deterministic.
    """
    m, rho = params.m, params.rho
    q = math.exp(-1.0 / rho)
    return rho * -math.expm1(-1.0 / rho) / (1.0 - (1.0 - 1.0 / m) * q)


def mean_known_selective(params: ModelParams) -> float:
    """
    Stationary mean when each type is replaced with probability r at every
    replacement event: m rho / (r m + rho).
    """
    m, rho, r = params.m, params.rho, params.r
    return m * rho / (r * m + rho)


def conditional_mean_given_T(m: int, beta: float, T: float) -> float:
    """
    E[Y | T] = m (1 - e^(-beta T / m)) under Poisson probing over a cycle of length T.
    """
    if T < 0:
        raise ParameterError(f"T must be >= 0, got {T!r}")
    return -m * math.expm1(-beta * T / m)


def mean_known_poisson_quadrature(params: ModelParams, tol: float = 1e-9) -> float:
    """
    Average conditional_mean_given_T over T ~ exp(delta) by adaptive quadrature.

    The integral runs over [0, 40/delta]; the neglected tail is at most
    m e^(-40).
    """
    m, beta, delta = params.m, params.beta, params.delta

    def integrand(t: float) -> float:
        return conditional_mean_given_T(m, beta, t) * delta * math.exp(-delta * t)

    value, _ = integrate.quad(integrand, 0.0, 40.0 / delta,
                              epsabs=tol, epsrel=tol, limit=200)
    return value


def expected_y_after_k(m: int, k: int, y0: float) -> float:
    """
    E Y(k) = m (1 - (1 - 1/m)^k) + (1 - 1/m)^k y0 after k uniform selections
    starting from y0 known types.
    """
    if m < 1 or k < 0:
        raise ParameterError(f"need m >= 1 and k >= 0, got m={m}, k={k}")
    if not 0 <= y0 <= m:
        raise ParameterError(f"y0 must lie in [0, m], got {y0!r}")
    if m == 1:
        return 1.0 if k > 0 else float(y0)
    keep = math.exp(k * math.log1p(-1.0 / m))
    return m * (1.0 - keep) + keep * y0


def clt_mean_approx(params: CltParams) -> float:
    """
    Renewal-probing approximation m (1 - delta / (delta + beta v - sigma^2 beta^3 v^2 / 2)).

    Raises:
        ValidityError: unless 1/beta > sigma sqrt(v/2)
    """
    if not params.is_valid():
        raise ValidityError(
            f"CLT approximation needs 1/beta > sigma*sqrt(v/2); got "
            f"1/beta={1.0 / params.base.beta:g}, sigma={params.sigma:g}, v={params.v:g}"
        )
    m, beta, delta = params.base.m, params.base.beta, params.base.delta
    sigma, v = params.sigma, params.v
    denom = delta + beta * v - sigma ** 2 * beta ** 3 * v ** 2 / 2.0
    return m * (1.0 - delta / denom)
