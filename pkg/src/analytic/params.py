"""
Model parameters shared by the analytic, Markov and simulation layers.
"""
import math
from dataclasses import dataclass, field

from ..errors import ParameterError


@dataclass(frozen=True)
class ModelParams:
    """
    The tuple (m, beta, delta, r) with derived rho = beta / delta.

    Attributes:
        m: Number of proxies (coupon types)
        beta: Aggregate probe rate
        delta: Replacement-event rate
        r: Per-type replacement probability at each replacement event
        rho: beta / delta, the expected number of probes per replacement cycle
    """

    m: int
    beta: float
    delta: float
    r: float = 1.0
    rho: float = field(init=False)

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be an integer >= 1, got {self.m!r}")
        for name in ('beta', 'delta'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
        if not 0.0 <= self.r <= 1.0:
            raise ParameterError(f"r must lie in [0, 1], got {self.r!r}")
        object.__setattr__(self, 'm', int(self.m))
        object.__setattr__(self, 'rho', self.beta / self.delta)

    @classmethod
    def from_rho(cls, m: int, rho: float, delta: float = 1.0, r: float = 1.0) -> "ModelParams":
        """Build parameters from rho with a chosen time scale delta."""
        return cls(m=m, beta=rho * delta, delta=delta, r=r)


@dataclass(frozen=True)
class CltParams:
    """
    Renewal-probing parameters for the central-limit approximation.

    Attributes:
        base: Model parameters
        sigma: Standard deviation of the inter-probe time
        v: -ln(1 - 1/m)
    """

    base: ModelParams
    sigma: float
    v: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ParameterError(f"sigma must be finite and >= 0, got {self.sigma!r}")
        if self.base.m < 2:
            raise ParameterError("the CLT approximation needs m >= 2")
        object.__setattr__(self, 'v', -math.log1p(-1.0 / self.base.m))

    def is_valid(self) -> bool:
        """Whether 1/beta > sigma * sqrt(v / 2)."""
        return 1.0 / self.base.beta > self.sigma * math.sqrt(self.v / 2.0)
