"""
Probing, replacement and assignment policies for the simulator.

Each policy family is a small set of frozen dataclasses; the `kind` string of
each variant is the value used for it in scenario files.
"""
import math
from dataclasses import dataclass
from typing import Union

from ..errors import ConfigError


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be finite and > 0, got {value!r}")


def _count(name: str, value: int) -> None:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")


# Probing processes

@dataclass(frozen=True)
class PoissonAggregate:
    """All bots together probe as one Poisson process of rate beta."""

    beta: float
    kind = "poisson"

    def __post_init__(self):
        _positive("probing rate beta", self.beta)

    @property
    def streams(self) -> int:
        return 1

    @property
    def aggregate_rate(self) -> float:
        return self.beta


@dataclass(frozen=True)
class PerBotExponential:
    """Each bot probes after exponential gaps with the given mean."""

    n_bots: int
    mean_interprobe: float
    kind = "exponential"

    def __post_init__(self):
        _count("n_bots", self.n_bots)
        _positive("mean inter-probe time", self.mean_interprobe)

    @property
    def streams(self) -> int:
        return self.n_bots

    @property
    def aggregate_rate(self) -> float:
        return self.n_bots / self.mean_interprobe


@dataclass(frozen=True)
class PerBotDeterministic:
    """Each bot probes every `period`, starting at a uniform random phase."""

    n_bots: int
    period: float
    kind = "deterministic"

    def __post_init__(self):
        _count("n_bots", self.n_bots)
        _positive("probing period", self.period)

    @property
    def streams(self) -> int:
        return self.n_bots

    @property
    def aggregate_rate(self) -> float:
        return self.n_bots / self.period


@dataclass(frozen=True)
class PerBotTruncGaussian:
    """
    Each bot probes after Normal(mean, (kappa * mean)^2) gaps conditioned on
    being at least `floor`.
    """

    n_bots: int
    mean_interprobe: float
    kappa: float
    floor: float = 2.0
    kind = "truncgauss"

    def __post_init__(self):
        _count("n_bots", self.n_bots)
        _positive("mean inter-probe time", self.mean_interprobe)
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise ConfigError(f"kappa must be finite and >= 0, got {self.kappa!r}")
        if not (math.isfinite(self.floor) and 0 <= self.floor < self.mean_interprobe):
            raise ConfigError(
                f"floor must lie in [0, mean inter-probe time), got {self.floor!r}"
            )

    @property
    def streams(self) -> int:
        return self.n_bots

    @property
    def aggregate_rate(self) -> float:
        return self.n_bots / self.mean_interprobe


ProbingProcess = Union[PoissonAggregate, PerBotExponential, PerBotDeterministic, PerBotTruncGaussian]


# Replacement policies

@dataclass(frozen=True)
class AllAtOnce:
    """Every proxy identity changes at each event of a rate-delta Poisson process."""

    delta: float
    kind = "all"

    def __post_init__(self):
        _positive("replacement rate delta", self.delta)


@dataclass(frozen=True)
class Selective:
    """At each rate-delta event every proxy changes independently with probability r."""

    delta: float
    r: float
    kind = "selective"

    def __post_init__(self):
        _positive("replacement rate delta", self.delta)
        if not 0.0 <= self.r <= 1.0:
            raise ConfigError(f"r must lie in [0, 1], got {self.r!r}")


@dataclass(frozen=True)
class PerProxyIndependent:
    """Each proxy changes on its own rate-delta Poisson clock."""

    delta: float
    kind = "independent"

    def __post_init__(self):
        _positive("replacement rate delta", self.delta)


ReplacementPolicy = Union[AllAtOnce, Selective, PerProxyIndependent]


# Assignment policies

@dataclass(frozen=True)
class UniformRandom:
    """The load balancer sends each session request to a uniformly random proxy."""

    kind = "uniform"


@dataclass(frozen=True)
class RoundRobin:
    """
    The load balancer cycles through the proxies; nominal clients arrive as a
    Poisson stream and advance the same cursor.
    """

    nominal_client_rate: float = 0.0
    kind = "roundrobin"

    def __post_init__(self):
        if not (math.isfinite(self.nominal_client_rate) and self.nominal_client_rate >= 0):
            raise ConfigError(
                f"nominal client rate must be finite and >= 0, got {self.nominal_client_rate!r}"
            )


AssignmentPolicy = Union[UniformRandom, RoundRobin]

PROBING_KINDS = {cls.kind: cls for cls in
                 (PoissonAggregate, PerBotExponential, PerBotDeterministic, PerBotTruncGaussian)}
REPLACEMENT_KINDS = {cls.kind: cls for cls in (AllAtOnce, Selective, PerProxyIndependent)}
ASSIGNMENT_KINDS = {cls.kind: cls for cls in (UniformRandom, RoundRobin)}
