"""
Random variates for the simulator: inter-probe gaps and proxy assignment.
"""
import numpy as np

from ..errors import SamplingError
from .policies import (
    AssignmentPolicy,
    PerBotDeterministic,
    PerBotExponential,
    PerBotTruncGaussian,
    PoissonAggregate,
    ProbingProcess,
    RoundRobin,
    UniformRandom,
)

MAX_REJECTIONS = 1_000_000


def sample_trunc_gaussian(mean: float, sd: float, floor: float, rng: np.random.Generator) -> float:
    """
    Draw Normal(mean, sd^2) conditioned on the value being >= floor.

    Plain rejection: cheap whenever floor sits well below the mean.

    Raises:
        SamplingError: after MAX_REJECTIONS consecutive rejections
    """
    if sd == 0:
        return float(mean)
    for _ in range(MAX_REJECTIONS):
        x = rng.normal(mean, sd)
        if x >= floor:
            return float(x)
    raise SamplingError(
        f"no draw >= {floor} from Normal({mean}, {sd}^2) in {MAX_REJECTIONS} tries"
    )


def sample_interprobe(p: ProbingProcess, rng: np.random.Generator) -> float:
    """
    Time from one probe of a stream to its next probe.

    For PoissonAggregate the stream is the whole botnet; every other variant
    describes a single bot.
    """
    if isinstance(p, PoissonAggregate):
        return float(rng.exponential(1.0 / p.beta))
    if isinstance(p, PerBotExponential):
        return float(rng.exponential(p.mean_interprobe))
    if isinstance(p, PerBotDeterministic):
        return p.period
    if isinstance(p, PerBotTruncGaussian):
        return sample_trunc_gaussian(p.mean_interprobe, p.kappa * p.mean_interprobe,
                                     p.floor, rng)
    raise TypeError(f"unknown probing process {p!r}")


def sample_first_probe(p: ProbingProcess, rng: np.random.Generator) -> float:
    """
    Delay before a stream's first probe.

    Exponential streams are memoryless; periodic bots start at a uniform
    phase within one period; Gaussian bots start a uniform fraction into
    their first gap so that bots do not move in lockstep.
    """
    if isinstance(p, PerBotDeterministic):
        return float(rng.uniform(0.0, p.period))
    if isinstance(p, PerBotTruncGaussian):
        return float(rng.uniform()) * sample_interprobe(p, rng)
    return sample_interprobe(p, rng)


class BalancerState:
    """
    Load-balancer state seen by the assignment policy.

    Attributes:
        m: Number of proxies
        cursor: Next proxy slot (0-based) for round-robin assignment
    """

    def __init__(self, m: int):
        self.m = m
        self.cursor = 0

    def advance(self) -> int:
        """Hand the current slot to a session request and move the cursor on."""
        slot = self.cursor
        self.cursor = (self.cursor + 1) % self.m
        return slot


def assign_proxy(policy: AssignmentPolicy, state: BalancerState, rng: np.random.Generator) -> int:
    """
    Pick the proxy slot (0-based, in range(m)) a bot's probe is sent to.

    Round-robin hands out the shared cursor position; nominal client arrivals
    advance the same cursor through BalancerState.advance.
    """
    if isinstance(policy, UniformRandom):
        return int(rng.integers(state.m))
    if isinstance(policy, RoundRobin):
        return state.advance()
    raise TypeError(f"unknown assignment policy {policy!r}")
