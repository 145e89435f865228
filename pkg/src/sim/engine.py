"""
Discrete-event simulation of a botnet probing m moving-target proxies.

Each replication is a simpy environment with its own random stream. Proxy
identities are tracked abstractly: proxy slot i (0-based) carries a
generation counter that is bumped whenever its identity changes, and the
botnet's knowledge is the set of slots whose current generation it has
seen. Y is the size of that set.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import simpy
from scipy import stats

from ..errors import ParameterError
from ..stirling.pmf import Pmf
from .config import MIN_RECOMMENDED_REPLICATIONS, ScenarioConfig
from .policies import AllAtOnce, PerProxyIndependent, RoundRobin, Selective
from .sampling import BalancerState, assign_proxy, sample_first_probe, sample_interprobe

logger = logging.getLogger(__name__)

MIN_STATIONARY_CYCLES = 1000
CONFIDENCE_LEVEL = 0.95


@dataclass(frozen=True)
class TraceEvent:
    """
    One event of replication 0.

    Attributes:
        t: Event time
        kind: "probe", "replace", "replace-selective" or "replace-all"
        slot: Proxy slot (0-based); None when a replacement event covers
            every proxy
        generation: Identity generation of the slot after the event
        known: Y after the event
    """

    t: float
    kind: str
    slot: Optional[int]
    generation: Optional[int]
    known: int


@dataclass
class ReplicationOutcome:
    """Raw measurements of a single replication."""

    time_avg_known: float
    occupancy: np.ndarray
    trajectory: np.ndarray
    running_average: np.ndarray
    epoch_samples: np.ndarray
    replacements: int
    probes: int
    trace: List[TraceEvent] = field(default_factory=list)


@dataclass
class SimResult:
    """
    Measurements aggregated over all replications.

    Attributes:
        time_avg_known: Mean over replications of the time-weighted mean of Y
            on [warmup, horizon]
        trajectory: (t, Y) samples of replication 0, shape (n, 2)
        running_average: (t, mean over replications of the average of Y on
            [0, t]), shape (n, 2)
        epoch_samples: Y just before each replacement inside the window,
            all replications concatenated
        empirical_pmf: Pooled time-weighted occupancy of each state
        ci_halfwidth: 95% half-width of time_avg_known across replications;
            nan with a single replication
        replication_means: time_avg_known of each replication
        epoch_means: Mean epoch sample of each replication, nan where a
            replication saw no replacement
        epoch_ci_halfwidth: 95% half-width of the epoch average
        replacements: Replacement events over all replications
        probes: Probes over all replications
        config: The scenario that produced this result
        trace: First events of replication 0, up to config.trace_limit
    """

    time_avg_known: float
    trajectory: np.ndarray
    running_average: np.ndarray
    epoch_samples: np.ndarray
    empirical_pmf: Pmf
    ci_halfwidth: float
    replication_means: np.ndarray
    epoch_means: np.ndarray
    epoch_ci_halfwidth: float
    replacements: int
    probes: int
    config: ScenarioConfig
    trace: List[TraceEvent] = field(default_factory=list)

    @property
    def fraction_known(self) -> float:
        return self.time_avg_known / self.config.params.m

    def epoch_average(self) -> Optional[float]:
        """Mean of all epoch samples; None when no replacement was observed."""
        if self.epoch_samples.size == 0:
            return None
        return float(np.mean(self.epoch_samples))


class ProxyBank:
    """
    Proxy identities and the botnet's knowledge of them, with occupancy
    accounting of Y over time.
    """

    def __init__(self, env: simpy.Environment, m: int, warmup: float, horizon: float,
                 trace_limit: int = 0):
        self.env = env
        self.m = m
        self.warmup = warmup
        self.horizon = horizon
        self.generation = np.zeros(m, dtype=np.int64)
        self.known: Dict[int, int] = {}
        self.occupancy = np.zeros(m + 1)
        self.integral = 0.0
        self.last_change = 0.0
        self.trace: List[TraceEvent] = []
        self.trace_limit = trace_limit
        self.probes = 0
        self.replacements = 0
        self.epoch_samples: List[int] = []

    @property
    def y(self) -> int:
        return len(self.known)

    def _account(self) -> None:
        """Credit the time since the last change to the current Y."""
        now = self.env.now
        y = self.y
        self.integral += y * (now - self.last_change)
        start = max(self.last_change, self.warmup)
        if now > start:
            self.occupancy[y] += now - start
        self.last_change = now

    def running_integral(self, t: float) -> float:
        """Integral of Y over [0, t] for t at or after the last change."""
        return self.integral + self.y * (t - self.last_change)

    def _record(self, kind: str, slot: Optional[int]) -> None:
        if len(self.trace) < self.trace_limit:
            generation = None if slot is None else int(self.generation[slot])
            self.trace.append(TraceEvent(self.env.now, kind, slot, generation, self.y))

    def _observe_epoch(self) -> None:
        self.replacements += 1
        if self.warmup <= self.env.now <= self.horizon:
            self.epoch_samples.append(self.y)

    def probe(self, slot: int) -> None:
        """A probe reveals the current identity of `slot`."""
        self.probes += 1
        if slot not in self.known:
            self._account()
            self.known[slot] = int(self.generation[slot])
        self._record("probe", slot)

    def replace_all(self) -> None:
        self._observe_epoch()
        self._account()
        self.generation += 1
        self.known.clear()
        self._record("replace-all", None)

    def replace_selected(self, changed: np.ndarray) -> None:
        """Change the identities of the slots flagged in `changed`."""
        self._observe_epoch()
        self._account()
        self.generation[changed] += 1
        for slot in np.flatnonzero(changed):
            self.known.pop(int(slot), None)
        self._record("replace-selective", None)

    def replace_one(self, slot: int) -> None:
        self._observe_epoch()
        self._account()
        self.generation[slot] += 1
        self.known.pop(slot, None)
        self._record("replace", slot)

    def close(self) -> None:
        """Finish accounting at the horizon."""
        self._account()


def _probe_stream(env, bank, cfg, balancer, rng):
    yield env.timeout(sample_first_probe(cfg.probing, rng))
    while True:
        bank.probe(assign_proxy(cfg.assignment, balancer, rng))
        yield env.timeout(sample_interprobe(cfg.probing, rng))


def _nominal_clients(env, balancer, rate, rng):
    while True:
        yield env.timeout(rng.exponential(1.0 / rate))
        balancer.advance()


def _shared_replacement(env, bank, policy, rng):
    while True:
        yield env.timeout(rng.exponential(1.0 / policy.delta))
        if isinstance(policy, Selective):
            bank.replace_selected(rng.random(bank.m) < policy.r)
        else:
            bank.replace_all()


def _proxy_clock(env, bank, slot, delta, rng):
    while True:
        yield env.timeout(rng.exponential(1.0 / delta))
        bank.replace_one(slot)


def _sample_grid(cfg: ScenarioConfig) -> np.ndarray:
    interval = cfg.sample_interval
    steps = int(math.floor(cfg.horizon / interval + 1e-9))
    return np.arange(steps + 1) * interval


def _sampler(env, bank, grid, trajectory, running):
    for t in grid:
        if t >= bank.horizon:
            return
        yield env.timeout(t - env.now)
        trajectory.append(bank.y)
        running.append(bank.running_integral(t) / t if t > 0 else float(bank.y))


def run_replication(cfg: ScenarioConfig, seed: np.random.SeedSequence,
                    trace_limit: int = 0) -> ReplicationOutcome:
    """
    Run one replication of the scenario on its own random stream.

    Args:
        cfg: Scenario
        seed: Stream for this replication
        trace_limit: Number of events to keep as a trace
    """
    rng = np.random.default_rng(seed)
    env = simpy.Environment()
    m = cfg.params.m
    bank = ProxyBank(env, m, cfg.warmup, cfg.horizon, trace_limit)
    balancer = BalancerState(m)

    for _ in range(cfg.probing.streams):
        env.process(_probe_stream(env, bank, cfg, balancer, rng))
    if isinstance(cfg.assignment, RoundRobin) and cfg.assignment.nominal_client_rate > 0:
        env.process(_nominal_clients(env, balancer, cfg.assignment.nominal_client_rate, rng))
    if isinstance(cfg.replacement, PerProxyIndependent):
        for slot in range(m):
            env.process(_proxy_clock(env, bank, slot, cfg.replacement.delta, rng))
    else:
        env.process(_shared_replacement(env, bank, cfg.replacement, rng))

    grid = _sample_grid(cfg)
    trajectory: List[int] = []
    running: List[float] = []
    env.process(_sampler(env, bank, grid, trajectory, running))

    env.run(until=cfg.horizon)
    bank.close()
    # grid points at the horizon itself see the final state
    while len(trajectory) < grid.size:
        trajectory.append(bank.y)
        running.append(bank.integral / cfg.horizon)

    window = cfg.horizon - cfg.warmup
    return ReplicationOutcome(
        time_avg_known=float(np.dot(np.arange(m + 1), bank.occupancy) / window),
        occupancy=bank.occupancy,
        trajectory=np.column_stack([grid, trajectory]),
        running_average=np.column_stack([grid, running]),
        epoch_samples=np.asarray(bank.epoch_samples, dtype=np.int64),
        replacements=bank.replacements,
        probes=bank.probes,
        trace=bank.trace,
    )


def _run_indexed(args: Tuple[ScenarioConfig, np.random.SeedSequence, int]) -> ReplicationOutcome:
    cfg, seed, index = args
    return run_replication(cfg, seed, cfg.trace_limit if index == 0 else 0)


def _ci_halfwidth(values: np.ndarray) -> float:
    values = values[np.isfinite(values)]
    if values.size < 2:
        return math.nan
    z = stats.norm.ppf(0.5 + CONFIDENCE_LEVEL / 2.0)
    return float(z * np.std(values, ddof=1) / math.sqrt(values.size))


def aggregate(cfg: ScenarioConfig, outcomes: List[ReplicationOutcome]) -> SimResult:
    """Reduce replication outcomes, in replication order, to a SimResult."""
    means = np.array([o.time_avg_known for o in outcomes])
    epoch_means = np.array([
        float(np.mean(o.epoch_samples)) if o.epoch_samples.size else math.nan
        for o in outcomes
    ])
    occupancy = np.sum([o.occupancy for o in outcomes], axis=0)
    running = outcomes[0].running_average.copy()
    running[:, 1] = np.mean([o.running_average[:, 1] for o in outcomes], axis=0)

    return SimResult(
        time_avg_known=float(np.mean(means)),
        trajectory=outcomes[0].trajectory,
        running_average=running,
        epoch_samples=np.concatenate([o.epoch_samples for o in outcomes]),
        empirical_pmf=Pmf(occupancy / math.fsum(occupancy)),
        ci_halfwidth=_ci_halfwidth(means),
        replication_means=means,
        epoch_means=epoch_means,
        epoch_ci_halfwidth=_ci_halfwidth(epoch_means),
        replacements=sum(o.replacements for o in outcomes),
        probes=sum(o.probes for o in outcomes),
        config=cfg,
        trace=outcomes[0].trace,
    )


def run_scenario(cfg: ScenarioConfig) -> SimResult:
    """
    Run all replications of a scenario and aggregate them.

    Replication i draws from stream i spawned off SeedSequence(cfg.seed), so
    the result does not depend on cfg.workers.
    """
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)
    jobs = [(cfg, seed, i) for i, seed in enumerate(seeds)]
    logger.info("running %d replications of m=%d rho=%g over %g time units on %d worker(s)",
                cfg.replications, cfg.params.m, cfg.params.rho, cfg.horizon, cfg.workers)
    if cfg.workers > 1 and cfg.replications > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, cfg.replications)) as pool:
            outcomes = list(pool.map(_run_indexed, jobs))
    else:
        outcomes = [_run_indexed(job) for job in jobs]

    result = aggregate(cfg, outcomes)
    if cfg.replications < MIN_RECOMMENDED_REPLICATIONS:
        logger.warning("confidence interval from %d replications is unreliable; "
                       "at least %d are recommended",
                       cfg.replications, MIN_RECOMMENDED_REPLICATIONS)
    logger.info("time-average known %.4f (%.2f%% of m) +/- %.4f",
                result.time_avg_known, 100.0 * result.fraction_known, result.ci_halfwidth)
    return result


def empirical_stationary_pmf(result: SimResult) -> Pmf:
    """
    Time-weighted occupancy fraction of each Y in the measurement window.

    Logs a warning when the window covers fewer than 1000 replacement
    cycles on average.
    """
    cycles = result.config.expected_cycles
    if cycles < MIN_STATIONARY_CYCLES:
        logger.warning("measurement window spans %.0f replacement cycles, fewer than %d; "
                       "the empirical pmf may be far from stationary",
                       cycles, MIN_STATIONARY_CYCLES)
    return result.empirical_pmf


def pasta_check(result: SimResult) -> Tuple[float, Optional[float]]:
    """
    Time average of Y against the average seen just before replacements.

    Returns:
        (time average, epoch average); the epoch average is None when no
        replacement fell inside the measurement window

    Raises:
        ParameterError: unless replacement is all-at-once
    """
    if not isinstance(result.config.replacement, AllAtOnce):
        raise ParameterError("pasta_check needs all-at-once replacement")
    return result.time_avg_known, result.epoch_average()
