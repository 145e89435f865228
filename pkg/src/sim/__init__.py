"""Discrete-event and direct Monte Carlo simulation of proxy reconnaissance."""
from .config import KNOWN_KEYS, ScenarioConfig, apply_overrides, load_scenario, parse_flat_yaml
from .engine import (
    ProxyBank,
    ReplicationOutcome,
    SimResult,
    TraceEvent,
    empirical_stationary_pmf,
    pasta_check,
    run_replication,
    run_scenario,
)
from .montecarlo import estimate_prob_fraction_not_found, sample_cycle_end_known
from .policies import (
    AllAtOnce,
    PerBotDeterministic,
    PerBotExponential,
    PerBotTruncGaussian,
    PerProxyIndependent,
    PoissonAggregate,
    RoundRobin,
    Selective,
    UniformRandom,
)
from .sampling import BalancerState, assign_proxy, sample_interprobe, sample_trunc_gaussian

__all__ = [
    'ScenarioConfig', 'load_scenario', 'parse_flat_yaml', 'apply_overrides', 'KNOWN_KEYS',
    'SimResult', 'ReplicationOutcome', 'TraceEvent', 'ProxyBank',
    'run_scenario', 'run_replication', 'empirical_stationary_pmf', 'pasta_check',
    'sample_cycle_end_known', 'estimate_prob_fraction_not_found',
    'PoissonAggregate', 'PerBotExponential', 'PerBotDeterministic', 'PerBotTruncGaussian',
    'AllAtOnce', 'Selective', 'PerProxyIndependent', 'UniformRandom', 'RoundRobin',
    'BalancerState', 'assign_proxy', 'sample_interprobe', 'sample_trunc_gaussian',
]
