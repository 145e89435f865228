"""
Desk-scale reproductions of the reference tables and figures.

Each builder returns (file name, header, rows, parameters); the caller
writes the CSV and its manifest.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence, Tuple

from ..analytic import (
    ModelParams,
    mean_known_deterministic,
    mean_known_poisson,
    prob_fraction_not_found,
)
from ..sim import (
    AllAtOnce,
    PerBotTruncGaussian,
    PoissonAggregate,
    ScenarioConfig,
    UniformRandom,
    run_scenario,
)
from ..utils import rho_sweep

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20180417

TABLE1_M = 25
TABLE1_RHOS = (5.0, 25.0, 50.0)
TABLE2_KAPPAS = (0.05, 0.25, 0.5)
TABLE2_BOTS = 50
# seconds; also the mean identity lifetime
MEAN_INTERPROBE = 30.0
TRUNCATION_FLOOR = 2.0
FIGURE_M = 1000
NOT_FOUND_FRACTION = 0.2

TARGETS = ('table1', 'table2', 'fig5', 'fig6')

Output = Tuple[str, Sequence[str], List[Tuple], Dict[str, Any]]


@dataclass(frozen=True)
class ReproduceOptions:
    """
    Knobs for desk-scale runs.

    Attributes:
        replications: Replications per simulated row
        cycles: Mean replacement cycles per replication
        seed: Root seed; row i of a table uses seed + i
        workers: Processes per simulated row
        per_decade: Points per decade of the figure sweeps
    """

    replications: int = 30
    cycles: int = 1000
    seed: int = DEFAULT_SEED
    workers: int = 1
    per_decade: int = 10


def _all_at_once_scenario(params: ModelParams, probing, opts: ReproduceOptions,
                          row: int) -> ScenarioConfig:
    return ScenarioConfig(
        params=params,
        probing=probing,
        replacement=AllAtOnce(params.delta),
        assignment=UniformRandom(),
        horizon=opts.cycles / params.delta,
        warmup=0.1 * opts.cycles / params.delta,
        replications=opts.replications,
        seed=opts.seed + row,
        workers=opts.workers,
    )


def table1(opts: ReproduceOptions) -> Output:
    """Simulated and analytic mean fraction known, Poisson probing, m = 25."""
    rows = []
    for i, rho in enumerate(TABLE1_RHOS):
        params = ModelParams.from_rho(TABLE1_M, rho, delta=1.0 / MEAN_INTERPROBE)
        result = run_scenario(
            _all_at_once_scenario(params, PoissonAggregate(params.beta), opts, i)
        )
        analytic = 100.0 * mean_known_poisson(params) / params.m
        rows.append((rho, 100.0 * result.fraction_known, analytic))
        logger.info("table1 rho=%g simulated %.2f%% analytic %.2f%%", rho, rows[-1][1], analytic)
    parameters = {'m': TABLE1_M, 'rhos': list(TABLE1_RHOS), 'delta': 1.0 / MEAN_INTERPROBE,
                  'probing': 'poisson', **asdict(opts)}
    return 'table1.csv', ('rho', 'simulated_pct', 'analytic_pct'), rows, parameters


def table2(opts: ReproduceOptions) -> Output:
    """
    Mean fraction known for 50 bots with truncated-Gaussian inter-probe
    times of mean 30 s, m = 25, rho = 50, against the constant-rate closed form.
    """
    delta = 1.0 / MEAN_INTERPROBE
    params = ModelParams(m=TABLE1_M, beta=TABLE2_BOTS / MEAN_INTERPROBE, delta=delta)
    reference = 100.0 * mean_known_deterministic(params) / params.m
    rows = []
    for i, kappa in enumerate(TABLE2_KAPPAS):
        probing = PerBotTruncGaussian(TABLE2_BOTS, MEAN_INTERPROBE, kappa, TRUNCATION_FLOOR)
        result = run_scenario(_all_at_once_scenario(params, probing, opts, i))
        rows.append((kappa, 100.0 * result.fraction_known, reference))
        logger.info("table2 kappa=%g simulated %.2f%%", kappa, rows[-1][1])
    parameters = {'m': TABLE1_M, 'rho': params.rho, 'n_bots': TABLE2_BOTS,
                  'mean_interprobe': MEAN_INTERPROBE, 'floor': TRUNCATION_FLOOR,
                  'kappas': list(TABLE2_KAPPAS), **asdict(opts)}
    return 'table2.csv', ('kappa', 'simulated_pct', 'deterministic_closed_form_pct'), rows, parameters


def fig5(opts: ReproduceOptions) -> Output:
    """Mean fraction known, m = 1000, rho from 10 to 10^4."""
    rhos = rho_sweep(1, 4, opts.per_decade)
    rows = [(rho, mean_known_poisson(ModelParams.from_rho(FIGURE_M, rho)) / FIGURE_M)
            for rho in rhos]
    parameters = {'m': FIGURE_M, 'decades': [1, 4], 'per_decade': opts.per_decade}
    return 'fig5.csv', ('rho', 'mean_fraction_known'), rows, parameters


def fig6(opts: ReproduceOptions) -> Output:
    """P(at least 20% of m = 1000 proxies unknown), rho from 10 to 10^5."""
    rhos = rho_sweep(1, 5, opts.per_decade)
    rows = [(rho, prob_fraction_not_found(ModelParams.from_rho(FIGURE_M, rho), NOT_FOUND_FRACTION))
            for rho in rhos]
    parameters = {'m': FIGURE_M, 'fraction': NOT_FOUND_FRACTION, 'decades': [1, 5],
                  'per_decade': opts.per_decade}
    return 'fig6.csv', ('rho', 'prob_at_least_20pct_not_found'), rows, parameters


BUILDERS = {'table1': table1, 'table2': table2, 'fig5': fig5, 'fig6': fig6}
