"""
Main CLI entry point for motag-recon.

Subcommands answer analytic queries, print or export stationary
distributions, run scenario simulations and regenerate the reference
tables and figures as plot-ready CSV.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .. import __version__
from ..analytic import (
    CltParams,
    ModelParams,
    clt_mean_approx,
    mean_known_deterministic,
    mean_known_periodic_stationary_phase,
    mean_known_poisson,
    mean_known_selective,
    not_found_threshold,
    stationary_pmf_deterministic,
    stationary_pmf_poisson,
    stationary_pmf_poisson_mixture,
)
from ..errors import MotagError, ParameterError
from ..markov import build_selective_generator, stationary_distribution
from ..sim import estimate_prob_fraction_not_found, load_scenario, run_scenario
from ..utils import resolve_output_dir
from .formatter import Formatter
from .manifest import RunManifest
from .reproduce import BUILDERS, DEFAULT_SEED, TARGETS, ReproduceOptions

logger = logging.getLogger(__name__)

MAX_DIST_M = 5000

ANALYTIC_KINDS = {
    'poisson': mean_known_poisson,
    'deterministic': mean_known_deterministic,
    'periodic': mean_known_periodic_stationary_phase,
    'selective': mean_known_selective,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='motag',
        description='Botnet reconnaissance against moving-target proxies',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  motag analytic poisson --m 25 --rho 50
  motag dist --m 1000 --rho 10 100 1000 --fraction 0.2
  motag simulate configs/demo.yaml --set seed=7 --replications 10
  motag reproduce table1 --output-dir out/
  motag version
        """
    )
    parser.add_argument('--version', '-v', action='version', version=f'motag {__version__}')
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging threshold on stderr (default: WARNING)')
    parser.add_argument('--no-color', action='store_true', help='Disable colored output')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    analytic = subparsers.add_parser('analytic', help='Stationary mean number of known proxies')
    analytic.add_argument('kind', choices=sorted(ANALYTIC_KINDS) + ['clt'])
    _add_model_arguments(analytic)
    analytic.add_argument('--sigma', type=float, default=0.0,
                          help='Inter-probe standard deviation (clt only)')
    analytic.add_argument('--csv', action='store_true', help='Also write analytic.csv')
    analytic.add_argument('--output-dir', help='Directory for CSV output')

    dist = subparsers.add_parser('dist', help='Stationary distribution of known proxies')
    dist.add_argument('--m', type=int, required=True, help='Number of proxies')
    dist.add_argument('--rho', type=float, nargs='+', required=True,
                      help='beta/delta; several values with --fraction give a sweep')
    dist.add_argument('--r', type=float, default=1.0,
                      help='Selective replacement probability (markov method only)')
    dist.add_argument('--method', choices=['closed', 'mixture', 'markov'], default='closed')
    dist.add_argument('--probing', choices=['poisson', 'deterministic'], default='poisson')
    dist.add_argument('--k-max', type=int, default=200, help='Mixture truncation')
    dist.add_argument('--fraction', type=float,
                      help='Report P(at least this fraction of proxies unknown)')
    dist.add_argument('--monte-carlo', type=int, metavar='N',
                      help='Also estimate the tail probability from N cycles')
    dist.add_argument('--seed', type=int, default=DEFAULT_SEED)
    dist.add_argument('--output-dir', help='Directory for CSV output')

    simulate = subparsers.add_parser('simulate', help='Run a scenario file')
    simulate.add_argument('config', help='Flat YAML scenario file')
    simulate.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                          dest='overrides', help='Override a scenario key (repeatable)')
    simulate.add_argument('--seed', type=int)
    simulate.add_argument('--replications', type=int)
    simulate.add_argument('--horizon', type=float)
    simulate.add_argument('--warmup', type=float)
    simulate.add_argument('--workers', type=int)
    simulate.add_argument('--trace', type=int, metavar='N',
                          help='Print the first N events of replication 0')
    simulate.add_argument('--output-dir', help='Directory for CSV output')

    reproduce = subparsers.add_parser('reproduce', help='Regenerate a reference table or figure')
    reproduce.add_argument('target', choices=TARGETS)
    reproduce.add_argument('--replications', type=int, default=ReproduceOptions.replications)
    reproduce.add_argument('--cycles', type=int, default=ReproduceOptions.cycles)
    reproduce.add_argument('--seed', type=int, default=DEFAULT_SEED)
    reproduce.add_argument('--workers', type=int, default=1)
    reproduce.add_argument('--per-decade', type=int, default=ReproduceOptions.per_decade)
    reproduce.add_argument('--output-dir', help='Directory for CSV output')

    subparsers.add_parser('version', help='Show version information')
    return parser


def _add_model_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument('--m', type=int, required=True, help='Number of proxies')
    p.add_argument('--rho', type=float, help='beta/delta')
    p.add_argument('--beta', type=float, help='Aggregate probe rate')
    p.add_argument('--delta', type=float, help='Replacement rate')
    p.add_argument('--r', type=float, default=1.0, help='Selective replacement probability')


def _model_params(args, parser: argparse.ArgumentParser) -> ModelParams:
    if args.rho is not None:
        if args.beta is not None:
            parser.error("give either --rho or --beta, not both")
        return ModelParams.from_rho(args.m, args.rho, delta=args.delta or 1.0, r=args.r)
    if args.beta is None or args.delta is None:
        parser.error("give --rho, or --beta together with --delta")
    return ModelParams(m=args.m, beta=args.beta, delta=args.delta, r=args.r)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s', force=True)
    formatter = Formatter(use_colors=not args.no_color and sys.stdout.isatty())

    handlers = {
        'analytic': handle_analytic,
        'dist': handle_dist,
        'simulate': handle_simulate,
        'reproduce': handle_reproduce,
    }
    if args.command == 'version':
        print(f"motag-recon version {__version__}")
        return 0
    if args.command is None:
        parser.print_help()
        return 2

    try:
        return handlers[args.command](args, parser, formatter)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except MotagError as e:
        logger.debug("command failed", exc_info=True)
        print(formatter.error(f"error: {e}"), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.debug("output failed", exc_info=True)
        print(formatter.error(f"error: cannot write output: {e}"), file=sys.stderr)
        return 1


def handle_analytic(args, parser, formatter: Formatter) -> int:
    """Print the stationary mean and its share of m."""
    params = _model_params(args, parser)
    if args.kind == 'clt':
        value = clt_mean_approx(CltParams(params, args.sigma))
    else:
        value = ANALYTIC_KINDS[args.kind](params)
    print(formatter.mean_and_fraction(value, params.m))

    if args.csv:
        manifest = RunManifest('analytic', {'kind': args.kind, 'm': params.m, 'beta': params.beta,
                                            'delta': params.delta, 'r': params.r,
                                            'sigma': args.sigma})
        out = resolve_output_dir(args.output_dir) / 'analytic.csv'
        manifest.write_csv(out, ('kind', 'm', 'rho', 'mean_known', 'fraction_known'),
                           [(args.kind, params.m, params.rho, value, value / params.m)])
        manifest.finish()
    return 0


def _dist_pmf(params: ModelParams, args):
    if args.probing == 'deterministic':
        return stationary_pmf_deterministic(params)
    if args.method == 'closed':
        return stationary_pmf_poisson(params)
    if args.method == 'mixture':
        return stationary_pmf_poisson_mixture(params, args.k_max)
    return stationary_distribution(build_selective_generator(params))


def handle_dist(args, parser, formatter: Formatter) -> int:
    """Export the stationary pmf, or a tail-probability sweep over rho."""
    if args.m > MAX_DIST_M:
        raise ParameterError(f"dist supports m <= {MAX_DIST_M}, got {args.m}")
    if args.probing == 'deterministic' and args.method == 'markov':
        parser.error("--probing deterministic has no Markov chain; use closed or mixture")
    if args.r != 1.0 and args.method != 'markov':
        parser.error("--r other than 1 needs --method markov")
    if len(args.rho) > 1 and args.fraction is None:
        parser.error("several --rho values need --fraction")
    if args.monte_carlo is not None and args.fraction is None:
        parser.error("--monte-carlo needs --fraction")
    if args.monte_carlo is not None and (args.probing != 'poisson' or args.r != 1.0):
        parser.error("--monte-carlo covers Poisson probing with all-at-once replacement only")
    threshold = not_found_threshold(args.m, args.fraction) if args.fraction is not None else None

    out_dir = resolve_output_dir(args.output_dir)
    parameters = {'m': args.m, 'rho': args.rho, 'r': args.r, 'method': args.method,
                  'probing': args.probing, 'fraction': args.fraction}
    manifest = RunManifest('dist', parameters,
                           seed=args.seed if args.monte_carlo is not None else None)

    if len(args.rho) > 1:
        rows = []
        for rho in args.rho:
            pmf = _dist_pmf(ModelParams.from_rho(args.m, rho, r=args.r), args)
            rows.append((rho, pmf.cdf(threshold)))
        manifest.write_csv(out_dir / 'dist_sweep.csv', ('rho', 'prob_not_found'), rows)
        print(formatter.format_table(['rho', 'prob_not_found'],
                                     [(f"{rho:.6g}", f"{p:.6g}") for rho, p in rows]))
    else:
        params = ModelParams.from_rho(args.m, args.rho[0], r=args.r)
        pmf = _dist_pmf(params, args)
        manifest.write_csv(out_dir / 'dist.csv', ('ell', 'probability'), pmf.rows())
        print(f"mean {formatter.mean_and_fraction(pmf.mean(), params.m)}")
        if threshold is not None:
            print(f"P(Y <= {threshold}) = {pmf.cdf(threshold):.6g}")
        if args.monte_carlo is not None:
            rng = np.random.default_rng(args.seed)
            p, se = estimate_prob_fraction_not_found(args.m, params.rho, args.fraction,
                                                     args.monte_carlo, rng)
            print(f"Monte Carlo ({args.monte_carlo} cycles): {p:.6g} +/- {1.96 * se:.3g}")
    manifest.finish()
    return 0


def handle_simulate(args, parser, formatter: Formatter) -> int:
    """Run a scenario and export its trajectory and running average."""
    overrides = list(args.overrides)
    for key, value in (('seed', args.seed), ('replications', args.replications),
                       ('horizon', args.horizon), ('warmup', args.warmup),
                       ('workers', args.workers)):
        if value is not None:
            overrides.append(f"{key}={value}")
    if args.trace:
        overrides.append(f"trace.limit={args.trace}")

    cfg = load_scenario(args.config, overrides)
    result = run_scenario(cfg)

    manifest = RunManifest('simulate', cfg.to_flat(), seed=cfg.seed)
    out_dir = resolve_output_dir(args.output_dir)
    manifest.write_csvs([
        (out_dir / 'trajectory.csv', ('t', 'Y'),
         [(float(t), int(y)) for t, y in result.trajectory]),
        (out_dir / 'running_avg.csv', ('t', 'avg_Y'),
         [(float(t), float(avg)) for t, avg in result.running_average]),
    ])
    manifest.finish()

    m = cfg.params.m
    print(formatter.header(f"m={m} rho={cfg.params.rho:.6g} replications={cfg.replications}"))
    print(formatter.format_dict({
        'time_avg_known': formatter.mean_and_fraction(result.time_avg_known, m),
        '95% CI': f"+/- {result.ci_halfwidth:.4g}",
        'replacement epochs': result.replacements,
        'probes': result.probes,
    }))
    if result.trace:
        print(formatter.header("trace (replication 0)"))
        for event in result.trace:
            label = formatter.identity_label(event.slot, event.generation)
            print(formatter.list_item(f"t={event.t:.4f} {event.kind:<17} {label:<20} Y={event.known}"))
    return 0


def handle_reproduce(args, parser, formatter: Formatter) -> int:
    """Write one reference table or figure as CSV."""
    opts = ReproduceOptions(replications=args.replications, cycles=args.cycles,
                            seed=args.seed, workers=args.workers, per_decade=args.per_decade)
    name, header, rows, parameters = BUILDERS[args.target](opts)
    simulated = args.target in ('table1', 'table2')
    manifest = RunManifest(f"reproduce {args.target}", parameters,
                           seed=opts.seed if simulated else None)
    path = manifest.write_csv(resolve_output_dir(args.output_dir) / name, header, rows)
    manifest.finish()

    if simulated:
        print(formatter.format_table(list(header),
                                     [[f"{v:.4g}" if i == 0 else f"{v:.2f}" for i, v in enumerate(row)]
                                      for row in rows]))
    print(formatter.success(f"wrote {Path(path).name} ({len(rows)} rows)"))
    return 0


if __name__ == '__main__':
    sys.exit(main())
