import os
import sys
import argparse
from dataclasses import dataclass, field

from loguru import logger

from CARBONSIM.commons.dataloader.platform import load_platform
from CARBONSIM.commons.utils.preprocessing import load_workload, load_events
from CARBONSIM.commons.utils.carbon import build_ci_series
from CARBONSIM.commons.utils.engine import run_simulation
from CARBONSIM.commons.utils.tracer import write_trace, write_summary
from CARBONSIM.commons.utils.validation import (QUANTITIES, load_measurements, compare_by_label,
                                                write_metrics, format_metrics_table,
                                                boxplot_statistics, write_boxplot)
from CARBONSIM.commons.errors import CarbonSimError
from CARBONSIM.commons.pathfinder import RESULTS_PATH
import CARBONSIM.commons.configurations as cnf


@dataclass
class RunConfig:
    subcommand: str
    platform_path: str = None
    workload_path: str = None
    events_path: str = None
    carbon_enabled: bool = False
    output_prefix: str = None
    horizon: float = None
    trace_dirs: list = field(default_factory=list)
    real_path: str = None
    sim_path: str = None
    quantity: str = None
    column_map: dict = field(default_factory=dict)
    boxplot_data: bool = False


#------------------------------------------------------------------------------
def build_parser():
    parser = argparse.ArgumentParser(prog='carbonsim',
                                     description='Energy and carbon footprint simulation of batch workloads')
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    simulate = subparsers.add_parser('simulate', help='simulate a workload on a platform')
    simulate.add_argument('-p', '--platform', required=True, help='platform XML file')
    simulate.add_argument('-w', '--workload', required=True, help='workload JSON file')
    simulate.add_argument('-e', '--events', help='external events CSV file')
    simulate.add_argument('-C', '--carbon-footprint', action='store_true', dest='carbon_enabled',
                          help='enable the carbon footprint plugin')
    simulate.add_argument('-o', '--output-prefix', required=True,
                          help='prefix of the <prefix>_trace.csv and <prefix>_hosts.csv outputs')
    simulate.add_argument('--until', type=float, dest='horizon', metavar='SECONDS',
                          help='simulate at least until this time')
    simulate.add_argument('--traces-dir', action='append', default=[], dest='trace_dirs',
                          help='additional folder searched for carbon intensity traces')

    comparison = subparsers.add_parser('compare', help='compare measured and simulated runs')
    comparison.add_argument('--real', required=True, help='measured runs CSV (CodeCarbon schema)')
    comparison.add_argument('--sim', required=True, help='simulated runs CSV (CodeCarbon schema)')
    comparison.add_argument('--quantity', required=True, choices=QUANTITIES)
    comparison.add_argument('-o', '--output-prefix', default=os.path.join(RESULTS_PATH, 'comparison'),
                            help='prefix of the <prefix>_metrics.csv output')
    comparison.add_argument('--column-map', action='append', default=[], metavar='KEY=COLUMN',
                            help=f'remap a measurement column, KEY in {sorted(cnf.MEASUREMENT_COLUMNS)}')
    comparison.add_argument('--boxplot-data', action='store_true',
                            help='also write <prefix>_boxplot.csv with per-label quartiles')

    return parser

#------------------------------------------------------------------------------
def _check_readable(parser, path, flag):
    if path is not None and not (os.path.isfile(path) and os.access(path, os.R_OK)):
        parser.error(f'{flag}: cannot read file {path!r}')

#------------------------------------------------------------------------------
def parse_args(argv=None):

    '''
    Parses the command line into a RunConfig. Usage errors (unknown or missing
    flags, unreadable input files) exit with status 2.

    '''
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == 'simulate':
        _check_readable(parser, args.platform, '--platform')
        _check_readable(parser, args.workload, '--workload')
        _check_readable(parser, args.events, '--events')
        return RunConfig(subcommand='simulate', platform_path=args.platform,
                         workload_path=args.workload, events_path=args.events,
                         carbon_enabled=args.carbon_enabled, output_prefix=args.output_prefix,
                         horizon=args.horizon, trace_dirs=args.trace_dirs)

    _check_readable(parser, args.real, '--real')
    _check_readable(parser, args.sim, '--sim')
    column_map = {}
    for entry in args.column_map:
        key, separator, column = entry.partition('=')
        if not separator or key not in cnf.MEASUREMENT_COLUMNS or not column:
            parser.error(f'--column-map: expected KEY=COLUMN with KEY in '
                         f'{sorted(cnf.MEASUREMENT_COLUMNS)}, got {entry!r}')
        column_map[key] = column

    return RunConfig(subcommand='compare', real_path=args.real, sim_path=args.sim,
                     quantity=args.quantity, output_prefix=args.output_prefix,
                     column_map=column_map, boxplot_data=args.boxplot_data)

#------------------------------------------------------------------------------
def _write_outputs(outputs):

    '''
    Writes every (writer, data, path) output to a temporary file first and
    renames them all once every write succeeded. On failure no output is
    left behind, including outputs already renamed in place.

    '''
    staged, replaced = [], []
    try:
        for writer, data, path in outputs:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            temporary = f'{path}.tmp'
            staged.append((temporary, path))
            writer(data, temporary)
        for temporary, path in staged:
            os.replace(temporary, path)
            replaced.append(path)
    except BaseException:
        for path in [temporary for temporary, _ in staged] + replaced:
            if os.path.exists(path):
                os.remove(path)
        raise

#------------------------------------------------------------------------------
def main_simulate(config):
    try:
        platform = load_platform(config.platform_path)
        workload = load_workload(config.workload_path)
        events = load_events(config.events_path) if config.events_path else []
        search_dirs = [os.path.dirname(os.path.abspath(config.platform_path))] + list(config.trace_dirs)
        ci_series = build_ci_series(platform, search_dirs)
        result = run_simulation(platform, workload, events, config.carbon_enabled,
                                ci_series, config.horizon)
        trace_path = f'{config.output_prefix}_trace.csv'
        summary_path = f'{config.output_prefix}_hosts.csv'
        _write_outputs([(write_trace, result.trace, trace_path),
                        (write_summary, result.per_host_summary, summary_path)])
    except (CarbonSimError, OSError) as e:
        logger.error(f'Simulation failed: {e}')
        return 1

    print(f'Makespan:     {result.makespan} s')
    print(f'Total energy: {result.total_energy_j} J')
    print(f'Total carbon: {result.total_carbon_g} g')
    if result.rejected_jobs:
        print(f'Rejected jobs: {", ".join(job.id for job in result.rejected_jobs)}')
    logger.info(f'Trace written to {trace_path}, host summary to {summary_path}')

    return 0

#------------------------------------------------------------------------------
def main_compare(config):
    try:
        real = load_measurements(config.real_path, config.column_map)
        simulated = load_measurements(config.sim_path, config.column_map)
        reports = compare_by_label(real, simulated, config.quantity)
        outputs = [(write_metrics, reports, f'{config.output_prefix}_metrics.csv')]
        if config.boxplot_data:
            statistics = boxplot_statistics(real, simulated, config.quantity)
            outputs.append((write_boxplot, statistics, f'{config.output_prefix}_boxplot.csv'))
        _write_outputs(outputs)
    except (CarbonSimError, OSError) as e:
        logger.error(f'Comparison failed: {e}')
        return 1

    print(f'Comparison of measured and simulated {config.quantity}\n')
    print(format_metrics_table(reports))

    return 0

#------------------------------------------------------------------------------
def main(argv=None):
    logger.remove()
    logger.add(sys.stderr, level='INFO')
    config = parse_args(argv)
    if config.subcommand == 'simulate':
        return main_simulate(config)

    return main_compare(config)


if __name__ == '__main__':
    sys.exit(main())
