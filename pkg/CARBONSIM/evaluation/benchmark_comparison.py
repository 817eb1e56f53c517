import os

from loguru import logger

# [IMPORT CUSTOM MODULES]
from CARBONSIM.commons.utils.generators import BenchmarkSuite, noisy_measurements
from CARBONSIM.commons.utils.validation import (QUANTITIES, load_measurements, save_measurements,
                                                compare_by_label, write_metrics,
                                                format_metrics_table, boxplot_statistics, write_boxplot)
from CARBONSIM.commons.pathfinder import MEASUREMENTS_PATH, RESULTS_PATH
import CARBONSIM.commons.configurations as cnf


# [RUN MAIN]
if __name__ == '__main__':

    # 1. [LOAD RUNS]
    #--------------------------------------------------------------------------
    # simulated runs are read from the benchmark simulation output when
    # available, and regenerated otherwise
    sim_loc = os.path.join(RESULTS_PATH, 'simulated_runs.csv')
    if os.path.isfile(sim_loc):
        simulated = load_measurements(sim_loc)
    else:
        simulated = BenchmarkSuite().simulate_all()
        save_measurements(simulated, sim_loc)

    real_loc = os.path.join(MEASUREMENTS_PATH, 'real_runs.csv')
    if os.path.isfile(real_loc):
        real = load_measurements(real_loc)
    else:
        logger.warning(f'No measurements found in {real_loc}, using synthetic runs '
                       f'with {cnf.NOISE_LEVEL:.0%} noise')
        real = noisy_measurements(simulated, cnf.NOISE_LEVEL, cnf.SEED)

    # 2. [COMPARE]
    #--------------------------------------------------------------------------
    for quantity in QUANTITIES:
        reports = compare_by_label(real, simulated, quantity)
        prefix = os.path.join(RESULTS_PATH, f'benchmark_{quantity}')
        write_metrics(reports, f'{prefix}_metrics.csv')
        write_boxplot(boxplot_statistics(real, simulated, quantity), f'{prefix}_boxplot.csv')
        print(f'Comparison of measured and simulated {quantity}\n')
        print(format_metrics_table(reports))
        print()
