import os

# [IMPORT CUSTOM MODULES]
from CARBONSIM.commons.utils.generators import BenchmarkSuite
from CARBONSIM.commons.utils.validation import save_measurements
from CARBONSIM.commons.pathfinder import RESULTS_PATH
import CARBONSIM.commons.configurations as cnf


# [RUN MAIN]
if __name__ == '__main__':

    # 1. [BUILD BENCHMARKS]
    #--------------------------------------------------------------------------
    # one single-host platform per benchmark, with the per-core speed that
    # reproduces the measured execution time
    suite = BenchmarkSuite()
    print(f'Benchmarks: {", ".join(suite.labels)}')
    print(f'Host {cnf.HOST_ID} with {cnf.NUM_CORES} cores, carbon intensity {cnf.CARBON_INTENSITY} g/kWh\n')
    for label in suite.labels:
        platform = suite.platform(label)
        job = next(iter(suite.workload(label)))
        speed = platform.hosts[0].speed_per_core
        print(f'{label}: {job.flop_total:.3e} FLOP at {speed:.3e} FLOP/s per core')

    # 2. [SIMULATE RUNS]
    #--------------------------------------------------------------------------
    runs = suite.simulate_all()
    file_loc = os.path.join(RESULTS_PATH, 'simulated_runs.csv')
    save_measurements(runs, file_loc)

    print(f'\n{len(runs)} simulated runs saved in {file_loc}')
    for label in suite.labels:
        first = next(run for run in runs if run.label == label)
        print(f'{label}: {first.energy_kwh:.6e} kWh, {first.emissions_kg:.6e} kg CO2 per run')
