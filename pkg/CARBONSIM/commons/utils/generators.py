import numpy as np
from loguru import logger

from CARBONSIM.commons.models.entities import (PowerProfile, HostSpec, PlatformSpec, CISourceRef,
                                               Job, Workload, MeasurementRun)
from CARBONSIM.commons.utils.carbon import JOULES_PER_KWH
from CARBONSIM.commons.utils.engine import run_simulation
import CARBONSIM.commons.configurations as cnf


I5_PROFILE = PowerProfile(idle_w=10.0, epsilon_w=25.0, allcores_w=40.0, off_w=1.0)


#------------------------------------------------------------------------------
def derive_core_speed(flop_total, execution_time, cores):

    '''
    Per-core speed (FLOP/s) of a machine that executed flop_total FLOP in
    execution_time seconds on the given number of cores.

    '''
    if execution_time <= 0:
        raise ValueError(f'execution time must be > 0, got {execution_time}')
    if cores < 1:
        raise ValueError(f'cores must be >= 1, got {cores}')

    return flop_total / execution_time / cores

#------------------------------------------------------------------------------
def simulation_to_measurement(result, label, run_id):
    return MeasurementRun(run_id=str(run_id), label=label,
                          energy_kwh=result.total_energy_j / JOULES_PER_KWH,
                          emissions_kg=result.total_carbon_g / 1000.0)

#------------------------------------------------------------------------------
def noisy_measurements(runs, noise=cnf.NOISE_LEVEL, seed=cnf.SEED):

    '''
    Synthetic stand-ins for real measurements: each run is scaled by a factor
    1 + eps with eps drawn uniformly in [-noise, noise]. Energy and emissions
    of a run share the same factor.

    Keyword Arguments:
        runs (list of MeasurementRun): Reference (simulated) runs.
        noise (float): Half-width of the relative perturbation.
        seed (int): Seed of the random generator.

    Returns:
        list of MeasurementRun: perturbed runs, ids prefixed with "real-".

    '''
    generator = np.random.default_rng(seed)
    factors = 1.0 + generator.uniform(-noise, noise, size=len(runs))

    return [MeasurementRun(run_id=f'real-{run.run_id}', label=run.label,
                           energy_kwh=run.energy_kwh * factor,
                           emissions_kg=run.emissions_kg * factor)
            for run, factor in zip(runs, factors)]


# [BENCHMARK WORKLOADS]
#==============================================================================
# One FLOP-sized job per inference benchmark, executed on a single host that
# reproduces the measured machine
#==============================================================================
class BenchmarkSuite:

    def __init__(self, benchmarks=cnf.BENCHMARKS, speeds=cnf.BENCHMARK_SPEEDS,
                 num_runs=cnf.NUM_RUNS, cores=cnf.NUM_CORES,
                 carbon_intensity=cnf.CARBON_INTENSITY, profile=I5_PROFILE):
        self.benchmarks = dict(benchmarks)
        self.speeds = dict(speeds)
        self.num_runs = num_runs
        self.cores = cores
        self.carbon_intensity = carbon_intensity
        self.profile = profile

    @property
    def labels(self):
        return list(self.benchmarks)

    #--------------------------------------------------------------------------
    def core_speed(self, label):
        if label in self.speeds:
            return self.speeds[label]
        benchmark = self.benchmarks[label]

        return derive_core_speed(benchmark['flops'], benchmark['execution_time'], self.cores)

    #--------------------------------------------------------------------------
    def platform(self, label):
        host = HostSpec(id=cnf.HOST_ID, core_count=self.cores,
                        speed_per_core=self.core_speed(label), profile=self.profile,
                        ci_source=CISourceRef.from_constant(self.carbon_intensity))

        return PlatformSpec((host,))

    #--------------------------------------------------------------------------
    def workload(self, label):
        job = Job(id=label, submit_time=0.0, flop_total=self.benchmarks[label]['flops'],
                  cores_requested=self.cores)

        return Workload((job,))

    #--------------------------------------------------------------------------
    def simulate(self, label):

        '''
        Runs the benchmark num_runs times with the carbon footprint plugin and
        returns the runs as measurements (kWh, kg CO2).

        '''
        runs = []
        for index in range(self.num_runs):
            result = run_simulation(self.platform(label), self.workload(label), carbon_enabled=True)
            runs.append(simulation_to_measurement(result, label, f'{label}-{index:02d}'))
        logger.info(f'{label}: simulated {self.num_runs} runs, '
                    f'{runs[0].energy_kwh if runs else 0.0} kWh per run')

        return runs

    #--------------------------------------------------------------------------
    def simulate_all(self):
        runs = []
        for label in self.labels:
            runs.extend(self.simulate(label))

        return runs
