# Settings for the simulation
#------------------------------------------------------------------------------
DEFAULT_CARBON_INTENSITY = 0.0
HOST_POWER_STATE = 0

# Settings for the output files
#------------------------------------------------------------------------------
TRACE_DECIMALS = 6
TRACE_COLUMNS = ['time', 'energy', 'carbon_emission', 'event_type', 'ecarbon']
SUMMARY_COLUMNS = ['host_id', 'total_energy_j', 'total_carbon_g']
METRICS_COLUMNS = ['label', 'quantity', 'n', 'r2', 'mape_percent', 'rmse']
BOXPLOT_COLUMNS = ['label', 'source', 'min', 'q1', 'median', 'q3', 'max', 'mean']

# Settings for measurement files (CodeCarbon schema)
#------------------------------------------------------------------------------
MEASUREMENT_COLUMNS = {'run_id' : 'run_id',
                       'label' : 'project_name',
                       'energy_kwh' : 'cpu_energy',
                       'emissions_kg' : 'emissions'}

# Settings for the benchmark experiment
#------------------------------------------------------------------------------
BENCHMARKS = {'resnet18' : {'flops' : 182e9, 'execution_time' : 2.5},
              'bert_large' : {'flops' : 1250e9, 'execution_time' : 46.0},
              'dlrm' : {'flops' : 13e9, 'execution_time' : 0.45}}
BENCHMARK_SPEEDS = {'resnet18' : 12e9,
                    'bert_large' : 4.5e9,
                    'dlrm' : 4.8e9}
HOST_ID = 'Intel_i5_11400H'
NUM_CORES = 6
NUM_RUNS = 10
CARBON_INTENSITY = 98.348
NOISE_LEVEL = 0.15

# General settings
#------------------------------------------------------------------------------
SEED = 54
