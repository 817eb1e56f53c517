from os.path import join, dirname, abspath

PROJECT_DIR = dirname(dirname(abspath(__file__)))
DATA_PATH = join(PROJECT_DIR, 'data')
PLATFORM_PATH = join(DATA_PATH, 'platforms')
WORKLOAD_PATH = join(DATA_PATH, 'workloads')
EVENTS_PATH = join(DATA_PATH, 'events')
CI_TRACES_PATH = join(DATA_PATH, 'traces')
MEASUREMENTS_PATH = join(DATA_PATH, 'measurements')
RESULTS_PATH = join(PROJECT_DIR, 'results')
