import os
import math

import pandas as pd
from loguru import logger

from CARBONSIM.commons.models.entities import CarbonIntensitySeries
from CARBONSIM.commons.utils.energy import accumulate_energy, host_power
from CARBONSIM.commons.errors import PlatformError, InvalidCarbonIntensity
from CARBONSIM.commons.pathfinder import CI_TRACES_PATH


JOULES_PER_KWH = 3.6e6
TRACE_TIME_COLUMN = 'time_s'
TRACE_VALUE_COLUMN = 'ci_g_per_kwh'


# [CARBON FOOTPRINT MODEL]
#==============================================================================
# Incremental carbon accounting: each settlement interval [t0, t1] is priced
# at the power and the carbon intensity in force at t0
#==============================================================================
def ci_at(series, t):
    return series.value_at(t)

#------------------------------------------------------------------------------
def carbon_step(energy_j, ci):

    '''
    Grams of CO2 emitted by consuming energy_j joules under a carbon intensity
    of ci g/kWh.

    '''
    return (energy_j / JOULES_PER_KWH) * ci

#------------------------------------------------------------------------------
def update_host_footprint(host, t1):

    '''
    Settles a host up to t1. The energy step is the power of the state held
    since last_update times the elapsed time, and the carbon step prices it at
    the carbon intensity in force at last_update. Both are added to the host
    accounts and last_update moves to t1.

    Keyword Arguments:
        host (HostRuntime): Host to settle, modified in place.
        t1 (float): Settlement time, must not precede host.last_update.

    Returns:
        HostRuntime: the same host, settled at t1.

    '''
    t0 = host.last_update
    energy_step = accumulate_energy(host_power(host), t0, t1)
    footprint_step = carbon_step(energy_step, ci_at(host.ci_series, t0))
    host.energy_j += energy_step
    host.carbon_g += footprint_step
    host.last_step_g = footprint_step
    host.last_update = t1

    return host

#------------------------------------------------------------------------------
def set_carbon_intensity(host, value, t):
    if not math.isfinite(value) or value < 0:
        raise InvalidCarbonIntensity(f'{host.host_id}: carbon intensity must be finite and >= 0, got {value}')
    update_host_footprint(host, t)
    host.ci_series = CarbonIntensitySeries.constant(value)

    return host


# [CARBON INTENSITY TRACES]
#==============================================================================
# CSV files with columns time_s,ci_g_per_kwh read as step functions
#==============================================================================
def load_ci_trace(path):

    '''
    Loads a carbon intensity trace as a step series. Lines starting with "#"
    are comments.

    Keyword Arguments:
        path (str): Path to the trace CSV file.

    Returns:
        CarbonIntensitySeries: step series sorted by time.

    '''
    try:
        frame = pd.read_csv(path, comment='#', skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise PlatformError(f'Carbon intensity trace {path} is empty') from None
    for column in (TRACE_TIME_COLUMN, TRACE_VALUE_COLUMN):
        if column not in frame.columns:
            raise PlatformError(f'Carbon intensity trace {path} has no "{column}" column')
    if frame.empty:
        raise PlatformError(f'Carbon intensity trace {path} has no points')
    try:
        times = pd.to_numeric(frame[TRACE_TIME_COLUMN]).astype(float).tolist()
        values = pd.to_numeric(frame[TRACE_VALUE_COLUMN]).astype(float).tolist()
    except (TypeError, ValueError) as e:
        raise PlatformError(f'Carbon intensity trace {path}: {e}') from None
    try:
        series = CarbonIntensitySeries.step(zip(times, values))
    except InvalidCarbonIntensity as e:
        raise InvalidCarbonIntensity(f'Carbon intensity trace {path}: {e}') from None
    logger.info(f'Loaded carbon intensity trace {path} with {len(times)} points')

    return series

#------------------------------------------------------------------------------
def resolve_trace_path(name, search_dirs):
    candidates = [name] if os.path.isabs(name) else []
    for directory in search_dirs:
        candidates.append(os.path.join(directory, name))
        if not name.endswith('.csv'):
            candidates.append(os.path.join(directory, f'{name}.csv'))
    for candidate in candidates:
        if os.path.isfile(candidate):
            return candidate

    raise PlatformError(f'Carbon intensity trace {name!r} not found in {list(search_dirs)}')

#------------------------------------------------------------------------------
def build_ci_series(platform, search_dirs=None):

    '''
    Builds the carbon intensity series of every host of a platform. Trace
    references are looked up in search_dirs, then in the bundled traces
    folder.

    Returns:
        dict: host id mapped to its CarbonIntensitySeries.

    '''
    directories = list(search_dirs or []) + [CI_TRACES_PATH]
    loaded, series = {}, {}
    for host in platform.hosts:
        source = host.ci_source
        if source.is_trace:
            path = resolve_trace_path(source.trace, directories)
            if path not in loaded:
                loaded[path] = load_ci_trace(path)
            series[host.id] = loaded[path]
        else:
            series[host.id] = CarbonIntensitySeries.constant(source.constant)

    return series
