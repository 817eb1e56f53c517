import os

import numpy as np
import pandas as pd

from CARBONSIM.commons.models.entities import TraceRecord, EventType
from CARBONSIM.commons.utils.energy import platform_energy
import CARBONSIM.commons.configurations as cnf


#------------------------------------------------------------------------------
def platform_carbon(hosts):
    return sum((host.carbon_g for host in hosts), 0.0)

#------------------------------------------------------------------------------
def format_number(value):

    '''
    Renders a float with TRACE_DECIMALS decimals when its magnitude is at
    least 1 and TRACE_DECIMALS significant digits below that, trailing zeros
    and trailing decimal point trimmed (144000.0 -> "144000",
    2.5277777 -> "2.527778", 1/3600 -> "0.000277778").

    '''
    number = float(value)
    significant = number != 0.0 and abs(number) < 1.0
    text = np.format_float_positional(number, precision=cnf.TRACE_DECIMALS, unique=False,
                                      fractional=not significant, trim='-')
    if text == '-0':
        return '0'

    return text


# [EVENT TRACE]
#==============================================================================
# One record per job start (s), job end (e) and power state change (p), with
# platform-wide cumulative energy (J) and carbon (g)
#==============================================================================
def record_event(hosts, time, event_type, previous=None):

    '''
    Builds a trace record from hosts already settled at the event time. The
    ecarbon field is the average platform emission rate in g/s since the
    previous record, 0 for the first record and for zero-width intervals.

    Keyword Arguments:
        hosts (list of HostRuntime): All hosts of the platform, settled at time.
        time (float): Event timestamp.
        event_type (EventType or str): One of s, e, p.
        previous (TraceRecord, optional): The previous record of the trace.

    Returns:
        TraceRecord: the new record.

    '''
    energy_j = platform_energy(hosts)
    carbon_g = platform_carbon(hosts)
    if previous is None or time == previous.time:
        ecarbon = 0.0
    else:
        ecarbon = (carbon_g - previous.carbon_g) / (time - previous.time)

    return TraceRecord(time, energy_j, carbon_g, EventType(event_type), ecarbon)


class CarbonTracer:

    def __init__(self):
        self.records = []

    def record(self, hosts, time, event_type):
        previous = self.records[-1] if self.records else None
        record = record_event(hosts, time, event_type, previous)
        self.records.append(record)

        return record


#------------------------------------------------------------------------------
def _write_frame(frame, path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')

#------------------------------------------------------------------------------
def write_trace(records, path):
    rows = [[format_number(r.time), format_number(r.energy_j), format_number(r.carbon_g),
             EventType(r.event_type).value, format_number(r.ecarbon)] for r in records]
    frame = pd.DataFrame(rows, columns=cnf.TRACE_COLUMNS)
    _write_frame(frame, path)

    return path

#------------------------------------------------------------------------------
def write_summary(summary, path):
    rows = [[host.host_id, format_number(host.energy_j), format_number(host.carbon_g)]
            for host in summary]
    frame = pd.DataFrame(rows, columns=cnf.SUMMARY_COLUMNS)
    _write_frame(frame, path)

    return path
