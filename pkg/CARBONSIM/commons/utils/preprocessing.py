import io
import json
import math

import pandas as pd
from loguru import logger

from CARBONSIM.commons.models.entities import Job, Workload, ExternalEvent, EventAction
from CARBONSIM.commons.errors import (WorkloadError, DuplicateJobId, MissingField, NegativeField,
                                      UnknownAction, MissingValue)


WORKLOAD_FIELDS = ('id', 'subtime', 'cores', 'flops')
EVENT_COLUMNS = ['time', 'host_id', 'action', 'value']


#------------------------------------------------------------------------------
def _is_blank(value):
    if value is None:
        return True
    if isinstance(value, float) and math.isnan(value):
        return True

    return str(value).strip() == ''

#------------------------------------------------------------------------------
def _to_number(value, field, location):
    if isinstance(value, bool):
        raise WorkloadError(f'{location}: field "{field}" must be numeric, got {value!r}')
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise WorkloadError(f'{location}: field "{field}" must be numeric, got {value!r}') from None
    if not math.isfinite(number):
        raise WorkloadError(f'{location}: field "{field}" must be finite, got {value!r}')
    if number < 0:
        raise NegativeField(f'{location}: field "{field}" must be >= 0, got {value!r}')

    return number


# [WORKLOAD PREPROCESSING]
#==============================================================================
# Jobs are read from a JSON array of {id, subtime, cores, flops} objects, or
# from a Batsim-like object holding that array under "jobs"
#==============================================================================
def parse_workload(document):

    '''
    Parses a workload document into a Workload sorted by submit time, ties
    broken by job id.

    Keyword Arguments:
        document (str): JSON text of the workload.

    Returns:
        Workload: the parsed jobs.

    '''
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise WorkloadError(f'Malformed workload document: {e}') from None
    if isinstance(data, dict):
        if 'jobs' not in data:
            raise MissingField('workload object has no "jobs" list')
        data = data['jobs']
    if not isinstance(data, list):
        raise WorkloadError('workload must be a list of job objects')

    jobs, seen_ids = [], set()
    for index, entry in enumerate(data):
        location = f'job #{index}'
        if not isinstance(entry, dict):
            raise WorkloadError(f'{location}: expected an object, got {type(entry).__name__}')
        for field in WORKLOAD_FIELDS:
            if field not in entry:
                raise MissingField(f'{location}: missing field "{field}"')
        job_id = str(entry['id'])
        location = f'job {job_id!r}'
        submit_time = _to_number(entry['subtime'], 'subtime', location)
        flops = _to_number(entry['flops'], 'flops', location)
        cores = _to_number(entry['cores'], 'cores', location)
        if cores != int(cores) or cores < 1:
            raise WorkloadError(f'{location}: field "cores" must be a positive integer, got {entry["cores"]!r}')
        if job_id in seen_ids:
            raise DuplicateJobId(f'Duplicate job id {job_id!r}')
        seen_ids.add(job_id)
        jobs.append(Job(job_id, submit_time, flops, int(cores)))

    jobs.sort(key=lambda job: (job.submit_time, job.id))

    return Workload(tuple(jobs))

#------------------------------------------------------------------------------
def serialize_workload(workload):
    jobs = [{'id' : job.id, 'subtime' : job.submit_time,
             'cores' : job.cores_requested, 'flops' : job.flop_total}
            for job in workload.jobs]

    return json.dumps(jobs, indent=2) + '\n'

#------------------------------------------------------------------------------
def load_workload(path):
    with open(path, 'r', encoding='utf-8') as f:
        document = f.read()
    workload = parse_workload(document)
    logger.info(f'Loaded {len(workload)} jobs from {path}')

    return workload


# [EXTERNAL EVENTS PREPROCESSING]
#==============================================================================
# Power on/off and carbon intensity changes scripted as CSV rows
# time,host_id,action[,value] with an optional header line
#==============================================================================
def parse_events(document):

    '''
    Parses the external events CSV. Events are returned sorted by time, rows
    sharing a timestamp keep their file order.

    '''
    if not document.strip():
        return []
    try:
        frame = pd.read_csv(io.StringIO(document), header=None, names=EVENT_COLUMNS,
                            dtype=str, comment='#', skipinitialspace=True,
                            keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        return []
    except pd.errors.ParserError as e:
        raise WorkloadError(f'Malformed events document: {e}') from None

    events = []
    for index, row in enumerate(frame.itertuples(index=False)):
        if index == 0 and str(row.time).strip().lower() == 'time':
            continue
        location = f'event row {index + 1}'
        if _is_blank(row.time) or _is_blank(row.host_id) or _is_blank(row.action):
            raise MissingField(f'{location}: expected time,host_id,action[,value]')
        try:
            time = float(row.time)
        except ValueError:
            raise WorkloadError(f'{location}: time must be numeric, got {row.time!r}') from None
        if not math.isfinite(time) or time < 0:
            raise NegativeField(f'{location}: time must be finite and >= 0, got {row.time!r}')
        try:
            action = EventAction(str(row.action).strip())
        except ValueError:
            raise UnknownAction(f'{location}: unknown action {row.action!r}') from None
        value = None
        if action == EventAction.SET_CI:
            if _is_blank(row.value):
                raise MissingValue(f'{location}: set_ci requires a carbon intensity value')
            try:
                value = float(row.value)
            except ValueError:
                raise WorkloadError(f'{location}: carbon intensity must be numeric, got {row.value!r}') from None
            if not math.isfinite(value) or value < 0:
                raise NegativeField(f'{location}: carbon intensity must be finite and >= 0, got {row.value!r}')
        elif not _is_blank(row.value):
            logger.warning(f'{location}: value {row.value!r} ignored for action {action.value}')
        events.append(ExternalEvent(time, str(row.host_id).strip(), action, value))

    events.sort(key=lambda event: event.time)

    return events

#------------------------------------------------------------------------------
def serialize_events(events):
    lines = [','.join(EVENT_COLUMNS)]
    for event in events:
        row = [repr(float(event.time)), event.host_id, event.action.value]
        if event.value is not None:
            row.append(repr(float(event.value)))
        lines.append(','.join(row))

    return '\n'.join(lines) + '\n'

#------------------------------------------------------------------------------
def load_events(path):
    with open(path, 'r', encoding='utf-8') as f:
        document = f.read()
    events = parse_events(document)
    logger.info(f'Loaded {len(events)} external events from {path}')

    return events
