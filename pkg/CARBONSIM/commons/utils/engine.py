import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field

from loguru import logger

from CARBONSIM.commons.models.entities import (HostMode, HostRuntime, EventAction, EventType,
                                               CarbonIntensitySeries, HostSummary, JobExecution,
                                               SimulationResult)
from CARBONSIM.commons.utils.energy import settle_energy
from CARBONSIM.commons.utils.carbon import build_ci_series
from CARBONSIM.commons.utils.callbacks import Subscription, register_callbacks
from CARBONSIM.commons.utils.tracer import CarbonTracer
from CARBONSIM.commons.errors import (PlatformError, UnknownHost, PreemptionUnsupported,
                                      DoubleRegistration, EngineRunning)


# priorities of simultaneous events: external events and CI breakpoints first,
# then job completions, then job submissions. Job starts happen after the
# whole batch of a timestamp has been processed
EXTERNAL, JOB_END, JOB_SUBMIT, HORIZON = range(4)


#------------------------------------------------------------------------------
def job_duration(flop_total, cores, speed_per_core):
    if cores < 1:
        raise ValueError(f'a job needs at least one core, got {cores}')
    if speed_per_core <= 0:
        raise ValueError(f'speed per core must be > 0, got {speed_per_core}')

    return flop_total / (cores * speed_per_core)

#------------------------------------------------------------------------------
def schedule_fcfs(pending, hosts, time=0.0):

    '''
    First-come first-served placement. Jobs are considered in submit order;
    each goes to the first host (platform order) that is On and has enough
    free cores. The first job that cannot be placed blocks the ones behind it.

    Keyword Arguments:
        pending (iterable of Job): Waiting jobs in submit order.
        hosts (list of HostRuntime): Hosts in platform order.
        time (float): Current simulated time, used as start time.

    Returns:
        list: (job, host, start_time) tuples in start order.

    '''
    free_cores = {host.host_id : host.free_cores if host.mode == HostMode.ON else 0
                  for host in hosts}
    assignments = []
    for job in pending:
        target = next((host for host in hosts
                       if free_cores[host.host_id] >= job.cores_requested), None)
        if target is None:
            break
        free_cores[target.host_id] -= job.cores_requested
        assignments.append((job, target, time))

    return assignments


@dataclass(order=True)
class QueuedEvent:
    time: float
    priority: int
    key: str
    sequence: int
    kind: str = field(compare=False)
    payload: object = field(compare=False, default=None)
    active: bool = field(compare=False, default=True)


# [DISCRETE EVENT ENGINE]
#==============================================================================
# Single-threaded event loop. Before any change of a host state the engine
# notifies the subscribed callbacks and settles the host energy, so that every
# interval is priced at the state held since its start
#==============================================================================
class SimulationEngine:

    def __init__(self, platform, workload, events=(), ci_series=None, horizon=None):
        self.platform = platform
        self.workload = workload
        self.events = list(events)
        if horizon is not None and horizon < 0:
            raise ValueError(f'simulation horizon must be >= 0, got {horizon}')
        self.horizon = horizon
        series = ci_series if ci_series is not None else build_ci_series(platform)
        self.hosts = []
        for spec in platform.hosts:
            if spec.id not in series:
                raise PlatformError(f'host {spec.id}: no carbon intensity series available')
            self.hosts.append(HostRuntime(spec, series[spec.id]))
        self.host_index = {host.host_id : host for host in self.hosts}
        for event in self.events:
            if event.host_id not in self.host_index:
                raise UnknownHost(f'event at t={event.time} targets unknown host {event.host_id!r}')

        self.callbacks = []
        self.tracer = CarbonTracer()
        self.clock = 0.0
        self._state = 'idle'
        self._queue = []
        self._sequence = itertools.count()
        self._active_events = 0
        self._pending = deque()
        self._executions = []
        self._rejected = []

    #--------------------------------------------------------------------------
    def subscribe(self, callback):
        if self._state != 'idle':
            raise EngineRunning('callbacks must be registered before the simulation starts')
        if any(cb is callback for cb in self.callbacks):
            raise DoubleRegistration('callback is already registered')
        self.callbacks.append(callback)

        return Subscription(self, callback)

    #--------------------------------------------------------------------------
    def unsubscribe(self, callback):
        if self._state != 'idle':
            raise EngineRunning('callbacks cannot be removed once the simulation started')
        self.callbacks = [cb for cb in self.callbacks if cb is not callback]

    # queue handling
    #--------------------------------------------------------------------------
    def _push(self, time, priority, key, kind, payload=None, active=True):
        event = QueuedEvent(time, priority, key, next(self._sequence), kind, payload, active)
        heapq.heappush(self._queue, event)
        if active:
            self._active_events += 1

    def _pop(self):
        event = heapq.heappop(self._queue)
        if event.active:
            self._active_events -= 1

        return event

    # host notifications
    #--------------------------------------------------------------------------
    def _before_change(self, hook, host, time, *args):
        for callback in self.callbacks:
            getattr(callback, hook)(host, time, *args)
        settle_energy(host, time)

    def _settle_platform(self, time):
        for host in self.hosts:
            self._before_change('on_settlement', host, time)

    def _trace(self, time, event_type):
        self._settle_platform(time)
        self.tracer.record(self.hosts, time, event_type)

    # event handlers
    #--------------------------------------------------------------------------
    def _power_on(self, host, time):
        if host.mode == HostMode.ON:
            logger.warning(f'{host.host_id}: power_on at t={time} ignored, host is already on')
            return
        self._before_change('on_power_change', host, time, HostMode.ON)
        host.mode = HostMode.ON
        self._trace(time, EventType.POWER_CHANGE)

    def _power_off(self, host, time):
        if host.mode == HostMode.OFF:
            logger.warning(f'{host.host_id}: power_off at t={time} ignored, host is already off')
            return
        if host.busy_cores > 0:
            raise PreemptionUnsupported(f'{host.host_id}: power_off at t={time} while '
                                        f'{host.busy_cores} cores are running jobs')
        self._before_change('on_power_change', host, time, HostMode.OFF)
        host.mode = HostMode.OFF
        self._trace(time, EventType.POWER_CHANGE)

    def _set_carbon_intensity(self, host, time, value):
        series = CarbonIntensitySeries.constant(value)
        self._before_change('on_carbon_intensity_change', host, time, value)
        host.ci_series = series

    def _external(self, event, time):
        host = self.host_index[event.host_id]
        if event.action == EventAction.POWER_ON:
            self._power_on(host, time)
        elif event.action == EventAction.POWER_OFF:
            self._power_off(host, time)
        elif event.action == EventAction.SET_CI:
            self._set_carbon_intensity(host, time, event.value)

    def _submit(self, job):
        if job.cores_requested > self.platform.max_core_count:
            logger.warning(f'job {job.id} rejected: requests {job.cores_requested} cores, '
                           f'largest host has {self.platform.max_core_count}')
            self._rejected.append(job)
            return
        self._pending.append(job)

    def _start_job(self, job, host, time):
        self._before_change('on_job_start', host, time, job)
        host.busy_cores += job.cores_requested
        self._trace(time, EventType.JOB_START)
        end_time = time + job_duration(job.flop_total, job.cores_requested, host.spec.speed_per_core)
        self._executions.append(JobExecution(job.id, host.host_id, time, end_time))
        self._push(end_time, JOB_END, job.id, 'job_end', (job, host))

    def _end_job(self, job, host, time):
        self._before_change('on_job_end', host, time, job)
        host.busy_cores -= job.cores_requested
        self._trace(time, EventType.JOB_END)

    def _dispatch(self, event, time):
        if event.kind == 'external':
            self._external(event.payload, time)
        elif event.kind == 'ci_breakpoint':
            self._before_change('on_settlement', self.host_index[event.key], time)
        elif event.kind == 'job_end':
            self._end_job(*event.payload, time)
        elif event.kind == 'job_submit':
            self._submit(event.payload)

    def _start_ready_jobs(self, time):
        for job, host, start_time in schedule_fcfs(self._pending, self.hosts, time):
            self._pending.popleft()
            self._start_job(job, host, start_time)

    #--------------------------------------------------------------------------
    def _initialize_queue(self):
        for job in self.workload.jobs:
            self._push(job.submit_time, JOB_SUBMIT, job.id, 'job_submit', job)
        for event in self.events:
            self._push(event.time, EXTERNAL, event.host_id, 'external', event)
        # CI breakpoints close intervals at every change of carbon intensity but
        # never extend the simulation on their own
        for host in self.hosts:
            for breakpoint in host.ci_series.breakpoints:
                if breakpoint > 0:
                    self._push(breakpoint, EXTERNAL, host.host_id, 'ci_breakpoint', active=False)
        if self.horizon is not None:
            self._push(self.horizon, HORIZON, '', 'horizon')

    #--------------------------------------------------------------------------
    def run(self):

        '''
        Runs the simulation to completion. Hosts are created On and idle at
        t=0; the run ends with the last job completion, external event or
        horizon, whichever comes last, where every host is settled.

        Returns:
            SimulationResult: trace, per-host totals and schedule.

        '''
        if self._state != 'idle':
            raise EngineRunning('a simulation engine can only run once')
        self._state = 'running'
        logger.info(f'Simulating {len(self.workload)} jobs and {len(self.events)} external events '
                    f'on {len(self.hosts)} hosts')

        for host in self.hosts:
            self._before_change('on_host_creation', host, 0.0)
        self._initialize_queue()

        while self._queue and self._active_events > 0:
            time = self._queue[0].time
            self.clock = time
            while self._queue and self._queue[0].time == time:
                self._dispatch(self._pop(), time)
            self._start_ready_jobs(time)

        for host in self.hosts:
            self._before_change('on_host_destruction', host, self.clock)
        self._state = 'finished'
        if self._pending:
            logger.warning(f'{len(self._pending)} jobs were still waiting when the simulation ended')

        makespan = max((execution.end_time for execution in self._executions), default=0.0)
        summary = tuple(HostSummary(host.host_id, host.energy_j, host.carbon_g) for host in self.hosts)
        result = SimulationResult(trace=tuple(self.tracer.records), per_host_summary=summary,
                                  makespan=makespan, end_time=self.clock,
                                  schedule=tuple(self._executions),
                                  rejected_jobs=tuple(self._rejected),
                                  unscheduled_jobs=tuple(self._pending))
        logger.info(f'Simulation finished at t={self.clock}: makespan {makespan} s, '
                    f'{result.total_energy_j} J, {result.total_carbon_g} g CO2')

        return result


#------------------------------------------------------------------------------
def run_simulation(platform, workload, events=(), carbon_enabled=False, ci_series=None, horizon=None):

    '''
    Simulates a workload on a platform, with the carbon footprint plugin
    attached when carbon_enabled is set. Energy is accounted either way.

    Keyword Arguments:
        platform (PlatformSpec): Hosts of the simulated platform.
        workload (Workload): Jobs to execute.
        events (list of ExternalEvent): Scripted power and carbon intensity changes.
        carbon_enabled (bool): Attach the carbon footprint plugin.
        ci_series (dict, optional): Host id mapped to its carbon intensity series.
                                    Built from the platform when omitted.
        horizon (float, optional): Minimum simulated end time.

    Returns:
        SimulationResult: outputs of the run.

    '''
    engine = SimulationEngine(platform, workload, events, ci_series, horizon)
    if carbon_enabled:
        register_callbacks(engine)

    return engine.run()
