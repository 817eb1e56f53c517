import math
from enum import Enum
from dataclasses import dataclass

import numpy as np

from CARBONSIM.commons.errors import InvalidCarbonIntensity


class HostMode(str, Enum):
    OFF = 'off'
    ON = 'on'


class EventAction(str, Enum):
    POWER_ON = 'power_on'
    POWER_OFF = 'power_off'
    SET_CI = 'set_ci'


class EventType(str, Enum):
    JOB_START = 's'
    JOB_END = 'e'
    POWER_CHANGE = 'p'


# [PLATFORM DESCRIPTION]
#==============================================================================
# Static description of the simulated hosts
#==============================================================================
@dataclass(frozen=True)
class PowerProfile:
    idle_w: float
    epsilon_w: float
    allcores_w: float
    off_w: float


@dataclass(frozen=True)
class CISourceRef:

    '''
    Reference to the carbon intensity of a host: either a constant value in
    g/kWh or the name of a CI trace file, never both.

    '''
    constant: float = None
    trace: str = None

    @property
    def is_trace(self):
        return self.trace is not None

    @classmethod
    def from_constant(cls, value):
        return cls(constant=float(value))

    @classmethod
    def from_trace(cls, name):
        return cls(trace=str(name))


@dataclass(frozen=True)
class HostSpec:
    id: str
    core_count: int
    speed_per_core: float
    profile: PowerProfile
    ci_source: CISourceRef


@dataclass(frozen=True)
class PlatformSpec:
    hosts: tuple

    @property
    def host_ids(self):
        return [host.id for host in self.hosts]

    @property
    def max_core_count(self):
        return max((host.core_count for host in self.hosts), default=0)


# [CARBON INTENSITY]
#==============================================================================
# Constant or step-function carbon intensity (g/kWh) over simulated time
#==============================================================================
@dataclass(frozen=True)
class CarbonIntensitySeries:
    kind: str
    points: tuple

    def __post_init__(self):
        if self.kind not in ('constant', 'step'):
            raise InvalidCarbonIntensity(f'Unknown carbon intensity kind: {self.kind}')
        if not self.points:
            raise InvalidCarbonIntensity('Carbon intensity series must have at least one point')
        previous = None
        for time, value in self.points:
            if not math.isfinite(value) or value < 0:
                raise InvalidCarbonIntensity(f'Carbon intensity must be finite and >= 0, got {value} at t={time}')
            if previous is not None and time <= previous:
                raise InvalidCarbonIntensity(f'Carbon intensity points must be strictly increasing in time (t={time})')
            previous = time

    #--------------------------------------------------------------------------
    @classmethod
    def constant(cls, value):
        return cls('constant', ((0.0, float(value)),))

    #--------------------------------------------------------------------------
    @classmethod
    def step(cls, points):
        points = tuple((float(t), float(v)) for t, v in points)
        return cls('step', points)

    @property
    def is_constant(self):
        return self.kind == 'constant'

    @property
    def breakpoints(self):
        if self.is_constant:
            return ()
        return tuple(time for time, _ in self.points)

    #--------------------------------------------------------------------------
    def value_at(self, t):

        '''
        Carbon intensity in force at time t. Step series hold the latest point
        whose time is <= t, hold the first value backward before the first
        point and hold the last value forward after the last one.

        '''
        if self.is_constant:
            return self.points[0][1]
        times = np.fromiter((p[0] for p in self.points), dtype=float)
        index = int(np.searchsorted(times, t, side='right')) - 1
        return self.points[max(index, 0)][1]


# [WORKLOAD]
#==============================================================================
@dataclass(frozen=True)
class Job:
    id: str
    submit_time: float
    flop_total: float
    cores_requested: int


@dataclass(frozen=True)
class Workload:
    jobs: tuple = ()

    def __len__(self):
        return len(self.jobs)

    def __iter__(self):
        return iter(self.jobs)


@dataclass(frozen=True)
class ExternalEvent:
    time: float
    host_id: str
    action: EventAction
    value: float = None


# [RUNTIME STATE]
#==============================================================================
# Live host state owned by the engine. Energy and carbon accounts only grow,
# last_update is the start of the interval that has not been settled yet
#==============================================================================
@dataclass(frozen=True)
class PowerSample:
    host_id: str
    time: float
    power_w: float


@dataclass(frozen=True)
class CarbonAccount:
    carbon_g: float = 0.0
    last_step_g: float = 0.0


@dataclass
class HostRuntime:
    spec: HostSpec
    ci_series: CarbonIntensitySeries
    mode: HostMode = HostMode.ON
    busy_cores: int = 0
    last_update: float = 0.0
    energy_j: float = 0.0
    carbon_g: float = 0.0
    last_step_g: float = 0.0

    @property
    def host_id(self):
        return self.spec.id

    @property
    def free_cores(self):
        return self.spec.core_count - self.busy_cores

    @property
    def current_ci(self):
        return self.ci_series.value_at(self.last_update)

    @property
    def carbon_account(self):
        return CarbonAccount(self.carbon_g, self.last_step_g)


# [OUTPUTS]
#==============================================================================
@dataclass(frozen=True)
class TraceRecord:
    time: float
    energy_j: float
    carbon_g: float
    event_type: EventType
    ecarbon: float


@dataclass(frozen=True)
class HostSummary:
    host_id: str
    energy_j: float
    carbon_g: float


@dataclass(frozen=True)
class JobExecution:
    job_id: str
    host_id: str
    start_time: float
    end_time: float


@dataclass(frozen=True)
class SimulationResult:
    trace: tuple
    per_host_summary: tuple
    makespan: float
    end_time: float = 0.0
    schedule: tuple = ()
    rejected_jobs: tuple = ()
    unscheduled_jobs: tuple = ()

    @property
    def total_energy_j(self):
        return sum(host.energy_j for host in self.per_host_summary)

    @property
    def total_carbon_g(self):
        return sum(host.carbon_g for host in self.per_host_summary)


# [EVALUATION]
#==============================================================================
@dataclass(frozen=True)
class MeasurementRun:
    run_id: str
    label: str
    energy_kwh: float
    emissions_kg: float


@dataclass(frozen=True)
class MetricsReport:
    label: str
    quantity: str
    r2: float
    mape_percent: float
    rmse: float
    n: int
