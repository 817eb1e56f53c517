import pytest

from CARBONSIM.commons.utils.engine import (job_duration, schedule_fcfs, SimulationEngine,
                                            run_simulation)
from CARBONSIM.commons.utils.callbacks import (SimulationCallback, CarbonFootprintPlugin,
                                               register_callbacks)
from CARBONSIM.commons.models.entities import (HostMode, EventType, EventAction, ExternalEvent,
                                               CarbonIntensitySeries, Workload, JobExecution)
from CARBONSIM.commons.errors import (UnknownHost, PreemptionUnsupported, DoubleRegistration,
                                      EngineRunning)

from builders import make_host, make_platform, make_runtime, make_workload


class RecordingCallback(SimulationCallback):

    def __init__(self):
        self.calls = []

    def on_power_change(self, host, time, mode):
        self.calls.append(('power', time, host.mode, host.last_update))

    def on_job_start(self, host, time, job):
        self.calls.append(('start', time, host.busy_cores, host.last_update))

    def on_host_destruction(self, host, time):
        self.calls.append(('destruction', time, host.mode, host.last_update))


# [JOB TIMING AND PLACEMENT]
#------------------------------------------------------------------------------
def test_job_duration():
    assert job_duration(182e9, 6, 12e9) == pytest.approx(182 / 72, rel=1e-12)
    assert job_duration(0, 6, 12e9) == 0.0
    assert job_duration(1250e9, 6, 4.5e9) == pytest.approx(1250 / 27, rel=1e-12)


@pytest.mark.parametrize('cores, speed', [(0, 1e9), (1, 0.0)])
def test_job_duration_rejects_invalid_arguments(cores, speed):
    with pytest.raises(ValueError):
        job_duration(1e9, cores, speed)


def test_schedule_fcfs_two_half_host_jobs_start_together():
    hosts = [make_runtime()]
    jobs = make_workload(('a', 0, 1e9, 3), ('b', 0, 1e9, 3)).jobs
    assert [(job.id, start) for job, _, start in schedule_fcfs(jobs, hosts)] == [('a', 0.0), ('b', 0.0)]


def test_schedule_fcfs_blocks_behind_head_of_line():
    hosts = [make_runtime(busy_cores=4)]
    jobs = make_workload(('big', 0, 1e9, 4), ('small', 0, 1e9, 1)).jobs
    assert schedule_fcfs(jobs, hosts, 10.0) == []


def test_schedule_fcfs_uses_platform_order_and_skips_off_hosts():
    hosts = [make_runtime(make_host('off'), mode=HostMode.OFF), make_runtime(make_host('a')),
             make_runtime(make_host('b'))]
    jobs = make_workload(('j1', 0, 1e9, 4), ('j2', 0, 1e9, 4)).jobs
    placements = [(job.id, host.host_id) for job, host, _ in schedule_fcfs(jobs, hosts)]
    assert placements == [('j1', 'a'), ('j2', 'b')]


# [SIMULATION RUNS]
#------------------------------------------------------------------------------
def test_full_host_jobs_are_serialized():
    workload = make_workload(('a', 0, 72e9, 6), ('b', 0, 72e9, 6))
    result = run_simulation(make_platform(), workload)
    assert result.schedule == (JobExecution('a', 'h0', 0.0, 1.0), JobExecution('b', 'h0', 1.0, 2.0))
    assert result.makespan == 2.0


def test_oversized_job_is_rejected_and_simulation_continues():
    workload = make_workload(('huge', 0, 1e9, 8), ('ok', 0, 72e9, 6))
    result = run_simulation(make_platform(), workload)
    assert [job.id for job in result.rejected_jobs] == ['huge']
    assert [execution.job_id for execution in result.schedule] == ['ok']


def test_empty_workload_ends_at_zero():
    result = run_simulation(make_platform(), Workload(), carbon_enabled=True)
    assert result.makespan == 0.0
    assert result.end_time == 0.0
    assert result.total_energy_j == 0.0
    assert result.total_carbon_g == 0.0
    assert result.trace == ()


def test_idle_host_until_horizon():
    result = run_simulation(make_platform(), Workload(), carbon_enabled=True, horizon=3600.0)
    assert result.total_energy_j == pytest.approx(36000.0, rel=1e-12)
    assert result.total_carbon_g == pytest.approx(1.0, rel=1e-12)
    assert result.end_time == 3600.0


def test_off_host_accrues_off_wattage():
    events = [ExternalEvent(0.0, 'h0', EventAction.POWER_OFF)]
    result = run_simulation(make_platform(), Workload(), events, carbon_enabled=True, horizon=3600.0)
    assert result.total_energy_j == pytest.approx(3600.0, rel=1e-12)
    assert result.total_carbon_g == pytest.approx(0.1, rel=1e-12)
    assert [record.event_type for record in result.trace] == [EventType.POWER_CHANGE]


def test_set_ci_event_prices_each_side_of_the_change():
    events = [ExternalEvent(3600.0, 'h0', EventAction.SET_CI, 200.0)]
    result = run_simulation(make_platform(), Workload(), events, carbon_enabled=True, horizon=7200.0)
    assert result.total_carbon_g == pytest.approx(3.0, rel=1e-12)


def test_step_trace_breakpoints_do_not_extend_the_run():
    series = {'h0' : CarbonIntensitySeries.step([(0, 100), (3600, 200), (1e6, 300)])}
    result = run_simulation(make_platform(), Workload(), carbon_enabled=True, ci_series=series,
                            horizon=7200.0)
    assert result.end_time == 7200.0
    assert result.total_carbon_g == pytest.approx(3.0, rel=1e-12)


def test_energy_is_identical_with_and_without_carbon_plugin():
    series = {'h0' : CarbonIntensitySeries.step([(0, 100), (1.5, 250), (2.5, 50)])}
    workload = make_workload(('a', 0, 72e9, 3), ('b', 0.5, 36e9, 2), ('c', 1.2, 150e9, 6))
    enabled = run_simulation(make_platform(), workload, carbon_enabled=True, ci_series=series)
    disabled = run_simulation(make_platform(), workload, carbon_enabled=False, ci_series=series)
    assert enabled.total_energy_j == disabled.total_energy_j
    assert disabled.total_carbon_g == 0.0
    assert enabled.total_carbon_g > 0.0


def test_power_off_with_running_job_aborts():
    events = [ExternalEvent(0.5, 'h0', EventAction.POWER_OFF)]
    with pytest.raises(PreemptionUnsupported):
        run_simulation(make_platform(), make_workload(('a', 0, 72e9, 6)), events)


def test_redundant_power_events_are_no_ops():
    events = [ExternalEvent(10.0, 'h0', EventAction.POWER_ON),
              ExternalEvent(20.0, 'h0', EventAction.POWER_OFF),
              ExternalEvent(30.0, 'h0', EventAction.POWER_OFF)]
    result = run_simulation(make_platform(), Workload(), events, carbon_enabled=True)
    assert len(result.trace) == 1
    assert result.total_energy_j == pytest.approx(20 * 10.0 + 10 * 1.0, rel=1e-12)


def test_jobs_waiting_on_an_off_host_are_unscheduled():
    events = [ExternalEvent(0.0, 'h0', EventAction.POWER_OFF)]
    result = run_simulation(make_platform(), make_workload(('late', 10, 1e9, 1)), events)
    assert [job.id for job in result.unscheduled_jobs] == ['late']
    assert result.end_time == 10.0


def test_power_on_releases_waiting_jobs():
    events = [ExternalEvent(0.0, 'h0', EventAction.POWER_OFF),
              ExternalEvent(100.0, 'h0', EventAction.POWER_ON)]
    result = run_simulation(make_platform(), make_workload(('late', 10, 72e9, 6)), events)
    assert result.schedule == (JobExecution('late', 'h0', 100.0, 101.0),)


def test_unknown_event_host_is_rejected():
    with pytest.raises(UnknownHost):
        SimulationEngine(make_platform(), Workload(), [ExternalEvent(1.0, 'ghost', EventAction.POWER_ON)])


# [CALLBACKS]
#------------------------------------------------------------------------------
def test_settlement_precedes_mode_change():
    engine = SimulationEngine(make_platform(), Workload(), [ExternalEvent(50.0, 'h0', EventAction.POWER_OFF)])
    register_callbacks(engine)
    recorder = RecordingCallback()
    engine.subscribe(recorder)
    engine.run()
    assert recorder.calls[0] == ('power', 50.0, HostMode.ON, 50.0)
    assert recorder.calls[-1] == ('destruction', 50.0, HostMode.OFF, 50.0)


def test_job_start_hook_sees_state_before_allocation():
    engine = SimulationEngine(make_platform(), make_workload(('a', 5, 72e9, 6)))
    recorder = RecordingCallback()
    engine.subscribe(recorder)
    engine.run()
    assert recorder.calls[0] == ('start', 5.0, 0, 0.0)


def test_plugin_settles_on_every_notification():
    plugin = CarbonFootprintPlugin()
    engine = SimulationEngine(make_platform(), make_workload(('a', 0, 72e9, 6)))
    register_callbacks(engine, plugin)
    engine.run()
    # creation, start, end, destruction, plus the trace settlements
    assert plugin.settlements >= 4


def test_register_callbacks_twice_fails():
    engine = SimulationEngine(make_platform(), Workload())
    register_callbacks(engine)
    with pytest.raises(DoubleRegistration):
        register_callbacks(engine)


def test_subscribe_same_callback_twice_fails():
    engine = SimulationEngine(make_platform(), Workload())
    recorder = RecordingCallback()
    engine.subscribe(recorder)
    with pytest.raises(DoubleRegistration):
        engine.subscribe(recorder)


def test_subscription_cancel():
    engine = SimulationEngine(make_platform(), Workload(), horizon=3600.0)
    subscription = register_callbacks(engine)
    assert subscription.active
    subscription.cancel()
    assert not subscription.active
    assert engine.run().total_carbon_g == 0.0


def test_engine_runs_only_once_and_freezes_callbacks():
    engine = SimulationEngine(make_platform(), Workload())
    engine.run()
    with pytest.raises(EngineRunning):
        engine.run()
    with pytest.raises(EngineRunning):
        register_callbacks(engine)


# [SUMMARY AND TRACE TOTALS]
#------------------------------------------------------------------------------
def test_summary_matches_last_record_when_run_ends_on_a_job_end():
    result = run_simulation(make_platform(), make_workload(('a', 0, 72e9, 6)), carbon_enabled=True)
    assert result.trace[-1].energy_j == result.total_energy_j
    assert result.trace[-1].carbon_g == result.total_carbon_g


def test_summary_includes_energy_after_the_last_record():
    events = [ExternalEvent(100.0, 'h0', EventAction.SET_CI, 200.0)]
    result = run_simulation(make_platform(), make_workload(('a', 0, 72e9, 6)), events,
                            carbon_enabled=True)
    assert result.end_time == 100.0
    assert result.trace[-1].energy_j == pytest.approx(40.0, rel=1e-12)
    assert result.total_energy_j == pytest.approx(40.0 + 99 * 10.0, rel=1e-12)
