import pandas as pd
import pytest

from CARBONSIM.commons.utils.tracer import (format_number, record_event, CarbonTracer, write_trace,
                                            write_summary, platform_carbon)
from CARBONSIM.commons.utils.engine import run_simulation
from CARBONSIM.commons.utils.generators import BenchmarkSuite
from CARBONSIM.commons.models.entities import TraceRecord, EventType, HostSummary, PowerProfile

from builders import make_host, make_platform, make_runtime, make_workload


HEADER = 'time,energy,carbon_emission,event_type,ecarbon\n'


@pytest.mark.parametrize('value, expected', [(144000.0, '144000'), (1 / 3600, '0.000277778'),
                                             (0.0, '0'), (-0.0, '0'), (3.93392, '3.93392'), (0.5, '0.5'),
                                             (2.5277777777, '2.527778'), (1e-9, '0.000000001'),
                                             (1 / 90000, '0.0000111111')])
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_first_record_has_zero_rate():
    record = record_event([make_runtime()], 0.0, 's')
    assert record == TraceRecord(0.0, 0.0, 0.0, EventType.JOB_START, 0.0)


def test_record_rate_since_previous_record():
    previous = TraceRecord(0.0, 0.0, 0.0, EventType.JOB_START, 0.0)
    host = make_runtime(energy_j=36000.0, carbon_g=1.0, last_update=3600.0)
    record = record_event([host], 3600.0, EventType.JOB_END, previous)
    assert record.ecarbon == pytest.approx(1 / 3600, rel=1e-12)
    assert record.event_type == EventType.JOB_END


def test_equal_time_records_have_zero_rate():
    tracer = CarbonTracer()
    hosts = [make_runtime(carbon_g=2.0)]
    tracer.record(hosts, 5.0, 'e')
    hosts[0].carbon_g = 2.0
    assert tracer.record(hosts, 5.0, 's').ecarbon == 0.0


def test_record_rejects_unknown_event_type():
    with pytest.raises(ValueError):
        record_event([make_runtime()], 0.0, 'x')


def test_platform_carbon_sums_hosts():
    hosts = [make_runtime(make_host(f'h{i}'), carbon_g=value) for i, value in enumerate((0.5, 1.5))]
    assert platform_carbon(hosts) == 2.0


def test_write_trace_empty_is_header_only(tmp_path):
    path = write_trace([], str(tmp_path / 'trace.csv'))
    with open(path, encoding='utf-8') as f:
        assert f.read() == HEADER


def test_write_trace_one_record(tmp_path):
    records = [TraceRecord(3600.0, 144000.0, 3.93392, EventType.JOB_END, 1 / 3600)]
    path = write_trace(records, str(tmp_path / 'out' / 'trace.csv'))
    with open(path, encoding='utf-8') as f:
        assert f.read() == HEADER + '3600,144000,3.93392,e,0.000277778\n'


def test_write_summary_keeps_platform_order(tmp_path):
    summary = [HostSummary('Intel_i5_11400H', 144000.0, 0.04 * 98.348),
               HostSummary('a_second_host', 0.0, 0.0)]
    path = write_summary(summary, str(tmp_path / 'hosts.csv'))
    with open(path, encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert lines == ['host_id,total_energy_j,total_carbon_g', 'Intel_i5_11400H,144000,3.93392',
                     'a_second_host,0,0']


@pytest.mark.parametrize('label', ['resnet18', 'bert_large', 'dlrm'])
def test_written_trace_rates_telescope_to_written_carbon(tmp_path, label):
    suite = BenchmarkSuite()
    result = run_simulation(suite.platform(label), suite.workload(label), carbon_enabled=True)
    trace = pd.read_csv(write_trace(result.trace, str(tmp_path / f'{label}_trace.csv')))
    telescoped = (trace['ecarbon'].iloc[1:] * trace['time'].diff().iloc[1:]).sum()
    assert telescoped == pytest.approx(trace['carbon_emission'].iloc[-1], rel=2e-5)
    assert trace['carbon_emission'].iloc[-1] == pytest.approx(result.total_carbon_g, rel=1e-5)


def test_low_power_host_keeps_significant_digits(tmp_path):
    profile = PowerProfile(idle_w=1.0, epsilon_w=1.0, allcores_w=1.0, off_w=0.0)
    platform = make_platform(make_host(cores=1, speed=1e9, profile=profile, ci=1.0))
    result = run_simulation(platform, make_workload(('tiny', 0, 40e9, 1)), carbon_enabled=True)
    trace = pd.read_csv(write_trace(result.trace, str(tmp_path / 'tiny_trace.csv')))
    assert trace['carbon_emission'].iloc[-1] == pytest.approx(40 / 3.6e6, rel=1e-5)
    assert trace['ecarbon'].iloc[-1] == pytest.approx(1 / 3.6e6, rel=1e-5)
