from CARBONSIM.commons.models.entities import (PowerProfile, HostSpec, PlatformSpec, CISourceRef,
                                               HostRuntime, CarbonIntensitySeries, Job, Workload)


I5_DOCUMENT = '''<?xml version='1.0'?>
<platform version="4.1">
  <zone id="AS0" routing="Full">
    <host id="Intel_i5_11400H" speed="12Gf" pstate="0" core="6">
      <prop id="wattage_per_state" value="10:25:40"/>
      <prop id="wattage_off" value="1.0"/>
      <prop id="carbon_intensity" value="98.348"/>
    </host>
  </zone>
</platform>
'''

I5_PROFILE = PowerProfile(idle_w=10.0, epsilon_w=25.0, allcores_w=40.0, off_w=1.0)


def make_host(host_id='h0', cores=6, speed=12e9, profile=I5_PROFILE, ci=100.0):
    source = CISourceRef.from_trace(ci) if isinstance(ci, str) else CISourceRef.from_constant(ci)

    return HostSpec(host_id, cores, speed, profile, source)


def make_platform(*hosts):
    return PlatformSpec(tuple(hosts) if hosts else (make_host(),))


def make_runtime(spec=None, ci=100.0, **state):
    spec = spec or make_host()
    series = ci if isinstance(ci, CarbonIntensitySeries) else CarbonIntensitySeries.constant(ci)

    return HostRuntime(spec, series, **state)


def make_workload(*jobs):

    '''
    Workload from (id, submit_time, flop_total, cores) tuples, kept in the
    given order.

    '''
    return Workload(tuple(Job(*job) for job in jobs))
