from CARBONSIM.commons.models.entities import HostMode, PowerSample
from CARBONSIM.commons.errors import ClockRegression, InvalidOccupancy


# [HOST ENERGY MODEL]
#==============================================================================
# Power of a host as a function of its mode and of the number of busy cores,
# and joule accounting over settlement intervals
#==============================================================================
def instantaneous_power(profile, mode, busy_cores, core_count):

    '''
    Instantaneous power draw of a host. An Off host draws the off wattage, an
    idle On host the Idle wattage. With c busy cores out of n the draw is
    interpolated linearly between Epsilon (one busy core) and AllCores (all n
    busy cores).

    Keyword Arguments:
        profile (PowerProfile): Power profile of the host.
        mode (HostMode): Current power mode.
        busy_cores (int): Number of cores allocated to running jobs.
        core_count (int): Total number of cores of the host.

    Returns:
        float: power in watts.

    '''
    if busy_cores < 0 or busy_cores > core_count:
        raise InvalidOccupancy(f'busy cores {busy_cores} outside [0, {core_count}]')
    if mode == HostMode.OFF:
        return profile.off_w
    if busy_cores == 0:
        return profile.idle_w
    if core_count == 1:
        return profile.allcores_w
    dynamic_range = profile.allcores_w - profile.epsilon_w

    return profile.epsilon_w + dynamic_range * (busy_cores - 1) / (core_count - 1)

#------------------------------------------------------------------------------
def accumulate_energy(power_w, t0, t1):
    if t1 < t0:
        raise ClockRegression(f'interval end {t1} precedes start {t0}')

    return power_w * (t1 - t0)

#------------------------------------------------------------------------------
def platform_energy(hosts):
    return sum((host.energy_j for host in hosts), 0.0)

#------------------------------------------------------------------------------
def host_power(host):
    spec = host.spec

    return instantaneous_power(spec.profile, host.mode, host.busy_cores, spec.core_count)

#------------------------------------------------------------------------------
def power_sample(host, time):
    return PowerSample(host.host_id, time, host_power(host))

#------------------------------------------------------------------------------
def settle_energy(host, t1):

    '''
    Closes the interval [last_update, t1] of a host for energy only, pricing it
    at the power drawn in the state held since last_update. Settling a host
    that is already settled at t1 adds nothing.

    Returns:
        float: the energy step in joules.

    '''
    energy_step = accumulate_energy(host_power(host), host.last_update, t1)
    host.energy_j += energy_step
    host.last_update = t1

    return energy_step
