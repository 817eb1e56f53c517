from loguru import logger

from CARBONSIM.commons.utils.carbon import update_host_footprint, set_carbon_intensity
from CARBONSIM.commons.errors import DoubleRegistration


# [SIMULATION CALLBACKS]
#==============================================================================
# Hooks invoked by the engine on host events. Every hook runs BEFORE the engine
# applies the corresponding state change, so a callback sees the host in the
# state it held during the interval being closed
#==============================================================================
class SimulationCallback:

    def on_host_creation(self, host, time):
        pass

    def on_host_destruction(self, host, time):
        pass

    def on_power_change(self, host, time, mode):
        pass

    def on_job_start(self, host, time, job):
        pass

    def on_job_end(self, host, time, job):
        pass

    def on_carbon_intensity_change(self, host, time, value):
        pass

    def on_settlement(self, host, time):
        pass


# [SUBSCRIPTION HANDLE]
#==============================================================================
class Subscription:

    def __init__(self, engine, callback):
        self.engine = engine
        self.callback = callback

    @property
    def active(self):
        return any(cb is self.callback for cb in self.engine.callbacks)

    def cancel(self):
        self.engine.unsubscribe(self.callback)


# [CARBON FOOTPRINT PLUGIN]
#==============================================================================
# Settles the affected host (energy and carbon) on every notification
#==============================================================================
class CarbonFootprintPlugin(SimulationCallback):

    def __init__(self):
        self.settlements = 0

    #--------------------------------------------------------------------------
    def _update(self, host, time):
        update_host_footprint(host, time)
        self.settlements += 1

    def on_host_creation(self, host, time):
        self._update(host, time)

    def on_host_destruction(self, host, time):
        self._update(host, time)

    def on_power_change(self, host, time, mode):
        self._update(host, time)

    def on_job_start(self, host, time, job):
        self._update(host, time)

    def on_job_end(self, host, time, job):
        self._update(host, time)

    def on_settlement(self, host, time):
        self._update(host, time)

    #--------------------------------------------------------------------------
    def on_carbon_intensity_change(self, host, time, value):
        set_carbon_intensity(host, value, time)
        self.settlements += 1
        logger.debug(f'{host.host_id}: carbon intensity set to {value} g/kWh at t={time}')


#------------------------------------------------------------------------------
def register_callbacks(engine, plugin=None):

    '''
    Attaches a carbon footprint plugin to an engine that has not started yet.

    Keyword Arguments:
        engine (SimulationEngine): The engine to attach to.
        plugin (CarbonFootprintPlugin, optional): Plugin instance, a new one
                                                  is created by default.

    Returns:
        Subscription: handle of the registration.

    '''
    if any(isinstance(cb, CarbonFootprintPlugin) for cb in engine.callbacks):
        raise DoubleRegistration('a carbon footprint plugin is already registered on this engine')

    return engine.subscribe(plugin or CarbonFootprintPlugin())
