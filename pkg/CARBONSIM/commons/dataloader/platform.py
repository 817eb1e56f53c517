import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from loguru import logger

from CARBONSIM.commons.models.entities import PowerProfile, HostSpec, PlatformSpec, CISourceRef
from CARBONSIM.commons.errors import (PlatformError, MalformedPowerProfile, OrderingViolation,
                                      DuplicateHostId, MissingAttribute, MissingProperty,
                                      UnparsableSpeed, ConflictingCarbonIntensity,
                                      PlatformValidationError)
import CARBONSIM.commons.configurations as cnf


SPEED_UNITS = {'f' : 1.0, 'kf' : 1e3, 'Mf' : 1e6, 'Gf' : 1e9,
               'Tf' : 1e12, 'Pf' : 1e15, 'Ef' : 1e18}
SPEED_PATTERN = re.compile(r'^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([kMGTPE]?f)?\s*$')
HOST_PROPERTIES = ('wattage_per_state', 'wattage_off', 'carbon_intensity', 'carbon_intensity_trace')


@dataclass(frozen=True)
class Violation:
    host_id: str
    field: str
    message: str

    def __str__(self):
        location = self.host_id if self.host_id is not None else 'platform'
        return f'{location}.{self.field}: {self.message}'


#------------------------------------------------------------------------------
def _parse_watts(token, field):
    try:
        value = float(token)
    except (TypeError, ValueError):
        raise MalformedPowerProfile(f'Non-numeric wattage {token!r} in {field}') from None
    if not math.isfinite(value):
        raise MalformedPowerProfile(f'Wattage {token!r} in {field} is not finite')
    if value < 0:
        raise MalformedPowerProfile(f'Negative wattage {value} in {field}')

    return value

#------------------------------------------------------------------------------
def parse_power_profile(text, off_text):

    '''
    Parses the "Idle:Epsilon:AllCores" wattage triplet and the off wattage of
    a host into a PowerProfile. Only the first power state is used when the
    value lists several comma-separated states.

    Keyword Arguments:
        text (str): Value of the wattage_per_state property, e.g. "10:25:40".
        off_text (str): Value of the wattage_off property, e.g. "1.0".

    Returns:
        PowerProfile: the parsed profile.

    '''
    states = [state for state in str(text).split(',') if state.strip()]
    if not states:
        raise MalformedPowerProfile(f'Empty wattage_per_state value {text!r}')
    if len(states) > 1:
        logger.warning(f'wattage_per_state lists {len(states)} power states, only pstate 0 is used')
    tokens = states[0].strip().split(':')
    if len(tokens) != 3:
        raise MalformedPowerProfile(f'wattage_per_state must be "Idle:Epsilon:AllCores", got {text!r}')
    idle_w, epsilon_w, allcores_w = (_parse_watts(t, 'wattage_per_state') for t in tokens)
    off_w = _parse_watts(off_text, 'wattage_off')
    if idle_w > epsilon_w or epsilon_w > allcores_w:
        raise OrderingViolation(f'wattage_per_state requires Idle <= Epsilon <= AllCores, got {text!r}')

    return PowerProfile(idle_w, epsilon_w, allcores_w, off_w)

#------------------------------------------------------------------------------
def parse_speed(text):

    '''
    Converts a SimGrid speed string into FLOP/s per core. "12Gf" is read as
    12e9 FLOP/s; plain numbers are FLOP/s. With a comma-separated list of
    per-pstate speeds the first one is used.

    '''
    entries = [entry for entry in str(text).split(',') if entry.strip()]
    if not entries:
        raise UnparsableSpeed(f'Empty speed value {text!r}')
    if len(entries) > 1:
        logger.warning(f'Speed {text!r} lists several pstates, only pstate 0 is used')
    match = SPEED_PATTERN.match(entries[0])
    if match is None:
        raise UnparsableSpeed(f'Cannot parse speed {text!r}')
    number, unit = match.groups()

    return float(number) * SPEED_UNITS[unit or 'f']

#------------------------------------------------------------------------------
def _parse_host(element):
    host_id = element.get('id')
    if host_id is None:
        raise MissingAttribute('host element without "id" attribute')
    speed_text = element.get('speed')
    if speed_text is None:
        raise MissingAttribute(f'host {host_id}: missing "speed" attribute')
    try:
        speed = parse_speed(speed_text)
    except UnparsableSpeed as e:
        raise UnparsableSpeed(f'host {host_id}: {e}') from None
    core_text = element.get('core', '1')
    try:
        core_count = int(core_text)
    except ValueError:
        raise PlatformError(f'host {host_id}: cannot parse core count {core_text!r}') from None
    pstate = element.get('pstate')
    if pstate is not None and pstate.strip() != str(cnf.HOST_POWER_STATE):
        logger.warning(f'host {host_id}: pstate {pstate} ignored, pstate {cnf.HOST_POWER_STATE} is used')

    properties = {}
    for prop in element.findall('prop'):
        prop_id = prop.get('id')
        if prop_id not in HOST_PROPERTIES:
            logger.warning(f'host {host_id}: property {prop_id!r} ignored')
            continue
        properties[prop_id] = prop.get('value')

    if 'wattage_per_state' not in properties:
        raise MissingProperty(f'host {host_id}: missing "wattage_per_state" property')
    off_text = properties.get('wattage_off')
    if off_text is None:
        logger.warning(f'host {host_id}: no "wattage_off" property, using 0 W')
        off_text = '0'
    try:
        profile = parse_power_profile(properties['wattage_per_state'], off_text)
    except PlatformError as e:
        raise type(e)(f'host {host_id}: {e}') from None

    constant = properties.get('carbon_intensity')
    trace = properties.get('carbon_intensity_trace')
    if constant is not None and trace is not None:
        raise ConflictingCarbonIntensity(f'host {host_id}: declares both "carbon_intensity" '
                                         'and "carbon_intensity_trace"')
    if trace is not None:
        ci_source = CISourceRef.from_trace(trace.strip())
    elif constant is not None:
        try:
            ci_source = CISourceRef.from_constant(constant)
        except ValueError:
            raise PlatformError(f'host {host_id}: cannot parse carbon_intensity {constant!r}') from None
    else:
        logger.warning(f'host {host_id}: no carbon intensity property, '
                       f'using {cnf.DEFAULT_CARBON_INTENSITY} g/kWh')
        ci_source = CISourceRef.from_constant(cnf.DEFAULT_CARBON_INTENSITY)

    return HostSpec(host_id, core_count, speed, profile, ci_source)

#------------------------------------------------------------------------------
def parse_platform(document):

    '''
    Parses a platform document (SimGrid XML subset) into a PlatformSpec. Only
    host elements and their prop children are interpreted, every other
    element is ignored with a warning.

    Keyword Arguments:
        document (str): Platform XML text.

    Returns:
        PlatformSpec: hosts in document order.

    '''
    try:
        root = ET.fromstring(document)
    except ET.ParseError as e:
        raise PlatformError(f'Malformed platform document: {e}') from None

    hosts, seen_ids, ignored_tags = [], set(), set()
    for element in root.iter():
        if element is root and element.tag == 'platform':
            continue
        if element.tag == 'prop':
            continue
        if element.tag != 'host':
            ignored_tags.add(element.tag)
            continue
        host = _parse_host(element)
        if host.id in seen_ids:
            raise DuplicateHostId(f'Duplicate host id {host.id!r}')
        seen_ids.add(host.id)
        hosts.append(host)

    for tag in sorted(ignored_tags):
        logger.warning(f'Platform element <{tag}> is not interpreted and was ignored')

    spec = PlatformSpec(tuple(hosts))
    violations = validate_platform(spec)
    if violations:
        raise PlatformValidationError(violations)

    return spec

#------------------------------------------------------------------------------
def validate_platform(spec):

    '''
    Collects every invariant violation of a platform specification. Violations
    are returned as data and never raised.

    '''
    violations = []
    if not spec.hosts:
        violations.append(Violation(None, 'hosts', 'platform has no hosts'))
    seen_ids = set()
    for host in spec.hosts:
        if host.id in seen_ids:
            violations.append(Violation(host.id, 'id', 'duplicate host id'))
        seen_ids.add(host.id)
        if not isinstance(host.core_count, int) or host.core_count < 1:
            violations.append(Violation(host.id, 'core_count', f'must be >= 1, got {host.core_count}'))
        if not math.isfinite(host.speed_per_core) or host.speed_per_core <= 0:
            violations.append(Violation(host.id, 'speed', f'must be > 0, got {host.speed_per_core}'))
        profile = host.profile
        for field in ('idle_w', 'epsilon_w', 'allcores_w', 'off_w'):
            value = getattr(profile, field)
            if not math.isfinite(value) or value < 0:
                violations.append(Violation(host.id, field, f'must be finite and >= 0, got {value}'))
        if not profile.idle_w <= profile.epsilon_w <= profile.allcores_w:
            violations.append(Violation(host.id, 'wattage_per_state',
                                        'requires idle <= epsilon <= allcores'))
        source = host.ci_source
        if source.is_trace and source.constant is not None:
            violations.append(Violation(host.id, 'carbon_intensity', 'both constant and trace declared'))
        elif source.is_trace and not source.trace:
            violations.append(Violation(host.id, 'carbon_intensity_trace', 'empty trace reference'))
        elif not source.is_trace and (source.constant is None or not math.isfinite(source.constant)
                                      or source.constant < 0):
            violations.append(Violation(host.id, 'carbon_intensity',
                                        f'must be finite and >= 0, got {source.constant}'))

    return violations

#------------------------------------------------------------------------------
def serialize_platform(spec):

    '''
    Renders a PlatformSpec back to platform XML. Numbers are written with
    repr() so that parsing the output yields the same spec field by field.

    '''
    root = ET.Element('platform', {'version' : '4.1'})
    for host in spec.hosts:
        element = ET.SubElement(root, 'host', {'id' : host.id,
                                               'speed' : f'{host.speed_per_core!r}f',
                                               'pstate' : str(cnf.HOST_POWER_STATE),
                                               'core' : str(host.core_count)})
        profile = host.profile
        wattages = f'{profile.idle_w!r}:{profile.epsilon_w!r}:{profile.allcores_w!r}'
        ET.SubElement(element, 'prop', {'id' : 'wattage_per_state', 'value' : wattages})
        ET.SubElement(element, 'prop', {'id' : 'wattage_off', 'value' : repr(profile.off_w)})
        if host.ci_source.is_trace:
            ET.SubElement(element, 'prop', {'id' : 'carbon_intensity_trace', 'value' : host.ci_source.trace})
        else:
            ET.SubElement(element, 'prop', {'id' : 'carbon_intensity', 'value' : repr(host.ci_source.constant)})
    ET.indent(root)

    return ET.tostring(root, encoding='unicode') + '\n'

#------------------------------------------------------------------------------
def load_platform(path):
    with open(path, 'r', encoding='utf-8') as f:
        document = f.read()
    logger.info(f'Loading platform from {path}')

    return parse_platform(document)
