"""Run configuration: settings defaults, config files and command-line flags.

Precedence is settings < ``--metric-file`` < flags.  Config file grammar::

    # comment
    [run]         samples, seed, format, out
    [problem]     family, coordinates, potential, phi, lambda
    [params]      name = value
    [metric]      g.<coord>.<coord> = "expr"
    [box]         <coord> = lo:hi
    [tolerances]  <check> = value

Values may be double-quoted; expressions usually are.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from django.conf import settings

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

MODES = ('verify', 'classify', 'catalog-list')
FORMATS = ('text', 'json')
SECTIONS = ('run', 'problem', 'params', 'metric', 'box', 'tolerances')

_SECTION = re.compile(r'^\[(?P<name>[A-Za-z_]+)\]$')
_ENTRY = re.compile(r'^(?P<key>[^=\s][^=]*?)\s*=\s*(?P<value>.*)$')


def lab_setting(name, default=None):
    """One entry of ``settings.SOLITONLAB``; ``default`` when Django is not configured."""
    if not settings.configured:
        return default
    return getattr(settings, 'SOLITONLAB', {}).get(name, default)


DEFAULT_TOLERANCES = {
    'soliton_residual': 1e-9,
    'ric_grad_f': 1e-8,
    'grad_norm_spread': 1e-8,
    'curvature_gradient_identity': 1e-8,
    'ricci_transport_identity': 1e-8,
    'trace_identity': 1e-8,
    'steady_hessian_norm': 1e-10,
    'steady_grad_norm_spread': 1e-9,
    'bochner': 1e-8,
    'hamilton_identity': 1e-8,
    'scalar_gradient_identity': 1e-8,
    'scalar_curvature_spread': 1e-9,
    'schouten_codazzi': 1e-10,
    'killing_fields': 1e-10,
    'killing_gradient_parallel': 1e-8,
    'parallel_fields': 1e-10,
    'isotropic_einstein': 1e-8,
    'steady_structure': 1e-10,
    'rigid_eigenstructure': 1e-10,
    'recurrence_theta': 1e-8,
    'ricci_profile': 1e-8,
    'expected_profile': 1e-8,
    'reconstruction': 1e-8,
}


def default_tolerances():
    """Per-check tolerances: ``DEFAULT_TOLERANCES`` under ``settings.SOLITONLAB['TOLERANCES']``."""
    return {**DEFAULT_TOLERANCES, **(lab_setting('TOLERANCES', {}) or {})}


@dataclass(frozen=True)
class RunConfig:
    mode: str = 'verify'
    family: Optional[str] = None
    params: dict = field(default_factory=dict)
    coordinates: tuple = ()
    metric: dict = field(default_factory=dict)
    potential: Optional[str] = None
    phi: Optional[str] = None
    lam: Optional[float] = None
    box: dict = field(default_factory=dict)
    samples: int = 100
    seed: int = 42
    tolerances: dict = field(default_factory=dict)
    format: str = 'text'
    out: Optional[str] = None
    n_jobs: int = 1


def _unquote(value):
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    return value


def parse_value(text):
    """Float when the text is numeric, otherwise the unquoted string."""
    text = _unquote(text)
    try:
        return float(text)
    except ValueError:
        return text


def parse_assignment(text, what):
    if '=' not in text:
        raise ConfigError(f'{what} must look like name=value, got {text!r}')
    key, value = text.split('=', 1)
    key = key.strip()
    if not key:
        raise ConfigError(f'{what} has an empty name: {text!r}')
    return key, value.strip()


def parse_interval(text, what='box'):
    parts = _unquote(text).split(':')
    if len(parts) != 2:
        raise ConfigError(f'{what} interval must look like lo:hi, got {text!r}')
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f'{what} interval bounds must be numbers, got {text!r}') from exc
    if not lo < hi:
        raise ConfigError(f'{what} interval needs lo < hi, got {text!r}')
    return lo, hi


def parse_config_text(text, source='<config>'):
    """Parse config-file text into a dict of RunConfig field overrides."""
    values = {'params': {}, 'metric': {}, 'box': {}, 'tolerances': {}}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        where = f'{source}:{lineno}'
        match = _SECTION.match(line)
        if match:
            section = match.group('name')
            if section not in SECTIONS:
                raise ConfigError(f'{where}: unknown section [{section}]')
            continue
        match = _ENTRY.match(line)
        if match is None:
            raise ConfigError(f'{where}: expected key = value, got {line!r}')
        if section is None:
            raise ConfigError(f'{where}: entry outside of a section')
        key, value = match.group('key').strip(), match.group('value')
        _apply_entry(values, section, key, value, where)
    return values


def _apply_entry(values, section, key, value, where):
    if section == 'params':
        values['params'][key] = parse_value(value)
    elif section == 'metric':
        parts = key.split('.')
        if len(parts) != 3 or parts[0] != 'g':
            raise ConfigError(f'{where}: metric keys look like g.<coord>.<coord>, got {key!r}')
        values['metric'][(parts[1], parts[2])] = _unquote(value)
    elif section == 'box':
        values['box'][key] = parse_interval(value, f'{where}: box')
    elif section == 'tolerances':
        values['tolerances'][key] = _number(value, where, key)
    elif section == 'run':
        if key in ('samples', 'seed'):
            values[key] = int(_number(value, where, key))
        elif key in ('format', 'out'):
            values[key] = _unquote(value)
        else:
            raise ConfigError(f'{where}: unknown [run] key {key!r}')
    elif section == 'problem':
        if key == 'coordinates':
            values['coordinates'] = tuple(_unquote(value).split())
        elif key == 'lambda':
            values['lam'] = _number(value, where, key)
        elif key in ('family', 'potential', 'phi'):
            values[key] = _unquote(value)
        else:
            raise ConfigError(f'{where}: unknown [problem] key {key!r}')


def _number(value, where, key):
    try:
        return float(_unquote(value))
    except ValueError as exc:
        raise ConfigError(f'{where}: {key} must be a number, got {value!r}') from exc


def load_config_file(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f'cannot read config file {path}: {exc}') from exc
    return parse_config_text(text, str(path))


def base_config(mode):
    return RunConfig(
        mode=mode,
        samples=int(lab_setting('SAMPLES', 100)),
        seed=int(lab_setting('SEED', 42)),
        tolerances=default_tolerances(),
        n_jobs=int(lab_setting('N_JOBS', 1)),
    )


def _merge(config, overrides):
    overrides = dict(overrides)
    for key in ('params', 'box', 'tolerances', 'metric'):
        if key in overrides:
            overrides[key] = {**getattr(config, key), **overrides[key]}
    return replace(config, **overrides)


def build_config(mode, options):
    """RunConfig from management-command options (None means not given)."""
    if mode not in MODES:
        raise ConfigError(f'unknown mode {mode!r}')
    config = base_config(mode)
    if options.get('metric_file'):
        config = _merge(config, load_config_file(options['metric_file']))

    flags = {}
    for key in ('family', 'potential', 'phi', 'samples', 'seed', 'format', 'out'):
        if options.get(key) is not None:
            flags[key] = options[key]
    if options.get('lambda') is not None:
        flags['lam'] = float(options['lambda'])
    if options.get('param'):
        flags['params'] = dict(
            (k, parse_value(v)) for k, v in
            (parse_assignment(item, '--param') for item in options['param']))
    if options.get('box'):
        flags['box'] = {k: parse_interval(v) for k, v in
                        (parse_assignment(item, '--box') for item in _flatten(options['box']))}
    if options.get('tol'):
        flags['tolerances'] = {k: _number(v, '--tol', k) for k, v in
                               (parse_assignment(item, '--tol') for item in options['tol'])}
    config = _merge(config, flags)
    logger.debug('run configuration: %s', config)
    return config


def _flatten(items):
    for item in items:
        if isinstance(item, (list, tuple)):
            yield from item
        else:
            yield item
