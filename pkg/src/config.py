"""
Run configuration: JSON parsing, validation and the built-in figure presets
"""
import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Tuple

from src.errors import CouplingOutOfRange, IoError, ParseError, TooLarge, ValidationError
from src.macroscopic_limit import LimitParams
from src.partitions import PARTITION_KINDS
from src.spin_thermal import BOUNDARIES, MAX_SPINS
from src.systems import FAMILIES, SWEEP_PARAMETER

logger = logging.getLogger(__name__)

COMMANDS = (
    'harmonic-negativity',
    'harmonic-phase',
    'harmonic-limit',
    'spin-negativity',
    'spin-phase',
    'certify',
)

COUPLINGS = {
    'harmonic-nearest': ('c',),
    'harmonic-next-nearest': ('mu',),
    'spin-XX': ('J', 'B'),
    'spin-XXX': ('J', 'B'),
}

# Partition kinds usable without extra parameters (offset, m and i default to 0)
NAMED_PARTITIONS = tuple(kind for kind in PARTITION_KINDS if kind != 'custom')


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one run of the command line needs

    Grids are tuples so that two configs compare equal after a JSON round trip.
    An empty `parameter` means the default swept coupling of the command.
    """
    command: str
    family: str = 'harmonic-nearest'
    sizes: Tuple[int, ...] = (64,)
    temperatures: Tuple[float, ...] = (0.45,)
    couplings: Dict[str, float] = field(default_factory=dict)
    parameter: str = ''
    sweep: Tuple[float, ...] = ()
    partitions: Tuple[str, ...] = ('even_odd', 'half_half')
    boundary: str = 'periodic'
    t_max: float = 5.0
    tolerance: float = 1e-6
    m: int = 10
    s: int = 3
    area_law: bool = False
    n_jobs: int = 1
    output: str = ''
    preset: str = 'custom'
    notes: str = ''

    def __post_init__(self):
        self.validate()

    @property
    def is_spin(self) -> bool:
        return self.family.startswith('spin-')

    @property
    def sweep_parameter(self) -> str:
        if self.parameter:
            return self.parameter
        if self.command == 'spin-negativity':
            return 'B'
        return SWEEP_PARAMETER[self.family]

    @property
    def output_path(self) -> str:
        if self.output:
            return self.output
        stem = self.preset if self.preset != 'custom' else self.command
        return os.path.join('output', f"{stem}.csv")

    def validate(self) -> None:
        """
        Check every precondition of the requested computation

        Raises:
            ValidationError: Naming the offending field
        """
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'. Expected one of {COMMANDS}")
        if self.family not in FAMILIES:
            raise ValidationError(f"Unknown family '{self.family}'. Expected one of {FAMILIES}")
        if self.command.startswith('harmonic-') and self.is_spin:
            raise ValidationError(f"Command {self.command} needs a harmonic family, got {self.family}")
        if self.command.startswith('spin-') and not self.is_spin:
            raise ValidationError(f"Command {self.command} needs a spin family, got {self.family}")
        if self.command == 'harmonic-limit' and self.family != 'harmonic-nearest':
            raise ValidationError("The macroscopic limit is only available for harmonic-nearest")

        if not self.sizes:
            raise ValidationError("Field 'sizes' must not be empty")
        for n in self.sizes:
            if n < 2 or n % 2 != 0:
                raise ValidationError(f"Field 'sizes': system sizes must be even and >= 2, got {n}")
            if self.is_spin and n > MAX_SPINS:
                raise TooLarge(f"Field 'sizes': spin chains are limited to {MAX_SPINS} sites, got {n}")
        if any(T < 0 for T in self.temperatures):
            raise ValidationError(f"Field 'temperatures': temperatures must be >= 0, got {self.temperatures}")

        allowed = COUPLINGS[self.family]
        unknown = set(self.couplings) - set(allowed)
        if unknown:
            raise ValidationError(f"Field 'couplings': {sorted(unknown)} not valid for {self.family}")
        if self.parameter and self.parameter not in allowed:
            raise ValidationError(f"Field 'parameter': '{self.parameter}' not valid for {self.family}")
        sweeps = self.command in ('harmonic-phase', 'spin-phase', 'harmonic-limit', 'spin-negativity')
        if self.sweep and not sweeps:
            raise ValidationError(f"Field 'sweep' is not used by {self.command}")
        if not self.sweep and sweeps and self.command != 'spin-negativity' and len(self.sizes) == 1:
            raise ValidationError(f"Command {self.command} needs a nonempty 'sweep' grid")

        couplings = list(self.couplings.items())
        if self.sweep:
            couplings += [(self.sweep_parameter, value) for value in self.sweep]
        for name, value in couplings:
            if name == 'c' and not 0 <= value < 0.5:
                raise CouplingOutOfRange(f"Coupling c={value} outside [0, 1/2)")
        if self.family in ('harmonic-nearest', 'harmonic-next-nearest') and not self.sweep:
            if allowed[0] not in self.couplings and self.command != 'harmonic-limit':
                raise ValidationError(f"Field 'couplings' must set {allowed[0]} for {self.family}")

        for kind in self.partitions:
            if kind not in NAMED_PARTITIONS:
                raise ValidationError(f"Field 'partitions': unknown kind '{kind}'. Expected one of {NAMED_PARTITIONS}")
        if self.boundary not in BOUNDARIES:
            raise ValidationError(f"Field 'boundary': expected one of {BOUNDARIES}, got '{self.boundary}'")
        if self.t_max <= 0:
            raise ValidationError(f"Field 't_max' must be positive, got {self.t_max}")
        if self.tolerance <= 0:
            raise ValidationError(f"Field 'tolerance' must be positive, got {self.tolerance}")
        if self.n_jobs == 0:
            raise ValidationError("Field 'n_jobs' must be a positive worker count or -1 for all cores")
        if self.command == 'harmonic-limit':
            LimitParams(c=0.0, T=1.0, m=self.m, s=self.s)


def _as_tuple(value: Any, cast, name: str) -> tuple:
    if not isinstance(value, list):
        raise ValidationError(f"Field '{name}' must be a list, got {type(value).__name__}")
    return tuple(_as_scalar(item, cast, name) for item in value)


def _as_scalar(value: Any, cast, name: str):
    if isinstance(value, bool) and cast is not bool:
        raise ValidationError(f"Field '{name}' must be numeric, got {value!r}")
    if cast is int and isinstance(value, float) and not value.is_integer():
        raise ValidationError(f"Field '{name}' must hold integers, got {value!r}")
    if cast is str and not isinstance(value, str):
        raise ValidationError(f"Field '{name}' must be a string, got {value!r}")
    if cast is bool and not isinstance(value, bool):
        raise ValidationError(f"Field '{name}' must be true or false, got {value!r}")
    try:
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Field '{name}' has invalid value {value!r}") from e


def _line_of(text: str, key: str) -> int:
    """1-based line of the first occurrence of a JSON key, 1 if absent"""
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return number
    return 1


_CASTS = {
    'command': str, 'family': str, 'parameter': str, 'boundary': str, 'output': str,
    'preset': str, 'notes': str,
    't_max': float, 'tolerance': float,
    'm': int, 's': int, 'n_jobs': int,
    'area_law': bool,
}
_TUPLES = {'sizes': int, 'temperatures': float, 'sweep': float, 'partitions': str}


def _fields_from_mapping(data: Mapping[str, Any], text: str = '') -> Dict[str, Any]:
    names = {f.name for f in dataclasses.fields(RunConfig)}
    values: Dict[str, Any] = {}
    for key, raw in data.items():
        if key not in names:
            raise ParseError(f"Unknown configuration key '{key}'", line=_line_of(text, key), field=key)
        if key in _TUPLES:
            values[key] = _as_tuple(raw, _TUPLES[key], key)
        elif key == 'couplings':
            if not isinstance(raw, dict):
                raise ValidationError("Field 'couplings' must be an object")
            values[key] = {str(name): _as_scalar(value, float, f"couplings.{name}") for name, value in raw.items()}
        else:
            values[key] = _as_scalar(raw, _CASTS[key], key)
    if 'partitions' in values:
        values['partitions'] = tuple(kind.replace('-', '_') for kind in values['partitions'])
    return values


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a JSON run configuration

    A "preset" key names a built-in configuration; the remaining keys override
    its fields.

    Args:
        text (str): JSON document

    Returns:
        RunConfig: Validated configuration

    Raises:
        ParseError: Malformed JSON, unknown keys or unknown presets
        ValidationError: Out-of-range values
    """
    if not text or not text.strip():
        raise ParseError("Configuration is empty", line=1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError("Configuration must be a JSON object", line=1)

    values = _fields_from_mapping(data, text)
    preset = values.get('preset', 'custom')
    if preset != 'custom':
        if preset not in PRESETS:
            raise ParseError(f"Unknown preset '{preset}'. Expected one of {sorted(PRESETS)}",
                             line=_line_of(text, 'preset'), field='preset')
        return dataclasses.replace(PRESETS[preset], **values)
    if 'command' not in values:
        raise ParseError("Missing required key 'command'", line=1, field='command')
    return RunConfig(**values)


def config_to_text(config: RunConfig) -> str:
    """Serialize a configuration to the JSON accepted by parse_config"""
    data = {}
    for f in dataclasses.fields(RunConfig):
        value = getattr(config, f.name)
        data[f.name] = list(value) if isinstance(value, tuple) else value
    return json.dumps(data, indent=2)


def load_config(path: str) -> RunConfig:
    """
    Load a run configuration from a JSON file

    Relative paths are tried against the working directory first, then the app root.

    Args:
        path (str): Path to the JSON file

    Returns:
        RunConfig: Validated configuration
    """
    if not os.path.isabs(path) and not os.path.exists(path):
        app_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        candidate = os.path.join(app_root, path)
        if os.path.exists(candidate):
            path = candidate
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        logger.error(f"Failed to read configuration {path}: {str(e)}")
        raise IoError(f"Cannot read configuration {path}: {e.strerror}") from e
    config = parse_config(text)
    logger.info(f"Loaded {config.command} configuration from {path}")
    return config


def _grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


PRESETS: Dict[str, RunConfig] = {
    'fig1': RunConfig(
        command='harmonic-negativity',
        family='harmonic-nearest',
        sizes=(32, 64, 128, 256, 512),
        temperatures=(0.35, 0.4, 0.45),
        couplings={'c': 0.4},
        partitions=('even_odd', 'half_half'),
        area_law=True,
        preset='fig1',
        notes='Log-negativity versus n at c=0.4. Size grid 32..512 (doubling) chosen by us.',
    ),
    'fig2': RunConfig(
        command='harmonic-phase',
        family='harmonic-nearest',
        sizes=(800,),
        sweep=_grid(0.05, 0.45, 0.05),
        partitions=('even_odd', 'half_half', 'one_vs_rest'),
        t_max=2.0,
        preset='fig2',
        notes='Threshold temperatures versus c at n=800. Coupling grid step 0.05 and T_max=2 chosen by us.',
    ),
    'fig3': RunConfig(
        command='harmonic-phase',
        family='harmonic-next-nearest',
        sizes=(200,),
        sweep=_grid(0.1, 1.5, 0.1),
        partitions=('even_odd', 'half_half', 'one_vs_rest'),
        preset='fig3',
        notes='Threshold temperatures versus mu at n=200. Grid 0.1..1.5 step 0.1 chosen by us.',
    ),
    'fig4': RunConfig(
        command='harmonic-limit',
        family='harmonic-nearest',
        sweep=_grid(0.05, 0.45, 0.05),
        m=10,
        s=3,
        preset='fig4',
        notes='Macroscopic-limit thresholds with m=10 and s=3. Coupling grid step 0.05 chosen by us.',
    ),
    'fig5': RunConfig(
        command='spin-negativity',
        family='spin-XX',
        sizes=(4, 6, 8, 10, 12),
        temperatures=(2.0, 2.6),
        couplings={'J': 1.0, 'B': 1.9},
        partitions=('even_odd', 'half_half'),
        area_law=True,
        preset='fig5',
        notes='XX negativity versus n at J=1, B=1.9. Sizes 4..12 chosen by us.',
    ),
    'fig6': RunConfig(
        command='spin-phase',
        family='spin-XX',
        sizes=(10,),
        couplings={'B': 1.9},
        parameter='J',
        sweep=(0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0),
        partitions=('even_odd', 'one_vs_rest', 'half_half'),
        t_max=10.0,
        tolerance=1e-4,
        preset='fig6',
        notes='XX thresholds versus J at n=10, B=1.9. J grid step 0.25, T_max=10 and tolerance 1e-4 chosen by us.',
    ),
    'fig7': RunConfig(
        command='spin-negativity',
        family='spin-XX',
        sizes=(10,),
        temperatures=(0.1,),
        couplings={'J': 1.0},
        sweep=_grid(0.0, 3.0, 0.05),
        partitions=('even_odd', 'half_half'),
        preset='fig7',
        notes='XX negativity versus B at n=10, J=1, T=0.1. Field grid 0..3 step 0.05 chosen by us.',
    ),
    'fig8': RunConfig(
        command='certify',
        family='spin-XX',
        sizes=(10,),
        temperatures=(),
        couplings={'J': 1.0, 'B': 2.3},
        partitions=('even_odd', 'half_half'),
        preset='fig8',
        notes='Bound-entanglement window of the XX ring at n=10, J=1, B=2.3. '
              'Probe grid 256 log-spaced points in [0.01, 5] refined to 1e-4.',
    ),
}
