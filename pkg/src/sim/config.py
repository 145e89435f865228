"""
Scenario configuration for the simulator.

Scenario files are flat YAML mappings keyed by dotted names, for example::

    m: 25
    delta: 0.0333333333
    probing.kind: exponential
    probing.n_bots: 50
    probing.mean: 30
    horizon: 30000
    replications: 30
    seed: 20180417

Command-line overrides use the same keys.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import yaml

from ..analytic.params import ModelParams
from ..errors import ConfigError, ParameterError
from .policies import (
    ASSIGNMENT_KINDS,
    PROBING_KINDS,
    REPLACEMENT_KINDS,
    AllAtOnce,
    AssignmentPolicy,
    PerBotDeterministic,
    PerBotExponential,
    PerBotTruncGaussian,
    PerProxyIndependent,
    PoissonAggregate,
    ProbingProcess,
    ReplacementPolicy,
    RoundRobin,
    Selective,
    UniformRandom,
)

logger = logging.getLogger(__name__)

KNOWN_KEYS = (
    'm', 'beta', 'delta', 'r',
    'probing.kind', 'probing.n_bots', 'probing.mean', 'probing.kappa', 'probing.floor',
    'replacement.kind',
    'assignment.kind', 'assignment.nominal_rate',
    'horizon', 'warmup', 'replications', 'seed',
    'trajectory.interval', 'workers', 'trace.limit',
)

DEFAULT_WARMUP_FRACTION = 0.1
MIN_RECOMMENDED_REPLICATIONS = 30
RATE_MATCH_TOLERANCE = 1e-9

Lines = Dict[str, int]


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Full description of one simulation experiment.

    Attributes:
        params: Model parameters; beta and delta must match the policies
        probing: How the bots probe
        replacement: How proxy identities change
        assignment: How the load balancer assigns proxies
        horizon: Simulated time of each replication
        warmup: Start of the measurement window [warmup, horizon]
        replications: Number of independent replications
        seed: Root seed; replication i uses stream i spawned from it
        trajectory_interval: Spacing of the recorded (t, Y) samples;
            None means horizon / 1000
        workers: Processes used to run replications
        trace_limit: Number of events of replication 0 kept as a trace
    """

    params: ModelParams
    probing: ProbingProcess
    replacement: ReplacementPolicy
    assignment: AssignmentPolicy
    horizon: float
    warmup: float
    replications: int
    seed: int
    trajectory_interval: Optional[float] = None
    workers: int = 1
    trace_limit: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ConfigError(f"horizon must be finite and > 0, got {self.horizon!r}")
        if not 0 <= self.warmup < self.horizon:
            raise ConfigError(
                f"warmup must lie in [0, horizon), got warmup={self.warmup!r}, horizon={self.horizon!r}"
            )
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.trajectory_interval is not None and not self.trajectory_interval > 0:
            raise ConfigError(f"trajectory interval must be > 0, got {self.trajectory_interval!r}")
        if self.workers < 1 or self.trace_limit < 0:
            raise ConfigError("workers must be >= 1 and trace limit >= 0")
        _check_rate("beta", self.params.beta, self.probing.aggregate_rate)
        _check_rate("delta", self.params.delta, self.replacement.delta)
        if isinstance(self.replacement, Selective) and self.replacement.r != self.params.r:
            raise ConfigError("params.r must equal the selective replacement probability")

    @property
    def sample_interval(self) -> float:
        return self.trajectory_interval or self.horizon / 1000.0

    @property
    def expected_cycles(self) -> float:
        """Mean number of replacement events in the measurement window."""
        return (self.horizon - self.warmup) * self.params.delta

    def to_flat(self) -> Dict[str, Any]:
        """Flat key/value form, loadable again by from_flat."""
        flat: Dict[str, Any] = {
            'm': self.params.m,
            'beta': self.params.beta,
            'delta': self.params.delta,
            'r': self.params.r,
            'probing.kind': self.probing.kind,
            'replacement.kind': self.replacement.kind,
            'assignment.kind': self.assignment.kind,
            'horizon': self.horizon,
            'warmup': self.warmup,
            'replications': self.replications,
            'seed': self.seed,
            'workers': self.workers,
            'trace.limit': self.trace_limit,
        }
        if self.trajectory_interval is not None:
            flat['trajectory.interval'] = self.trajectory_interval
        if isinstance(self.probing, PerBotDeterministic):
            flat.update({'probing.n_bots': self.probing.n_bots, 'probing.mean': self.probing.period})
        elif not isinstance(self.probing, PoissonAggregate):
            flat.update({'probing.n_bots': self.probing.n_bots,
                         'probing.mean': self.probing.mean_interprobe})
        if isinstance(self.probing, PerBotTruncGaussian):
            flat.update({'probing.kappa': self.probing.kappa, 'probing.floor': self.probing.floor})
        if isinstance(self.assignment, RoundRobin):
            flat['assignment.nominal_rate'] = self.assignment.nominal_client_rate
        return flat

    @classmethod
    def from_flat(cls, values: Dict[str, Any], lines: Optional[Lines] = None) -> "ScenarioConfig":
        """
        Build a configuration from flat dotted keys.

        Args:
            values: Key/value pairs, keys from KNOWN_KEYS
            lines: Source line of each key, used in error messages

        Raises:
            ConfigError: on missing, malformed or inconsistent values
        """
        return _Builder(values, lines or {}).build()


def _check_rate(name: str, declared: float, implied: float) -> None:
    if abs(declared - implied) > RATE_MATCH_TOLERANCE * max(abs(declared), abs(implied)):
        raise ConfigError(f"{name}={declared!r} does not match the policy rate {implied!r}")


class _Builder:
    """Reads typed values out of a flat mapping, reporting source lines."""

    def __init__(self, values: Dict[str, Any], lines: Lines):
        self.values = values
        self.lines = lines
        self.used = set()

    def _fail(self, key: str, message: str):
        raise ConfigError(f"{key}: {message}", line=self.lines.get(key))

    def has(self, key: str) -> bool:
        return self.values.get(key) is not None

    def get_float(self, key: str, default: Any = ...) -> float:
        self.used.add(key)
        if not self.has(key):
            if default is ...:
                self._fail(key, "missing required value")
            return default
        raw = self.values[key]
        try:
            if isinstance(raw, bool):
                raise ValueError
            return float(raw)
        except (TypeError, ValueError):
            self._fail(key, f"expected a number, got {raw!r}")

    def get_int(self, key: str, default: Any = ...) -> int:
        raw = self.values.get(key)
        if isinstance(raw, int) and not isinstance(raw, bool):
            self.used.add(key)
            return raw
        value = self.get_float(key, default)
        if value is None:
            return value
        if not math.isfinite(value) or value != int(value):
            self._fail(key, f"expected an integer, got {self.values.get(key)!r}")
        return int(value)

    def get_kind(self, key: str, choices: Dict[str, Any], default: str) -> str:
        self.used.add(key)
        raw = self.values.get(key, default)
        if raw not in choices:
            self._fail(key, f"expected one of {sorted(choices)}, got {raw!r}")
        return raw

    def build(self) -> ScenarioConfig:
        try:
            return self._build()
        except ParameterError as e:
            raise ConfigError(str(e)) from e

    def _build(self) -> ScenarioConfig:
        m = self.get_int('m')
        delta = self.get_float('delta')
        probing = self._probing()
        replacement = self._replacement(delta)
        r = replacement.r if isinstance(replacement, Selective) else 1.0
        params = ModelParams(m=m, beta=probing.aggregate_rate, delta=delta, r=r)
        assignment = self._assignment()

        horizon = self.get_float('horizon')
        warmup = self.get_float('warmup', DEFAULT_WARMUP_FRACTION * horizon)
        config = dict(
            horizon=horizon,
            warmup=warmup,
            replications=self.get_int('replications', MIN_RECOMMENDED_REPLICATIONS),
            seed=self.get_int('seed', 0),
            trajectory_interval=self.get_float('trajectory.interval', None),
            workers=self.get_int('workers', 1),
            trace_limit=self.get_int('trace.limit', 0),
        )
        for key in self.values:
            if key not in self.used:
                logger.warning("scenario key %s is ignored for this configuration", key)
        try:
            return ScenarioConfig(params=params, probing=probing, replacement=replacement,
                                  assignment=assignment, **config)
        except ConfigError as e:
            line = self.lines.get('warmup') if 'warmup' in str(e) else None
            if line is None or e.line is not None:
                raise
            raise ConfigError(str(e), line=line) from e

    def _probing(self) -> ProbingProcess:
        kind = self.get_kind('probing.kind', PROBING_KINDS, PoissonAggregate.kind)
        if kind == PoissonAggregate.kind:
            if self.has('beta'):
                beta = self.get_float('beta')
                if self.has('probing.mean') or self.has('probing.n_bots'):
                    implied = self.get_int('probing.n_bots', 1) / self.get_float('probing.mean')
                    self._match('beta', beta, implied)
                return PoissonAggregate(beta)
            return PoissonAggregate(self.get_int('probing.n_bots', 1) / self.get_float('probing.mean'))

        n_bots = self.get_int('probing.n_bots', 1)
        if self.has('probing.mean'):
            mean = self.get_float('probing.mean')
            if self.has('beta'):
                self._match('beta', self.get_float('beta'), n_bots / mean)
        elif self.has('beta'):
            mean = n_bots / self.get_float('beta')
        else:
            self._fail('probing.mean', "missing; give probing.mean or beta")

        if kind == PerBotExponential.kind:
            return PerBotExponential(n_bots, mean)
        if kind == PerBotDeterministic.kind:
            return PerBotDeterministic(n_bots, mean)
        return PerBotTruncGaussian(n_bots, mean, self.get_float('probing.kappa'),
                                   self.get_float('probing.floor', 2.0))

    def _match(self, key: str, declared: float, implied: float) -> None:
        try:
            _check_rate(key, declared, implied)
        except ConfigError as e:
            self._fail(key, str(e))

    def _replacement(self, delta: float) -> ReplacementPolicy:
        kind = self.get_kind('replacement.kind', REPLACEMENT_KINDS, AllAtOnce.kind)
        if kind == Selective.kind:
            return Selective(delta, self.get_float('r', 1.0))
        if self.has('r') and self.get_float('r') != 1.0:
            self._fail('r', f"r applies to selective replacement only, not {kind!r}")
        if kind == PerProxyIndependent.kind:
            return PerProxyIndependent(delta)
        return AllAtOnce(delta)

    def _assignment(self) -> AssignmentPolicy:
        kind = self.get_kind('assignment.kind', ASSIGNMENT_KINDS, UniformRandom.kind)
        if kind == RoundRobin.kind:
            return RoundRobin(self.get_float('assignment.nominal_rate', 0.0))
        return UniformRandom()


def parse_flat_yaml(text: str) -> Tuple[Dict[str, Any], Lines]:
    """
    Parse a flat YAML mapping, keeping the source line of every key.

    Raises:
        ConfigError: on YAML syntax errors, nested values, duplicate or
            unknown keys
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        problem = getattr(e, 'problem', None) or str(e)
        raise ConfigError(f"cannot parse scenario: {problem}",
                          line=mark.line + 1 if mark is not None else None) from e

    values: Dict[str, Any] = {}
    lines: Lines = {}
    if root is None:
        return values, lines
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError("scenario must be a mapping of keys to values",
                          line=root.start_mark.line + 1)

    constructor = yaml.constructor.SafeConstructor()
    for key_node, value_node in root.value:
        line = key_node.start_mark.line + 1
        if not isinstance(key_node, yaml.ScalarNode):
            raise ConfigError("keys must be plain scalars", line=line)
        key = key_node.value
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=line)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", line=line)
        if not isinstance(value_node, yaml.ScalarNode):
            raise ConfigError(f"{key}: nested values are not supported", line=line)
        values[key] = constructor.construct_object(value_node)
        lines[key] = line
    return values, lines


def apply_overrides(values: Dict[str, Any], lines: Lines,
                    overrides: Sequence[str]) -> None:
    """
    Apply `key=value` overrides in place; an overridden key loses its line.
    """
    for item in overrides:
        key, sep, raw = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"override {item!r}: unknown key {key!r}")
        try:
            value = yaml.safe_load(raw) if raw.strip() else None
        except yaml.YAMLError as e:
            raise ConfigError(f"override {item!r}: cannot parse value") from e
        values[key] = value
        lines.pop(key, None)


def load_scenario(path: Union[str, Path], overrides: Sequence[str] = ()) -> ScenarioConfig:
    """
    Read a scenario file and apply command-line overrides.

    Args:
        path: Flat YAML scenario file
        overrides: `key=value` strings, applied in order

    Raises:
        ConfigError: if the file is missing or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read scenario file {path}: {e.strerror or e}") from e
    values, lines = parse_flat_yaml(text)
    apply_overrides(values, lines, overrides)
    logger.debug("scenario %s: %s", path, values)
    return ScenarioConfig.from_flat(values, lines)
