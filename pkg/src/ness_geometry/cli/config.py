"""Flat ``key=value`` run configuration."""

import logging
import math
import os
from dataclasses import dataclass, fields
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

from ness_geometry.errors import ConfigError
from ness_geometry.models.ring import DEFAULT_EPSILON, RingConfig
from ness_geometry.models.xy_chain import XYBoundaryConfig
from ness_geometry.scaling.fits import MIN_FIT_POINTS

__all__ = [
    "MODELS",
    "TASKS",
    "FORMATS",
    "ROW_TASKS",
    "WORKERS_ENV",
    "DEFAULT_NS",
    "RunConfig",
    "parse_config",
    "load_config",
    "resolve_workers",
]

logger = logging.getLogger(__name__)

MODELS = ("xy_boundary", "ring_numeric", "ring_analytic")
TASKS = ("steady-state", "metric", "gap", "scaling", "phase-diagram", "oracle-check")
FORMATS = ("csv", "json")
ROW_TASKS = ("scaling", "phase-diagram")
WORKERS_ENV = "NESS_WORKERS"
DEFAULT_NS = (20, 32, 48, 64, 88, 120)

_POINT_KEYS = ("n", "h", "gamma")
_REQUIRED = {
    "steady-state": _POINT_KEYS,
    "metric": _POINT_KEYS,
    "gap": _POINT_KEYS,
    "oracle-check": _POINT_KEYS,
    "scaling": ("h", "gamma"),
    "phase-diagram": (
        "n",
        "h_min",
        "h_max",
        "h_steps",
        "gamma_min",
        "gamma_max",
        "gamma_steps",
    ),
}


@dataclass(frozen=True)
class RunConfig:
    """A validated run of one task on one model family.

    Keys a task does not use may be left as None. Reservoir and bath parameters
    default to the values of `XYBoundaryConfig` and `RingConfig`.
    """

    model: str
    task: str
    n: Optional[int] = None
    ns: Tuple[int, ...] = DEFAULT_NS
    h: Optional[float] = None
    gamma: Optional[float] = None
    gl_plus: float = 0.3
    gl_minus: float = 0.5
    gr_plus: float = 0.1
    gr_minus: float = 0.5
    mu: float = 0.5
    nu: float = 1.0
    epsilon: float = DEFAULT_EPSILON
    h_min: Optional[float] = None
    h_max: Optional[float] = None
    h_steps: Optional[int] = None
    gamma_min: Optional[float] = None
    gamma_max: Optional[float] = None
    gamma_steps: Optional[int] = None
    out: Optional[str] = None
    format: Optional[str] = None
    seed: int = 0
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        """Check cross-key constraints."""
        if self.model not in MODELS:
            raise ConfigError(
                f"model must be one of {MODELS}, found {self.model!r}", "model"
            )
        if self.task not in TASKS:
            raise ConfigError(
                f"task must be one of {TASKS}, found {self.task!r}", "task"
            )
        for key in _REQUIRED[self.task]:
            if getattr(self, key) is None:
                raise ConfigError(f"missing required key: {key}", key)
        if self.task == "scaling" and len(self.ns) < MIN_FIT_POINTS:
            raise ConfigError(
                f"scaling needs at least {MIN_FIT_POINTS} sizes in ns", "ns"
            )
        if self.format == "csv" and self.task not in ROW_TASKS:
            raise ConfigError(
                f"csv output needs one of the tasks {ROW_TASKS}", "format"
            )
        if self.task == "phase-diagram":
            h_bad = self.h_min > self.h_max  # type: ignore[operator]
            gamma_bad = self.gamma_min > self.gamma_max  # type: ignore[operator]
            if h_bad or gamma_bad:
                raise ConfigError("grid minimum exceeds its maximum", "h_min")

    @property
    def output_format(self) -> str:
        """Requested format, else csv for grids and json otherwise."""
        if self.format is not None:
            return self.format
        return "csv" if self.task == "phase-diagram" else "json"

    def xy_config(self, n: int, h: float, gamma: float) -> XYBoundaryConfig:
        """Chain parameters at one point."""
        return XYBoundaryConfig(
            n, h, gamma, self.gl_plus, self.gl_minus, self.gr_plus, self.gr_minus
        )

    def ring_config(self, n: int, h: float, gamma: float) -> RingConfig:
        """Ring parameters at one point."""
        return RingConfig(n, h, gamma, self.mu, self.nu, self.epsilon)

    def echo(self) -> Dict[str, Any]:
        """Set keys in declaration order, for the output record."""
        echo = {}
        for item in fields(self):
            value = getattr(self, item.name)
            if value is not None:
                echo[item.name] = list(value) if isinstance(value, tuple) else value
        return echo


def _finite(value: float) -> bool:
    return math.isfinite(value)


def _ns(text: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _increasing(ns: Tuple[int, ...]) -> bool:
    return len(ns) > 0 and ns[0] >= 2 and all(a < b for a, b in zip(ns, ns[1:]))


_Converter = Callable[[str], Any]
_KEYS: Dict[str, Tuple[_Converter, Callable[[Any], bool], str]] = {
    "model": (str, lambda v: v in MODELS, f"one of {', '.join(MODELS)}"),
    "task": (str, lambda v: v in TASKS, f"one of {', '.join(TASKS)}"),
    "n": (int, lambda v: v >= 2, "an integer >= 2"),
    "ns": (_ns, _increasing, "strictly increasing integers >= 2"),
    "h": (float, _finite, "a finite real"),
    "gamma": (float, _finite, "a finite real"),
    "gl_plus": (float, lambda v: _finite(v) and v >= 0, "a rate >= 0"),
    "gl_minus": (float, lambda v: _finite(v) and v >= 0, "a rate >= 0"),
    "gr_plus": (float, lambda v: _finite(v) and v >= 0, "a rate >= 0"),
    "gr_minus": (float, lambda v: _finite(v) and v >= 0, "a rate >= 0"),
    "mu": (float, lambda v: _finite(v) and v >= 0, "an amplitude >= 0"),
    "nu": (float, lambda v: _finite(v) and v >= 0, "an amplitude >= 0"),
    "epsilon": (float, lambda v: _finite(v) and v > 0, "a real > 0"),
    "h_min": (float, _finite, "a finite real"),
    "h_max": (float, _finite, "a finite real"),
    "h_steps": (int, lambda v: v >= 1, "an integer >= 1"),
    "gamma_min": (float, _finite, "a finite real"),
    "gamma_max": (float, _finite, "a finite real"),
    "gamma_steps": (int, lambda v: v >= 1, "an integer >= 1"),
    "out": (str, bool, "a path"),
    "format": (str, lambda v: v in FORMATS, "csv or json"),
    "seed": (int, lambda v: v >= 0, "an integer >= 0"),
    "workers": (int, lambda v: v >= 1, "an integer >= 1"),
}


def _convert(key: str, raw: str, line: int) -> Any:
    if key not in _KEYS:
        raise ConfigError(f"unknown key: {key}", key, line)
    converter, valid, expected = _KEYS[key]
    try:
        value = converter(raw)
    except ValueError:
        raise ConfigError(
            f"{key} must be {expected}, found {raw!r}", key, line
        ) from None
    if not valid(value):
        raise ConfigError(f"{key} must be {expected}, found {raw!r}", key, line)
    return value


def _split(entry: str, line: int) -> Tuple[str, str]:
    if "=" not in entry:
        raise ConfigError(f"expected key=value, found {entry!r}", None, line)
    key, raw = entry.split("=", 1)
    return key.strip(), raw.strip()


def parse_config(text: str, overrides: Sequence[str] = ()) -> RunConfig:
    """Parse a flat ``key=value`` configuration.

    One pair per line; ``#`` starts a comment and blank lines are skipped.

    Parameters
    ----------
    text : str
        Configuration file content.
    overrides : Sequence[str]
        Further ``key=value`` pairs that replace file entries, reported at line 0.

    Returns
    -------
    RunConfig
        The validated configuration.

    Raises
    ------
    ConfigError
        On an unknown, duplicated, missing or malformed key, naming the key and line.
    """
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        entry = raw_line.split("#", 1)[0].strip()
        if not entry:
            continue
        key, raw = _split(entry, number)
        if key in values:
            raise ConfigError(
                f"duplicate key: {key} (first on line {lines[key]})", key, number
            )
        values[key] = _convert(key, raw, number)
        lines[key] = number
    for entry in overrides:
        key, raw = _split(entry, 0)
        values[key] = _convert(key, raw, 0)
        lines[key] = 0
    for key in ("model", "task"):
        if key not in values:
            raise ConfigError(f"missing required key: {key}", key, 0)
    try:
        return RunConfig(**values)
    except ConfigError as err:
        raise ConfigError(err.message, err.key, lines.get(err.key or "", 0)) from None


def load_config(
    path: Union[str, "os.PathLike[str]"], overrides: Sequence[str] = ()
) -> RunConfig:
    """Read and parse a UTF-8 configuration file."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    logger.debug("Read configuration from %s", path)
    return parse_config(text, overrides)


def resolve_workers(
    flag: Optional[int],
    config: Optional[RunConfig] = None,
    env: Optional[Mapping[str, str]] = None,
) -> int:
    """Worker count from the flag, the config, `WORKERS_ENV`, else the CPU count.

    Raises
    ------
    ConfigError
        If the flag or the environment variable is not a positive integer.
    """
    if flag is not None:
        if flag < 1:
            raise ConfigError(f"--workers must be >= 1, found {flag}", "workers")
        return flag
    if config is not None and config.workers is not None:
        return config.workers
    env = os.environ if env is None else env
    raw = env.get(WORKERS_ENV)
    if raw:
        try:
            workers = int(raw)
        except ValueError:
            workers = 0
        if workers < 1:
            raise ConfigError(
                f"{WORKERS_ENV} must be a positive integer, found {raw!r}", WORKERS_ENV
            )
        return workers
    return os.cpu_count() or 1
