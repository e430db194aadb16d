"""Session configuration: defaults, TOML file, command-line flags."""

import sys
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Union

from .common import UsageError
from .frame import FrameElement
from .rings import CoefficientRing, ring_from_int, ring_from_name, ring_from_spec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


FORMATS = ("text", "records")


@dataclass
class SessionConfig:
    DEFAULT_RING = "F2"
    DEFAULT_M = 4
    DEFAULT_DEGREE_WINDOW = 8
    DEFAULT_SIZE_CAP = 100000

    ring: CoefficientRing = field(default_factory=lambda: ring_from_name(SessionConfig.DEFAULT_RING))
    m: int = DEFAULT_M
    degree_window: int = DEFAULT_DEGREE_WINDOW
    size_cap: int = DEFAULT_SIZE_CAP
    output_format: str = "text"
    seed: int = 0
    threads: int = 1
    output_dir: Optional[str] = None
    quiet: bool = False

    def __post_init__(self):
        if self.m < 2:
            raise UsageError(f"Truncation length m = {self.m} must be at least 2")
        if self.size_cap <= 0 or self.degree_window <= 0:
            raise UsageError("Size cap and degree window must be positive")
        if self.output_format not in FORMATS:
            raise UsageError(f"Unknown output format {self.output_format}")
        if self.threads < 1:
            raise UsageError("At least one thread is needed")

    def apply(self):
        """Install the process-wide limits."""
        FrameElement.DEGREE_WINDOW = self.degree_window
        CoefficientRing.DEFAULT_SIZE_CAP = self.size_cap


def parse_ring(value: Union[str, int, Mapping[str, Any]]) -> CoefficientRing:
    if isinstance(value, CoefficientRing):
        return value
    if isinstance(value, int):
        return ring_from_int(value)
    if isinstance(value, Mapping):
        return ring_from_spec(value)
    return ring_from_name(str(value))


def load_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "rb") as config_file:
            return tomllib.load(config_file)
    except OSError as err:
        raise UsageError(f"Cannot read config file {path}: {err}") from err
    except tomllib.TOMLDecodeError as err:
        raise UsageError(f"Invalid TOML in {path}: {err}") from err


CONFIG_KEYS = {
    "ring": "ring",
    "m": "m",
    "degree_window": "degree_window",
    "size_cap": "size_cap",
    "seed": "seed",
    "format": "output_format",
    "threads": "threads",
    "output_dir": "output_dir",
}


def build_config(file_values: Optional[Mapping[str, Any]] = None, **flags) -> SessionConfig:
    """File values first, then every flag that was actually given."""
    values: Dict[str, Any] = {}
    for source in (file_values or {}, flags):
        for key, value in source.items():
            if value is None:
                continue
            if key not in CONFIG_KEYS and key != "quiet":
                raise UsageError(f"Unknown configuration key {key}")
            values[CONFIG_KEYS.get(key, key)] = value
    if "ring" in values:
        values["ring"] = parse_ring(values["ring"])
    return replace(SessionConfig(), **values) if values else SessionConfig()
