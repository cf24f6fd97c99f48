"""Key-value settings files (``key = value`` lines, ``#`` comments).

Recognised keys::

    binning.k                   stabilize.window_seconds
    habit.gap_minutes           habit.min_support
    habit.complex_merge_overlap detect.mu
    log.max_duration_hours      log.resident
    sensor.<NAME>.service       sensor.<NAME>.location   sensor.<NAME>.attribute
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields, replace
from datetime import timedelta

from .habits import MiningParams
from .logs import SensorInfo

ENV_VAR = "CONFLICT_LENS_CONFIG"
_SECTION = "conflict_lens"

_KEYS = {
    "binning.k": ("bin_count", int),
    "stabilize.window_seconds": ("settle_seconds", float),
    "habit.gap_minutes": ("gap_minutes", float),
    "habit.min_support": ("min_support", int),
    "habit.complex_merge_overlap": ("complex_merge_overlap", float),
    "detect.mu": ("mu", float),
    "log.max_duration_hours": ("max_duration_hours", float),
    "log.resident": ("resident", str),
}


@dataclass(frozen=True)
class Settings:
    bin_count: int = 5
    settle_seconds: float = 60.0
    gap_minutes: float = 60.0
    min_support: int = 5
    complex_merge_overlap: float = 0.8
    mu: float = 0.0
    max_duration_hours: float = 4.0
    resident: str = "R1"
    sensors: dict = field(default_factory=dict, compare=False)

    @property
    def mining(self) -> MiningParams:
        return MiningParams(self.gap_minutes, self.min_support, self.complex_merge_overlap)

    @property
    def max_duration(self) -> timedelta:
        return timedelta(hours=self.max_duration_hours)

    def override(self, **kw) -> "Settings":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def parse_settings(text: str, base: Settings = Settings()) -> Settings:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=", ":"),
                                   comment_prefixes=("#",), inline_comment_prefixes=("#",))
    cp.optionxform = str
    cp.read_string("[%s]\n%s" % (_SECTION, text))
    updates = {}
    sensors: dict[str, dict] = {}
    for key, raw in cp[_SECTION].items():
        if key.startswith("sensor."):
            try:
                _, name, prop = key.split(".", 2)
            except ValueError:
                raise ValueError("bad sensor key %r" % key) from None
            if prop not in ("service", "location", "attribute"):
                raise ValueError("unknown sensor property %r" % key)
            sensors.setdefault(name, {})[prop] = raw.strip()
            continue
        if key not in _KEYS:
            raise ValueError("unknown config key %r" % key)
        attr, conv = _KEYS[key]
        try:
            updates[attr] = conv(raw.strip())
        except ValueError:
            raise ValueError("config key %r: cannot parse %r" % (key, raw)) from None
    infos = dict(base.sensors)
    for name, props in sensors.items():
        infos[name] = SensorInfo(props.get("service", name),
                                 props.get("location", "home"),
                                 props.get("attribute", "value"))
    return replace(base, sensors=infos, **updates)


def load_settings(path=None) -> Settings:
    """Read ``path``, falling back to $CONFLICT_LENS_CONFIG, then defaults."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return Settings()
    with open(path, encoding="utf-8") as fh:
        return parse_settings(fh.read())


def format_sensors(sensors: dict) -> str:
    lines = []
    for name, info in sorted(sensors.items()):
        lines.append("sensor.%s.service = %s" % (name, info.service_id))
        lines.append("sensor.%s.location = %s" % (name, info.location))
        lines.append("sensor.%s.attribute = %s" % (name, info.attribute))
    return "\n".join(lines) + "\n"
