"""Flat key=value experiment configuration."""

from dataclasses import dataclass, field, fields

from .errors import ConfigError
from .evolution import IntegratorConfig
from .model import CHANNEL_KINDS, ChannelSpec, ModelSpec


@dataclass
class SimConfig:
    n_sites: int = 6
    g: float = -1.05
    h: float = 0.5
    channel: str = "none"
    gamma: float = 0.0
    dt: float = 0.005
    t_max: float = 10.0
    sample_every: int = 20
    b_site: int = 1
    a_sites: tuple = ()      # empty means all sites 1..n_sites
    delta: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if not 1 <= self.n_sites <= 12:
            raise ConfigError(f"n_sites out of range [1,12]: {self.n_sites}")
        if self.channel not in CHANNEL_KINDS:
            raise ConfigError(f"channel must be one of {CHANNEL_KINDS}, got {self.channel!r}")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.t_max < 0:
            raise ConfigError(f"t_max must be >= 0, got {self.t_max}")
        steps = self.t_max / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ConfigError(f"t_max/dt = {steps} is not an integer number of steps")
        if self.sample_every < 1:
            raise ConfigError(f"sample_every must be >= 1, got {self.sample_every}")
        if not 1 <= self.b_site <= self.n_sites:
            raise ConfigError(f"b_site out of range [1,{self.n_sites}]: {self.b_site}")
        if not self.a_sites:
            self.a_sites = tuple(range(1, self.n_sites + 1))
        self.a_sites = tuple(int(s) for s in self.a_sites)
        if any(not 1 <= s <= self.n_sites for s in self.a_sites):
            raise ConfigError(f"a_sites out of range [1,{self.n_sites}]: {self.a_sites}")
        if len(set(self.a_sites)) != len(self.a_sites):
            raise ConfigError(f"a_sites contains duplicates: {self.a_sites}")
        if self.delta <= 0:
            raise ConfigError(f"delta must be > 0, got {self.delta}")

    def model(self) -> ModelSpec:
        return ModelSpec(
            n_sites=self.n_sites, g=self.g, h=self.h,
            channel=ChannelSpec(self.channel, self.gamma),
        )

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(dt=self.dt, t_max=self.t_max, sample_every=self.sample_every)

    def as_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "a_sites":
                v = ",".join(str(s) for s in v)
            d[f.name] = v
        return d


_INT_KEYS = {"n_sites", "sample_every", "b_site", "seed"}
_FLOAT_KEYS = {"g", "h", "gamma", "dt", "t_max", "delta"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | {"channel", "a_sites"}


def _coerce(key: str, raw: str, where: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "a_sites":
            return tuple(int(p) for p in raw.split(",") if p.strip())
        return raw
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {key}={raw!r}") from None


def parse_config(path: str | None = None, overrides: dict | None = None) -> SimConfig:
    """Build a SimConfig from an optional key=value file plus overrides.

    File format: one `key=value` per line, `#` starts a comment, blank lines
    ignored.  Unknown keys are errors (with the offending line number).
    Overrides (already key -> string) win over file values.
    """
    values: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        for lineno, line in enumerate(lines, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: malformed line {line.strip()!r}")
            key, raw = text.split("=", 1)
            key = key.strip()
            if key not in _KNOWN_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, raw, f"{path}:{lineno}")
    for key, raw in (overrides or {}).items():
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _coerce(key, str(raw), f"--{key}")
    try:
        return SimConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
