"""Parameter model, unit conversions and validation.

All powers and noises are carried in linear milliwatts, distances in meters.
Path loss is ``d ** -alpha`` with a 1 m reference, so it is dimensionless.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    """Raised when a configuration cannot be built or fails validation."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


def dbm_to_mw(x_dbm):
    return 10.0 ** (x_dbm / 10.0)


def mw_to_dbm(x_mw):
    return 10.0 * math.log10(x_mw)


class Scheme(str, enum.Enum):
    PS = "PS"
    TS = "TS"


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and game parameters of the network.

    Defaults describe the baseline network: densities per m^2,
    powers in mW (30 dBm cellular power, -90 dBm noises, 10 dBm harvesting
    threshold) and the p^S range [0, 30] dBm.

    ``lambda_u`` (cellular-user density) is carried for completeness only;
    no performance formula depends on it.

    ``utility_power_scale`` converts p^S into the unit used by the power-cost
    term of the utility. The default 1e-3 charges power in watts so that the
    cost stays commensurate with the O(1) reliability reward.
    """

    lambda_d: float = 0.1
    lambda_a: float = 0.002
    lambda_b: float = 0.01
    lambda_u: float = 0.1
    p_active_d: float = 0.5
    p_active_b: float = 0.5
    p_cell: float = 1000.0
    alpha: float = 4.0
    m_antennas: int = 10
    r_link: float = 1.0
    noise_adv: float = 1e-9
    noise_rf: float = 1e-9
    noise_rx: float = 1e-9
    packet_bits: float = 2.0
    slot_s: float = 1.0
    ph_threshold: float = 10.0
    eps_covert: float = 0.01
    eps_power: float = 0.01
    u_reward: float = 1.0
    u_price: float = 1.0
    ps_min: float = 1.0
    ps_max: float = 1000.0
    rho_min: float = 0.01
    utility_power_scale: float = 1e-3

    def replace(self, **changes) -> NetworkConfig:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_POSITIVE = (
    "lambda_d", "lambda_a", "lambda_b", "lambda_u", "p_cell", "r_link",
    "noise_adv", "noise_rf", "noise_rx", "packet_bits", "slot_s",
    "ph_threshold", "ps_min", "ps_max", "utility_power_scale",
)
_UNIT_INTERVAL = ("p_active_d", "p_active_b", "eps_covert", "eps_power")
_NONNEGATIVE = ("u_reward", "u_price")


def validate(config: NetworkConfig) -> list[tuple[str, str]]:
    """Return every violated invariant as ``(field, message)``; empty means valid."""
    out = []
    values = config.as_dict()
    for name in _POSITIVE:
        v = values[name]
        if not (math.isfinite(v) and v > 0):
            out.append((name, f"{name} must be positive and finite"))
    for name in _UNIT_INTERVAL:
        v = values[name]
        if not (0.0 <= v <= 1.0):
            out.append((name, f"{name} must lie in [0, 1]"))
    for name in _NONNEGATIVE:
        v = values[name]
        if not (math.isfinite(v) and v >= 0):
            out.append((name, f"{name} must be nonnegative"))
    if not (math.isfinite(config.alpha) and config.alpha > 2):
        out.append(("alpha", "alpha must exceed 2"))
    if not (0 < config.rho_min):
        out.append(("rho_min", "rho lower bound must be positive"))
    elif not (config.rho_min < 1):
        out.append(("rho_min", "rho lower bound must be below 1"))
    m = config.m_antennas
    if not (isinstance(m, int) and not isinstance(m, bool) and m >= 1):
        out.append(("m_antennas", "m_antennas must be an integer >= 1"))
    # ps_min < ps_max is only meaningful once both are positive
    if config.ps_min > 0 and config.ps_max > 0 and not config.ps_min < config.ps_max:
        out.append(("ps_min,ps_max", "ps_min must be below ps_max"))
    return out


def check(config: NetworkConfig) -> NetworkConfig:
    """Raise :class:`ConfigError` listing all violations, else return ``config``."""
    violations = validate(config)
    if violations:
        msg = "; ".join(m for _, m in violations)
        raise ConfigError(f"invalid configuration: {msg}", violations)
    return config


@dataclass(frozen=True)
class Strategy:
    """Leader decision: SWIPT power ``p_s`` (mW) and splitting coefficient ``rho``."""

    scheme: Scheme
    p_s: float
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    def check_bounds(self, config: NetworkConfig):
        if not config.ps_min <= self.p_s <= config.ps_max:
            raise ValueError(f"p_s={self.p_s} outside [{config.ps_min}, {config.ps_max}]")
        if not config.rho_min <= self.rho <= 1.0:
            raise ValueError(f"rho={self.rho} outside [{config.rho_min}, 1]")
        return self


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Monte Carlo frequency with its 95% Wilson half-width."""

    value: float
    trials: int
    ci_halfwidth: float
    successes: int = field(default=0, compare=False)

    @classmethod
    def from_counts(cls, successes: int, trials: int, z: float = 1.959963984540054):
        if trials < 1:
            raise ValueError("trials must be >= 1")
        p = successes / trials
        denom = 1.0 + z * z / trials
        half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
        return cls(value=p, trials=trials, ci_halfwidth=half, successes=successes)

    @property
    def interval(self) -> tuple[float, float]:
        return (max(0.0, self.value - self.ci_halfwidth),
                min(1.0, self.value + self.ci_halfwidth))


# ---------------------------------------------------------------------------
# config files

_FIELDS = {f.name: f for f in dataclasses.fields(NetworkConfig)}
_POWER_FIELDS = {"p_cell", "noise_adv", "noise_rf", "noise_rx", "ph_threshold",
                 "ps_min", "ps_max"}


def _parse_value(raw: str):
    raw = raw.strip().strip('"').strip("'")
    try:
        return int(raw)
    except ValueError:
        return float(raw)


def parse_config_text(text: str, base: NetworkConfig | None = None) -> NetworkConfig:
    """Parse flat ``key = value`` lines (``#`` comments allowed).

    Power fields may be given as ``<field>_dbm`` or ``<field>_mw``; a bare
    power field name is read as milliwatts.
    """
    base = base or NetworkConfig()
    changes = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split(sep, 1))
        try:
            value = _parse_value(raw)
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse value {raw!r} for {key}") from None
        if key.endswith("_dbm") and key[:-4] in _POWER_FIELDS:
            key, value = key[:-4], dbm_to_mw(float(value))
        elif key.endswith("_mw") and key[:-3] in _POWER_FIELDS:
            key = key[:-3]
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in changes:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key == "m_antennas":
            if float(value) != int(value):
                raise ConfigError(f"line {lineno}: m_antennas must be an integer")
            value = int(value)
        else:
            value = float(value)
        changes[key] = value
    return check(base.replace(**changes))


def load_config(path) -> NetworkConfig:
    return parse_config_text(Path(path).read_text())


def dump_config(config: NetworkConfig) -> str:
    lines = []
    for name, value in config.as_dict().items():
        suffix = "_mw" if name in _POWER_FIELDS else ""
        lines.append(f"{name}{suffix} = {value!r}")
    return "\n".join(lines) + "\n"
