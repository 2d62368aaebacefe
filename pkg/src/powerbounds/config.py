"""Scenario configuration: a flat, diffable `section.key = value` text format.

Unknown keys are rejected by name; every key has a typed schema entry with a
paper-scale default, and a small per-command set of required keys must be
present explicitly.  The resolved configuration has a canonical rendering
whose SHA-256 hash is recorded in every CSV the CLI writes.
"""

import hashlib
import math

from .channel import LinkSpec, RadioEnvironment
from .density import GridScenario, PracticalCode
from .errors import ConfigError
from .ldpc import RegularEnsemble
from .power import DecoderTech

_FLOAT, _INT, _BOOL, _STR, _FLOATLIST = "float", "int", "bool", "str", "float_list"

# key -> (type, default)
SCHEMA = {
    "environment.carrier_frequency_hz": (_FLOAT, 60e9),
    "environment.bandwidth_hz": (_FLOAT, 3e9),
    "environment.path_loss_exponent": (_FLOAT, 3.0),
    "environment.temperature_k": (_FLOAT, 300.0),
    "link.distance_m": (_FLOAT, 10.0),
    "link.data_rate_bps": (_FLOAT, 1.5e9),
    "link.target_pe": (_FLOAT, 1e-6),
    "decoder.node_energy_j": (_FLOAT, 3e-12),
    "decoder.max_degree": (_INT, 4),
    "decoder.weight_decode": (_FLOAT, 1.0),
    "decoder.throughput_bps": (_FLOAT, 0.0),       # 0 = match the data rate
    "ensemble.variable_degree": (_INT, 3),
    "ensemble.check_degree": (_INT, 4),
    "grid.link_distance_m": (_FLOAT, 1.0),
    "grid.orientation_rad": (_FLOAT, 0.0),
    "grid.sub_bands": (_INT, 1),
    "grid.band_scan": (_BOOL, False),
    "grid.gaps_db": (_FLOATLIST, (0.0, 1.0, 3.0)),
    "sweep.pe_start": (_FLOAT, 1e-2),
    "sweep.pe_stop": (_FLOAT, 1e-40),
    "sweep.pe_points": (_INT, 20),
    "sweep.pe_log": (_BOOL, True),
    "sweep.power_start_w": (_FLOAT, 0.02),
    "sweep.power_stop_w": (_FLOAT, 100.0),
    "sweep.power_points": (_INT, 25),
    "sweep.power_log": (_BOOL, True),
    "density.target_pe": (_FLOAT, 1e-9),
    "density.transmit_power_w": (_FLOAT, 1.0),
    "practical.required_sinr_db": (_FLOAT, 5.5),
    "practical.code_rate": (_FLOAT, 0.8125),
    "practical.node_energy_j": (_FLOAT, 3e-12),
    "practical.iterations": (_INT, 8),
    "point.channel": (_STR, "bsc"),
    "solver.pt_grid_points": (_INT, 512),
}

REQUIRED_KEYS = {
    "waterslide-bsc": ("environment.bandwidth_hz", "link.data_rate_bps"),
    "waterslide-awgn": ("environment.bandwidth_hz", "link.data_rate_bps"),
    "ldpc-waterslide": ("environment.bandwidth_hz", "link.data_rate_bps"),
    "density-infinite": ("environment.bandwidth_hz", "grid.link_distance_m"),
    "density-finite": ("environment.bandwidth_hz", "grid.link_distance_m"),
    "density-practical": ("environment.bandwidth_hz", "grid.link_distance_m"),
    "density-upper-bound": ("environment.bandwidth_hz", "grid.link_distance_m"),
    "point": ("environment.bandwidth_hz", "link.data_rate_bps"),
}

_POSITIVE = (
    "environment.carrier_frequency_hz", "environment.bandwidth_hz",
    "environment.temperature_k", "link.distance_m", "link.data_rate_bps",
    "decoder.node_energy_j", "decoder.weight_decode", "grid.link_distance_m",
    "practical.code_rate", "practical.node_energy_j", "density.transmit_power_w",
    "sweep.power_start_w", "sweep.power_stop_w",
)


def parse_text(text):
    """Parse `key = value` lines; '#' starts a comment, blanks are skipped."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}", "expected 'key = value'")
        key, value = body.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key in raw:
            raise ConfigError(key, "duplicate key")
        raw[key] = value
    return raw


def _coerce(key, value):
    kind = SCHEMA[key][0]
    try:
        if kind == _FLOAT:
            return float(value)
        if kind == _INT:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if kind == _BOOL:
            lowered = value.strip().lower()
            if lowered in ("true", "1", "yes", "on"):
                return True
            if lowered in ("false", "0", "no", "off"):
                return False
            raise ValueError
        if kind == _FLOATLIST:
            return tuple(float(part) for part in value.split(",") if part.strip())
        return str(value)
    except ValueError:
        raise ConfigError(key, f"cannot parse {value!r} as {kind}") from None


class ScenarioConfig:
    """A fully resolved configuration with typed accessors."""

    def __init__(self, values):
        self.values = values

    @classmethod
    def load(cls, text, overrides=(), command=None):
        raw = parse_text(text)
        for item in overrides:
            if "=" not in item:
                raise ConfigError(item, "override must look like key=value")
            key, value = item.split("=", 1)
            raw[key.strip()] = value.strip()
        values = {key: default for key, (_, default) in SCHEMA.items()}
        explicit = set()
        for key, value in raw.items():
            if key not in SCHEMA:
                raise ConfigError(key, "unknown configuration key")
            values[key] = _coerce(key, value)
            explicit.add(key)
        if command is not None:
            for key in REQUIRED_KEYS.get(command, ()):
                if key not in explicit:
                    raise ConfigError(key, "required key is missing from the config")
        cfg = cls(values)
        cfg.validate()
        return cfg

    def validate(self):
        v = self.values
        for key in _POSITIVE:
            if not v[key] > 0.0:
                raise ConfigError(key, "must be strictly positive")
        if v["environment.path_loss_exponent"] <= 2.0:
            raise ConfigError("environment.path_loss_exponent", "must exceed 2")
        for key in ("link.target_pe", "density.target_pe"):
            if not 0.0 < v[key] < 0.5:
                raise ConfigError(key, "must lie in (0, 1/2)")
        if v["decoder.max_degree"] < 2:
            raise ConfigError("decoder.max_degree", "must be at least 2")
        if v["ensemble.variable_degree"] < 3:
            raise ConfigError("ensemble.variable_degree", "must be at least 3")
        if v["ensemble.check_degree"] <= v["ensemble.variable_degree"]:
            raise ConfigError("ensemble.check_degree",
                              "must exceed the variable degree")
        if v["grid.sub_bands"] < 1:
            raise ConfigError("grid.sub_bands", "must be at least 1")
        if not 0.0 <= v["grid.orientation_rad"] < math.pi / 3.0:
            raise ConfigError("grid.orientation_rad", "must lie in [0, pi/3)")
        for prefix in ("pe", "power"):
            if v[f"sweep.{prefix}_points"] < 1:
                raise ConfigError(f"sweep.{prefix}_points", "must be at least 1")
        for key in ("sweep.pe_start", "sweep.pe_stop"):
            if not 0.0 < v[key] < 0.5:
                raise ConfigError(key, "must lie in (0, 1/2)")
        if v["point.channel"] not in ("bsc", "awgn"):
            raise ConfigError("point.channel", "must be 'bsc' or 'awgn'")
        if v["practical.iterations"] < 1:
            raise ConfigError("practical.iterations", "must be at least 1")
        if v["practical.required_sinr_db"] <= -100.0:
            raise ConfigError("practical.required_sinr_db", "implausibly small")
        if v["solver.pt_grid_points"] < 8:
            raise ConfigError("solver.pt_grid_points", "must be at least 8")

    # -- canonical form -----------------------------------------------------

    def canonical_text(self):
        lines = []
        for key in sorted(self.values):
            value = self.values[key]
            if isinstance(value, tuple):
                rendered = ",".join(f"{x:.17g}" for x in value)
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = f"{value:.17g}"
            else:
                rendered = str(value)
            lines.append(f"{key} = {rendered}")
        return "\n".join(lines) + "\n"

    def digest(self):
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    # -- typed object builders ----------------------------------------------

    def environment(self):
        v = self.values
        return RadioEnvironment(
            carrier_frequency=v["environment.carrier_frequency_hz"],
            bandwidth=v["environment.bandwidth_hz"],
            path_loss_exponent=v["environment.path_loss_exponent"],
            temperature=v["environment.temperature_k"],
        )

    def link(self):
        v = self.values
        return LinkSpec(
            distance=v["link.distance_m"],
            data_rate=v["link.data_rate_bps"],
            target_pe=v["link.target_pe"],
            bandwidth=v["environment.bandwidth_hz"],
        )

    def decoder_tech(self):
        v = self.values
        throughput = v["decoder.throughput_bps"] or None
        return DecoderTech(
            node_energy=v["decoder.node_energy_j"],
            max_degree=v["decoder.max_degree"],
            weight_decode=v["decoder.weight_decode"],
            decode_throughput=throughput,
        )

    def ensemble(self):
        v = self.values
        return RegularEnsemble(
            variable_degree=v["ensemble.variable_degree"],
            check_degree=v["ensemble.check_degree"],
        )

    def grid_scenario(self):
        v = self.values
        return GridScenario(
            link_distance=v["grid.link_distance_m"],
            data_rate=v["link.data_rate_bps"],
            env=self.environment(),
            orientation=v["grid.orientation_rad"],
            sub_bands=v["grid.sub_bands"],
        )

    def practical_code(self):
        v = self.values
        return PracticalCode(
            required_sinr=10.0 ** (v["practical.required_sinr_db"] / 10.0),
            code_rate=v["practical.code_rate"],
            node_energy=v["practical.node_energy_j"],
            iterations=v["practical.iterations"],
        )

    def pe_grid(self):
        return _grid(self.values["sweep.pe_start"], self.values["sweep.pe_stop"],
                     self.values["sweep.pe_points"], self.values["sweep.pe_log"])

    def power_grid(self):
        return _grid(self.values["sweep.power_start_w"],
                     self.values["sweep.power_stop_w"],
                     self.values["sweep.power_points"],
                     self.values["sweep.power_log"])


def _grid(start, stop, points, log_spaced):
    if points == 1:
        return [start]
    if log_spaced:
        ratio = (stop / start) ** (1.0 / (points - 1))
        return [start * ratio ** i for i in range(points)]
    step = (stop - start) / (points - 1)
    return [start + step * i for i in range(points)]
