"""Config files, CSV artifacts and run manifests.

Configs are YAML with nested sections (pair, cell, probe, pump, rates,
spins, field); units are encoded in the key names and converted to cgs
once, here.  Unknown keys are rejected with their dotted path.  A parsed
config re-serializes to a canonical normalized form whose SHA-256 digest
identifies the physical setup in run manifests.

Every artifact is written to a temporary file in the destination
directory and atomically renamed, so failed runs leave nothing behind.
Floats are serialized with shortest round-trip precision.
"""

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone

import yaml

from . import species as sp
from .constants import celsius_to_kelvin, DEFAULT_FILL_TEMPERATURE_K
from .errors import ParseError
from .params import PhysicalConfig, pump_rate_for_polarization

TOOL_NAME = "noblesqueeze"


# --------------------------------------------------------------------------
# config parsing


class _Section:
    """Dict view that tracks consumed keys and rejects leftovers."""

    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise ParseError(f"section {path!r} must be a mapping")
        self._data = dict(data)
        self._path = path

    def take(self, key, default=None, required=False):
        if key in self._data:
            return self._data.pop(key)
        if required:
            raise ParseError(f"missing required key {self._path}.{key}")
        return default

    def take_exactly_one(self, *keys):
        present = [k for k in keys if k in self._data]
        if len(present) != 1:
            raise ParseError(
                f"section {self._path!r} needs exactly one of {keys}, "
                f"found {present or 'none'}")
        key = present[0]
        return key, self._data.pop(key)

    def finish(self):
        if self._data:
            leftover = ", ".join(f"{self._path}.{k}" for k in sorted(self._data))
            raise ParseError(f"unknown keys: {leftover}")


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path} must be a number, got {value!r}")
    return float(value)


def parse_config_dict(data):
    """Validate and convert a raw mapping into a :class:`PhysicalConfig`."""
    root = _Section(data, "config")

    pair_sec = _Section(root.take("pair", required=True), "pair")
    alkali = pair_sec.take("alkali", required=True)
    noble = pair_sec.take("noble", required=True)
    pair_sec.finish()
    pair = sp.lookup_pair(alkali, noble)

    cell = _Section(root.take("cell", required=True), "cell")
    length = _number(cell.take("length_cm", required=True), "cell.length_cm")
    area = _number(cell.take("area_cm2", required=True), "cell.area_cm2")
    t_key, t_val = cell.take_exactly_one("temperature_k", "temperature_c")
    temperature = _number(t_val, f"cell.{t_key}")
    if t_key == "temperature_c":
        temperature = celsius_to_kelvin(temperature)
    noble_torr = _number(cell.take("noble_pressure_torr", required=True),
                         "cell.noble_pressure_torr")
    fill_t = _number(cell.take("fill_temperature_k", DEFAULT_FILL_TEMPERATURE_K),
                     "cell.fill_temperature_k")
    density_override = cell.take("alkali_density_cm3")
    if density_override is not None:
        density_override = _number(density_override, "cell.alkali_density_cm3")
    buffers = []
    for i, entry in enumerate(cell.take("buffer_gases", []) or []):
        bsec = _Section(entry, f"cell.buffer_gases[{i}]")
        name = bsec.take("name", required=True)
        torr = _number(bsec.take("pressure_torr", required=True),
                       f"cell.buffer_gases[{i}].pressure_torr")
        bsec.finish()
        buffers.append((str(name), torr))
    cell.finish()

    probe = _Section(root.take("probe", required=True), "probe")
    p_key, p_val = probe.take_exactly_one("power_w", "power_mw")
    power = _number(p_val, f"probe.{p_key}")
    if p_key == "power_mw":
        power *= 1e-3
    detuning = _number(probe.take("detuning_rad_s", required=True),
                       "probe.detuning_rad_s")
    linewidth = _number(probe.take("excited_linewidth_rad_s", required=True),
                        "probe.excited_linewidth_rad_s")
    duration = _number(probe.take("duration_s", required=True),
                       "probe.duration_s")
    probe.finish()

    rates = _Section(root.take("rates", required=True), "rates")
    gamma_sd = _number(rates.take("spin_destruction_s", required=True),
                       "rates.spin_destruction_s")
    gamma_b = _number(rates.take("wall_gradient_s", required=True),
                      "rates.wall_gradient_s")
    rates.finish()

    pump = _Section(root.take("pump", required=True), "pump")
    pump_key, pump_val = pump.take_exactly_one("rate_op_s", "pa_target")
    pump_val = _number(pump_val, f"pump.{pump_key}")
    if pump_key == "pa_target":
        pump_rate = pump_rate_for_polarization(pump_val, gamma_sd)
    else:
        pump_rate = pump_val
    light_shift = _number(pump.take("light_shift_rad_s", 0.0),
                          "pump.light_shift_rad_s")
    pump.finish()

    spins = _Section(root.take("spins", required=True), "spins")
    p_b = _number(spins.take("noble_polarization", required=True),
                  "spins.noble_polarization")
    q_factor = _number(spins.take("q_factor", required=True), "spins.q_factor")
    spins.finish()

    fld = _Section(root.take("field", required=True), "field")
    b_key, b_val = fld.take_exactly_one("b1_gauss", "b1_mg")
    b1 = _number(b_val, f"field.{b_key}")
    if b_key == "b1_mg":
        b1 *= 1e-3
    delta_override = fld.take("delta_override_rad_s")
    if delta_override is not None:
        delta_override = _number(delta_override, "field.delta_override_rad_s")
    fld.finish()

    root.finish()

    return PhysicalConfig(
        pair=pair,
        cell_length_cm=length,
        cell_area_cm2=area,
        temperature_k=temperature,
        noble_pressure_torr=noble_torr,
        buffer_pressures_torr=tuple(buffers),
        fill_temperature_k=fill_t,
        alkali_density_override_cm3=density_override,
        probe_power_w=power,
        probe_detuning_rad_s=detuning,
        excited_linewidth_rad_s=linewidth,
        pulse_duration_s=duration,
        pump_rate_s=pump_rate,
        spin_destruction_rate_s=gamma_sd,
        wall_gradient_rate_s=gamma_b,
        noble_polarization=p_b,
        alkali_q_factor=q_factor,
        field_gauss=b1,
        pump_light_shift_rad_s=light_shift,
        delta_override_rad_s=delta_override,
    )


def parse_config(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML in {path}: {exc}") from exc
    if data is None:
        raise ParseError(f"empty config file: {path}")
    return parse_config_dict(data)


def canonical_config_dict(config):
    """Normalized (canonical-unit) mapping; parsing it reproduces ``config``."""
    out = {
        "pair": {"alkali": config.pair.alkali.name,
                 "noble": config.pair.noble.name},
        "cell": {
            "length_cm": config.cell_length_cm,
            "area_cm2": config.cell_area_cm2,
            "temperature_k": config.temperature_k,
            "noble_pressure_torr": config.noble_pressure_torr,
            "fill_temperature_k": config.fill_temperature_k,
        },
        "probe": {
            "power_w": config.probe_power_w,
            "detuning_rad_s": config.probe_detuning_rad_s,
            "excited_linewidth_rad_s": config.excited_linewidth_rad_s,
            "duration_s": config.pulse_duration_s,
        },
        "pump": {
            "rate_op_s": config.pump_rate_s,
            "light_shift_rad_s": config.pump_light_shift_rad_s,
        },
        "rates": {
            "spin_destruction_s": config.spin_destruction_rate_s,
            "wall_gradient_s": config.wall_gradient_rate_s,
        },
        "spins": {
            "noble_polarization": config.noble_polarization,
            "q_factor": config.alkali_q_factor,
        },
        "field": {"b1_gauss": config.field_gauss},
    }
    if config.buffer_pressures_torr:
        out["cell"]["buffer_gases"] = [
            {"name": name, "pressure_torr": torr}
            for name, torr in config.buffer_pressures_torr]
    if config.alkali_density_override_cm3 is not None:
        out["cell"]["alkali_density_cm3"] = config.alkali_density_override_cm3
    if config.delta_override_rad_s is not None:
        out["field"]["delta_override_rad_s"] = config.delta_override_rad_s
    return out


def serialize_config(config):
    return yaml.safe_dump(canonical_config_dict(config), sort_keys=True)


def config_digest(config):
    return hashlib.sha256(serialize_config(config).encode()).hexdigest()


# --------------------------------------------------------------------------
# artifact writing


def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):           # numpy scalar
        return repr(value.item())
    return str(value)


def atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.chmod(tmp, 0o644)   # mkstemp defaults to owner-only
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_key_value_csv(path, mapping):
    write_csv(path, ["key", "value"], mapping.items())


# --------------------------------------------------------------------------
# manifests and diagnostics


@dataclass(frozen=True)
class RunManifest:
    tool_version: str
    subcommand: str
    config_digest: str = None
    seed: int = None
    warnings: tuple = ()

    def to_dict(self):
        return {
            "tool": TOOL_NAME,
            "version": self.tool_version,
            "subcommand": self.subcommand,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "timestamp_utc": datetime.now(timezone.utc).isoformat(),
            "warnings": list(self.warnings),
        }


def write_manifest(out_dir, manifest):
    path = os.path.join(out_dir, "run_manifest.json")
    atomic_write_text(path, json.dumps(manifest.to_dict(), indent=2) + "\n")
    return path


def diagnostic(level, code, message, field=None, stream=None):
    """One machine-readable record per warning or error, on stderr."""
    record = {"level": level, "code": code, "message": message}
    if field is not None:
        record["field"] = field
    print(json.dumps(record), file=stream or sys.stderr)
