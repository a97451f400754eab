"""Channel-spec config files for the ``synth`` subcommand.

A config is a JSON object::

    {
      "reference_impedance": 50,
      "grid": {"start_hz": 1e7, "stop_hz": 1.1e11, "step_hz": 1e8},
      "channel": {
        "base_delay_s": 1e-9,
        "coupling": 0.05,
        "coupling_phase_deg": 90,
        "loss": {"dc_loss_db": 0.5, "skin_coeff_db_per_sqrthz": 5e-5,
                 "dielectric_coeff_db_per_hz": 0}
      },
      "skew": [
        {"line": "P", "side": "left", "kind": "flat", "tau_s": 3e-12},
        {"line": "N", "side": "right", "kind": "damped_oscillatory",
         "tau_peak_s": 8e-12, "osc_freq_hz": 4e10, "damping_freq_hz": 1e11}
      ]
    }

``grid`` may give ``points`` instead of ``step_hz``. ``skew`` may be a single
object or omitted. Every missing channel field takes its default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import SildError
from .network import SingleEndedNetwork
from .synth import ChannelSpec, LossModel, ProfileKind, SkewProfileSpec, ideal_diff_channel, inject_se_delay


class ConfigError(SildError, ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class SkewInjection:
    line: str
    side: str
    profile: SkewProfileSpec

    def with_tau(self, tau: float) -> "SkewInjection":
        if self.profile.kind is ProfileKind.FLAT:
            return replace(self, profile=replace(self.profile, tau_flat=tau))
        return replace(self, profile=replace(self.profile, tau_peak=tau))


@dataclass(frozen=True)
class ChannelConfig:
    spec: ChannelSpec
    skews: tuple[SkewInjection, ...]
    z0: float = 50.0

    def build(self) -> SingleEndedNetwork:
        net = ideal_diff_channel(self.spec, z0=self.z0)
        for inj in self.skews:
            net = inject_se_delay(net, inj.line, inj.side, inj.profile)
        return net

    def with_tau(self, tau: float) -> "ChannelConfig":
        skews = self.skews or (SkewInjection("P", "left", SkewProfileSpec.flat(0.0)),)
        return replace(self, skews=tuple(s.with_tau(tau) for s in skews))


def _number(obj: dict, key: str, path: str, default=None, minimum=None, exclusive=False):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{path}.{key}", "required field missing")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    if minimum is not None and (value <= minimum if exclusive else value < minimum):
        op = ">" if exclusive else ">="
        raise ConfigError(f"{path}.{key}", f"must be {op} {minimum:g}")
    return value


def _object(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    return obj


def _reject_unknown(obj: dict, allowed: set, path: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{path}.{extra[0]}", "unknown field")


def _grid(obj, path="grid") -> np.ndarray:
    obj = _object(obj, path)
    _reject_unknown(obj, {"start_hz", "stop_hz", "step_hz", "points"}, path)
    start = _number(obj, "start_hz", path, minimum=0)
    stop = _number(obj, "stop_hz", path, minimum=start, exclusive=True)
    if "points" in obj:
        points = obj["points"]
        if not isinstance(points, int) or isinstance(points, bool) or points < 2:
            raise ConfigError(f"{path}.points", "must be an integer >= 2")
        return np.linspace(start, stop, points)
    step = _number(obj, "step_hz", path, minimum=0, exclusive=True)
    n = int(round((stop - start) / step)) + 1
    if n < 2:
        raise ConfigError(f"{path}.step_hz", "grid has fewer than 2 points")
    return start + step * np.arange(n)


def _skew(obj, path) -> SkewInjection:
    obj = _object(obj, path)
    _reject_unknown(obj, {"line", "side", "kind", "tau_s", "tau_peak_s", "osc_freq_hz",
                          "damping_freq_hz"}, path)
    line = str(obj.get("line", "P")).upper()
    if line not in ("P", "N"):
        raise ConfigError(f"{path}.line", "must be 'P' or 'N'")
    side = str(obj.get("side", "left")).lower()
    if side not in ("left", "right"):
        raise ConfigError(f"{path}.side", "must be 'left' or 'right'")
    kind = str(obj.get("kind", "flat")).lower()
    if kind == "flat":
        profile = SkewProfileSpec.flat(_number(obj, "tau_s", path, default=0.0, minimum=0))
    elif kind in ("damped_oscillatory", "damped"):
        profile = SkewProfileSpec.damped(
            _number(obj, "tau_peak_s", path, default=0.0, minimum=0),
            _number(obj, "osc_freq_hz", path, default=40e9, minimum=0, exclusive=True),
            _number(obj, "damping_freq_hz", path, default=100e9, minimum=0, exclusive=True),
        )
    else:
        raise ConfigError(f"{path}.kind", "must be 'flat' or 'damped_oscillatory'")
    return SkewInjection(line, side, profile)


def parse_channel_config(data) -> ChannelConfig:
    root = _object(data, "$")
    _reject_unknown(root, {"grid", "channel", "skew", "reference_impedance"}, "$")
    if "grid" not in root:
        raise ConfigError("$.grid", "required field missing")
    f = _grid(root["grid"], "$.grid")
    ch = _object(root.get("channel", {}), "$.channel")
    _reject_unknown(ch, {"base_delay_s", "coupling", "coupling_phase_deg", "loss"}, "$.channel")
    loss = _object(ch.get("loss", {}), "$.channel.loss")
    _reject_unknown(loss, {"dc_loss_db", "skin_coeff_db_per_sqrthz", "dielectric_coeff_db_per_hz"},
                    "$.channel.loss")
    coupling = _number(ch, "coupling", "$.channel", default=0.0, minimum=0)
    if coupling >= 1:
        raise ConfigError("$.channel.coupling", "must be < 1")
    spec = ChannelSpec(
        frequency=f,
        base_delay=_number(ch, "base_delay_s", "$.channel", default=1e-9, minimum=0),
        loss=LossModel(
            _number(loss, "dc_loss_db", "$.channel.loss", default=0.0, minimum=0),
            _number(loss, "skin_coeff_db_per_sqrthz", "$.channel.loss", default=0.0, minimum=0),
            _number(loss, "dielectric_coeff_db_per_hz", "$.channel.loss", default=0.0, minimum=0),
        ),
        coupling=coupling,
        coupling_phase_deg=_number(ch, "coupling_phase_deg", "$.channel", default=90.0),
    )
    skews = root.get("skew", [])
    if isinstance(skews, dict):
        skews = [skews]
    if not isinstance(skews, list):
        raise ConfigError("$.skew", "expected an object or a list of objects")
    injections = tuple(_skew(s, f"$.skew[{i}]") for i, s in enumerate(skews))
    z0 = _number(root, "reference_impedance", "$", default=50.0, minimum=0, exclusive=True)
    return ChannelConfig(spec, injections, z0)


def load_channel_config(path) -> ChannelConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    return parse_channel_config(data)
