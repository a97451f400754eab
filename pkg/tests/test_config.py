import json

import numpy as np
import pytest

from sild.config import ConfigError, load_channel_config, parse_channel_config
from sild.synth import ProfileKind

BASE = {
    "grid": {"start_hz": 1e8, "stop_hz": 1e10, "step_hz": 1e8},
    "channel": {"coupling": 0.05, "loss": {"skin_coeff_db_per_sqrthz": 5e-5}},
    "skew": [{"line": "N", "side": "right", "kind": "flat", "tau_s": 2e-12}],
}


def test_parse_full_config():
    cfg = parse_channel_config(BASE)
    assert cfg.spec.frequency.size == 100
    assert cfg.spec.coupling == 0.05
    assert cfg.skews[0].line == "N"
    net = cfg.build()
    assert net.nports == 4 and net.is_reciprocal()


def test_points_grid_and_single_skew():
    cfg = parse_channel_config({
        "grid": {"start_hz": 0, "stop_hz": 1e10, "points": 11},
        "skew": {"kind": "damped_oscillatory", "tau_peak_s": 1e-12},
    })
    np.testing.assert_allclose(cfg.spec.frequency, np.linspace(0, 1e10, 11))
    assert cfg.skews[0].profile.kind is ProfileKind.DAMPED_OSCILLATORY


def test_with_tau_adds_default_injection():
    cfg = parse_channel_config({"grid": BASE["grid"]}).with_tau(1e-12)
    assert cfg.skews[0].line == "P" and cfg.skews[0].profile.tau_flat == 1e-12
    cfg = parse_channel_config(BASE).with_tau(3e-12)
    assert cfg.skews[0].line == "N" and cfg.skews[0].profile.tau_flat == 3e-12


@pytest.mark.parametrize("patch, path", [
    ({"grid": None}, "$.grid"),
    ({"bogus": 1}, "$.bogus"),
    ({"channel": {"coupling": 1.5}}, "$.channel.coupling"),
    ({"channel": {"coupling": "x"}}, "$.channel.coupling"),
    ({"channel": {"loss": {"dc_loss_db": -1}}}, "$.channel.loss.dc_loss_db"),
    ({"skew": [{"line": "Q"}]}, "$.skew[0].line"),
    ({"skew": [{"kind": "ramp"}]}, "$.skew[0].kind"),
    ({"grid": {"start_hz": 5, "stop_hz": 1, "step_hz": 1}}, "$.grid.stop_hz"),
])
def test_errors_name_the_field(patch, path):
    data = {**BASE, **patch}
    if data.get("grid") is None:
        del data["grid"]
    with pytest.raises(ConfigError) as info:
        parse_channel_config(data)
    assert info.value.path == path


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{nope")
    with pytest.raises(ConfigError):
        load_channel_config(p)
    p.write_text(json.dumps(BASE))
    assert load_channel_config(p).z0 == 50.0
