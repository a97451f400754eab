import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sild.errors import PassivityViolation
from sild.network import PortMap, to_mixed_mode
from sild.synth import (
    ChannelSpec,
    LossModel,
    SkewProfileSpec,
    ideal_diff_channel,
    inject_se_delay,
    skew_profile,
    uniform_grid,
)


def test_loss_model_rejects_gain():
    with pytest.raises(PassivityViolation):
        LossModel(dc_loss_db=-1.0)


def test_skin_for_hits_target():
    m = LossModel.skin_for(15.0, 53.125e9, dc_loss_db=0.5)
    assert m.loss_db(53.125e9) == pytest.approx(15.0)
    assert m.loss_db(0.0) == 0.5


def test_uncoupled_lossy_sdd_magnitude():
    f = uniform_grid(1e8, 1e11, 1e8)
    m = LossModel.skin_for(10.0, 5e10)
    mm = to_mixed_mode(ideal_diff_channel(ChannelSpec(f, loss=m)))
    np.testing.assert_allclose(20 * np.log10(np.abs(mm.sdd21)), -m.loss_db(f), atol=1e-12)


def test_lossless_quadrature_coupling_is_unitary():
    f = uniform_grid(1e9, 1e10, 1e9)
    net = ideal_diff_channel(ChannelSpec(f, coupling=0.3))
    for s in net.s:
        np.testing.assert_allclose(s.conj().T @ s, np.eye(4), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.95), st.floats(-180, 180), st.floats(0, 5e-12))
def test_passive_for_any_coupling(k, phase, tau):
    f = np.linspace(1e9, 1e11, 8)
    net = inject_se_delay(ideal_diff_channel(ChannelSpec(f, coupling=k, coupling_phase_deg=phase)),
                          "N", "right", tau)
    sv = np.linalg.svd(net.s, compute_uv=False)
    assert np.max(sv) <= 1 + 1e-12


def test_port_map_placement():
    f = np.array([1e9, 2e9])
    net = ideal_diff_channel(ChannelSpec(f, base_delay=0.0), PortMap.adjacent())
    assert net.entry(3, 1)[0] == 1.0
    assert net.entry(4, 2)[0] == 1.0
    assert net.entry(2, 1)[0] == 0.0


def test_flat_and_damped_profiles():
    f = np.array([0.0, 10e9, 20e9])
    np.testing.assert_array_equal(skew_profile(SkewProfileSpec.flat(1e-12), f), 1e-12)
    d = skew_profile(SkewProfileSpec.damped(5e-12, 40e9, 100e9), f)
    expected = 5e-12 * np.exp(-f / 100e9) * np.abs(np.sin(2 * np.pi * f / 40e9))
    np.testing.assert_allclose(d, expected, rtol=1e-15)
    assert d[0] == 0.0


def test_profile_validation():
    with pytest.raises(ValueError):
        SkewProfileSpec.flat(-1e-12)
    with pytest.raises(ValueError):
        SkewProfileSpec.damped(1e-12, osc_freq=0.0)


def test_injection_phases():
    f = np.array([1e9, 2e9])
    base = ideal_diff_channel(ChannelSpec(f, coupling=0.2))
    base.s[:, 0, 0] = 0.1  # give port 1 a reflection to watch
    net = inject_se_delay(base, "P", "left", 3e-12)
    ph = np.exp(-2j * np.pi * f * 3e-12)
    np.testing.assert_allclose(net.entry(2, 1), base.entry(2, 1) * ph)
    np.testing.assert_allclose(net.entry(1, 4), base.entry(1, 4) * ph)
    np.testing.assert_allclose(net.entry(1, 1), base.entry(1, 1) * ph ** 2)
    np.testing.assert_array_equal(net.entry(4, 3), base.entry(4, 3))


def test_zero_delay_returns_copy():
    f = np.array([1e9, 2e9])
    base = ideal_diff_channel(ChannelSpec(f))
    out = inject_se_delay(base, "P", "left", 0.0)
    assert out is not base
    np.testing.assert_array_equal(out.s, base.s)


def test_channel_spec_validation():
    with pytest.raises(ValueError):
        ChannelSpec(np.array([1.0]))
    with pytest.raises(ValueError):
        ChannelSpec(np.array([1.0, 2.0]), coupling=1.0)


def test_uniform_grid():
    f = uniform_grid(10e6, 110e9, 10e6)
    assert f.size == 11000
    assert f[-1] == pytest.approx(110e9)
