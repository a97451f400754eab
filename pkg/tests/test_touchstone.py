import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sild.errors import (
    MalformedRecord,
    NoiseDataUnsupported,
    NonAscendingFrequency,
    NumericOverflow,
    TouchstoneError,
    UnsupportedParameterType,
    UnsupportedPortCount,
)
from sild.network import SingleEndedNetwork
from sild.synth import SkewProfileSpec, uniform_grid
from sild.touchstone import (
    TouchstoneOptions,
    parse_touchstone,
    read_touchstone,
    save_touchstone,
    write_touchstone,
)

from conftest import skewed


def _s4p(fmt, rows, header=None):
    head = header or f"# GHz S {fmt} R 50"
    body = ["10"] + [" "] * 3
    lines = [head] + [f"{b} {r}" for b, r in zip(body, rows)]
    return "\n".join(lines) + "\n"


IDENTITY_RI = _s4p("RI", [
    "0 0  0 0  0 0  0 0",
    "1 0  0 0  0 0  0 0",
    "0 0  0 0  0 0  0 0",
    "0 0  0 0  1 0  0 0",
])
IDENTITY_MA = _s4p("MA", [
    "0 0  0 0  0 0  0 0",
    "1 0  0 0  0 0  0 0",
    "0 0  0 0  0 0  0 0",
    "0 0  0 0  1 0  0 0",
])


def test_identity_ri():
    net = parse_touchstone(IDENTITY_RI)
    assert net.nports == 4
    np.testing.assert_array_equal(net.frequency, [1.0e10])
    assert net.entry(2, 1)[0] == 1 + 0j
    assert net.entry(4, 3)[0] == 1 + 0j
    assert np.count_nonzero(net.s) == 2
    assert net.z0 == 50.0


def test_ma_matches_ri():
    a, b = parse_touchstone(IDENTITY_RI), parse_touchstone(IDENTITY_MA)
    np.testing.assert_array_equal(a.s, b.s)
    np.testing.assert_array_equal(a.frequency, b.frequency)


def test_db_entry_converts_to_rectangular():
    text = "# GHz S DB R 50\n1 -600 0 -6.0206 -90 -600 0 -600 0\n"
    net = parse_touchstone(text, nports=2)
    assert abs(net.entry(2, 1)[0] - (0 - 0.5j)) < 1e-6


def test_v1_two_port_column_order():
    # V1 2-port order is S11 S21 S12 S22
    net = parse_touchstone("# Hz S RI R 50\n1 0.1 0 0.2 0 0.3 0 0.4 0\n")
    assert net.entry(1, 1)[0] == 0.1
    assert net.entry(2, 1)[0] == 0.2
    assert net.entry(1, 2)[0] == 0.3
    assert net.entry(2, 2)[0] == 0.4


def test_comments_and_case_insensitive_options():
    text = "! header\n#  ghz s ri r 75 ! trailing\n" + IDENTITY_RI.split("\n", 1)[1]
    net = parse_touchstone(text)
    assert net.z0 == 75.0
    assert net.frequency[0] == 1e10


def test_defaults_without_option_line():
    net = parse_touchstone("1 1 0 0.5 90 0.5 90 1 0\n", nports=2)
    assert net.frequency[0] == 1e9  # GHz default
    assert abs(net.entry(2, 1)[0] - 0.5j) < 1e-15  # MA default


def test_v2_full_and_lower():
    full = (
        "[Version] 2.0\n# Hz S RI R 50\n[Number of Ports] 2\n[Two-Port Data Order] 12_21\n"
        "[Number of Frequencies] 1\n[Reference] 50 50\n[Network Data]\n"
        "5 0.1 0 0.2 0\n  0.3 0 0.4 0\n[End]\n"
    )
    net = parse_touchstone(full)
    assert net.entry(1, 2)[0] == 0.2 and net.entry(2, 1)[0] == 0.3
    lower = (
        "[Version] 2.0\n# Hz S RI R 50\n[Number of Ports] 2\n[Two-Port Data Order] 12_21\n"
        "[Matrix Format] Lower\n[Network Data]\n5 0.1 0 0.3 0 0.4 0\n[End]\n"
    )
    net = parse_touchstone(lower)
    assert net.entry(1, 2)[0] == 0.3 and net.entry(2, 1)[0] == 0.3 and net.entry(2, 2)[0] == 0.4


def test_dc_sample_kept_and_flagged():
    text = "# Hz S RI R 50\n0 0 0 1 0 1 0 0 0\n1e9 0 0 1 0 1 0 0 0\n"
    net = parse_touchstone(text)
    assert net.has_dc
    assert len(net) == 2
    assert len(net.without_dc()) == 1


@pytest.mark.parametrize("text, exc", [
    ("# Hz S RI R 50\n2 0 0 1 0 1 0 0 0\n1 0 0 1 0 1 0 0 0\n", NonAscendingFrequency),
    ("# Hz S RI R 50\n1 0 0 1 0 1 0 0 0\n1 0 0 1 0 1 0 0 0\n", NonAscendingFrequency),
    ("# Hz S RI R 50\n1 0 0 1 0 1 0 0 0\n2 0 0 1 0 1 0\n", MalformedRecord),
    ("# Hz S RI R 50\n1 0 0 nan 0 1 0 0 0\n", NumericOverflow),
    ("# Hz S RI R 50\n1 0 0 inf 0 1 0 0 0\n", NumericOverflow),
    ("# Hz S DB R 50\n1 0 0 9999 0 1 0 0 0\n", NumericOverflow),
    ("# Hz S RI R 50\n1 0 0 abc 0 1 0 0 0\n", MalformedRecord),
    ("# Hz S RI R 50\n1 0 0 0 0 0 0\n", UnsupportedPortCount),
    ("# Hz Z RI R 50\n1 0 0 1 0 1 0 0 0\n", UnsupportedParameterType),
    ("# Hz S RI R 50\n1 0 0 1 0 1 0 0 0\n2 0 0 1 0 1 0 0 0\n1 2.0 -1.0 0.5 50\n", NoiseDataUnsupported),
    ("# Hz S RI R 50\n! nothing here\n", MalformedRecord),
])
def test_parser_rejects_bad_input(text, exc):
    with pytest.raises(exc):
        parse_touchstone(text)


def test_three_port_rejected_even_with_explicit_count():
    text = "# Hz S RI R 50\n1 " + " ".join(["0"] * 18) + "\n"
    with pytest.raises(UnsupportedPortCount):
        parse_touchstone(text, nports=3)


def test_errors_carry_line_numbers():
    text = "! c\n# Hz S RI R 50\n1 0 0 1 0 1 0 0 0\n0.5 0 0 1 0 1 0 0 0\n"
    with pytest.raises(NonAscendingFrequency) as info:
        parse_touchstone(text, source="chan.s2p")
    assert info.value.line == 4
    assert "chan.s2p:line 4" in str(info.value)


def test_truncated_four_port():
    text = "\n".join(IDENTITY_RI.splitlines()[:-1]) + "\n"
    with pytest.raises(MalformedRecord):
        parse_touchstone(text, nports=4)


def test_read_touchstone_uses_extension(tmp_path):
    p = tmp_path / "x.s3p"
    p.write_text("# Hz S RI R 50\n1 " + " ".join(["0"] * 18) + "\n")
    with pytest.raises(UnsupportedPortCount):
        read_touchstone(p)
    p = tmp_path / "x.s4p"
    p.write_text(IDENTITY_RI)
    assert read_touchstone(p).nports == 4


def test_identity_write_is_stable():
    net = parse_touchstone(IDENTITY_RI)
    first = write_touchstone(net)
    second = write_touchstone(parse_touchstone(first))
    assert first == second


def test_round_trip_synthetic_channel(twinax_spec):
    f = uniform_grid(110e6, 110e9, 110e6)
    assert f.size == 1000
    net = skewed(twinax_spec(f, coupling=0.08), SkewProfileSpec.damped(5e-12))
    for fmt in ("RI", "MA", "DB"):
        for version in ("V1", "V2"):
            back = parse_touchstone(write_touchstone(net, TouchstoneOptions(data_format=fmt, version=version)))
            assert np.max(np.abs(back.s - net.s)) < 1e-12, (fmt, version)
            np.testing.assert_allclose(back.frequency, net.frequency, rtol=1e-15)


def test_unit_override_scales_frequency():
    net = parse_touchstone(IDENTITY_RI)
    text = write_touchstone(net, TouchstoneOptions(frequency_unit="GHz"))
    again = parse_touchstone(text, TouchstoneOptions(frequency_unit="MHz"))
    np.testing.assert_allclose(net.frequency / again.frequency, 1000.0)


def test_save_and_read(tmp_path, twinax_spec):
    net = skewed(twinax_spec(uniform_grid(1e8, 1e10, 1e8)), 2e-12)
    path = save_touchstone(net, tmp_path / "c.s4p")
    back = read_touchstone(path)
    assert np.max(np.abs(back.s - net.s)) < 1e-12


def test_two_port_round_trip():
    f = np.array([1e9, 2e9])
    s = np.array([[[0.1, 0.2j], [0.3, -0.4]], [[0.5, 0.6], [0.7j, 0.8]]])
    net = SingleEndedNetwork(f, s, port_map=None)
    for version in ("V1", "V2"):
        back = parse_touchstone(write_touchstone(net, TouchstoneOptions(version=version)))
        np.testing.assert_allclose(back.s, s, atol=1e-15)


_entries = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(
    arrays(np.complex128, (3, 4, 4), elements=_entries),
    st.sampled_from(["RI", "MA", "DB"]),
    st.sampled_from(["Hz", "kHz", "MHz", "GHz"]),
)
def test_round_trip_property(s, fmt, unit):
    net = SingleEndedNetwork(np.array([1e6, 2.5e9, 7.7e10]), s)
    back = parse_touchstone(write_touchstone(net, TouchstoneOptions(frequency_unit=unit, data_format=fmt)))
    assert np.max(np.abs(back.s - net.s)) < 1e-12
    np.testing.assert_allclose(back.frequency, net.frequency, rtol=1e-15)


@settings(max_examples=40, deadline=None)
@given(arrays(np.complex128, (2, 4, 4), elements=_entries.filter(lambda z: abs(z) > 1e-20)))
def test_format_invariance_property(s):
    net = SingleEndedNetwork(np.array([1e9, 2e9]), s)
    parsed = [parse_touchstone(write_touchstone(net, TouchstoneOptions(data_format=fmt)))
              for fmt in ("RI", "MA", "DB")]
    for other in parsed[1:]:
        assert np.max(np.abs(other.s - parsed[0].s)) < 1e-9


def test_touchstone_error_is_value_error():
    assert issubclass(TouchstoneError, ValueError)
