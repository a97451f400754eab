"""Touchstone V1/V2 reader and writer for 2- and 4-port S-parameter files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    MalformedRecord,
    NoiseDataUnsupported,
    NonAscendingFrequency,
    NumericOverflow,
    TouchstoneError,
    UnsupportedParameterType,
    UnsupportedPortCount,
)
from .network import DB_FLOOR, PortMap, SingleEndedNetwork

SUPPORTED_PORTS = (2, 4)


class FrequencyUnit(str, Enum):
    HZ = "Hz"
    KHZ = "kHz"
    MHZ = "MHz"
    GHZ = "GHz"

    @property
    def scale(self) -> float:
        return {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}[self.value]

    @classmethod
    def parse(cls, text) -> "FrequencyUnit":
        if isinstance(text, cls):
            return text
        for unit in cls:
            if unit.value.lower() == str(text).lower():
                return unit
        raise ValueError(f"unknown frequency unit {text!r}")


class DataFormat(str, Enum):
    RI = "RI"
    MA = "MA"
    DB = "DB"

    @classmethod
    def parse(cls, text) -> "DataFormat":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).upper())
        except ValueError:
            raise ValueError(f"unknown data format {text!r}") from None


class Version(str, Enum):
    V1 = "V1"
    V2 = "V2"


@dataclass(frozen=True)
class TouchstoneOptions:
    """Option-line settings.

    Fields left as ``None`` mean "take it from the file" when used as parse
    overrides, and fall back to GHz / RI / 50 ohm / V1 when writing.
    """

    frequency_unit: FrequencyUnit | str | None = None
    data_format: DataFormat | str | None = None
    reference_impedance: float | None = None
    version: Version | str | None = None

    def __post_init__(self):
        if self.frequency_unit is not None:
            object.__setattr__(self, "frequency_unit", FrequencyUnit.parse(self.frequency_unit))
        if self.data_format is not None:
            object.__setattr__(self, "data_format", DataFormat.parse(self.data_format))
        if self.version is not None and not isinstance(self.version, Version):
            object.__setattr__(self, "version", Version(str(self.version).upper()))
        if self.reference_impedance is not None and not self.reference_impedance > 0:
            raise ValueError("reference impedance must be positive")

    def with_defaults(self) -> "TouchstoneOptions":
        return TouchstoneOptions(
            frequency_unit=self.frequency_unit or FrequencyUnit.GHZ,
            data_format=self.data_format or DataFormat.RI,
            reference_impedance=self.reference_impedance or 50.0,
            version=self.version or Version.V1,
        )


# Reading ---------------------------------------------------------------------

_KEYWORD = re.compile(r"^\[([^\]]+)\]\s*(.*)$")


def _option_line(text: str, lineno: int) -> dict:
    opts = {}
    tokens = text[1:].split()
    i = 0
    while i < len(tokens):
        tok = tokens[i].upper()
        if tok in ("HZ", "KHZ", "MHZ", "GHZ"):
            opts["frequency_unit"] = FrequencyUnit.parse(tok)
        elif tok in ("RI", "MA", "DB"):
            opts["data_format"] = DataFormat(tok)
        elif tok == "S":
            pass
        elif tok in ("Y", "Z", "H", "G"):
            raise UnsupportedParameterType(f"{tok}-parameters are not supported", lineno)
        elif tok == "R":
            try:
                opts["reference_impedance"] = float(tokens[i + 1])
            except (IndexError, ValueError):
                raise MalformedRecord("option line 'R' needs a numeric impedance", lineno) from None
            i += 1
        else:
            raise MalformedRecord(f"unknown option {tokens[i]!r}", lineno)
        i += 1
    return opts


def _to_complex(a: np.ndarray, b: np.ndarray, fmt: DataFormat) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        if fmt is DataFormat.RI:
            return a + 1j * b
        mag = a if fmt is DataFormat.MA else 10.0 ** (a / 20.0)
        return mag * np.exp(1j * np.deg2rad(b))


def _infer_v1_ports(lines: list[tuple[int, list[str]]]) -> int:
    first = len(lines[0][1])
    if first == 9 and len(lines) > 1:
        second = len(lines[1][1])
        return 4 if second == 8 else 2
    if first == 9:
        return 2
    if first % 2 == 1 and first >= 3:
        n = (first - 1) // 2
        # 1 and 3 ports fit on one line; larger counts wrap at 4 pairs per line
        if n in (1, 3):
            raise UnsupportedPortCount(f"{n}-port data is not supported", lines[0][0])
    raise MalformedRecord(
        f"cannot infer port count from a first record of {first} values", lines[0][0]
    )


def parse_touchstone(
    text: bytes | str,
    overrides: TouchstoneOptions | None = None,
    *,
    nports: int | None = None,
    port_map: PortMap | None = None,
    source: str | None = None,
) -> SingleEndedNetwork:
    """Parse Touchstone text into a :class:`SingleEndedNetwork`.

    Args:
        text: File contents.
        overrides: Options that replace whatever the file's option line says.
        nports: Port count, normally derived from the file extension. When
            omitted, V2 files use ``[Number of Ports]`` and V1 files infer it
            from the line layout of the first record.
        port_map: P/N and left/right assignment for 4-port data.
        source: Name used in error messages.

    Raises:
        TouchstoneError: or one of its subclasses, with the offending line.
    """
    try:
        return _parse(text, overrides, nports, port_map)
    except TouchstoneError as exc:
        if source:
            exc.with_source(source)
        raise


def _parse(text, overrides, nports, port_map) -> SingleEndedNetwork:
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    opts: dict = {}
    seen_option = False
    version = Version.V1
    v2_ports = None
    matrix_format = "full"
    two_port_order = "21_12"
    in_data = False
    data_lines: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if not seen_option:
                opts = _option_line(line, lineno)
                seen_option = True
            continue
        m = _KEYWORD.match(line)
        if m:
            key = m.group(1).strip().lower()
            arg = m.group(2).strip()
            if key == "version":
                version = Version.V2
            elif key == "number of ports":
                try:
                    v2_ports = int(arg)
                except ValueError:
                    raise MalformedRecord(f"bad port count {arg!r}", lineno) from None
            elif key == "two-port data order":
                two_port_order = arg.lower()
            elif key == "matrix format":
                matrix_format = arg.lower()
            elif key == "network data":
                in_data = True
            elif key == "noise data":
                raise NoiseDataUnsupported("noise parameter data is not supported", lineno)
            elif key == "end":
                break
            # [Number of Frequencies], [Reference] and the rest are informational
            continue
        if version is Version.V2 and not in_data:
            # continuation of a multi-line keyword such as [Reference]
            continue
        data_lines.append((lineno, line.split()))

    if not data_lines:
        raise MalformedRecord("no network data found")

    if overrides is not None:
        for name in ("frequency_unit", "data_format", "reference_impedance"):
            value = getattr(overrides, name)
            if value is not None:
                opts[name] = value
    unit = opts.get("frequency_unit", FrequencyUnit.GHZ)
    fmt = opts.get("data_format", DataFormat.MA)
    z0 = float(opts.get("reference_impedance", 50.0))

    if nports is None:
        nports = v2_ports if v2_ports is not None else _infer_v1_ports(data_lines)
    if nports not in SUPPORTED_PORTS:
        raise UnsupportedPortCount(f"{nports}-port data is not supported (only 2 and 4)")

    if nports == 2 and version is Version.V1:
        for lineno, toks in data_lines:
            if len(toks) == 5:
                raise NoiseDataUnsupported("noise parameter data is not supported", lineno)

    if matrix_format == "full":
        n_values = nports * nports
    elif matrix_format in ("lower", "upper"):
        n_values = nports * (nports + 1) // 2
    else:
        raise MalformedRecord(f"unknown matrix format {matrix_format!r}")
    per_record = 1 + 2 * n_values

    tokens: list[str] = []
    token_lines: list[int] = []
    for lineno, toks in data_lines:
        tokens.extend(toks)
        token_lines.extend([lineno] * len(toks))

    if len(tokens) % per_record:
        start = (len(tokens) // per_record) * per_record
        raise MalformedRecord(
            f"incomplete record: {len(tokens) - start} values where {per_record} were expected",
            token_lines[start],
        )
    try:
        values = np.array([float(t) for t in tokens], dtype=float)
    except ValueError:
        for t, lineno in zip(tokens, token_lines):
            try:
                float(t)
            except ValueError:
                raise MalformedRecord(f"non-numeric value {t!r}", lineno) from None
        raise
    table = values.reshape(-1, per_record)
    record_lines = np.array(token_lines[::per_record])

    bad = ~np.isfinite(table)
    if bad.any():
        row = int(np.nonzero(bad.any(axis=1))[0][0])
        raise NumericOverflow("non-finite value in record", int(record_lines[row]))

    freq = table[:, 0] * unit.scale
    steps = np.diff(freq)
    if np.any(steps <= 0):
        row = int(np.nonzero(steps <= 0)[0][0]) + 1
        raise NonAscendingFrequency(
            f"frequency {freq[row]:g} Hz does not exceed the previous sample", int(record_lines[row])
        )
    if freq[0] < 0:
        raise NonAscendingFrequency("negative frequency", int(record_lines[0]))

    entries = _to_complex(table[:, 1::2], table[:, 2::2], fmt)
    if not np.all(np.isfinite(entries)):
        row = int(np.nonzero(~np.isfinite(entries).all(axis=1))[0][0])
        raise NumericOverflow("value overflows after format conversion", int(record_lines[row]))

    s = _assemble(entries, nports, matrix_format, version, two_port_order)
    if port_map is None:
        port_map = PortMap()
    return SingleEndedNetwork(freq, s, port_map, z0)


def _assemble(entries, nports, matrix_format, version, two_port_order) -> np.ndarray:
    n = entries.shape[0]
    if matrix_format == "full":
        s = entries.reshape(n, nports, nports)
        if nports == 2 and (version is Version.V1 or two_port_order == "21_12"):
            # V1 two-port order is S11 S21 S12 S22, i.e. column-major
            s = np.swapaxes(s, 1, 2)
        return np.ascontiguousarray(s)
    s = np.zeros((n, nports, nports), dtype=complex)
    rows, cols = (np.tril_indices(nports) if matrix_format == "lower"
                  else np.triu_indices(nports))
    s[:, rows, cols] = entries
    s[:, cols, rows] = entries
    return s


def read_touchstone(path, overrides: TouchstoneOptions | None = None,
                    port_map: PortMap | None = None) -> SingleEndedNetwork:
    """Read a ``.s2p``/``.s4p`` file; the port count comes from the extension."""
    path = Path(path)
    m = re.fullmatch(r"\.s(\d+)p", path.suffix.lower())
    nports = int(m.group(1)) if m else None
    if nports is not None and nports not in SUPPORTED_PORTS:
        raise UnsupportedPortCount(f"{nports}-port data is not supported", source=str(path))
    return parse_touchstone(path.read_bytes(), overrides, nports=nports,
                            port_map=port_map, source=str(path))


# Writing ---------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _pairs(values: np.ndarray, fmt: DataFormat) -> list[str]:
    if fmt is DataFormat.RI:
        a, b = values.real, values.imag
    else:
        mag = np.abs(values)
        a = mag if fmt is DataFormat.MA else 20.0 * np.log10(np.maximum(mag, DB_FLOOR))
        b = np.rad2deg(np.angle(values))
    return [f"{_fmt(x)} {_fmt(y)}" for x, y in zip(a, b)]


def write_touchstone(network: SingleEndedNetwork, options: TouchstoneOptions | None = None) -> bytes:
    """Serialize a network; output is deterministic for a given input."""
    opts = (options or TouchstoneOptions()).with_defaults()
    nports = network.nports
    if nports not in SUPPORTED_PORTS:
        raise UnsupportedPortCount(f"{nports}-port data is not supported")
    unit, fmt = opts.frequency_unit, opts.data_format
    z0 = opts.reference_impedance if options and options.reference_impedance else network.z0

    out = [f"! {nports}-port S-parameters",
           f"# {unit.value} S {fmt.value} R {z0:g}"]
    if opts.version is Version.V2:
        out += ["[Version] 2.0",
                f"[Number of Ports] {nports}"]
        if nports == 2:
            out.append("[Two-Port Data Order] 21_12")
        out += [f"[Number of Frequencies] {len(network)}",
                "[Reference] " + " ".join([f"{z0:g}"] * nports),
                "[Network Data]"]

    for f, m in zip(network.frequency, network.s):
        freq = _fmt(f / unit.scale)
        if nports == 2:
            out.append(freq + " " + " ".join(_pairs(m.T.ravel(), fmt)))
            continue
        for r in range(nports):
            row = " ".join(_pairs(m[r], fmt))
            out.append((freq if r == 0 else " " * len(freq)) + " " + row)
    if opts.version is Version.V2:
        out.append("[End]")
    return ("\n".join(out) + "\n").encode("ascii")


def save_touchstone(network: SingleEndedNetwork, path, options: TouchstoneOptions | None = None) -> Path:
    path = Path(path)
    path.write_bytes(write_touchstone(network, options))
    return path
