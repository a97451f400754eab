"""Command-line interface: ``sild analyze|batch|synth|pulse``.

Exit codes: 0 success, 1 a ``--max-fom``/``--max-sild`` gate failed,
2 usage, parse or input errors.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import logging
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .batch import ErrorPolicy, stream_batch
from .config import load_channel_config
from .errors import BatchAborted, EmptyInput, SildError
from .metrics import PRESETS, FomConfig, Normalization, fom_sild, max_abs_sild, sild, weight
from .network import PortMap, to_mixed_mode
from .pulse import PulseConfig, pulse_response
from .touchstone import TouchstoneOptions, parse_touchstone, read_touchstone, save_touchstone

log = logging.getLogger("sild")

ANALYZE_SCHEMA_VERSION = "1.0"
PER_FREQUENCY_COLUMNS = (
    "frequency_hz", "t_skew_1_s", "t_skew_2_s", "sdd21_db", "sdd12_db",
    "s0dd21_db", "s0dd12_db", "sild_1_db", "sild_2_db", "weight",
)

_PREFIX = {"": 1.0, "t": 1e12, "g": 1e9, "k": 1e3, "u": 1e-6, "n": 1e-9, "p": 1e-12, "f": 1e-15}
_ALLOWED = {"Hz": ("", "t", "g", "m", "k"), "s": ("", "m", "u", "n", "p", "f")}


class UsageError(SildError):
    pass


def parse_quantity(text: str, unit: str) -> float:
    """Parse ``"53.125GHz"``, ``"3ps"`` or a bare number in base units."""
    m = re.fullmatch(r"\s*([-+0-9.eE]+)\s*([a-zA-Z]*)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r}")
    prefix = m.group(2).lower()
    if prefix.endswith(unit.lower()):
        prefix = prefix[: -len(unit)]
    if prefix not in _ALLOWED[unit]:
        raise argparse.ArgumentTypeError(f"unknown unit in {text!r} (expected {unit})")
    # "m" is mega for hertz, milli for seconds
    scale = (1e6 if unit == "Hz" else 1e-3) if prefix == "m" else _PREFIX[prefix]
    try:
        return float(m.group(1)) * scale
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r}") from None


def _freq(text):
    return parse_quantity(text, "Hz")


def _time(text):
    return parse_quantity(text, "s")


def _port_map(text):
    try:
        return PortMap.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_sweep(text: str) -> np.ndarray:
    """``tau=0:0.5:3ps`` -> delays in seconds, inclusive of the stop value."""
    m = re.fullmatch(r"\s*tau\s*=\s*([-+0-9.eE]+):([-+0-9.eE]+):([-+0-9.eE]+)\s*([a-z]*)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"sweep must look like tau=START:STEP:STOP[unit], got {text!r}")
    unit = m.group(4) or "s"
    scale = parse_quantity("1" + unit, "s")
    start, step, stop = (float(m.group(i)) for i in (1, 2, 3))
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("sweep needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return (start + step * np.arange(n)) * scale


# Parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--port-map", type=_port_map, default=PortMap(),
                   help="'default' (P: 1->2, N: 3->4), 'adjacent' (1,2 left; 3,4 right) or 'lp,rp,ln,rn'")
    g.add_argument("--profile", choices=sorted(PRESETS), default="224g-pam4",
                   help="named weighting preset (default: 224g-pam4)")
    g.add_argument("--f-b", type=_freq, help="signaling rate, e.g. 106.25GHz")
    g.add_argument("--f-r", type=_freq, help="receiver 3 dB bandwidth")
    g.add_argument("--f-t", type=_freq, help="transmit filter 3 dB bandwidth")
    g.add_argument("--f-max", type=_freq, help="summation cutoff")
    g.add_argument("--normalization", choices=[n.value for n in Normalization],
                   help="weighted_rms (dB, default) or literal (dB^2)")
    g.add_argument("-o", "--output", help="output path ('-' or omitted: stdout where applicable)")
    g.add_argument("--format", choices=("csv", "json"), help="output format")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="sild", description="Skew-induced insertion loss deviation analysis for differential channels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze one 4-port file")
    p.add_argument("file", help="Touchstone .s4p file, or '-' for stdin")
    p.add_argument("--max-fom", type=float, help="fail (exit 1) if either FOM exceeds this")
    p.add_argument("--max-sild", type=float, help="fail (exit 1) if max |SILD| (dB) exceeds this")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("batch", parents=[common], help="analyze many files")
    p.add_argument("inputs", nargs="+", help="files, directories or glob patterns")
    p.add_argument("--policy", choices=[e.value for e in ErrorPolicy], default="continue")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--bin-width", type=float, default=0.025, help="histogram bin width in dB")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("synth", parents=[common], help="generate synthetic channels")
    p.add_argument("spec", help="channel config (JSON)")
    p.add_argument("--sweep", type=parse_sweep, help="e.g. tau=0:0.5:3ps; one file per value")
    p.add_argument("--data-format", choices=("RI", "MA", "DB"), default="RI")
    p.add_argument("--unit", choices=("Hz", "kHz", "MHz", "GHz"), default="GHz")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pulse", parents=[common], help="pulse response of one transfer as CSV")
    p.add_argument("file", help="Touchstone .s4p file, or '-' for stdin")
    p.add_argument("--mode", choices=("dd21", "dd12", "sd21", "sd12"), default="dd21")
    p.add_argument("--pulse-width", type=_time, help="default: 1 UI of the profile")
    p.add_argument("--rise-time", type=_time, help="default: 0.1 UI")
    p.add_argument("--time-window", type=_time)
    p.add_argument("--dc", choices=("constant", "linear"), default="constant")
    p.add_argument("--no-window", action="store_true", help="disable the band-edge taper")
    p.set_defaults(func=cmd_pulse)
    return parser


def fom_config(args) -> FomConfig:
    base = PRESETS[args.profile]
    f_b = args.f_b or base.f_b
    if args.f_b:
        cfg = FomConfig.for_rate(f_b, f_r=args.f_r, f_t=args.f_t, f_max=args.f_max)
    else:
        cfg = FomConfig(f_b, args.f_r or base.f_r, args.f_t or base.f_t, args.f_max or base.f_max)
    norm = args.normalization or base.normalization
    return FomConfig(cfg.f_b, cfg.f_r, cfg.f_t, cfg.f_max, Normalization(norm))


def _read_network(path: str, port_map: PortMap):
    if path == "-":
        return parse_touchstone(sys.stdin.buffer.read(), port_map=port_map, source="<stdin>")
    return read_touchstone(path, port_map=port_map)


def _open_text_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


# Subcommands -----------------------------------------------------------------

def analyze_report(net, cfg: FomConfig, source: str) -> dict:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = sild(net)
        fom = fom_sild(res, cfg)
        peak = max_abs_sild(res, cfg.f_max)
    w = weight(res.frequency, cfg)
    return {
        "schema_version": ANALYZE_SCHEMA_VERSION,
        "source": source,
        "port_map": list(net.port_map.as_tuple()),
        "config": {"f_b_hz": cfg.f_b, "f_r_hz": cfg.f_r, "f_t_hz": cfg.f_t,
                   "f_max_hz": cfg.f_max, "normalization": cfg.normalization.value},
        "scalars": {
            "fom_1": fom.fom_1,
            "fom_2": fom.fom_2,
            "delta": fom.delta,
            "fom_unit": "dB" if cfg.normalization is Normalization.WEIGHTED_RMS else "dB^2",
            "f_cutoff_hz": fom.f_cutoff,
            "n_samples": fom.n_samples,
            "max_abs_sild_db": peak.value,
            "max_abs_sild_freq_hz": peak.frequency,
            "max_abs_sild_direction": peak.direction,
        },
        "warnings": list(dict.fromkeys(str(x.message) for x in caught)),
        "per_frequency": {
            "frequency_hz": res.frequency.tolist(),
            "t_skew_1_s": res.t_skew_1.tolist(),
            "t_skew_2_s": res.t_skew_2.tolist(),
            "sdd21_db": res.original_mag_21.tolist(),
            "sdd12_db": res.original_mag_12.tolist(),
            "s0dd21_db": res.deskewed_mag_21.tolist(),
            "s0dd12_db": res.deskewed_mag_12.tolist(),
            "sild_1_db": res.sild_1.tolist(),
            "sild_2_db": res.sild_2.tolist(),
            "weight": np.asarray(w).tolist(),
        },
    }


def cmd_analyze(args) -> int:
    fmt = args.format or "csv"
    cfg = fom_config(args)
    net = _read_network(args.file, args.port_map)
    report = analyze_report(net, cfg, args.file)

    out, close = _open_text_out(args.output)
    try:
        if fmt == "json":
            json.dump(report, out, indent=2)
            out.write("\n")
        else:
            writer = csv.writer(out)
            writer.writerow(PER_FREQUENCY_COLUMNS)
            cols = [report["per_frequency"][c] for c in PER_FREQUENCY_COLUMNS]
            for row in zip(*cols):
                writer.writerow([repr(float(v)) for v in row])
    finally:
        if close:
            out.close()

    sc = report["scalars"]
    if fmt == "csv" or args.output not in (None, "-"):
        for key in ("fom_1", "fom_2", "delta", "max_abs_sild_db", "max_abs_sild_freq_hz"):
            print(f"{key}={sc[key]!r}", file=sys.stderr)
    for msg in report["warnings"]:
        log.warning(msg)

    status = 0
    if args.max_fom is not None and max(sc["fom_1"], sc["fom_2"]) > args.max_fom:
        print(f"FAIL: FOM {max(sc['fom_1'], sc['fom_2']):.4g} exceeds {args.max_fom:g}", file=sys.stderr)
        status = 1
    if args.max_sild is not None and sc["max_abs_sild_db"] > args.max_sild:
        print(f"FAIL: max |SILD| {sc['max_abs_sild_db']:.4g} dB exceeds {args.max_sild:g} dB",
              file=sys.stderr)
        status = 1
    return status


def expand_inputs(patterns) -> list[str]:
    found = set()
    for pat in patterns:
        p = Path(pat)
        if p.is_dir():
            found.update(str(x) for x in p.iterdir() if re.fullmatch(r"\.s\d+p", x.suffix.lower()))
        elif p.is_file():
            found.add(str(p))
        else:
            found.update(x for x in glob.glob(pat, recursive=True) if Path(x).is_file())
    return sorted(found)


def cmd_batch(args) -> int:
    if args.format:
        raise UsageError("batch always writes records.csv and summary.json; --format does not apply")
    inputs = expand_inputs(args.inputs)
    if not inputs:
        raise EmptyInput("no inputs matched")
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = fom_config(args)
    summary = stream_batch(inputs, outdir / "records.csv", cfg, policy=args.policy,
                           port_map=args.port_map, n_jobs=args.jobs, bin_width=args.bin_width)
    (outdir / "summary.json").write_text(json.dumps(summary.to_dict(), indent=2) + "\n")
    print(f"{summary.count} analyzed, {len(summary.failures)} failed -> {outdir}", file=sys.stderr)
    return 0


def _tau_label(tau: float) -> str:
    ps = f"{tau * 1e12:.3f}".rstrip("0").rstrip(".")
    return ps.replace(".", "p").replace("-", "m") + "ps"


def cmd_synth(args) -> int:
    if args.format:
        raise UsageError("synth writes Touchstone files; --format does not apply")
    if not args.output:
        raise UsageError("synth needs --output")
    config = load_channel_config(args.spec)
    opts = TouchstoneOptions(frequency_unit=args.unit, data_format=args.data_format,
                             reference_impedance=config.z0)
    out = Path(args.output)
    if out.suffix.lower() != ".s4p":
        out = out.with_suffix(".s4p")
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.sweep is None:
        save_touchstone(config.build(), out, opts)
        print(out)
        return 0
    for tau in args.sweep:
        path = out.with_name(f"{out.stem}_tau{_tau_label(tau)}{out.suffix}")
        save_touchstone(config.with_tau(float(tau)).build(), path, opts)
        print(path)
    return 0


def cmd_pulse(args) -> int:
    if args.format == "json":
        raise UsageError("pulse writes CSV only")
    cfg = fom_config(args)
    ui = 1.0 / cfg.f_b
    width = args.pulse_width or ui
    pcfg = PulseConfig(
        pulse_width=width,
        rise_time=args.rise_time if args.rise_time is not None else 0.1 * ui,
        time_window=args.time_window,
        dc_extrapolation=args.dc,
        spectral_window="none" if args.no_window else "raised_cosine_edge",
    )
    net = _read_network(args.file, args.port_map)
    mm = to_mixed_mode(net)
    transfer = {"dd21": mm.sdd21, "dd12": mm.sdd12, "sd21": mm.ssd21, "sd12": mm.ssd12}[args.mode]
    resp = pulse_response(transfer, mm.frequency, pcfg)
    out, close = _open_text_out(args.output)
    try:
        writer = csv.writer(out)
        writer.writerow(("time_s", "amplitude"))
        for t, a in zip(resp.time, resp.amplitude):
            writer.writerow((repr(float(t)), repr(float(a))))
    finally:
        if close:
            out.close()
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except BatchAborted as exc:
        print(f"sild: batch aborted: {exc}", file=sys.stderr)
        return 2
    except (SildError, ValueError, OSError) as exc:
        print(f"sild: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
