"""SILD curves, the weighting function and the single-number figures of merit.

Direction naming follows the usual convention: ``sild_1`` is the deviation of
the right-to-left differential insertion loss (``Sdd12``) and ``sild_2`` that of
the left-to-right one (``Sdd21``). ``fom_1``/``fom_2`` summarize them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyBand, GridMismatch, InsufficientBandwidth, NonUniformGridWarning
from .network import SingleEndedNetwork, db, to_mixed_mode
from .skew import SkewPort, SkewProfile, pn_skew

UNIFORM_RTOL = 1e-6


class Normalization(str, Enum):
    WEIGHTED_RMS = "weighted_rms"
    LITERAL = "literal"


@dataclass(frozen=True)
class FomConfig:
    """Weighting and summation settings.

    Defaults target 224G PAM4: 106.25 GBd signaling, receiver bandwidth at
    0.75 of the signaling rate, transmit filter at the signaling rate, and the
    summation running up to the signaling rate.
    """

    f_b: float = 106.25e9
    f_r: float = 0.75 * 106.25e9
    f_t: float = 106.25e9
    f_max: float = 106.25e9
    normalization: Normalization = Normalization.WEIGHTED_RMS

    def __post_init__(self):
        for name in ("f_b", "f_r", "f_t", "f_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "normalization", Normalization(self.normalization))

    @classmethod
    def for_rate(cls, f_b: float, **kw) -> "FomConfig":
        """Config scaled to a signaling rate, with any field overridable."""
        base = dict(f_b=f_b, f_r=0.75 * f_b, f_t=f_b, f_max=f_b)
        base.update({k: v for k, v in kw.items() if v is not None})
        return cls(**base)


PRESETS = {
    "224g-pam4": FomConfig.for_rate(106.25e9),
    "112g-pam4": FomConfig.for_rate(53.125e9),
}


@dataclass
class SildResult:
    """Per-frequency curves in dB on the non-DC grid."""

    frequency: np.ndarray
    sild_1: np.ndarray
    sild_2: np.ndarray
    deskewed_mag_21: np.ndarray
    deskewed_mag_12: np.ndarray
    original_mag_21: np.ndarray
    original_mag_12: np.ndarray
    t_skew_1: np.ndarray
    t_skew_2: np.ndarray


@dataclass(frozen=True)
class FomResult:
    fom_1: float
    fom_2: float
    f_cutoff: float
    n_samples: int
    normalization: Normalization

    @property
    def delta(self) -> float:
        return abs(self.fom_1 - self.fom_2)


@dataclass(frozen=True)
class MaxSild:
    value: float
    frequency: float
    direction: int


def _check_grid(skew: SkewProfile, f: np.ndarray):
    if skew.frequency.shape != f.shape or not np.array_equal(skew.frequency, f):
        raise GridMismatch(f"skew profile ({skew.direction.value}) is not on the network grid")


def deskewed_magnitude(network: SingleEndedNetwork, skew1: SkewProfile, skew2: SkewProfile):
    """Linear de-skewed differential IL magnitudes ``(|S0dd21|, |S0dd12|)``.

    The left-to-right magnitude is corrected with the skew seen at port 1 and
    the right-to-left magnitude with the skew at port 2. Each correction
    rotates the P-line through term and the coupled term feeding the N line.
    """
    net = network.without_dc()
    f = net.frequency
    _check_grid(skew1, f)
    _check_grid(skew2, f)
    pm = net.port_map
    lp, rp, ln, rn = pm.left_p, pm.right_p, pm.left_n, pm.right_n
    S = net.entry

    # causal-positive skew, hence the + sign relative to a phase(S)/2pi f skew
    u1 = np.exp(2j * np.pi * f * skew1.t_skew)
    u2 = np.exp(2j * np.pi * f * skew2.t_skew)
    mag21 = (np.abs(S(rp, lp) * u1 - S(rp, ln)) + np.abs(S(rn, ln) - S(rn, lp) * u1)) / 2
    mag12 = (np.abs(S(lp, rp) * u2 - S(lp, rn)) + np.abs(S(ln, rn) - S(ln, rp) * u2)) / 2
    return mag21, mag12


def sild(network: SingleEndedNetwork) -> SildResult:
    net = network.without_dc()
    if len(net) < 2:
        raise ValueError("need at least 2 non-DC frequency samples")
    mm = to_mixed_mode(net)
    skew1 = pn_skew(mm, SkewPort.AT_PORT1)
    skew2 = pn_skew(mm, SkewPort.AT_PORT2)
    mag21, mag12 = deskewed_magnitude(net, skew1, skew2)
    orig21, orig12 = db(mm.sdd21), db(mm.sdd12)
    desk21, desk12 = db(mag21), db(mag12)
    return SildResult(
        frequency=net.frequency,
        sild_1=orig12 - desk12,
        sild_2=orig21 - desk21,
        deskewed_mag_21=desk21,
        deskewed_mag_12=desk12,
        original_mag_21=orig21,
        original_mag_12=orig12,
        t_skew_1=skew1.t_skew,
        t_skew_2=skew2.t_skew,
    )


def _sinc(x: np.ndarray) -> np.ndarray:
    # exact zeros at nonzero integers; np.sinc leaves ~1e-17 residue there
    out = np.ones_like(x)
    nz = x != 0
    out[nz] = np.sin(np.pi * x[nz]) / (np.pi * x[nz])
    out[nz & (x == np.round(x))] = 0.0
    return out


def weight(f, cfg: FomConfig = FomConfig()):
    """Frequency weighting: sinc^2(f/f_b) times 8th-order receiver and 4th-order transmit rolloffs."""
    arr = np.asarray(f, dtype=float)
    if np.any(arr < 0):
        raise ValueError("weight is defined for f >= 0")
    x = np.atleast_1d(arr)
    w = (_sinc(x / cfg.f_b) ** 2
         / (1.0 + (x / cfg.f_r) ** 8)
         / (1.0 + (x / cfg.f_t) ** 4))
    return w.reshape(arr.shape) if arr.ndim else float(w[0])


def _band(result: SildResult, f_max: float):
    f = result.frequency
    keep = (f > 0) & (f <= f_max)
    if not keep.any():
        raise EmptyBand(f"no samples in (0, {f_max:g}] Hz")
    return f[keep], result.sild_1[keep], result.sild_2[keep]


def fom_sild(result: SildResult, cfg: FomConfig = FomConfig()) -> FomResult:
    """Weighted figure of merit of both SILD curves.

    ``WEIGHTED_RMS`` returns ``sqrt(sum(W*SILD^2) / sum(W))`` in dB;
    ``LITERAL`` returns ``mean(W*SILD^2)`` in dB^2. A non-uniform grid is
    resampled to its median step before summing.
    """
    f_hi = result.frequency[-1]
    if f_hi < cfg.f_max * (1 - 1e-12):
        warnings.warn(
            f"grid ends at {f_hi:g} Hz, below f_max={cfg.f_max:g} Hz; summing to the grid end",
            InsufficientBandwidth,
            stacklevel=2,
        )
    f, s1, s2 = _band(result, cfg.f_max)
    if f.size < 2:
        raise EmptyBand("need at least 2 samples below f_max")

    steps = np.diff(f)
    step = float(np.median(steps))
    if np.max(np.abs(steps - step)) > UNIFORM_RTOL * step:
        warnings.warn("non-uniform grid resampled to its median step", NonUniformGridWarning,
                      stacklevel=2)
        n = int(np.floor((f[-1] - f[0]) / step * (1 + 1e-12))) + 1
        fu = f[0] + step * np.arange(n)
        s1, s2 = np.interp(fu, f, s1), np.interp(fu, f, s2)
        f = fu

    w = weight(f, cfg)
    if cfg.normalization is Normalization.LITERAL:
        fom1 = float(np.mean(w * s1 ** 2))
        fom2 = float(np.mean(w * s2 ** 2))
    else:
        wsum = w.sum()
        fom1 = float(np.sqrt(np.sum(w * s1 ** 2) / wsum))
        fom2 = float(np.sqrt(np.sum(w * s2 ** 2) / wsum))
    return FomResult(fom1, fom2, float(f[-1]), int(f.size), cfg.normalization)


def max_abs_sild(result: SildResult, band_max: float) -> MaxSild:
    """Largest |SILD| over (0, band_max] across both directions.

    Ties go to direction 1.
    """
    if not band_max > 0:
        raise ValueError("band_max must be positive")
    f, s1, s2 = _band(result, band_max)
    i1, i2 = int(np.argmax(np.abs(s1))), int(np.argmax(np.abs(s2)))
    v1, v2 = float(abs(s1[i1])), float(abs(s2[i2]))
    if v2 > v1:
        return MaxSild(v2, float(f[i2]), 2)
    return MaxSild(v1, float(f[i1]), 1)
