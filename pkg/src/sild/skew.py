"""P/N phase-skew extraction from differential-to-single-ended responses.

Delays use the causal-positive convention: a pure delay ``exp(-j*2*pi*f*tau)``
has phase delay ``+tau``. A positive skew therefore means the P line arrives
later than the N line.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NullSampleWarning, PhaseAliasingWarning, ZeroMagnitudeSample
from .network import MixedModeSet

NULL_THRESHOLD = 1e-12
ALIAS_FRACTION = 0.9


class SkewPort(str, Enum):
    AT_PORT1 = "port1"
    AT_PORT2 = "port2"


@dataclass
class SkewProfile:
    frequency: np.ndarray
    t_skew: np.ndarray
    direction: SkewPort


def wrap_to_pi(x):
    """Map angles into (-pi, pi]."""
    x = np.asarray(x, dtype=float)
    return x - 2 * np.pi * np.ceil((x - np.pi) / (2 * np.pi))


def unwrap_phase(samples) -> np.ndarray:
    """Continuous phase of a complex trace, starting from the principal value.

    Consecutive steps are folded into (-pi, pi]. A step whose magnitude
    exceeds 90% of pi triggers :class:`PhaseAliasingWarning`, since the true
    phase may have advanced by more than pi between samples.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 1 or samples.size < 2:
        raise ValueError("need at least 2 samples to unwrap")
    zero = np.nonzero(samples == 0)[0]
    if zero.size:
        raise ZeroMagnitudeSample(f"sample {int(zero[0])} has zero magnitude; phase undefined")
    principal = np.angle(samples)
    steps = wrap_to_pi(np.diff(principal))
    if np.any(np.abs(steps) > ALIAS_FRACTION * np.pi):
        warnings.warn(
            "phase steps close to pi between samples; frequency grid may be too coarse",
            PhaseAliasingWarning,
            stacklevel=2,
        )
    return principal[0] + np.concatenate(([0.0], np.cumsum(steps)))


def phase_delay(samples, frequency, null_threshold: float = NULL_THRESHOLD) -> np.ndarray:
    """Per-frequency phase delay ``-unwrapped_phase / (2*pi*f)`` in seconds.

    Samples with magnitude below ``null_threshold`` get their phase by linear
    interpolation from the neighbouring good samples, with a warning.
    """
    samples = np.asarray(samples, dtype=complex)
    f = np.asarray(frequency, dtype=float)
    if samples.shape != f.shape:
        raise ValueError("samples and frequency must have the same shape")
    if np.any(f <= 0):
        raise ValueError("phase delay is undefined at f <= 0; drop the DC sample first")

    good = np.abs(samples) >= null_threshold
    if good.all():
        phase = unwrap_phase(samples)
    else:
        if good.sum() < 2:
            raise ZeroMagnitudeSample("fewer than 2 samples above the null threshold")
        warnings.warn(
            f"{int((~good).sum())} near-null samples; phase interpolated across them",
            NullSampleWarning,
            stacklevel=2,
        )
        phase = np.interp(f, f[good], unwrap_phase(samples[good]))
    return -phase / (2 * np.pi * f)


def pn_skew(mm: MixedModeSet, direction: SkewPort | str) -> SkewProfile:
    """P minus N phase delay at the chosen differential port.

    ``AT_PORT2`` uses the left-to-right responses (``ssd21``, ``ssd41``);
    ``AT_PORT1`` uses the right-to-left ones (``ssd12``, ``ssd14``). The DC
    sample, if any, is dropped.
    """
    direction = SkewPort(direction)
    mm = mm.without_dc()
    if mm.frequency.size < 2:
        raise ValueError("need at least 2 non-DC frequency samples")
    if direction is SkewPort.AT_PORT2:
        p, n = mm.ssd21, mm.ssd41
    else:
        p, n = mm.ssd12, mm.ssd14
    t = phase_delay(p, mm.frequency) - phase_delay(n, mm.frequency)
    return SkewProfile(frequency=mm.frequency, t_skew=t, direction=direction)
