"""Synthetic differential channels for validation.

Channels are built from two matched lines with a shared loss model and an
optional far-end coupling. Skew is injected by cascading an ideal, matched
all-pass delay on one single-ended port.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import PassivityViolation
from .network import PortMap, SingleEndedNetwork


@dataclass(frozen=True)
class LossModel:
    """Per-line attenuation in dB: ``dc + skin*sqrt(f) + dielectric*f``."""

    dc_loss_db: float = 0.0
    skin_coeff_db_per_sqrthz: float = 0.0
    dielectric_coeff_db_per_hz: float = 0.0

    def __post_init__(self):
        for name in ("dc_loss_db", "skin_coeff_db_per_sqrthz", "dielectric_coeff_db_per_hz"):
            if getattr(self, name) < 0:
                raise PassivityViolation(f"{name} must be >= 0 (negative loss is gain)")

    def loss_db(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        return self.dc_loss_db + self.skin_coeff_db_per_sqrthz * np.sqrt(f) + self.dielectric_coeff_db_per_hz * f

    @classmethod
    def skin_for(cls, loss_db: float, at_hz: float, dc_loss_db: float = 0.0) -> "LossModel":
        """Skin-effect-only model hitting ``loss_db`` at ``at_hz``."""
        return cls(dc_loss_db, (loss_db - dc_loss_db) / np.sqrt(at_hz), 0.0)


@dataclass(frozen=True)
class ChannelSpec:
    """Base channel description.

    ``coupling`` is the far-end coupling magnitude relative to the line's
    through response, and ``coupling_phase_deg`` its phase relative to the
    through term. The default 90 degrees is the lossless weak-coupling case;
    other phases make the two lines' crosstalk asymmetric in skew. Zero
    coupling gives two independent lines.
    """

    frequency: np.ndarray
    base_delay: float = 1e-9
    loss: LossModel = field(default_factory=LossModel)
    coupling: float = 0.0
    coupling_phase_deg: float = 90.0

    def __post_init__(self):
        f = np.asarray(self.frequency, dtype=float)
        object.__setattr__(self, "frequency", f)
        if f.ndim != 1 or f.size < 2 or f[0] < 0 or np.any(np.diff(f) <= 0):
            raise ValueError("frequency must be a strictly ascending, non-negative grid")
        if self.base_delay < 0:
            raise ValueError("base_delay must be >= 0")
        if not 0 <= self.coupling < 1:
            raise ValueError("coupling must lie in [0, 1)")


class ProfileKind(str, Enum):
    FLAT = "flat"
    DAMPED_OSCILLATORY = "damped_oscillatory"


@dataclass(frozen=True)
class SkewProfileSpec:
    """Skew versus frequency.

    The damped-oscillatory form ``tau_peak * exp(-f/damping_freq) *
    |sin(2*pi*f/osc_freq)|`` is a parameterized stand-in, not a model of any
    particular physical mechanism.
    """

    kind: ProfileKind = ProfileKind.FLAT
    tau_flat: float = 0.0
    tau_peak: float = 0.0
    osc_freq: float = 40e9
    damping_freq: float = 100e9

    def __post_init__(self):
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        for name in ("tau_flat", "tau_peak", "osc_freq", "damping_freq"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.kind is ProfileKind.DAMPED_OSCILLATORY and not (self.osc_freq > 0 and self.damping_freq > 0):
            raise ValueError("osc_freq and damping_freq must be positive for a damped profile")

    @classmethod
    def flat(cls, tau: float) -> "SkewProfileSpec":
        return cls(ProfileKind.FLAT, tau_flat=tau)

    @classmethod
    def damped(cls, tau_peak: float, osc_freq: float = 40e9, damping_freq: float = 100e9) -> "SkewProfileSpec":
        return cls(ProfileKind.DAMPED_OSCILLATORY, tau_peak=tau_peak, osc_freq=osc_freq,
                   damping_freq=damping_freq)


def skew_profile(spec: SkewProfileSpec, frequency) -> np.ndarray:
    f = np.asarray(frequency, dtype=float)
    if spec.kind is ProfileKind.FLAT:
        return np.full(f.shape, float(spec.tau_flat))
    return spec.tau_peak * np.exp(-f / spec.damping_freq) * np.abs(np.sin(2 * np.pi * f / spec.osc_freq))


def ideal_diff_channel(spec: ChannelSpec, port_map: PortMap | None = None, z0: float = 50.0) -> SingleEndedNetwork:
    """Reciprocal, matched 4-port with identical P and N lines.

    The two lines share the through response ``T = A(f) exp(-j 2 pi f t0)``.
    With coupling ``k`` at phase ``phi`` the left/right block is
    ``T * [[c, k e^(j phi)], [k e^(j phi), c]]`` where ``c`` is the largest
    value keeping both mode gains ``|c +/- k e^(j phi)|`` at most 1. At the
    default 90 degrees that block is unitary and ``|Sdd21| = A(f)``.
    """
    pm = port_map or PortMap()
    f = spec.frequency
    amp = 10.0 ** (-spec.loss.loss_db(f) / 20.0)
    if np.any(amp > 1.0):
        raise PassivityViolation("loss model produces gain")
    through = amp * np.exp(-2j * np.pi * f * spec.base_delay)
    k = spec.coupling
    phi = np.deg2rad(spec.coupling_phase_deg)
    cos_abs = abs(np.cos(phi))
    c = -k * cos_abs + np.sqrt(1.0 - k * k * (1.0 - cos_abs * cos_abs))
    thru = through * c
    fext = through * (k * np.exp(1j * phi))

    s = np.zeros((f.size, 4, 4), dtype=complex)

    def put(i, j, v):
        s[:, i - 1, j - 1] = v
        s[:, j - 1, i - 1] = v

    put(pm.right_p, pm.left_p, thru)
    put(pm.right_n, pm.left_n, thru)
    if k:
        put(pm.right_p, pm.left_n, fext)
        put(pm.right_n, pm.left_p, fext)
    return SingleEndedNetwork(f, s, pm, z0)


def inject_se_delay(network: SingleEndedNetwork, line: str, side: str, profile) -> SingleEndedNetwork:
    """Cascade an ideal delay on one single-ended port.

    Args:
        network: 4-port network.
        line: ``"P"`` or ``"N"``.
        side: ``"left"`` or ``"right"``.
        profile: A :class:`SkewProfileSpec`, a scalar delay in seconds, or a
            per-frequency delay array.

    Every entry with exactly one index on the delayed port picks up one pass
    through the delay, its reflection entry picks up two.
    """
    f = network.frequency
    if isinstance(profile, SkewProfileSpec):
        tau = skew_profile(profile, f)
    else:
        tau = np.broadcast_to(np.asarray(profile, dtype=float), f.shape)
    if not np.any(tau):
        return network.copy()

    k = network.port_map.port(line, side) - 1
    phase = np.exp(-2j * np.pi * f * tau)
    s = network.s.copy()
    s[:, k, :] *= phase[:, None]
    s[:, :, k] *= phase[:, None]
    return SingleEndedNetwork(f.copy(), s, network.port_map, network.z0)


def uniform_grid(start: float, stop: float, step: float) -> np.ndarray:
    n = int(round((stop - start) / step)) + 1
    return start + step * np.arange(n)
