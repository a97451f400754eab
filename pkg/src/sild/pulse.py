"""Pulse responses of frequency-domain transfer functions via inverse FFT."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonUniformGrid, NonUniformGridWarning

UNIFORM_RTOL = 1e-6


class DcExtrapolation(str, Enum):
    CONSTANT = "constant"
    LINEAR = "linear"


class SpectralWindow(str, Enum):
    NONE = "none"
    RAISED_COSINE_EDGE = "raised_cosine_edge"


@dataclass(frozen=True)
class PulseConfig:
    """Excitation and processing settings.

    The excitation is a trapezoid with ``pulse_width`` at half amplitude and
    linear edges of ``rise_time``. ``time_window`` sets the period of the
    output (the spectrum is re-interpolated onto ``1/time_window`` spacing);
    ``None`` keeps the grid's own spacing.
    """

    pulse_width: float = 1 / 106.25e9
    rise_time: float = 0.1 / 106.25e9
    time_window: float | None = None
    dc_extrapolation: DcExtrapolation = DcExtrapolation.CONSTANT
    spectral_window: SpectralWindow = SpectralWindow.RAISED_COSINE_EDGE
    taper_fraction: float = 0.1
    resample: bool = True

    def __post_init__(self):
        if not self.pulse_width > 0:
            raise ValueError("pulse_width must be positive")
        if self.rise_time < 0 or self.rise_time > self.pulse_width:
            raise ValueError("rise_time must lie in [0, pulse_width]")
        if self.time_window is not None and not self.time_window > 0:
            raise ValueError("time_window must be positive")
        object.__setattr__(self, "dc_extrapolation", DcExtrapolation(self.dc_extrapolation))
        object.__setattr__(self, "spectral_window", SpectralWindow(self.spectral_window))


@dataclass
class PulseResponse:
    time: np.ndarray
    amplitude: np.ndarray
    frequency: np.ndarray
    spectrum: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.time[1] - self.time[0])


def trapezoid_spectrum(f, width: float, rise: float) -> np.ndarray:
    """Fourier transform of a unit trapezoid starting at t=0.

    The pulse is a ``width``-long rectangle convolved with a unit-area box of
    length ``rise``, so it spans ``[0, width + rise]``.
    """
    f = np.asarray(f, dtype=float)
    spec = width * np.sinc(f * width) * np.exp(-1j * np.pi * f * width)
    if rise > 0:
        spec = spec * np.sinc(f * rise) * np.exp(-1j * np.pi * f * rise)
    return spec


def trapezoid(t, width: float, rise: float) -> np.ndarray:
    """Time-domain counterpart of :func:`trapezoid_spectrum`."""
    t = np.asarray(t, dtype=float)
    if rise == 0:
        return ((t >= 0) & (t < width)).astype(float)
    up = np.clip(t / rise, 0.0, 1.0)
    down = np.clip((t - width) / rise, 0.0, 1.0)
    return up - down


def _uniform_step(f: np.ndarray) -> tuple[float, bool]:
    steps = np.diff(f)
    step = float(np.median(steps))
    return step, bool(np.max(np.abs(steps - step)) <= UNIFORM_RTOL * step)


def _interp_complex(x, xp, fp):
    return np.interp(x, xp, fp.real) + 1j * np.interp(x, xp, fp.imag)


def pulse_response(transfer, frequency, cfg: PulseConfig = PulseConfig()) -> PulseResponse:
    """Real time-domain response of ``transfer`` to the configured pulse.

    The spectrum is placed on bins ``k * df`` from DC to the top of the grid,
    the DC bin is filled by extrapolation, the band edge is optionally tapered,
    and a Hermitian inverse FFT gives a real waveform of period ``1/df``.
    """
    h = np.asarray(transfer, dtype=complex)
    f = np.asarray(frequency, dtype=float)
    if h.shape != f.shape or f.size < 2:
        raise ValueError("transfer and frequency must be matching arrays of >= 2 samples")
    if not np.all(np.isfinite(h)):
        raise ValueError("transfer contains non-finite values")

    if f[0] == 0:
        h_dc, f, h = h[0], f[1:], h[1:]
    else:
        h_dc = None

    step, uniform = _uniform_step(f)
    if not uniform:
        if not cfg.resample:
            raise NonUniformGrid("frequency grid is not uniform and resampling is disabled")
        warnings.warn("non-uniform grid resampled to its median step", NonUniformGridWarning,
                      stacklevel=2)
    df = step if cfg.time_window is None else min(step, 1.0 / cfg.time_window)

    n_bins = int(np.floor(f[-1] / df * (1 + 1e-12)))
    bins = df * np.arange(n_bins + 1)
    inside = bins >= f[0] * (1 - 1e-12)
    H = np.empty(bins.size, dtype=complex)
    H[inside] = _interp_complex(bins[inside], f, h)

    if h_dc is None:
        if cfg.dc_extrapolation is DcExtrapolation.CONSTANT or f.size < 2:
            h_dc = abs(h[0])
        else:
            slope = (abs(h[1]) - abs(h[0])) / (f[1] - f[0])
            h_dc = max(abs(h[0]) - slope * f[0], 0.0)
    H[0] = np.real(h_dc) if np.isreal(h_dc) else abs(h_dc)
    gap = ~inside
    gap[0] = False
    if gap.any():
        H[gap] = _interp_complex(bins[gap], np.array([0.0, f[0]]), np.array([H[0], h[0]]))

    Y = H * trapezoid_spectrum(bins, cfg.pulse_width, cfg.rise_time)
    if cfg.spectral_window is SpectralWindow.RAISED_COSINE_EDGE:
        f_top = bins[-1]
        edge = (1 - cfg.taper_fraction) * f_top
        x = np.clip((bins - edge) / (f_top - edge), 0.0, 1.0)
        Y = Y * 0.5 * (1 + np.cos(np.pi * x))
    Y[0] = Y[0].real
    Y[-1] = Y[-1].real

    n = 2 * n_bins
    amplitude = np.fft.irfft(Y, n=n) * n * df
    time = np.arange(n) / (n * df)
    return PulseResponse(time=time, amplitude=amplitude, frequency=bins, spectrum=Y)


def time_domain_energy(resp: PulseResponse) -> float:
    return float(np.sum(resp.amplitude ** 2) * resp.dt)


def spectral_energy(resp: PulseResponse) -> float:
    """Two-sided spectral energy of the Hermitian-completed spectrum."""
    Y = resp.spectrum
    df = float(resp.frequency[1] - resp.frequency[0])
    interior = np.sum(np.abs(Y[1:-1]) ** 2)
    return float((np.abs(Y[0]) ** 2 + 2 * interior + np.abs(Y[-1]) ** 2) * df)
