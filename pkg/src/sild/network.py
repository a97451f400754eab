"""Single-ended network container and its mixed-mode decomposition.

Port indices are 1-based throughout, matching Touchstone and the usual
``S21`` notation: ``s[:, i-1, j-1]`` is the wave leaving port ``i`` when port
``j`` is driven.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

DB_FLOOR = 1e-30
SQRT2 = np.sqrt(2.0)


class Direction(str, Enum):
    LEFT_TO_RIGHT = "left_to_right"
    RIGHT_TO_LEFT = "right_to_left"


@dataclass(frozen=True)
class PortMap:
    """Which single-ended port sits on which line and side of the pair.

    The default puts the P line on ports 1 -> 2 and the N line on 3 -> 4.
    """

    left_p: int = 1
    right_p: int = 2
    left_n: int = 3
    right_n: int = 4

    def __post_init__(self):
        if sorted(self.as_tuple()) != [1, 2, 3, 4]:
            raise ValueError(f"port map must be a permutation of 1..4, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.left_p, self.right_p, self.left_n, self.right_n)

    @classmethod
    def adjacent(cls) -> "PortMap":
        """Alternate convention: ports 1/2 on the left, 3/4 on the right."""
        return cls(left_p=1, left_n=2, right_p=3, right_n=4)

    @classmethod
    def parse(cls, text: str) -> "PortMap":
        """Build from ``"default"``, ``"adjacent"`` or ``"lp,rp,ln,rn"``."""
        key = text.strip().lower()
        if key in ("default", "thru", "1-2/3-4"):
            return cls()
        if key in ("adjacent", "alt", "1-3/2-4"):
            return cls.adjacent()
        try:
            lp, rp, ln, rn = (int(t) for t in key.split(","))
        except ValueError:
            raise ValueError(
                f"cannot parse port map {text!r}; use 'default', 'adjacent' or 'lp,rp,ln,rn'"
            ) from None
        return cls(left_p=lp, right_p=rp, left_n=ln, right_n=rn)

    def port(self, line: str, side: str) -> int:
        line = line.upper()
        side = side.lower()
        if line not in ("P", "N") or side not in ("left", "right"):
            raise ValueError(f"unknown line/side {line!r}/{side!r}")
        return getattr(self, f"{side}_{line.lower()}")

    def swap_pn(self) -> "PortMap":
        return PortMap(left_p=self.left_n, right_p=self.right_n,
                       left_n=self.left_p, right_n=self.right_p)

    def flip(self) -> "PortMap":
        """Relabel left <-> right, i.e. view the channel from the other end."""
        return PortMap(left_p=self.right_p, right_p=self.left_p,
                       left_n=self.right_n, right_n=self.left_n)


@dataclass
class SingleEndedNetwork:
    """Per-frequency S-matrices of a 2- or 4-port network.

    ``frequency`` is in Hz and strictly ascending. A DC sample is allowed at
    index 0; it is kept but excluded from every skew computation.
    """

    frequency: np.ndarray
    s: np.ndarray
    port_map: PortMap = field(default_factory=PortMap)
    z0: float = 50.0

    def __post_init__(self):
        self.frequency = np.asarray(self.frequency, dtype=float)
        self.s = np.asarray(self.s, dtype=complex)
        f = self.frequency
        if f.ndim != 1 or f.size == 0:
            raise ValueError("frequency must be a non-empty 1-D array")
        if self.s.ndim != 3 or self.s.shape[1] != self.s.shape[2]:
            raise ValueError(f"s must have shape (n, N, N), got {self.s.shape}")
        if self.s.shape[0] != f.size:
            raise ValueError(
                f"{self.s.shape[0]} matrices for {f.size} frequency samples"
            )
        if not np.all(np.isfinite(f)) or f[0] < 0:
            raise ValueError("frequencies must be finite and non-negative")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly ascending")
        if not np.all(np.isfinite(self.s)):
            raise ValueError("S-parameters contain non-finite values")
        if not self.z0 > 0:
            raise ValueError("reference impedance must be positive")

    @property
    def nports(self) -> int:
        return self.s.shape[1]

    @property
    def has_dc(self) -> bool:
        return bool(self.frequency[0] == 0.0)

    def __len__(self) -> int:
        return self.frequency.size

    def entry(self, to_port: int, from_port: int) -> np.ndarray:
        """``S[to_port, from_port]`` over frequency (1-based ports)."""
        return self.s[:, to_port - 1, from_port - 1]

    def without_dc(self) -> "SingleEndedNetwork":
        if not self.has_dc:
            return self
        return SingleEndedNetwork(self.frequency[1:], self.s[1:], self.port_map, self.z0)

    def with_port_map(self, port_map: PortMap) -> "SingleEndedNetwork":
        return SingleEndedNetwork(self.frequency, self.s, port_map, self.z0)

    def copy(self) -> "SingleEndedNetwork":
        return SingleEndedNetwork(self.frequency.copy(), self.s.copy(), self.port_map, self.z0)

    def is_reciprocal(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.s - np.swapaxes(self.s, 1, 2)) <= atol))


@dataclass
class MixedModeSet:
    """Differential-drive quantities used by the skew and SILD calculations.

    ``ssd21``/``ssd41`` are the P and N single-ended responses at the right
    side for differential drive at the left; ``ssd12``/``ssd14`` are the P and
    N responses at the left side for drive at the right. Each carries the
    polarity of its line, so ``sdd = (ssd_p + ssd_n) / sqrt(2)``.
    """

    frequency: np.ndarray
    ssd21: np.ndarray
    ssd41: np.ndarray
    ssd12: np.ndarray
    ssd14: np.ndarray
    sdd21: np.ndarray
    sdd12: np.ndarray

    def without_dc(self) -> "MixedModeSet":
        if self.frequency[0] != 0.0:
            return self
        return MixedModeSet(*(getattr(self, name)[1:] for name in
                              ("frequency", "ssd21", "ssd41", "ssd12", "ssd14", "sdd21", "sdd12")))


def to_mixed_mode(network: SingleEndedNetwork) -> MixedModeSet:
    if network.nports != 4:
        raise ValueError(f"mixed-mode conversion needs a 4-port network, got {network.nports}")
    pm = network.port_map
    lp, rp, ln, rn = pm.left_p, pm.right_p, pm.left_n, pm.right_n
    S = network.entry

    ssd21 = (S(rp, lp) - S(rp, ln)) / SQRT2
    ssd41 = (S(rn, ln) - S(rn, lp)) / SQRT2
    ssd12 = (S(lp, rp) - S(lp, rn)) / SQRT2
    ssd14 = (S(ln, rn) - S(ln, rp)) / SQRT2
    return MixedModeSet(
        frequency=network.frequency,
        ssd21=ssd21,
        ssd41=ssd41,
        ssd12=ssd12,
        ssd14=ssd14,
        sdd21=(ssd21 + ssd41) / SQRT2,
        sdd12=(ssd12 + ssd14) / SQRT2,
    )


def diff_insertion_loss(mm: MixedModeSet, direction: Direction | str) -> np.ndarray:
    direction = Direction(direction)
    if direction is Direction.LEFT_TO_RIGHT:
        return mm.sdd21
    return mm.sdd12


def db(x) -> np.ndarray:
    """20*log10|x|, clamped at -600 dB for magnitudes below 1e-30."""
    mag = np.abs(np.asarray(x))
    return 20.0 * np.log10(np.maximum(mag, DB_FLOOR))
