"""Skew-induced insertion loss deviation (SILD) metrics for differential channels."""

__version__ = "0.1.0"

from .metrics import (
    FomConfig,
    FomResult,
    MaxSild,
    Normalization,
    SildResult,
    deskewed_magnitude,
    fom_sild,
    max_abs_sild,
    sild,
    weight,
)
from .network import Direction, MixedModeSet, PortMap, SingleEndedNetwork, db, diff_insertion_loss, to_mixed_mode
from .skew import SkewPort, SkewProfile, phase_delay, pn_skew, unwrap_phase
from .touchstone import TouchstoneOptions, parse_touchstone, read_touchstone, save_touchstone, write_touchstone

__all__ = [
    "Direction", "FomConfig", "FomResult", "MaxSild", "MixedModeSet", "Normalization", "PortMap",
    "SildResult", "SingleEndedNetwork", "SkewPort", "SkewProfile", "TouchstoneOptions", "db",
    "deskewed_magnitude", "diff_insertion_loss", "fom_sild", "max_abs_sild", "parse_touchstone",
    "phase_delay", "pn_skew", "read_touchstone", "save_touchstone", "sild", "to_mixed_mode",
    "unwrap_phase", "weight", "write_touchstone",
]
