"""Fleet statistics over many S-parameter files."""

from __future__ import annotations

import csv
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import BatchAborted, EmptyInput
from .metrics import FomConfig, fom_sild, max_abs_sild, sild
from .network import PortMap
from .touchstone import read_touchstone

SCHEMA_VERSION = "1.0"
DEFAULT_THRESHOLDS = (0.01, 0.025, 0.05)
DEFAULT_BIN_WIDTH = 0.025
DEFAULT_HIST_UPPER = 0.5

RECORD_FIELDS = (
    "source_id", "fom_1_db", "fom_2_db", "delta_db",
    "max_abs_sild_db", "max_abs_sild_freq_hz", "warnings",
)


class ErrorPolicy(str, Enum):
    CONTINUE = "continue"
    FAIL_FAST = "fail-fast"


@dataclass(frozen=True)
class ChannelRecord:
    source_id: str
    fom_1: float
    fom_2: float
    delta: float
    max_abs_sild: float
    max_abs_sild_freq: float
    warnings: tuple[str, ...] = ()

    def row(self) -> list[str]:
        return [self.source_id, repr(self.fom_1), repr(self.fom_2), repr(self.delta),
                repr(self.max_abs_sild), repr(self.max_abs_sild_freq), "; ".join(self.warnings)]


@dataclass(frozen=True)
class Failure:
    source_id: str
    error: str


@dataclass
class Histogram:
    edges: list[float]
    counts: list[int]

    @property
    def total(self) -> int:
        return sum(self.counts)


def _bin_index(value: float, bin_width: float) -> int:
    # rounding guards values sitting on an edge, e.g. 0.3 / 0.1 = 2.9999999999999996
    return int(math.floor(round(value / bin_width, 9)))


def histogram(values, bin_width: float, upper: float | None = None) -> Histogram:
    """Left-closed, right-open bins of ``bin_width`` starting at 0.

    Bins extend far enough to hold every value (and at least up to ``upper``
    when given), so counts always sum to ``len(values)``.
    """
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0 and upper is None:
        return Histogram([], [])
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("histogram values must be finite and non-negative")
    idx = [_bin_index(v, bin_width) for v in values]
    n_bins = max(idx, default=-1) + 1
    if upper is not None:
        n_bins = max(n_bins, int(math.ceil(round(upper / bin_width, 9))))
    counts = np.bincount(np.asarray(idx, dtype=int), minlength=n_bins).tolist()
    edges = [round(i * bin_width, 12) for i in range(n_bins + 1)]
    return Histogram(edges, counts)


@dataclass
class BatchSummary:
    count: int
    histogram: Histogram
    fraction_delta_exceeding: dict[float, float]
    failures: list[Failure] = field(default_factory=list)
    max_delta: float = 0.0
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "count": self.count,
            "histogram": {
                "quantity": "max(fom_1, fom_2)",
                "unit": "dB",
                "bin_edges": self.histogram.edges,
                "counts": self.histogram.counts,
            },
            "fraction_delta_exceeding": {
                f"{t:g}": frac for t, frac in sorted(self.fraction_delta_exceeding.items())
            },
            "max_delta_db": self.max_delta,
            "failures": [{"source_id": f.source_id, "error": f.error} for f in self.failures],
            "config": self.config,
        }


class SummaryAccumulator:
    """Streaming summary: keeps bin counts and threshold tallies, not records."""

    def __init__(self, bin_width=DEFAULT_BIN_WIDTH, thresholds=DEFAULT_THRESHOLDS,
                 upper=DEFAULT_HIST_UPPER):
        self.bin_width = bin_width
        self.thresholds = tuple(thresholds)
        self.upper = upper
        self.count = 0
        self.bins: dict[int, int] = {}
        self.exceed = {t: 0 for t in self.thresholds}
        self.max_delta = 0.0
        self.failures: list[Failure] = []

    def add(self, rec: ChannelRecord):
        self.count += 1
        i = _bin_index(max(rec.fom_1, rec.fom_2), self.bin_width)
        self.bins[i] = self.bins.get(i, 0) + 1
        for t in self.thresholds:
            if rec.delta > t:
                self.exceed[t] += 1
        self.max_delta = max(self.max_delta, rec.delta)

    def add_failure(self, failure: Failure):
        self.failures.append(failure)

    def summary(self, config: dict | None = None) -> BatchSummary:
        n_bins = max(max(self.bins, default=-1) + 1,
                     int(math.ceil(round(self.upper / self.bin_width, 9))))
        hist = Histogram(
            [round(i * self.bin_width, 12) for i in range(n_bins + 1)],
            [self.bins.get(i, 0) for i in range(n_bins)],
        )
        fractions = {t: (self.exceed[t] / self.count if self.count else 0.0) for t in self.thresholds}
        return BatchSummary(self.count, hist, fractions,
                            sorted(self.failures, key=lambda f: f.source_id),
                            self.max_delta, config or {})


def analyze_file(path, cfg: FomConfig = FomConfig(), port_map: PortMap | None = None,
                 source_id: str | None = None) -> ChannelRecord:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        net = read_touchstone(path, port_map=port_map)
        result = sild(net)
        fom = fom_sild(result, cfg)
        peak = max_abs_sild(result, cfg.f_max)
    msgs = tuple(dict.fromkeys(str(w.message) for w in caught))
    return ChannelRecord(
        source_id=source_id or str(path),
        fom_1=fom.fom_1,
        fom_2=fom.fom_2,
        delta=fom.delta,
        max_abs_sild=peak.value,
        max_abs_sild_freq=peak.frequency,
        warnings=msgs,
    )


def _worker(args):
    path, cfg, port_map = args
    try:
        return analyze_file(path, cfg, port_map)
    except Exception as exc:  # every per-file problem becomes a failure record
        return Failure(str(path), f"{type(exc).__name__}: {exc}")


def iter_batch(inputs: Iterable, cfg: FomConfig = FomConfig(), port_map: PortMap | None = None,
               policy: ErrorPolicy | str = ErrorPolicy.CONTINUE,
               n_jobs: int = 1) -> Iterator[ChannelRecord | Failure]:
    """Yield one record or failure per input, ordered by source id."""
    policy = ErrorPolicy(policy)
    paths = sorted({str(p) for p in inputs})
    if not paths:
        raise EmptyInput("no inputs")
    jobs = [(p, cfg, port_map) for p in paths]
    if n_jobs == 1:
        results = map(_worker, jobs)
        for item in results:
            if isinstance(item, Failure) and policy is ErrorPolicy.FAIL_FAST:
                raise BatchAborted(item.source_id, item.error)
            yield item
        return
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        for item in pool.map(_worker, jobs, chunksize=16):
            if isinstance(item, Failure) and policy is ErrorPolicy.FAIL_FAST:
                raise BatchAborted(item.source_id, item.error)
            yield item


def analyze_batch(inputs: Iterable, cfg: FomConfig = FomConfig(), policy=ErrorPolicy.CONTINUE,
                  port_map: PortMap | None = None, n_jobs: int = 1,
                  bin_width: float = DEFAULT_BIN_WIDTH,
                  thresholds=DEFAULT_THRESHOLDS) -> tuple[list[ChannelRecord], BatchSummary]:
    acc = SummaryAccumulator(bin_width, thresholds)
    records = []
    for item in iter_batch(inputs, cfg, port_map, policy, n_jobs):
        if isinstance(item, Failure):
            acc.add_failure(item)
        else:
            acc.add(item)
            records.append(item)
    return records, acc.summary(config_dict(cfg))


def config_dict(cfg: FomConfig) -> dict:
    return {"f_b_hz": cfg.f_b, "f_r_hz": cfg.f_r, "f_t_hz": cfg.f_t, "f_max_hz": cfg.f_max,
            "normalization": cfg.normalization.value}


def write_records_csv(records: Iterable[ChannelRecord], path) -> int:
    """Write records to CSV; returns the number of rows written."""
    n = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for rec in records:
            writer.writerow(rec.row())
            n += 1
    return n


def stream_batch(inputs, records_path, cfg: FomConfig = FomConfig(), policy=ErrorPolicy.CONTINUE,
                 port_map: PortMap | None = None, n_jobs: int = 1,
                 bin_width: float = DEFAULT_BIN_WIDTH, thresholds=DEFAULT_THRESHOLDS) -> BatchSummary:
    """Analyze inputs, writing each record to CSV as it completes."""
    acc = SummaryAccumulator(bin_width, thresholds)
    path = Path(records_path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for item in iter_batch(inputs, cfg, port_map, policy, n_jobs):
            if isinstance(item, Failure):
                acc.add_failure(item)
            else:
                acc.add(item)
                writer.writerow(item.row())
    return acc.summary(config_dict(cfg))
