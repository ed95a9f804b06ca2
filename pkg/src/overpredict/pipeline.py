"""Device -> cloud simulation: ingestion, envelopes, aggregation, sweeps."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import signal as sig
from .analytics import (
    AnalyticsReport,
    SAErrors,
    SumEnvelope,
    aggregate,
    analyze_sum,
    sa_errors,
    signal_analytics,
)
from .envelope import (
    VERIFICATION_FACTOR,
    EnvelopeResult,
    Scheme,
    Side,
    default_grid_size,
    envelope,
)
from .errors import ParseError, TooFewSamples
from .signal import TimeSeries

log = logging.getLogger(__name__)

__all__ = [
    "PipelineConfig",
    "DeviceSet",
    "PipelineResult",
    "SweepRecord",
    "ingest_csv",
    "load_devices",
    "run_pipeline",
    "sweep",
    "write_sweep_csv",
    "write_signal_csv",
    "dump_json",
]

DEFAULT_SAMPLES = 4096


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs shared by the pipeline and the CLI; loadable from JSON."""

    grid_size: int | None = None
    verification_factor: int = VERIFICATION_FACTOR
    delta_margin: float = 0.0
    smoothing_harmonics: int = 25
    schemes: tuple = ("l1", "l2", "linf", "naive")
    L_range: tuple = (1, 8)
    n_samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(Scheme(s).value for s in self.schemes))
        lo, hi = (int(v) for v in self.L_range)
        if lo < 0 or hi < lo:
            raise ValueError(f"bad L_range {self.L_range}")
        object.__setattr__(self, "L_range", (lo, hi))
        if self.verification_factor < 1:
            raise ValueError("verification_factor must be >= 1")
        if self.delta_margin < 0:
            raise ValueError("delta_margin must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> PipelineConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> PipelineConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **changes) -> PipelineConfig:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update({k: v for k, v in changes.items() if v is not None})
        return PipelineConfig(**data)


@dataclass(frozen=True)
class DeviceSet:
    signals: tuple
    labels: tuple

    def __post_init__(self):
        signals = tuple(self.signals)
        labels = tuple(str(x) for x in self.labels)
        if not signals:
            raise ValueError("a DeviceSet needs at least one device")
        if len(signals) != len(labels):
            raise ValueError("one label per signal")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        if len({s.n for s in signals}) != 1:
            raise ValueError("all devices must share a grid size")
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.signals)

    def sorted(self) -> DeviceSet:
        order = sorted(range(len(self.labels)), key=lambda i: self.labels[i])
        return DeviceSet(
            tuple(self.signals[i] for i in order), tuple(self.labels[i] for i in order)
        )

    def true_sum(self) -> TimeSeries:
        dev = self.sorted()
        total = dev.signals[0].samples.copy()
        for s in dev.signals[1:]:
            total = total + s.samples
        return TimeSeries(total)


@dataclass(frozen=True)
class PipelineResult:
    sum_envelope: SumEnvelope
    report: AnalyticsReport
    sa: SAErrors
    true_report: AnalyticsReport
    envelopes: tuple
    labels: tuple
    tmax_error: float

    def to_dict(self) -> dict:
        return {
            "sum_envelope": self.sum_envelope.to_dict(),
            "analytics": self.report.to_dict(),
            "true_analytics": self.true_report.to_dict(),
            "sa_errors": self.sa.to_dict(),
            "tmax_error": self.tmax_error,
            "devices": [
                dict(label=label, **env.to_dict())
                for label, env in zip(self.labels, self.envelopes)
            ],
        }


@dataclass(frozen=True)
class SweepRecord:
    L: int
    scheme: Scheme
    sa: SAErrors
    tmax_error: float
    per_device_objectives: tuple = field(default_factory=tuple)
    max_hat: float = math.nan
    max_true: float = math.nan


# ingestion ----------------------------------------------------------------


def _read_rows(path, time_column, value_column):
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise OSError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise TooFewSamples(f"{path}: empty file")
        for col in (time_column, value_column):
            if col not in reader.fieldnames:
                raise ParseError(f"missing column {col!r} in {path}", row=1)
        times, values = [], []
        for row_no, row in enumerate(reader, start=2):
            try:
                t = float(row[time_column])
                v = float(row[value_column])
            except (TypeError, ValueError):
                raise ParseError(
                    f"non-numeric entry {row.get(time_column)!r},{row.get(value_column)!r}",
                    row=row_no,
                ) from None
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ParseError("non-finite entry", row=row_no)
            times.append(t)
            values.append(v)
    if len(times) < 2:
        raise TooFewSamples(f"{path}: need at least 2 data rows, got {len(times)}")
    times = np.asarray(times)
    if np.any(np.diff(times) <= 0):
        bad = int(np.flatnonzero(np.diff(times) <= 0)[0]) + 3
        raise ParseError("time column must be strictly increasing", row=bad)
    return times, np.asarray(values)


def ingest_csv(
    path,
    value_column: str = "value",
    smoothing_harmonics: int = 25,
    n_samples: int = DEFAULT_SAMPLES,
    time_column: str = "time",
    normalize: bool = True,
) -> TimeSeries:
    """Read a ``time,value`` CSV and return a smooth periodic signal.

    Steps: time normalised to [0, 1]; the ramp ``(f(1) - f(0)) t`` removed;
    least-squares fit on harmonics ``<= smoothing_harmonics`` (the discrete
    projection when rows are uniform); synthesis on ``n_samples`` points;
    optional scaling to unit peak magnitude.
    """
    times, values = _read_rows(path, time_column, value_column)
    t = (times - times[0]) / (times[-1] - times[0])
    ramp = float(values[-1] - values[0])
    g = values - ramp * t
    # t = 1 repeats t = 0 once the ramp is gone
    t, g = t[:-1], g[:-1]
    K = int(smoothing_harmonics)
    if 2 * K + 1 > t.size:
        K = max(0, (t.size - 1) // 2)
        log.warning("%s: only %d distinct samples; smoothing reduced to %d harmonics",
                    path, t.size, K)
    K = min(K, (n_samples - 1) // 2)
    design = sig.basis_matrix(K, t)
    coef = np.linalg.lstsq(design, g, rcond=None)[0]
    smooth = sig.synthesize(sig.FourierCoeffs.from_vector(coef), n_samples).samples
    scale = 1.0
    if normalize:
        peak = float(np.max(np.abs(smooth)))
        if peak > 0:
            scale = peak
    return TimeSeries(smooth / scale, periodic=True, ramp=ramp / scale, scale=scale)


def load_devices(directory, config: PipelineConfig | None = None) -> DeviceSet:
    """Every ``*.csv`` in ``directory`` becomes a device labelled by file stem."""
    config = config or PipelineConfig()
    paths = sorted(Path(directory).glob("*.csv"))
    if not paths:
        raise FileNotFoundError(f"no CSV files in {directory}")
    signals = [
        ingest_csv(p, smoothing_harmonics=config.smoothing_harmonics, n_samples=config.n_samples)
        for p in paths
    ]
    return DeviceSet(tuple(signals), tuple(p.stem for p in paths))


# simulation ---------------------------------------------------------------


def run_pipeline(
    devices: DeviceSet,
    L: int,
    scheme=Scheme.L1,
    grid_size: int | None = None,
    side=Side.UPPER,
    delta: float = 0.0,
    verification_factor: int = VERIFICATION_FACTOR,
) -> PipelineResult:
    """Per-device envelopes, coefficient sum at the cloud, then analytics.

    Devices are processed and summed in label order so the output does not
    depend on the order they were supplied in.  SA errors are measured on
    the constraint grid; ``tmax_error`` on the verification grid.
    """
    dev = devices.sorted()
    if grid_size is None:
        grid_size = default_grid_size(L)
    envs = tuple(
        envelope(s, L, scheme, side, grid_size, delta, verification_factor) for s in dev.signals
    )
    se = aggregate(envs)
    s_true = sig.resample(dev.true_sum(), grid_size)
    s_hat = sig.synthesize(se.coeffs, grid_size)
    fine = grid_size * verification_factor
    report_fine = analyze_sum(se, fine)
    true_fine = signal_analytics(sig.resample(dev.true_sum(), fine))
    return PipelineResult(
        sum_envelope=se,
        report=report_fine,
        sa=sa_errors(s_hat, s_true),
        true_report=true_fine,
        envelopes=envs,
        labels=dev.labels,
        tmax_error=abs(report_fine.t_max - true_fine.t_max),
    )


def sweep(
    devices: DeviceSet,
    L_range: Iterable[int],
    schemes: Sequence = (Scheme.L1, Scheme.L2, Scheme.LINF, Scheme.NAIVE),
    grid_size: int | None = None,
    side=Side.UPPER,
    delta: float = 0.0,
    verification_factor: int = VERIFICATION_FACTOR,
) -> list[SweepRecord]:
    """One record per ``(L, scheme)``, ordered by L then by ``schemes``.

    The constraint grid is held fixed across the sweep (sized for the
    largest L) so that errors at different bandwidths are comparable.
    """
    Ls = [int(L) for L in L_range]
    if not Ls:
        raise ValueError("empty L range")
    if grid_size is None:
        grid_size = default_grid_size(max(Ls))
    records = []
    for L in Ls:
        for scheme in schemes:
            res = run_pipeline(devices, L, scheme, grid_size, side, delta, verification_factor)
            records.append(SweepRecord(
                L=L,
                scheme=Scheme(scheme),
                sa=res.sa,
                tmax_error=res.tmax_error,
                per_device_objectives=tuple(e.objective for e in res.envelopes),
                max_hat=res.report.max_value,
                max_true=res.true_report.max_value,
            ))
    return records


# output -------------------------------------------------------------------


def write_sweep_csv(records: Sequence[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["L", "scheme", "sa1", "sa2", "sa_inf", "tmax_error", "max_hat", "max_true"])
        for r in records:
            w.writerow([
                r.L, r.scheme.value, repr(r.sa.sa1), repr(r.sa.sa2), repr(r.sa.sa_inf),
                repr(r.tmax_error), repr(r.max_hat), repr(r.max_true),
            ])


def write_signal_csv(ts: TimeSeries, path) -> None:
    """Write ``time,value`` rows including the closing point ``t = 1``."""
    values = np.append(ts.samples, ts.samples[0])
    times = np.arange(ts.n + 1) / ts.n
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "value"])
        for t, v in zip(times, values):
            w.writerow([repr(float(t)), repr(float(v))])


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
