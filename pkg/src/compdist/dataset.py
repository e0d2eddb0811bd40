"""Control-chart time series: UCI file ingestion, a seeded generator, byte encoding.

The six classes are normal (N), cyclic (C), increasing/decreasing trend
(IT/DT) and upward/downward shift (US/DS).
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LABELS",
    "DatasetError",
    "LabeledSeries",
    "EncodingScheme",
    "QUANTIZE8",
    "RAW",
    "parse_uci",
    "write_uci",
    "read_labels",
    "write_labels",
    "labels_path_for",
    "generate",
    "encode",
    "encode_all",
]

LABELS = ("N", "C", "IT", "DT", "US", "DS")
UCI_LENGTH = 60
UCI_BLOCK = 100

BASELINE = 30.0
NOISE_SCALE = 2.0
NOISE_RANGE = (-3.0, 3.0)
CYCLE_AMPLITUDE = (10.0, 15.0)
CYCLE_PERIOD = (10.0, 15.0)
TREND_GRADIENT = (0.2, 0.5)
SHIFT_MAGNITUDE = (7.5, 20.0)


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledSeries:
    values: np.ndarray
    label: str | None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DatasetError("series must be a non-empty vector")
        if not np.all(np.isfinite(values)):
            raise DatasetError("series values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.label is not None and self.label not in LABELS:
            raise DatasetError(f"unknown label {self.label!r}")

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, LabeledSeries):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.values, other.values)

    __hash__ = None


def labels_path_for(data_path) -> Path:
    """Sibling labels file written next to a data file."""
    p = Path(data_path)
    return p.with_name(p.name + ".labels.csv")


def parse_uci(path, labels=None, length: int | None = UCI_LENGTH, block_size: int = UCI_BLOCK) -> list[LabeledSeries]:
    """Read a whitespace-separated series file, one series per line.

    Without ``labels`` the UCI block layout is assumed: consecutive blocks of
    ``block_size`` rows labelled N, C, IT, DT, US, DS. If the row count does
    not match six full blocks a warning is issued and rows outside complete
    blocks are left unlabelled. ``length=None`` accepts any uniform row length.
    """
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            try:
                row = [float(v) for v in fields]
            except ValueError:
                raise DatasetError(f"{path}: row {lineno}: non-numeric field") from None
            expected = length if length is not None else (len(rows[0]) if rows else len(row))
            if len(row) != expected:
                raise DatasetError(f"{path}: row {lineno}: expected {expected} fields, got {len(row)}")
            if not all(math.isfinite(v) for v in row):
                raise DatasetError(f"{path}: row {lineno}: non-finite value")
            rows.append(row)
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    if labels is not None:
        labels = list(labels)
        if len(labels) != len(rows):
            raise DatasetError(f"{path}: {len(rows)} rows but {len(labels)} labels")
    else:
        n_blocks = min(len(rows) // block_size, len(LABELS))
        if len(rows) != block_size * len(LABELS):
            warnings.warn(
                f"{path}: {len(rows)} rows, expected {block_size * len(LABELS)}; "
                f"labelling {n_blocks} complete block(s) only",
                stacklevel=2,
            )
        labels = [LABELS[i // block_size] if i < n_blocks * block_size else None for i in range(len(rows))]
    return [LabeledSeries(np.array(row), label) for row, label in zip(rows, labels)]


def write_uci(path, series) -> None:
    lines = [" ".join(repr(float(v)) for v in s.values) for s in series]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_labels(path, series) -> None:
    lines = ["index,label"] + [f"{i},{s.label or ''}" for i, s in enumerate(series)]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_labels(path) -> list[str | None]:
    with open(path, encoding="utf-8") as fh:
        if fh.readline().strip() != "index,label":
            raise DatasetError(f"{path}: expected header 'index,label'")
        entries = {}
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != 2:
                raise DatasetError(f"{path}: line {lineno}: expected 'index,label'")
            try:
                idx = int(parts[0])
            except ValueError:
                raise DatasetError(f"{path}: line {lineno}: bad index {parts[0]!r}") from None
            label = parts[1] or None
            if label is not None and label not in LABELS:
                raise DatasetError(f"{path}: line {lineno}: unknown label {label!r}")
            entries[idx] = label
    if sorted(entries) != list(range(len(entries))):
        raise DatasetError(f"{path}: indices must be 0..n-1")
    return [entries[i] for i in range(len(entries))]


def _series(label: str, rng: np.random.Generator, length: int) -> np.ndarray:
    t = np.arange(length, dtype=float)
    y = BASELINE + NOISE_SCALE * rng.uniform(*NOISE_RANGE, size=length)
    if label == "C":
        amplitude = rng.uniform(*CYCLE_AMPLITUDE)
        period = rng.uniform(*CYCLE_PERIOD)
        y += amplitude * np.sin(2 * np.pi * t / period)
    elif label in ("IT", "DT"):
        gradient = rng.uniform(*TREND_GRADIENT)
        y += (gradient if label == "IT" else -gradient) * t
    elif label in ("US", "DS"):
        change = int(rng.integers(length // 4, 3 * length // 4, endpoint=True))
        magnitude = rng.uniform(*SHIFT_MAGNITUDE)
        y += (magnitude if label == "US" else -magnitude) * (t >= change)
    return y


def generate(seed: int, per_class: int = UCI_BLOCK, length: int = UCI_LENGTH) -> list[LabeledSeries]:
    """Synthesize ``per_class`` series of each class, in N..DS blocks.

    Series ``i`` draws from its own stream seeded by ``(seed, i)``, so any
    subset can be regenerated independently.
    """
    if per_class < 1:
        raise ValueError("per_class must be at least 1")
    if length < 8:
        raise ValueError("length must be at least 8")
    out = []
    for c, label in enumerate(LABELS):
        for n in range(per_class):
            i = c * per_class + n
            rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
            out.append(LabeledSeries(_series(label, rng, length), label))
    return out


@dataclass(frozen=True)
class EncodingScheme:
    """How a real series becomes bytes.

    ``quantize8`` maps the range [lo, hi] affinely onto levels 0..255, one byte
    per sample; the range is the series' own min/max unless both ``lo`` and
    ``hi`` are fixed (values outside are clipped). ``raw`` writes each sample
    as a big-endian IEEE-754 double.
    """

    mode: str = "quantize8"
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if self.mode not in ("quantize8", "raw"):
            raise ValueError(f"unknown encoding {self.mode!r}; use 'quantize8' or 'raw'")
        if (self.lo is None) != (self.hi is None):
            raise ValueError("fix both lo and hi, or neither")
        if self.lo is not None and not self.lo < self.hi:
            raise ValueError("lo must be below hi")


QUANTIZE8 = EncodingScheme("quantize8")
RAW = EncodingScheme("raw")


def encode(series, scheme: EncodingScheme = QUANTIZE8) -> bytes:
    values = series.values if isinstance(series, LabeledSeries) else np.asarray(series, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DatasetError("series values must be finite")
    if scheme.mode == "raw":
        return struct.pack(f">{values.size}d", *values.tolist())
    lo = values.min() if scheme.lo is None else scheme.lo
    hi = values.max() if scheme.hi is None else scheme.hi
    if hi == lo:
        return bytes([128]) * values.size
    levels = np.rint((np.clip(values, lo, hi) - lo) / (hi - lo) * 255.0)
    return levels.astype(np.uint8).tobytes()


def encode_all(series, scheme: EncodingScheme = QUANTIZE8) -> list[bytes]:
    return [encode(s, scheme) for s in series]
