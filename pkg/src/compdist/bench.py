"""Wall-time benchmarks for full dissimilarity matrices."""

from __future__ import annotations

import json
import platform
import statistics
import time

import numpy as np

from .dataset import QUANTIZE8, RAW, EncodingScheme, encode_all, generate
from .distances import COMPRESSION_MEASURES, dissimilarity_matrix, get_measure

DEFAULT_MEASURES = ("ncd", "fcd", "gcdd-size", "gcdd-entropy", "gcdd-huffman", "euclidean", "pearson")
DEFAULT_LENGTHS = (60, 120, 240, 480)
WARMUP_OBJECTS = 20
PAIR_SAMPLE = 400


def objects_for(measure: str, series, scheme: EncodingScheme):
    if measure in COMPRESSION_MEASURES:
        return encode_all(series, scheme)
    return [s.values for s in series]


def time_matrix(objects, measure: str, repeats: int = 5, workers: int = 1, **params) -> list[float]:
    """Wall times of ``repeats`` full matrix builds, after an untimed warm-up."""
    dissimilarity_matrix(objects[: min(len(objects), WARMUP_OBJECTS)], measure, workers=workers, **params)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        dissimilarity_matrix(objects, measure, workers=workers, **params)
        times.append(time.perf_counter() - t0)
    return times


def time_pairs(objects, measure: str, sample: int = PAIR_SAMPLE, **params) -> list[float]:
    """Individually timed pair evaluations on a fixed sample of pairs."""
    m = get_measure(measure, **params)
    cache = m.prepare(objects)
    n = len(objects)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    step = max(1, len(pairs) // sample)
    out = []
    for i, j in pairs[::step][:sample]:
        t0 = time.perf_counter()
        m.pair(cache, i, j)
        out.append(time.perf_counter() - t0)
    return out


def run_bench(
    series,
    measures=DEFAULT_MEASURES,
    schemes=(QUANTIZE8, RAW),
    repeats: int = 5,
    lengths=DEFAULT_LENGTHS,
    scaling_per_class: int = 10,
    seed: int = 0,
    workers: int = 1,
    **params,
) -> dict:
    """Time full matrices per encoding and measure, plus a per-pair scaling table.

    Compression measures are timed under every encoding in ``schemes``; the
    encoding-independent baselines are timed once, under the first one.
    Scaling datasets come from the seeded generator at each length.
    """
    if isinstance(schemes, EncodingScheme):
        schemes = (schemes,)
    n = len(series)
    n_pairs = n * (n - 1) // 2
    report = {
        "machine": {
            "python": platform.python_version(),
            "platform": platform.platform(),
            "processor": platform.processor() or platform.machine(),
            "numpy": np.__version__,
        },
        "config": {
            "objects": n,
            "series_length": len(series[0]),
            "encodings": [s.mode for s in schemes],
            "repeats": repeats,
            "workers": workers,
            "scaling_per_class": scaling_per_class,
            "lengths": list(lengths),
            "seed": seed,
        },
        "measures": {},
        "scaling": {},
    }
    small_sets = {length: generate(seed, scaling_per_class, length) for length in lengths}
    for k, scheme in enumerate(schemes):
        names = [m for m in measures if k == 0 or m in COMPRESSION_MEASURES]
        timings = {}
        for name in names:
            objects = objects_for(name, series, scheme)
            times = time_matrix(objects, name, repeats=repeats, workers=workers, **params)
            pair_times = time_pairs(objects, name, **params)
            timings[name] = {
                "matrix_seconds_median": statistics.median(times),
                "matrix_seconds": times,
                "pair_seconds_mean": statistics.median(times) / n_pairs,
                "pair_seconds_median_sampled": statistics.median(pair_times),
            }
        report["measures"][scheme.mode] = timings

        scaling = {}
        for length, small in small_sets.items():
            m = len(small)
            row = {}
            for name in names:
                objects = objects_for(name, small, scheme)
                times = time_matrix(objects, name, repeats=repeats, workers=workers, **params)
                row[name] = statistics.median(times) / (m * (m - 1) // 2)
            scaling[str(length)] = row
        report["scaling"][scheme.mode] = scaling
    return report


def format_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"
