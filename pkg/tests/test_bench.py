import json

import pytest

from compdist.bench import format_report, run_bench, time_matrix, time_pairs
from compdist.dataset import QUANTIZE8, encode_all, generate


@pytest.fixture(scope="module")
def scaling_report():
    series = generate(0, per_class=2)
    return run_bench(
        series,
        measures=("ncd", "gcdd-size", "euclidean"),
        schemes=QUANTIZE8,
        repeats=5,
        lengths=(60, 120, 240),
        scaling_per_class=5,
    )


def test_report_fields(scaling_report):
    assert scaling_report["config"]["objects"] == 12
    for entry in scaling_report["measures"]["quantize8"].values():
        assert len(entry["matrix_seconds"]) == 5
        assert all(t > 0 for t in entry["matrix_seconds"])
        assert entry["pair_seconds_median_sampled"] > 0
    assert json.loads(format_report(scaling_report)) == scaling_report


def test_compression_time_grows_with_length(scaling_report):
    table = scaling_report["scaling"]["quantize8"]
    for name in ("ncd", "gcdd-size"):
        assert table["240"][name] > table["60"][name]


def test_ncd_grows_faster_than_gcdd(scaling_report):
    # NCD recompresses both concatenations; GCDD only extends a cached scan
    table = scaling_report["scaling"]["quantize8"]
    ncd_growth = table["240"]["ncd"] - table["60"]["ncd"]
    gcdd_growth = table["240"]["gcdd-size"] - table["60"]["gcdd-size"]
    assert ncd_growth > gcdd_growth


def test_time_helpers():
    objects = encode_all(generate(1, per_class=2))
    assert len(time_matrix(objects, "fcd", repeats=2)) == 2
    pairs = time_pairs(objects, "ncd", sample=10)
    assert len(pairs) == 10 and min(pairs) > 0


def test_both_encodings():
    report = run_bench(generate(0, per_class=1), measures=("fcd", "pearson"), repeats=1, lengths=(30,), scaling_per_class=1)
    assert report["config"]["encodings"] == ["quantize8", "raw"]
    # baselines do not depend on the encoding and are timed once
    assert set(report["measures"]["quantize8"]) == {"fcd", "pearson"}
    assert set(report["measures"]["raw"]) == {"fcd"}
    assert set(report["scaling"]["raw"]["30"]) == {"fcd"}
