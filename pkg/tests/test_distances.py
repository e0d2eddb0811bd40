import math
import random

import numpy as np
import pytest

from compdist.compression import lzw_pass
from compdist.dataset import QUANTIZE8, encode, encode_all, generate
from compdist.distances import (
    DissimilarityMatrix,
    GcddMeasure,
    PairwiseError,
    acf_distance,
    autocorrelation,
    cort,
    cort_distance,
    dissimilarity_matrix,
    euclidean,
    fcd,
    fcd_raw,
    gcdd,
    gcdd_matrices,
    gcdd_raw,
    get_measure,
    ncd,
    ncd_raw,
    pearson_distance,
)


def random_bytes(n, seed):
    rng = random.Random(seed)
    return bytes(rng.randrange(256) for _ in range(n))


def naive_euclidean(a, b):
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(a, b)))


def naive_pearson(a, b):
    ma = math.fsum(a) / len(a)
    mb = math.fsum(b) / len(b)
    num = math.fsum((x - ma) * (y - mb) for x, y in zip(a, b))
    den = math.sqrt(math.fsum((x - ma) ** 2 for x in a) * math.fsum((y - mb) ** 2 for y in b))
    return 1 - num / den


@pytest.fixture(scope="module")
def small_series():
    return generate(seed=21, per_class=3, length=60)


class TestNcd:
    @pytest.mark.parametrize("seed", range(3))
    def test_independent_random_far(self, seed):
        assert ncd(random_bytes(1024, seed), random_bytes(1024, seed + 100)) >= 0.8

    def test_symmetric(self):
        x, y = b"abracadabra" * 5, b"alakazam" * 7
        assert ncd(x, y) == ncd(y, x)
        assert ncd(x, y) == (ncd_raw(x, y) + ncd_raw(y, x)) / 2

    def test_self_closer_than_other(self):
        x, y = random_bytes(512, 1), random_bytes(512, 2)
        assert ncd_raw(x, x) < ncd(x, y)

    @pytest.mark.xfail(strict=True, reason="LZW self-concatenation re-emits about half the codes; measured ~0.56")
    def test_self_distance_bound(self):
        x = random_bytes(256, 0)
        assert ncd_raw(x, x) <= 0.1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ncd(b"", b"a")


class TestFcd:
    def test_identity(self):
        x = b"mississippi river" * 3
        assert fcd_raw(x, x) == 0.0
        assert fcd(x, x) == 0.0

    def test_disjoint_alphabets(self):
        assert fcd(b"abbaabab", b"cddccdcd") == 1.0

    def test_raw_asymmetry(self):
        x = b"abcabcabcabd"
        y = x + b"xyzxyzxyz"
        dx, dy = lzw_pass(x)[0], lzw_pass(y)[0]
        # LZW on y starts exactly like on x, so every pattern of x is in y
        assert set(dx.entries) < set(dy.entries)
        assert fcd_raw(x, y) == 0.0
        shared = len(set(dx.entries) & set(dy.entries))
        assert fcd_raw(y, x) == (len(dy) - shared) / len(dy)
        assert fcd_raw(y, x) != fcd_raw(x, y)
        assert fcd(x, y) == max(fcd_raw(x, y), fcd_raw(y, x))

    def test_too_short(self):
        with pytest.raises(ValueError, match="input too short for FCD"):
            fcd_raw(b"a", b"abc")


class TestGcdd:
    def test_component_order(self):
        order = ["dict-huffman", "dict-size", "dict-entropy"]
        v = gcdd(b"abcabcabc", b"abdabdabd", order)
        assert list(v.names) == order
        assert len(v) == 3
        assert v["dict-size"] == gcdd(b"abcabcabc", b"abdabdabd", ["dict-size"])["dict-size"]

    def test_symmetrized(self):
        x, y = b"0101010111", b"00110011001100"
        fwd, bwd = gcdd_raw(x, y), gcdd_raw(y, x)
        sym = gcdd(x, y)
        assert np.array_equal(sym.values, (fwd.values + bwd.values) / 2)
        assert np.array_equal(sym.values, gcdd(y, x).values)

    @pytest.mark.parametrize("seed", range(5))
    def test_structure_beats_noise(self, seed):
        rng = random.Random(seed)
        a, b = rng.sample(range(256), 2)
        x = bytes([a, b]) * 512
        phase = rng.randrange(2)
        x2 = (bytes([a, b]) * 520)[phase:phase + 1024]
        y = bytes(rng.randrange(256) for _ in range(1024))
        far, near = gcdd(x, y), gcdd(x, x2)
        assert np.all(far.values > near.values)

    @pytest.mark.xfail(strict=True, reason="LZW adds ~half again as many entries on x.x; measured ~0.5")
    def test_self_distance_bound_on_series(self):
        x = encode(generate(seed=2, per_class=1, length=240)[0], QUANTIZE8)
        assert gcdd_raw(x, x, ["dict-size"])["dict-size"] <= 0.15

    def test_corruption_monotone(self):
        base = (b"the quick brown fox jumps over the lazy dog; " * 30)[:1024]
        values = []
        for level in (0.01, 0.10, 0.50):
            rng = random.Random(9)
            corrupted = bytearray(base)
            for i in rng.sample(range(len(base)), int(level * len(base))):
                corrupted[i] = rng.randrange(256)
            values.append(gcdd(base, bytes(corrupted), ["dict-size"])["dict-size"])
        assert values == sorted(values)

    def test_needs_functionals(self):
        with pytest.raises(ValueError):
            gcdd(b"ab", b"cd", [])
        with pytest.raises(ValueError, match="unknown functional"):
            gcdd(b"ab", b"cd", ["dict-volume"])

    def test_degenerate(self):
        with pytest.raises(ValueError, match="degenerate functional value"):
            gcdd(b"a", b"b", ["dict-entropy"])


class TestBaselines:
    def test_euclidean_examples(self):
        assert euclidean([0, 0], [3, 4]) == 5.0
        assert euclidean([1.5, -2.0], [1.5, -2.0]) == 0.0
        assert euclidean([1, 2, 3], [1, 2, 4]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            euclidean([1, 2], [1, 2, 3])

    def test_pearson_examples(self):
        a = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0])
        assert pearson_distance(a, a) == 0.0
        assert pearson_distance(a, -a + 7) == pytest.approx(2.0, abs=1e-15)
        assert pearson_distance([1, 2, 3], [2, 4, 6]) == 0.0

    def test_pearson_constant(self):
        with pytest.raises(ValueError, match="zero variance"):
            pearson_distance([1, 1, 1], [1, 2, 3])

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            n = int(rng.integers(2, 80))
            a, b = rng.normal(size=n) * 10, rng.normal(size=n) * 10
            e = naive_euclidean(a.tolist(), b.tolist())
            assert euclidean(a, b) == pytest.approx(e, rel=1e-12)
            p = naive_pearson(a.tolist(), b.tolist())
            assert pearson_distance(a, b) == pytest.approx(p, rel=1e-12, abs=1e-15)

    def test_acf_identity_and_symmetry(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=60), rng.normal(size=60)
        assert acf_distance(a, a, 5) == 0.0
        assert acf_distance(a, b) == acf_distance(b, a)

    def test_acf_noise_vs_periodic(self):
        rng = np.random.default_rng(4)
        noise = rng.normal(size=60)
        periodic = np.sin(2 * np.pi * np.arange(60) / 12) + 0.05 * rng.normal(size=60)
        assert acf_distance(noise, periodic, max_lag=10) > 0

    def test_autocorrelation_reference(self):
        a = np.array([1.0, 3.0, 2.0, 5.0, 4.0])
        d = a - a.mean()
        expected = [sum(d[t] * d[t + k] for t in range(5 - k)) / sum(d**2) for k in (1, 2)]
        assert autocorrelation(a, 2) == pytest.approx(expected, rel=1e-12)

    def test_acf_errors(self):
        with pytest.raises(ValueError, match="zero variance"):
            acf_distance([2, 2, 2, 2], [1, 2, 3, 4], max_lag=2)
        with pytest.raises(ValueError):
            acf_distance([1, 2, 3], [3, 2, 1], max_lag=3)

    def test_cort_examples(self):
        rng = np.random.default_rng(5)
        a, b = rng.normal(size=30), rng.normal(size=30)
        assert cort(a, a) == 1.0
        assert cort_distance(a, a, k=2) == 0.0
        assert cort_distance(a, b, k=0) == euclidean(a, b)
        u = cort(a, b)
        assert cort_distance(a, b, k=3) == pytest.approx(2 / (1 + math.exp(3 * u)) * euclidean(a, b), rel=1e-14)

    def test_cort_flat(self):
        with pytest.raises(ValueError, match="flat series"):
            cort([1, 1, 1], [1, 2, 3])


class TestMatrix:
    def test_identical_objects(self):
        x = encode(generate(seed=1, per_class=1)[1])
        for name in ("ncd", "fcd", "gcdd-size", "gcdd-entropy", "gcdd-huffman"):
            m = dissimilarity_matrix([x, x], name)
            assert m.values[0, 0] == m.values[1, 1] == 0.0
            assert m.values[0, 1] == m.values[1, 0]

    @pytest.mark.parametrize("name", ["ncd", "fcd", "gcdd-size", "gcdd-entropy", "gcdd-huffman", "euclidean", "pearson", "acf", "cort"])
    def test_symmetric_zero_diagonal(self, small_series, name):
        objects = encode_all(small_series) if name in ("ncd", "fcd") or name.startswith("gcdd") else [s.values for s in small_series]
        m = dissimilarity_matrix(objects, name)
        assert m.measure == name
        assert np.array_equal(m.values, m.values.T)
        assert np.all(np.diag(m.values) == 0)
        assert np.all(np.isfinite(m.values)) and np.all(m.values >= 0)

    def test_cells_match_public_functions(self, small_series):
        enc = encode_all(small_series)[:6]
        vals = [s.values for s in small_series][:6]
        mats = {name: dissimilarity_matrix(enc, name) for name in ("ncd", "fcd")}
        g = gcdd_matrices(enc)
        pear = dissimilarity_matrix(vals, "acf", max_lag=4)
        for i in range(6):
            for j in range(i + 1, 6):
                assert mats["ncd"].values[i, j] == ncd(enc[i], enc[j])
                assert mats["fcd"].values[i, j] == fcd(enc[i], enc[j])
                vec = gcdd(enc[i], enc[j])
                for phi, m in g.items():
                    assert m.values[i, j] == vec[phi]
                assert pear.values[i, j] == acf_distance(vals[i], vals[j], 4)

    def test_gcdd_matrices_match_single(self, small_series):
        enc = encode_all(small_series)
        g = gcdd_matrices(enc, ["dict-size", "dict-entropy"])
        assert g["dict-size"].measure == "gcdd-size"
        assert np.array_equal(g["dict-size"].values, dissimilarity_matrix(enc, "gcdd-size").values)
        assert np.array_equal(g["dict-entropy"].values, dissimilarity_matrix(enc, "gcdd-entropy").values)

    def test_euclidean_double_loop(self):
        series = generate(seed=3)
        vals = [s.values for s in series]
        m = dissimilarity_matrix(vals, "euclidean")
        n = len(vals)
        ref = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    ref[i, j] = euclidean(vals[i], vals[j])
        assert np.array_equal(m.values, ref)

    @pytest.mark.parametrize("name", ["ncd", "gcdd-entropy", "pearson"])
    def test_workers_bitwise_identical(self, small_series, name):
        objects = encode_all(small_series) if name != "pearson" else [s.values for s in small_series]
        seq = dissimilarity_matrix(objects, name, workers=1)
        par = dissimilarity_matrix(objects, name, workers=3)
        assert np.array_equal(seq.values, par.values)

    def test_error_carries_indices(self):
        vals = [np.arange(5.0), np.arange(5.0) ** 2, np.ones(5), np.arange(5.0)[::-1]]
        with pytest.raises(PairwiseError) as info:
            dissimilarity_matrix(vals, "pearson")
        assert 2 in info.value.indices

    def test_fcd_short_object(self):
        with pytest.raises(PairwiseError) as info:
            dissimilarity_matrix([b"abcabc", b"z"], "fcd")
        assert info.value.indices == (1,)

    def test_needs_two_objects(self):
        with pytest.raises(ValueError):
            dissimilarity_matrix([b"abc"], "ncd")

    def test_unknown_measure(self):
        with pytest.raises(ValueError, match="unknown measure"):
            get_measure("manhattan")

    def test_multi_width_rejected(self):
        with pytest.raises(ValueError):
            dissimilarity_matrix([b"ab", b"cd"], GcddMeasure())

    def test_csv_roundtrip(self, tmp_path, small_series):
        m = dissimilarity_matrix(encode_all(small_series), "gcdd-entropy")
        path = tmp_path / "m.csv"
        m.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == f"# measure=gcdd-entropy n={m.size}"
        assert len(lines) == m.size + 1
        back = DissimilarityMatrix.from_csv(path)
        assert back.measure == "gcdd-entropy"
        assert np.array_equal(back.values, m.values)

    def test_csv_bad_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# measure=x n=2\n0,1\n1\n")
        with pytest.raises(ValueError, match="line 3"):
            DissimilarityMatrix.from_csv(path)
