"""Pairwise dissimilarities and the dissimilarity matrix.

Compression measures (NCD, FCD, GCDD) take byte strings; the baselines
(euclidean, pearson, acf, cort) take real vectors. Every matrix is built
from symmetrized pair values, so it is exactly symmetric, and its
diagonal is set to zero.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .compression import (
    LzwState,
    as_byte_sequence,
    huffman_cost,
    lzw_compressed_length,
    lzw_pass,
    stream_entropy,
)

__all__ = [
    "PHI_NAMES",
    "PhiFunctional",
    "GcddVector",
    "DissimilarityMatrix",
    "PairwiseError",
    "get_phi",
    "ncd",
    "ncd_raw",
    "fcd",
    "fcd_raw",
    "gcdd",
    "gcdd_raw",
    "euclidean",
    "pearson_distance",
    "autocorrelation",
    "acf_distance",
    "cort",
    "cort_distance",
    "MEASURES",
    "COMPRESSION_MEASURES",
    "get_measure",
    "dissimilarity_matrix",
    "gcdd_matrices",
]


class PairwiseError(ValueError):
    """A measure failed on specific objects; ``indices`` names them."""

    def __init__(self, message: str, indices: tuple[int, ...]):
        super().__init__(f"objects {indices}: {message}")
        self.indices = indices


# -- dictionary functionals --------------------------------------------------


def _phi_size(state: LzwState) -> float:
    return float(state.n_entries)


def _phi_entropy(state: LzwState) -> float:
    return stream_entropy(state.final_counts().values())


def _phi_huffman(state: LzwState) -> float:
    return float(huffman_cost(list(state.final_counts().values())))


@dataclass(frozen=True)
class PhiFunctional:
    """A real-valued summary of the LZW dictionary of a byte string."""

    name: str
    from_state: Callable[[LzwState], float]
    needs_counts: bool = True

    def __call__(self, data) -> float:
        return self.from_state(LzwState.scan(data, track_counts=self.needs_counts))


PHI_FUNCTIONALS = {
    "dict-size": PhiFunctional("dict-size", _phi_size, needs_counts=False),
    "dict-entropy": PhiFunctional("dict-entropy", _phi_entropy),
    "dict-huffman": PhiFunctional("dict-huffman", _phi_huffman),
}
PHI_NAMES = tuple(PHI_FUNCTIONALS)


def get_phi(phi) -> PhiFunctional:
    if isinstance(phi, PhiFunctional):
        return phi
    try:
        return PHI_FUNCTIONALS[phi]
    except KeyError:
        raise ValueError(f"unknown functional {phi!r}; choose from {', '.join(PHI_NAMES)}") from None


@dataclass(frozen=True)
class GcddVector:
    components: tuple[tuple[str, float], ...]

    def __getitem__(self, name: str) -> float:
        for key, value in self.components:
            if key == name:
                return value
        raise KeyError(name)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.components)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.components])


def _normalized(joint: float, a: float, b: float) -> float:
    hi = max(a, b)
    if hi <= 0:
        raise ValueError("degenerate functional value")
    return (joint - min(a, b)) / hi


# -- compression distances ---------------------------------------------------


def ncd_raw(x, y) -> float:
    """Normalized compression distance of ``x`` followed by ``y``."""
    x, y = as_byte_sequence(x), as_byte_sequence(y)
    return _normalized(lzw_compressed_length(x + y), lzw_compressed_length(x), lzw_compressed_length(y))


def ncd(x, y) -> float:
    x, y = as_byte_sequence(x), as_byte_sequence(y)
    cx, cy = lzw_compressed_length(x), lzw_compressed_length(y)
    return _ncd_sym(x, y, cx, cy)


def _ncd_sym(x: bytes, y: bytes, cx: int, cy: int) -> float:
    lo, hi = min(cx, cy), max(cx, cy)
    forward = (lzw_compressed_length(x + y) - lo) / hi
    backward = (lzw_compressed_length(y + x) - lo) / hi
    return (forward + backward) / 2


def _patterns(data) -> frozenset:
    return frozenset(lzw_pass(data)[0].entries)


def _fcd_sets(dx: frozenset, dy: frozenset) -> float:
    if not dx:
        raise ValueError("input too short for FCD")
    return (len(dx) - len(dx & dy)) / len(dx)


def fcd_raw(x, y) -> float:
    """Share of the patterns learned on ``x`` that LZW does not also learn on ``y``."""
    return _fcd_sets(_patterns(x), _patterns(y))


def fcd(x, y) -> float:
    dx, dy = _patterns(x), _patterns(y)
    return max(_fcd_sets(dx, dy), _fcd_sets(dy, dx))


def _as_functionals(functionals) -> list[PhiFunctional]:
    if isinstance(functionals, (str, PhiFunctional)):
        functionals = [functionals]
    out = [get_phi(f) for f in functionals]
    if not out:
        raise ValueError("at least one functional is required")
    return out


def gcdd_raw(x, y, functionals=PHI_NAMES) -> GcddVector:
    """Dictionary-functional distance of ``x`` followed by ``y``, per functional."""
    phis = _as_functionals(functionals)
    x, y = as_byte_sequence(x), as_byte_sequence(y)
    sx, sy, sxy = (LzwState.scan(d) for d in (x, y, x + y))
    return GcddVector(
        tuple((p.name, _normalized(p.from_state(sxy), p.from_state(sx), p.from_state(sy))) for p in phis)
    )


def gcdd(x, y, functionals=PHI_NAMES) -> GcddVector:
    """Symmetrized generalized dictionary distance, one component per functional."""
    phis = _as_functionals(functionals)
    x, y = as_byte_sequence(x), as_byte_sequence(y)
    sx, sy = LzwState.scan(x), LzwState.scan(y)
    return GcddVector(tuple(zip((p.name for p in phis), _gcdd_sym(phis, sx, sy, x, y, None, None))))


def _gcdd_sym(phis, sx: LzwState, sy: LzwState, x: bytes, y: bytes, fx, fy) -> list[float]:
    sxy = sx.extend(y)
    syx = sy.extend(x)
    out = []
    for n, p in enumerate(phis):
        a = p.from_state(sx) if fx is None else fx[n]
        b = p.from_state(sy) if fy is None else fy[n]
        out.append((_normalized(p.from_state(sxy), a, b) + _normalized(p.from_state(syx), a, b)) / 2)
    return out


# -- baselines ---------------------------------------------------------------


def _pair_vectors(a, b, min_len: int = 1) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("expected one-dimensional vectors")
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < min_len:
        raise ValueError(f"vectors need at least {min_len} elements")
    return a, b


def euclidean(a, b) -> float:
    a, b = _pair_vectors(a, b)
    d = a - b
    return math.sqrt(float(d @ d))


def pearson_distance(a, b) -> float:
    """``1 - r`` for the Pearson correlation ``r``; lies in [0, 2]."""
    a, b = _pair_vectors(a, b, min_len=2)
    da = a - a.mean()
    db = b - b.mean()
    saa, sbb = float(da @ da), float(db @ db)
    if saa == 0 or sbb == 0:
        raise ValueError("zero variance")
    r = float(da @ db) / math.sqrt(saa * sbb)
    return 1.0 - min(1.0, max(-1.0, r))


def autocorrelation(a, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 1..max_lag."""
    a = np.asarray(a, dtype=float)
    if not 1 <= max_lag < a.size:
        raise ValueError(f"max_lag must lie in [1, {a.size - 1}]")
    d = a - a.mean()
    denom = float(d @ d)
    if denom == 0:
        raise ValueError("zero variance")
    return np.array([float(d[:-k] @ d[k:]) / denom for k in range(1, max_lag + 1)])


def acf_distance(a, b, max_lag: int = 10) -> float:
    a, b = _pair_vectors(a, b, min_len=2)
    return euclidean(autocorrelation(a, max_lag), autocorrelation(b, max_lag))


def cort(a, b) -> float:
    """First-order temporal correlation of two series."""
    a, b = _pair_vectors(a, b, min_len=2)
    da, db = np.diff(a), np.diff(b)
    saa, sbb = float(da @ da), float(db @ db)
    if saa == 0 or sbb == 0:
        raise ValueError("flat series")
    return float(da @ db) / math.sqrt(saa * sbb)


def cort_distance(a, b, k: float = 2.0) -> float:
    """Euclidean distance damped or amplified by temporal correlation."""
    if k < 0:
        raise ValueError("k must be non-negative")
    u = cort(a, b)
    return 2.0 / (1.0 + math.exp(k * u)) * euclidean(a, b)


# -- matrix assembly ---------------------------------------------------------


@dataclass
class DissimilarityMatrix:
    values: np.ndarray
    measure: str

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.values, self.values.T))

    def to_csv(self, path) -> None:
        n = self.size
        lines = [f"# measure={self.measure} n={n}"]
        lines.extend(",".join(f"{v:.17g}" for v in row) for row in self.values.tolist())
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "DissimilarityMatrix":
        with open(path, encoding="ascii") as fh:
            header = fh.readline().strip()
            if not header.startswith("#"):
                raise ValueError(f"{path}: missing '# measure=... n=...' header")
            fields = dict(tok.split("=", 1) for tok in header[1:].split() if "=" in tok)
            if "measure" not in fields or "n" not in fields:
                raise ValueError(f"{path}: malformed header {header!r}")
            n = int(fields["n"])
            rows = []
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                try:
                    row = [float(v) for v in line.split(",")]
                except ValueError:
                    raise ValueError(f"{path}: line {lineno}: non-numeric value") from None
                if len(row) != n:
                    raise ValueError(f"{path}: line {lineno}: expected {n} values, got {len(row)}")
                rows.append(row)
        if len(rows) != n:
            raise ValueError(f"{path}: expected {n} rows, got {len(rows)}")
        values = np.array(rows, dtype=float).reshape(n, n)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError(f"{path}: entries must be finite and non-negative")
        return cls(values, fields["measure"])


class Measure:
    """A named pairwise measure with optional per-object caching.

    ``prepare`` turns the raw objects into whatever per-object data the
    measure reuses; ``pair`` returns the symmetrized value(s) for one pair.
    """

    name = "measure"
    kind = "vector"
    width = 1

    def prepare(self, objects: Sequence) -> list:
        return [np.asarray(o, dtype=float) for o in objects]

    def pair(self, cache: list, i: int, j: int) -> tuple[float, ...]:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class _Baseline(Measure):
    def __init__(self, name: str, fn: Callable[..., float], **params):
        self.name = name
        self.fn = fn
        self.params = params

    def prepare(self, objects):
        cache = []
        for idx, o in enumerate(objects):
            v = np.asarray(o, dtype=float)
            if v.ndim != 1 or not np.all(np.isfinite(v)):
                raise PairwiseError("expected a finite one-dimensional vector", (idx,))
            cache.append(v)
        return cache

    def pair(self, cache, i, j):
        return (self.fn(cache[i], cache[j], **self.params),)


class NcdMeasure(Measure):
    name = "ncd"
    kind = "bytes"

    def prepare(self, objects):
        data = [_checked_bytes(o, idx) for idx, o in enumerate(objects)]
        return [(d, lzw_compressed_length(d)) for d in data]

    def pair(self, cache, i, j):
        (x, cx), (y, cy) = cache[i], cache[j]
        return (_ncd_sym(x, y, cx, cy),)


class FcdMeasure(Measure):
    name = "fcd"
    kind = "bytes"

    def prepare(self, objects):
        cache = []
        for idx, o in enumerate(objects):
            patterns = _patterns(_checked_bytes(o, idx))
            if not patterns:
                raise PairwiseError("input too short for FCD", (idx,))
            cache.append(patterns)
        return cache

    def pair(self, cache, i, j):
        dx, dy = cache[i], cache[j]
        return (max(_fcd_sets(dx, dy), _fcd_sets(dy, dx)),)


class GcddMeasure(Measure):
    """GCDD over one or more functionals, with each object's dictionary cached."""

    kind = "bytes"

    def __init__(self, functionals=PHI_NAMES):
        self.phis = _as_functionals(functionals)
        self.width = len(self.phis)
        short = {"dict-size": "size", "dict-entropy": "entropy", "dict-huffman": "huffman"}
        self.name = "gcdd-" + "+".join(short.get(p.name, p.name) for p in self.phis)
        self._counts = any(p.needs_counts for p in self.phis)

    def prepare(self, objects):
        cache = []
        for idx, o in enumerate(objects):
            data = _checked_bytes(o, idx)
            state = LzwState.scan(data, track_counts=self._counts)
            cache.append((data, state, [p.from_state(state) for p in self.phis]))
        return cache

    def pair(self, cache, i, j):
        x, sx, fx = cache[i]
        y, sy, fy = cache[j]
        return tuple(_gcdd_sym(self.phis, sx, sy, x, y, fx, fy))


def _checked_bytes(obj, idx: int) -> bytes:
    try:
        return as_byte_sequence(obj)
    except (TypeError, ValueError) as exc:
        raise PairwiseError(str(exc), (idx,)) from None


MEASURES = (
    "ncd",
    "fcd",
    "gcdd-size",
    "gcdd-entropy",
    "gcdd-huffman",
    "euclidean",
    "pearson",
    "acf",
    "cort",
)
COMPRESSION_MEASURES = frozenset(MEASURES[:5])


def get_measure(name: str, *, max_lag: int = 10, cort_k: float = 2.0) -> Measure:
    """Resolve a measure name to a :class:`Measure`."""
    if name == "ncd":
        return NcdMeasure()
    if name == "fcd":
        return FcdMeasure()
    if name.startswith("gcdd-") and "dict-" + name[5:] in PHI_FUNCTIONALS:
        return GcddMeasure(["dict-" + name[5:]])
    if name == "euclidean":
        return _Baseline(name, euclidean)
    if name == "pearson":
        return _Baseline(name, pearson_distance)
    if name == "acf":
        return _Baseline(name, acf_distance, max_lag=max_lag)
    if name == "cort":
        return _Baseline(name, cort_distance, k=cort_k)
    raise ValueError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}")


_worker_state: tuple | None = None


def _init_worker(measure, cache):
    global _worker_state
    _worker_state = (measure, cache)


def _row(i: int) -> tuple[int, list]:
    measure, cache = _worker_state
    return i, _row_values(measure, cache, i)


def _row_values(measure: Measure, cache, i: int) -> list:
    out = []
    for j in range(i + 1, len(cache)):
        try:
            out.append(measure.pair(cache, i, j))
        except PairwiseError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise PairwiseError(str(exc), (i, j)) from exc
    return out


def _pairwise(objects: Sequence, measure: Measure, workers: int = 1) -> np.ndarray:
    n = len(objects)
    if n < 2:
        raise ValueError("need at least two objects")
    cache = measure.prepare(objects)
    values = np.zeros((measure.width, n, n))
    if workers is None or workers < 1:
        workers = os.cpu_count() or 1

    def store(i, row):
        if row:
            block = np.array(row, dtype=float).T
            values[:, i, i + 1:] = block
            values[:, i + 1:, i] = block

    if workers == 1:
        for i in range(n - 1):
            store(i, _row_values(measure, cache, i))
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(measure, cache)) as pool:
            for i, row in pool.map(_row, range(n - 1), chunksize=max(1, n // (8 * workers))):
                store(i, row)
    return values


def dissimilarity_matrix(objects: Sequence, measure, workers: int = 1, **params) -> DissimilarityMatrix:
    """Pairwise matrix of ``measure`` over ``objects``.

    ``measure`` is a name from :data:`MEASURES` (``params`` go to
    :func:`get_measure`) or a :class:`Measure` instance of width one.
    """
    if isinstance(measure, str):
        measure = get_measure(measure, **params)
    if measure.width != 1:
        raise ValueError("use gcdd_matrices for multi-functional measures")
    return DissimilarityMatrix(_pairwise(objects, measure, workers)[0], measure.name)


def gcdd_matrices(objects: Sequence, functionals: Iterable = PHI_NAMES, workers: int = 1) -> dict[str, DissimilarityMatrix]:
    """One matrix per functional from a single pass over all pairs."""
    measure = GcddMeasure(list(functionals))
    stack = _pairwise(objects, measure, workers)
    out = {}
    for n, phi in enumerate(measure.phis):
        name = "gcdd-" + phi.name.removeprefix("dict-")
        out[phi.name] = DissimilarityMatrix(stack[n].copy(), name)
    return out
