"""Partitioning from a dissimilarity matrix and cluster-quality scores."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .distances import DissimilarityMatrix

__all__ = [
    "Partition",
    "QualityReport",
    "pam_kmedoids",
    "average_linkage",
    "purity",
    "adjusted_rand",
    "silhouette_samples",
    "quality",
    "write_partition",
    "read_partition",
]


@dataclass
class Partition:
    assignments: np.ndarray
    medoids: list[int] | None = None
    cost: float | None = None
    cost_history: list[float] = field(default_factory=list)
    merges: list[tuple[tuple[int, ...], tuple[int, ...], float]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return int(self.assignments.max()) + 1

    def clusters(self) -> list[list[int]]:
        return [np.flatnonzero(self.assignments == c).tolist() for c in range(self.k)]


def _matrix(delta) -> np.ndarray:
    d = delta.values if isinstance(delta, DissimilarityMatrix) else np.asarray(delta, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("dissimilarity matrix must be square")
    return d


def _check_k(k: int, n: int) -> None:
    if not 2 <= k <= n:
        raise ValueError(f"k must lie in [2, {n}], got {k}")


def _assign(d: np.ndarray, medoids: list[int]) -> np.ndarray:
    # argmin picks the first (lowest-position) medoid on ties
    labels = np.argmin(d[medoids], axis=0)
    labels[medoids] = np.arange(len(medoids))
    return labels


def pam_kmedoids(delta, k: int) -> Partition:
    """Partitioning Around Medoids with greedy BUILD and best-improvement SWAP.

    Ties are broken towards the lowest object index. Cluster ids follow the
    ascending order of the final medoid indices.
    """
    d = _matrix(delta)
    n = d.shape[0]
    _check_k(k, n)

    # BUILD
    medoids = [int(np.argmin(d.sum(axis=1)))]
    nearest = d[medoids[0]].copy()
    while len(medoids) < k:
        gains = np.minimum(d, nearest[None, :]).sum(axis=1)
        gains[medoids] = np.inf
        m = int(np.argmin(gains))
        medoids.append(m)
        nearest = np.minimum(nearest, d[m])

    cost = float(nearest.sum())
    history = [cost]
    tol = 1e-12 * max(cost, 1.0)
    while True:
        is_medoid = np.zeros(n, dtype=bool)
        is_medoid[medoids] = True
        candidates = np.flatnonzero(~is_medoid)
        if candidates.size == 0:
            break
        best = (cost, -1, -1)
        for pos in range(k):
            others = [m for p, m in enumerate(medoids) if p != pos]
            rest = d[others].min(axis=0) if others else np.full(n, np.inf)
            costs = np.minimum(rest[None, :], d[candidates]).sum(axis=1)
            idx = int(np.argmin(costs))
            if costs[idx] < best[0] - tol:
                best = (float(costs[idx]), pos, int(candidates[idx]))
        if best[1] < 0:
            break
        cost, pos, o = best
        medoids[pos] = o
        history.append(cost)

    medoids.sort()
    labels = _assign(d, medoids)
    final = float(d[medoids].min(axis=0).sum())
    return Partition(labels, medoids=medoids, cost=final, cost_history=history)


def average_linkage(delta, k: int) -> Partition:
    """UPGMA agglomeration down to ``k`` clusters.

    At each step the pair of clusters with the smallest mean inter-member
    dissimilarity merges; ties go to the pair whose smallest members have the
    lowest indices. Cluster ids follow each cluster's smallest member.
    """
    d = _matrix(delta)
    n = d.shape[0]
    _check_k(k, n)

    # clusters are keyed by their smallest member, which is also their row
    dist = d.astype(float).copy()
    np.fill_diagonal(dist, np.inf)
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    members = {i: [i] for i in range(n)}
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    merges = []
    for _ in range(n - k):
        masked = np.where(upper & active[:, None] & active[None, :], dist, np.inf)
        # row-major argmin: lowest (a, b) on ties
        flat = int(np.argmin(masked))
        a, b = divmod(flat, n)
        height = float(dist[a, b])
        merges.append((tuple(members[a]), tuple(members[b]), height))
        na, nb = sizes[a], sizes[b]
        merged = (na * dist[a] + nb * dist[b]) / (na + nb)
        dist[a, :] = merged
        dist[:, a] = merged
        dist[a, a] = np.inf
        active[b] = False
        sizes[a] = na + nb
        members[a] = sorted(members[a] + members.pop(b))

    labels = np.empty(n, dtype=int)
    for cid, root in enumerate(sorted(members)):
        labels[members[root]] = cid
    return Partition(labels, merges=merges)


def _contingency(assignments, labels) -> tuple[np.ndarray, list, list]:
    clusters = sorted(set(assignments))
    classes = sorted(set(labels), key=str)
    ci = {c: n for n, c in enumerate(clusters)}
    li = {c: n for n, c in enumerate(classes)}
    table = np.zeros((len(clusters), len(classes)), dtype=np.int64)
    for a, l in zip(assignments, labels):
        table[ci[a], li[l]] += 1
    return table, clusters, classes


def purity(assignments, labels) -> float:
    table, _, _ = _contingency(list(assignments), list(labels))
    return float(table.max(axis=1).sum() / table.sum())


def _pairs(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * (x - 1) / 2))


def adjusted_rand(assignments, labels) -> float:
    table, _, _ = _contingency(list(assignments), list(labels))
    n = table.sum()
    index = _pairs(table)
    rows = _pairs(table.sum(axis=1))
    cols = _pairs(table.sum(axis=0))
    total = n * (n - 1) / 2
    expected = rows * cols / total if total else 0.0
    max_index = (rows + cols) / 2
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))


def silhouette_samples(delta, assignments) -> np.ndarray:
    """Per-object silhouette; singletons score 0."""
    d = _matrix(delta)
    assignments = np.asarray(assignments)
    n = d.shape[0]
    clusters = np.unique(assignments)
    out = np.zeros(n)
    if clusters.size < 2:
        return out
    onehot = (assignments[:, None] == clusters[None, :]).astype(float)
    sums = d @ onehot
    sizes = onehot.sum(axis=0)
    own = np.searchsorted(clusters, assignments)
    own_size = sizes[own]
    a = np.where(own_size > 1, sums[np.arange(n), own] / np.maximum(own_size - 1, 1), 0.0)
    means = sums / sizes[None, :]
    means[np.arange(n), own] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own_size <= 1] = 0.0
    return s


@dataclass
class QualityReport:
    purity: float
    adjusted_rand: float
    mean_silhouette: float
    confusion: dict[str, dict[str, int]]
    k: int
    n: int

    def to_dict(self) -> dict:
        flat = {
            "k": self.k,
            "n": self.n,
            "purity": self.purity,
            "adjusted_rand": self.adjusted_rand,
            "mean_silhouette": self.mean_silhouette,
        }
        for cluster, row in self.confusion.items():
            for label, count in row.items():
                flat[f"confusion.{cluster}.{label}"] = count
        return flat

    def to_json(self, **extra) -> str:
        flat = {**extra, **self.to_dict()}
        return json.dumps(flat, indent=1, sort_keys=True) + "\n"


def quality(p: Partition, labels, delta) -> QualityReport:
    assignments = np.asarray(p.assignments)
    labels = list(labels)
    if len(labels) != assignments.size:
        raise ValueError(f"{len(labels)} labels for {assignments.size} objects")
    table, clusters, classes = _contingency(assignments.tolist(), labels)
    confusion = {
        str(c): {str(cls): int(table[i, j]) for j, cls in enumerate(classes)} for i, c in enumerate(clusters)
    }
    return QualityReport(
        purity=purity(assignments, labels),
        adjusted_rand=adjusted_rand(assignments, labels),
        mean_silhouette=float(silhouette_samples(delta, assignments).mean()),
        confusion=confusion,
        k=len(clusters),
        n=int(assignments.size),
    )


def write_partition(path, p: Partition) -> None:
    lines = ["index,cluster"] + [f"{i},{c}" for i, c in enumerate(p.assignments.tolist())]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_partition(path) -> Partition:
    with open(path, encoding="ascii") as fh:
        if fh.readline().strip() != "index,cluster":
            raise ValueError(f"{path}: expected header 'index,cluster'")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    assignments = np.empty(len(rows), dtype=int)
    for idx, cluster in rows:
        assignments[int(idx)] = int(cluster)
    return Partition(assignments)
