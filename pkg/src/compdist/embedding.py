"""Classical (Torgerson) multidimensional scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distances import DissimilarityMatrix

__all__ = [
    "EigenDecompositionError",
    "EmbeddingResult",
    "symmetric_eigendecomposition",
    "classical_mds",
    "pairwise_euclidean",
    "write_coordinates",
    "read_coordinates",
]


class EigenDecompositionError(RuntimeError):
    pass


@dataclass
class EmbeddingResult:
    """MDS output.

    ``n_negative`` counts the eigenvalues of the centred Gram matrix that are
    negative beyond round-off, i.e. how far the input is from Euclidean;
    ``n_clipped`` counts the selected dimensions whose eigenvalue was clipped
    to zero.
    """

    coordinates: np.ndarray
    eigenvalues: np.ndarray
    stress: float
    n_negative: int = 0
    n_clipped: int = 0


def _sign_convention(vectors: np.ndarray, tol: float) -> np.ndarray:
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size and col[nz[0]] < 0:
            vectors[:, k] = -col
    return vectors


def symmetric_eigendecomposition(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Each eigenvector is oriented so that its first component of magnitude
    above 1e-12 is positive.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if not np.allclose(m, m.T, rtol=0, atol=1e-12 * max(scale, 1.0)):
        raise ValueError("matrix is not symmetric")
    sym = (m + m.T) / 2
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(f"eigendecomposition did not converge: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    residual = np.linalg.norm(sym @ v - v * w) if m.size else 0.0
    if residual > 1e-8 * max(np.linalg.norm(sym), 1.0) * max(1, m.shape[0]):
        raise EigenDecompositionError(f"eigendecomposition residual too large: {residual:.3e}")
    return w, _sign_convention(v, 1e-12)


def pairwise_euclidean(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def classical_mds(delta, dims: int = 2) -> EmbeddingResult:
    """Embed a dissimilarity matrix into ``dims`` Euclidean dimensions.

    Parameters
    ----------
    delta : DissimilarityMatrix or (n, n) array
        Symmetric dissimilarities with zero diagonal.
    dims : int
        Target dimension, ``1 <= dims <= n - 1``.

    Returns
    -------
    EmbeddingResult
        Coordinates are the top eigenvectors of the double-centred squared
        dissimilarities scaled by the square roots of their eigenvalues.
        Stress is the normalized residual between embedded and input
        distances over all pairs.
    """
    d = delta.values if isinstance(delta, DissimilarityMatrix) else np.asarray(delta, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("dissimilarity matrix must be square")
    n = d.shape[0]
    if not 1 <= dims <= n - 1:
        raise ValueError(f"dims must lie in [1, {n - 1}], got {dims}")
    if not np.array_equal(d, d.T):
        raise ValueError("dissimilarity matrix is not symmetric")
    if np.any(np.diag(d) != 0):
        raise ValueError("dissimilarity matrix must have a zero diagonal")

    sq = d**2
    # double centring without forming J explicitly
    row_mean = sq.mean(axis=1, keepdims=True)
    b = -0.5 * (sq - row_mean - row_mean.T + sq.mean())
    b = (b + b.T) / 2
    evals, evecs = symmetric_eigendecomposition(b)

    tol = 1e-9 * max(float(np.max(np.abs(evals))), 1e-300)
    n_negative = int(np.sum(evals < -tol))
    top = evals[:dims]
    n_clipped = int(np.sum(top < 0))
    top = np.clip(top, 0.0, None)
    coords = evecs[:, :dims] * np.sqrt(top)

    recovered = pairwise_euclidean(coords)
    iu = np.triu_indices(n, k=1)
    denom = float(np.sum(d[iu] ** 2))
    stress = float(np.sqrt(np.sum((recovered[iu] - d[iu]) ** 2) / denom)) if denom > 0 else 0.0
    return EmbeddingResult(coords, top, stress, n_negative, n_clipped)


def write_coordinates(path, result: EmbeddingResult, labels=None) -> None:
    coords = result.coordinates
    n, dims = coords.shape
    if labels is not None and len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} points")
    header = ",".join(["index", "label"] + [f"c{k + 1}" for k in range(dims)])
    lines = [header]
    for i, row in enumerate(coords.tolist()):
        label = "" if labels is None or labels[i] is None else str(labels[i])
        lines.append(",".join([str(i), label] + [f"{v:.17g}" for v in row]))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_coordinates(path) -> tuple[list[int], list[str | None], np.ndarray]:
    """Read a coordinates CSV back as (indices, labels, coordinates)."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if header[:2] != ["index", "label"] or len(header) < 3:
            raise ValueError(f"{path}: expected header 'index,label,c1..cN'")
        indices, labels, rows = [], [], []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(",")
            if len(parts) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                indices.append(int(parts[0]))
                rows.append([float(v) for v in parts[2:]])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric field") from None
            labels.append(parts[1] or None)
    return indices, labels, np.array(rows, dtype=float).reshape(len(rows), len(header) - 2)
