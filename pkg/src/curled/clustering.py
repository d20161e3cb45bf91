"""Spectral and agglomerative clustering over similarity matrices.

Spectral: symmetric normalized Laplacian, dense eigendecomposition, row
normalized embedding, seeded farthest-first + Lloyd assignment. Hierarchical:
average linkage with a deterministic tie-break (ascending pair of per-cluster
smallest members). Both are bit-reproducible for fixed inputs and seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from .errors import DegenerateMatrix, InvalidK
from .similarity import SimilarityMatrix

LLOYD_TOL = 1e-9
LLOYD_MAX_ITER = 300


@dataclass(frozen=True)
class Partition:
    labels: dict  # object id -> cluster index in 0..k-1, every index non-empty
    k: int
    algorithm: str
    seed: int | None = None

    def clusters(self) -> list[list]:
        out: list[list] = [[] for _ in range(self.k)]
        for obj, c in self.labels.items():
            out[c].append(obj)
        return out

    def as_sets(self) -> set[frozenset]:
        return {frozenset(c) for c in self.clusters()}


def _as_array(matrix) -> tuple[np.ndarray, tuple]:
    if isinstance(matrix, SimilarityMatrix):
        return np.asarray(matrix.values, dtype=np.float64), matrix.ids
    arr = np.asarray(matrix, dtype=np.float64)
    return arr, tuple(range(arr.shape[0]))


def _canonical_labels(ids: tuple, raw_labels: np.ndarray, algorithm: str, seed) -> Partition:
    """Relabel clusters by first appearance so output order is stable."""
    remap: dict[int, int] = {}
    labels = {}
    for pos, obj in enumerate(ids):
        c = int(raw_labels[pos])
        if c not in remap:
            remap[c] = len(remap)
        labels[obj] = remap[c]
    return Partition(labels, len(remap), algorithm, seed)


def spectral_cluster(matrix, k: int, seed: int) -> Partition:
    """Normalized-cut embedding of a similarity matrix, then seeded k-means."""
    sim, ids = _as_array(matrix)
    n = sim.shape[0]
    if not 2 <= k <= n - 1:
        raise InvalidK(f"need 2 <= k <= {n - 1}, got {k}")
    off_diagonal = sim[~np.eye(n, dtype=bool)]
    if off_diagonal.size and np.all(off_diagonal == off_diagonal.flat[0]):
        raise DegenerateMatrix("all pairwise similarities are equal")
    degrees = sim.sum(axis=1)
    if np.any(degrees <= 0):
        raise DegenerateMatrix("a row of the similarity matrix sums to zero")
    inv_sqrt = 1.0 / np.sqrt(degrees)
    laplacian = np.eye(n) - (inv_sqrt[:, None] * sim) * inv_sqrt[None, :]
    laplacian = (laplacian + laplacian.T) / 2.0
    _, eigvecs = np.linalg.eigh(laplacian)
    embedding = eigvecs[:, :k].copy()
    norms = np.sqrt((embedding**2).sum(axis=1))
    nonzero = norms > 1e-12
    embedding[nonzero] /= norms[nonzero, None]

    rng = np.random.default_rng(seed)
    first = int(rng.integers(0, n))
    centers_idx = kernels.farthest_first(embedding, k, first)
    raw = kernels.lloyd(embedding, embedding[centers_idx].copy(), LLOYD_MAX_ITER, LLOYD_TOL)
    if len(np.unique(raw)) != k:
        raise DegenerateMatrix(f"embedding supports fewer than {k} clusters")
    return _canonical_labels(ids, raw, "spectral", seed)


def linkage_merges(dissim: np.ndarray) -> list[tuple[int, int]]:
    """Average-linkage merge sequence as (rep_i, rep_j) index pairs."""
    left, right = kernels.average_linkage(np.ascontiguousarray(dissim, dtype=np.float64))
    return [(int(a), int(b)) for a, b in zip(left, right)]


def _cut(merges: list[tuple[int, int]], n: int, k: int) -> np.ndarray:
    member_of = np.arange(n)
    for a, b in merges[: n - k]:
        member_of[member_of == b] = a
    return member_of


def hierarchical_cluster(matrix, k: int) -> Partition:
    """Agglomerative average-linkage clustering of a dissimilarity matrix."""
    dissim, ids = _as_array(matrix)
    if isinstance(matrix, SimilarityMatrix):
        dissim = 1.0 - dissim
        np.fill_diagonal(dissim, 0.0)
    n = dissim.shape[0]
    if not 2 <= k <= n - 1:
        raise InvalidK(f"need 2 <= k <= {n - 1}, got {k}")
    merges = linkage_merges(dissim)
    raw = _cut(merges, n, k)
    return _canonical_labels(ids, raw, "hierarchical")
