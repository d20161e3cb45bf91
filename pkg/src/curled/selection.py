"""Cluster-count selection: knee criterion and silhouette index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import Partition, hierarchical_cluster, spectral_cluster
from .errors import (
    CurledError,
    DegenerateMatrix,
    InvalidPartition,
    MissingNeighbourValue,
    RangeTooSmall,
)
from .ingest import DIFFERENCE, HIERARCHICAL, SILHOUETTE, SPECTRAL
from .similarity import SimilarityMatrix

DENOMINATOR_FLOOR = 1e-9


@dataclass(frozen=True)
class SelectionReport:
    criterion: str
    candidates: tuple[int, ...]
    scores: tuple  # float per candidate, None where not a candidate
    chosen_k: int
    chosen_score: float | None

    def __post_init__(self):
        valid = [(k, s) for k, s in zip(self.candidates, self.scores) if s is not None]
        if valid:
            best_k = max(valid, key=lambda ks: (ks[1], -ks[0]))[0]
            assert best_k == self.chosen_k, "chosen k must be the argmax of the recorded scores"


def _dissim_and_ids(matrix):
    if isinstance(matrix, SimilarityMatrix):
        dissim = 1.0 - np.asarray(matrix.values, dtype=np.float64)
        np.fill_diagonal(dissim, 0.0)
        return dissim, matrix.ids
    arr = np.ascontiguousarray(matrix, dtype=np.float64)
    return arr, tuple(range(arr.shape[0]))


def _label_array(partition: Partition, ids) -> np.ndarray:
    return np.fromiter((partition.labels[i] for i in ids), dtype=np.int64, count=len(ids))


def intra_cluster_dissimilarity(matrix, partition: Partition) -> float:
    """Mean within-cluster pairwise dissimilarity, weighted by pair counts."""
    dissim, ids = _dissim_and_ids(matrix)
    labels = _label_array(partition, ids)
    total = 0.0
    pairs = 0
    for c in range(partition.k):
        idx = np.flatnonzero(labels == c)
        if len(idx) < 2:
            continue
        block = dissim[np.ix_(idx, idx)]
        total += block.sum() / 2.0
        pairs += len(idx) * (len(idx) - 1) // 2
    return total / pairs if pairs else 0.0


def difference_criterion(values: dict[int, float], k: int, alpha: float):
    """Knee score at k from the intra-cluster curve.

    Returns None when the denominator is numerically zero (k is then not a
    candidate).
    """
    if k < 2:
        raise MissingNeighbourValue(f"the knee score needs k >= 2, got {k}")
    for neighbour in (k - 1, k, k + 1):
        if neighbour not in values:
            raise MissingNeighbourValue(f"intra-cluster value at k={neighbour} is missing")
    denominator = values[k] - values[k + 1]
    if abs(denominator) < DENOMINATOR_FLOOR:
        return None
    return abs((values[k - 1] - values[k]) / denominator) - alpha * k


def silhouette_index(matrix, partition: Partition) -> float:
    """Mean silhouette over all objects; singletons score 0."""
    if partition.k < 2:
        raise InvalidPartition(f"silhouette needs at least 2 clusters, got {partition.k}")
    dissim, ids = _dissim_and_ids(matrix)
    labels = _label_array(partition, ids)
    n = len(ids)
    members = [np.flatnonzero(labels == c) for c in range(partition.k)]
    total = 0.0
    for i in range(n):
        own = members[labels[i]]
        if len(own) < 2:
            continue  # singleton scores 0
        a = dissim[i, own].sum() / (len(own) - 1)
        b = min(
            dissim[i, other].mean()
            for c, other in enumerate(members)
            if c != labels[i]
        )
        denom = max(a, b)
        if denom > 0:
            total += (b - a) / denom
    return total / n


def _run_clustering(matrix, algorithm: str, k: int, seed: int) -> Partition:
    if algorithm == SPECTRAL:
        return spectral_cluster(matrix, k, seed)
    if algorithm == HIERARCHICAL:
        return hierarchical_cluster(matrix, k)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def select_k(
    matrix,
    algorithm: str,
    criterion: str,
    k_max: int,
    seed: int,
    alpha: float = 0.05,
) -> tuple[Partition, SelectionReport]:
    """Cluster at every candidate k, score, and keep the argmax (ties: smallest k)."""
    dissim, ids = _dissim_and_ids(matrix)
    n = len(ids)

    if n < 4:
        # too small to score: fixed k = min(2, n)
        if n == 2:
            partition = Partition({ids[0]: 0, ids[1]: 1}, 2, algorithm, seed)
        else:
            partition = _run_clustering(matrix, algorithm, 2, seed)
        return partition, SelectionReport("fixed-small-group", (), (), 2, None)

    k_cap = min(k_max, n - 1)
    if criterion == SILHOUETTE:
        candidates = list(range(2, k_cap + 1))
        needed = candidates
    elif criterion == DIFFERENCE:
        if k_cap < 3:
            raise RangeTooSmall(f"the knee criterion needs k_max >= 3, got {k_cap}")
        candidates = list(range(2, k_cap))
        needed = list(range(2, k_cap + 1))
    else:
        raise ValueError(f"unknown criterion {criterion!r}")

    partitions: dict[int, Partition] = {}
    failures: dict[int, CurledError] = {}
    for k in needed:
        try:
            partitions[k] = _run_clustering(matrix, algorithm, k, seed)
        except CurledError as exc:
            failures[k] = exc

    if criterion == SILHOUETTE:
        tag = SILHOUETTE
        scores = [
            silhouette_index(matrix, partitions[k]) if k in partitions else None
            for k in candidates
        ]
    else:
        tag = f"difference(alpha={alpha!r})"
        curve = {1: float(dissim.sum() / (n * (n - 1)))}
        for k, partition in partitions.items():
            curve[k] = intra_cluster_dissimilarity(matrix, partition)
        scores = []
        for k in candidates:
            if k in partitions and k - 1 in curve and k + 1 in curve:
                scores.append(difference_criterion(curve, k, alpha))
            else:
                scores.append(None)

    chosen_k = None
    chosen_score = None
    for k, score in zip(candidates, scores):
        if score is not None and (chosen_score is None or score > chosen_score):
            chosen_k, chosen_score = k, score
    if chosen_k is None:
        first_failure = next(iter(failures.values()), None)
        if first_failure is not None and not partitions:
            raise first_failure
        raise DegenerateMatrix("no candidate cluster count could be scored")

    report = SelectionReport(tag, tuple(candidates), tuple(scores), chosen_k, chosen_score)
    return partitions[chosen_k], report
