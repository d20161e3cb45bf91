"""Dissimilarities between neighbourhood trees and pairwise matrices.

Five bounded core dissimilarities are read off the multiset decomposition:

  root attributes      value distance on the roots' own attributes
  neighbour attributes value distance per (level, type, attribute)
  connectivity         relative size difference of the vertex multisets
  vertex identity      multiset Jaccard distance of the vertex multisets
  edge labels          total-variation distance of the label histograms

An interpretation weights them; components with no comparable data on either
side are absent and their weight is redistributed over the present ones.
Hyperedges are compared either position-wise (combination) or by level-wise
merging of their endpoint trees.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from .errors import (
    NoComparableComponent,
    SignatureMismatch,
    TooFewObjects,
    TypeMismatch,
)
from .hypergraph import Hyperedge, Hypergraph
from .ingest import COMBINATION, MERGING
from .neighbourhood import (
    NeighbourhoodTree,
    NTForest,
    NTMultisets,
    decompose,
    merge_multisets,
)
from .profiles import encode_group

SUMMARIZERS = ("mean", "min", "max")


@dataclass(frozen=True)
class SimilarityInterpretation:
    """Weight vector over the five core dissimilarities, stored normalized."""

    raw: tuple[float, float, float, float, float]
    weights: tuple[float, float, float, float, float]

    @classmethod
    def of(cls, raw) -> "SimilarityInterpretation":
        raw = tuple(float(w) for w in raw)
        if len(raw) != 5:
            raise ValueError(f"an interpretation has 5 weights, got {len(raw)}")
        if any(not math.isfinite(w) or w < 0 for w in raw):
            raise ValueError(f"weights must be finite and >= 0, got {raw}")
        total = sum(raw)
        if total <= 0:
            raise ValueError("at least one weight must be > 0")
        return cls(raw, tuple(w / total for w in raw))


@dataclass(frozen=True)
class CoreDissimilarityVector:
    root_attributes: float | None
    neighbour_attributes: float | None
    connectivity: float | None
    vertex_identity: float | None
    edge_labels: float | None

    def as_tuple(self):
        return (
            self.root_attributes,
            self.neighbour_attributes,
            self.connectivity,
            self.vertex_identity,
            self.edge_labels,
        )


@dataclass(frozen=True)
class SimilarityMatrix:
    ids: tuple
    values: np.ndarray  # symmetric, unit diagonal, entries in [0, 1]
    interpretation: SimilarityInterpretation
    group: tuple  # ("vertex", type) or ("edge", label, (types...))
    mode: str | None
    depth: int


# -- multiset primitives -----------------------------------------------------

def tv_distance(a, b) -> float:
    """Total-variation distance of the normalized frequency distributions."""
    a, b = Counter(a), Counter(b)
    na, nb = sum(a.values()), sum(b.values())
    if na == 0 and nb == 0:
        return 0.0
    if na == 0 or nb == 0:
        return 1.0
    acc = 0.0
    for key in sorted(set(a) | set(b), key=str):
        acc += abs(a.get(key, 0) / na - b.get(key, 0) / nb)
    return min(0.5 * acc, 1.0)


def jaccard_multiset(a, b) -> float:
    """Multiset Jaccard overlap with min/max multiplicity semantics."""
    a, b = Counter(a), Counter(b)
    if not a and not b:
        return 1.0
    inter = 0.0
    union = 0.0
    for key in set(a) | set(b):
        inter += min(a.get(key, 0), b.get(key, 0))
        union += max(a.get(key, 0), b.get(key, 0))
    return inter / union


# -- pair comparisons ---------------------------------------------------------

def _pair_raw(graph: Hypergraph, left: NTMultisets, right: NTMultisets):
    enc = encode_group(graph, [left, right])
    sums = np.zeros(5)
    cnts = np.zeros(5)
    kernels.pair_components(
        0, 1, enc.slot_comp, enc.slot_is_num, enc.slot_range, enc.ms_index,
        enc.num_index, enc.n_ms, enc.indptr, enc.codes, enc.counts,
        enc.num_sum, enc.num_cnt, sums, cnts,
    )
    return sums, cnts


def _vector_from(sums, cnts) -> CoreDissimilarityVector:
    comps = [sums[c] / cnts[c] if cnts[c] > 0 else None for c in range(5)]
    return CoreDissimilarityVector(*comps)


def _combine(sums, cnts, interpretation: SimilarityInterpretation) -> float:
    weights = np.asarray(interpretation.weights)
    return float(kernels.combine_weighted(sums, cnts, weights))


def core_dissimilarities(
    nt1: NeighbourhoodTree, nt2: NeighbourhoodTree, graph: Hypergraph
) -> CoreDissimilarityVector:
    """The five component dissimilarities; absent components come back None."""
    t1 = graph.vertex(nt1.root).type.name
    t2 = graph.vertex(nt2.root).type.name
    if t1 != t2:
        raise TypeMismatch(f"cannot compare roots of types {t1!r} and {t2!r}")
    if nt1.depth != nt2.depth:
        raise TypeMismatch(f"cannot compare trees of depths {nt1.depth} and {nt2.depth}")
    sums, cnts = _pair_raw(graph, decompose(nt1, graph), decompose(nt2, graph))
    return _vector_from(sums, cnts)


def nt_dissimilarity(
    nt1: NeighbourhoodTree,
    nt2: NeighbourhoodTree,
    interpretation: SimilarityInterpretation,
    graph: Hypergraph,
) -> float:
    t1 = graph.vertex(nt1.root).type.name
    t2 = graph.vertex(nt2.root).type.name
    if t1 != t2:
        raise TypeMismatch(f"cannot compare roots of types {t1!r} and {t2!r}")
    if nt1.depth != nt2.depth:
        raise TypeMismatch(f"cannot compare trees of depths {nt1.depth} and {nt2.depth}")
    sums, cnts = _pair_raw(graph, decompose(nt1, graph), decompose(nt2, graph))
    value = _combine(sums, cnts, interpretation)
    if value < 0:
        raise NoComparableComponent("every weighted component is absent for this pair")
    return value


def _check_signature(e1: Hyperedge, e2: Hyperedge):
    if e1.signature != e2.signature:
        raise SignatureMismatch(f"cannot compare edges with signatures {e1.signature} and {e2.signature}")


def _summarize(values: list[float], summarizer: str) -> float:
    if summarizer == "mean":
        acc = 0.0
        for v in values:
            acc += v
        return acc / len(values)
    if summarizer == "min":
        return min(values)
    if summarizer == "max":
        return max(values)
    raise ValueError(f"summarizer must be one of {SUMMARIZERS}, got {summarizer!r}")


def edge_dissimilarity_combination(
    e1: Hyperedge,
    e2: Hyperedge,
    interpretation: SimilarityInterpretation,
    graph: Hypergraph,
    depth: int,
    summarizer: str = "mean",
    forest: NTForest | None = None,
) -> float:
    """Position-wise tree dissimilarity, summarized across the endpoints.

    Positions where no weighted component is comparable are skipped, mirroring
    the weight redistribution done inside a single tree comparison.
    """
    _check_signature(e1, e2)
    forest = forest or NTForest(graph, depth)
    values = []
    for a, b in zip(e1.endpoints, e2.endpoints):
        sums, cnts = _pair_raw(graph, forest.multisets(a), forest.multisets(b))
        value = _combine(sums, cnts, interpretation)
        if value >= 0:
            values.append(value)
    if not values:
        raise NoComparableComponent("no endpoint position is comparable under this interpretation")
    return _summarize(values, summarizer)


def merged_edge_multisets(graph: Hypergraph, edge: Hyperedge, forest: NTForest) -> NTMultisets:
    return merge_multisets([forest.multisets(v) for v in edge.endpoints])


def edge_dissimilarity_merging(
    e1: Hyperedge,
    e2: Hyperedge,
    interpretation: SimilarityInterpretation,
    graph: Hypergraph,
    depth: int,
    forest: NTForest | None = None,
) -> float:
    """Dissimilarity of the level-wise merges of each edge's endpoint trees."""
    _check_signature(e1, e2)
    forest = forest or NTForest(graph, depth)
    sums, cnts = _pair_raw(
        graph,
        merged_edge_multisets(graph, e1, forest),
        merged_edge_multisets(graph, e2, forest),
    )
    value = _combine(sums, cnts, interpretation)
    if value < 0:
        raise NoComparableComponent("every weighted component is absent for this pair")
    return value


# -- group matrices ------------------------------------------------------------

def _encoded_dissim_matrix(graph, profiles, interpretation, keep_sentinel: bool = False) -> np.ndarray:
    enc = encode_group(graph, profiles)
    weights = np.asarray(interpretation.weights)
    dissim = kernels.dissimilarity_matrix(
        enc.n_objects, weights, enc.slot_comp, enc.slot_is_num, enc.slot_range,
        enc.ms_index, enc.num_index, enc.n_ms, enc.indptr, enc.codes, enc.counts,
        enc.num_sum, enc.num_cnt,
    )
    if not keep_sentinel:
        # pairs with no comparable weighted component are indistinguishable
        # under this interpretation: distance 0
        dissim[dissim < 0] = 0.0
    return dissim


def vertex_group_ids(graph: Hypergraph, type_name: str) -> list[str]:
    return sorted(graph.vertex_ids_of_type(type_name))


def edge_group_members(graph: Hypergraph, signature: tuple) -> list[Hyperedge]:
    return sorted(graph.edges_with_signature(signature), key=lambda e: (e.endpoints, e.index))


def vertex_dissimilarity_matrix(
    graph: Hypergraph,
    ids: list[str],
    interpretation: SimilarityInterpretation,
    forest: NTForest,
) -> np.ndarray:
    return _encoded_dissim_matrix(graph, [forest.multisets(v) for v in ids], interpretation)


def edge_dissimilarity_matrix(
    graph: Hypergraph,
    edges: list[Hyperedge],
    interpretation: SimilarityInterpretation,
    mode: str,
    forest: NTForest,
) -> np.ndarray:
    if mode == MERGING:
        profiles = [merged_edge_multisets(graph, e, forest) for e in edges]
        return _encoded_dissim_matrix(graph, profiles, interpretation)
    if mode != COMBINATION:
        raise ValueError(f"edge mode must be {COMBINATION} or {MERGING}, got {mode!r}")

    arity = len(edges[0].endpoints)
    by_type: dict[str, np.ndarray] = {}
    index_of: dict[str, dict[str, int]] = {}
    for pos in range(arity):
        tname = edges[0].signature[1][pos]
        if tname in by_type:
            continue
        members = sorted({e.endpoints[p] for e in edges for p in range(arity) if e.signature[1][p] == tname})
        index_of[tname] = {v: i for i, v in enumerate(members)}
        by_type[tname] = _encoded_dissim_matrix(
            graph, [forest.multisets(v) for v in members], interpretation, keep_sentinel=True
        )

    n = len(edges)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            present = 0
            for pos in range(arity):
                tname = edges[0].signature[1][pos]
                block = by_type[tname]
                lookup = index_of[tname]
                value = block[lookup[edges[i].endpoints[pos]], lookup[edges[j].endpoints[pos]]]
                if value >= 0:
                    acc += value
                    present += 1
            out[i, j] = out[j, i] = acc / present if present else 0.0
    return out


def similarity_matrix(
    group,
    interpretation: SimilarityInterpretation,
    graph: Hypergraph,
    depth: int,
    mode: str = MERGING,
    forest: NTForest | None = None,
) -> SimilarityMatrix:
    """Pairwise similarity (1 - dissimilarity) over one comparable group.

    `group` is either a vertex type name or an edge signature tuple
    (label, (endpoint types...)). Object order is deterministic: vertex ids
    sorted lexicographically, edges by (endpoints, insertion index).
    """
    forest = forest or NTForest(graph, depth)
    if isinstance(group, str):
        ids = vertex_group_ids(graph, group)
        if len(ids) < 2:
            raise TooFewObjects(f"vertex type {group!r} has {len(ids)} object(s); need at least 2")
        dissim = vertex_dissimilarity_matrix(graph, ids, interpretation, forest)
        group_key = ("vertex", group)
        obj_ids = tuple(ids)
        mode_used = None
    else:
        label, types = group
        edges = edge_group_members(graph, (label, tuple(types)))
        if len(edges) < 2:
            raise TooFewObjects(f"edge signature {group!r} has {len(edges)} object(s); need at least 2")
        dissim = edge_dissimilarity_matrix(graph, edges, interpretation, mode, forest)
        group_key = ("edge", label, tuple(types))
        obj_ids = tuple(e.index for e in edges)
        mode_used = mode
    values = 1.0 - dissim
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(obj_ids, values, interpretation, group_key, mode_used, depth)


def matrix_to_tsv(matrix: SimilarityMatrix) -> str:
    header = "\t".join(str(i) for i in matrix.ids)
    lines = [header]
    for i in range(len(matrix.ids)):
        lines.append("\t".join(repr(v) for v in matrix.values[i]))
    return "\n".join(lines) + "\n"
