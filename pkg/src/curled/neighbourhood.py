"""Depth-bounded neighbourhood trees and their multiset decomposition.

A neighbourhood tree is the breadth-layered expansion of a root vertex:
children of an occurrence are all co-endpoints of its incident edges,
skipping only the edge instance the occurrence was reached through and the
root vertex itself. Repeated visits to the same vertex are kept, which is
what makes the level contents multisets.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field

from .hypergraph import NUMERIC, Hypergraph


@dataclass(frozen=True)
class Occurrence:
    vertex: str
    in_label: str | None  # None only for the root
    in_edge: int | None   # edge index the occurrence was reached through


@dataclass(frozen=True)
class NeighbourhoodTree:
    root: str
    depth: int
    levels: tuple[tuple[Occurrence, ...], ...]  # levels[0] == (root occurrence,)
    edge_labels: tuple[Counter, ...]            # labels between level l and l+1, len == depth


@dataclass
class NTMultisets:
    """V/E/B decomposition of one tree (or of a level-wise merge of trees).

    vertex_sets:  (level, type)        -> Counter of vertex ids
    edge_labels:  list indexed by level-> Counter of edge labels
    values:       (level, type, attr)  -> Counter of attribute values
                  (floats for numeric attributes, labels for categorical)
    """

    depth: int
    vertex_sets: dict[tuple[int, str], Counter] = field(default_factory=dict)
    edge_labels: list[Counter] = field(default_factory=list)
    values: dict[tuple[int, str, str], Counter] = field(default_factory=dict)


def build_nt(graph: Hypergraph, root: str, depth: int) -> NeighbourhoodTree:
    """Expand the neighbourhood tree of `root` down to `depth` levels."""
    graph.vertex(root)
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    levels: list[tuple[Occurrence, ...]] = [(Occurrence(root, None, None),)]
    per_level_labels: list[Counter] = []
    for _ in range(depth):
        children: list[Occurrence] = []
        labels: Counter = Counter()
        for occ in levels[-1]:
            for edge_idx, pos in graph.incidence[occ.vertex]:
                if edge_idx == occ.in_edge:
                    continue
                edge = graph.edges[edge_idx]
                for other_pos, other in enumerate(edge.endpoints):
                    if other_pos == pos or other == root:
                        continue
                    children.append(Occurrence(other, edge.label, edge_idx))
                    labels[edge.label] += 1
        levels.append(tuple(children))
        per_level_labels.append(labels)
    return NeighbourhoodTree(root, depth, tuple(levels), tuple(per_level_labels))


def decompose(nt: NeighbourhoodTree, graph: Hypergraph) -> NTMultisets:
    """Split a tree into its per-level vertex, edge-label and value multisets."""
    out = NTMultisets(depth=nt.depth, edge_labels=[Counter(c) for c in nt.edge_labels])
    for level, occurrences in enumerate(nt.levels):
        for occ in occurrences:
            vertex = graph.vertices[occ.vertex]
            tname = vertex.type.name
            out.vertex_sets.setdefault((level, tname), Counter())[occ.vertex] += 1
            for (attr, _), value in zip(vertex.type.schema, vertex.attributes):
                out.values.setdefault((level, tname, attr), Counter())[value.value] += 1
    return out


def merge_multisets(parts: list[NTMultisets]) -> NTMultisets:
    """Level-wise multiset merge, the hyperedge 'union' view of its endpoints."""
    depth = max(p.depth for p in parts)
    out = NTMultisets(depth=depth, edge_labels=[Counter() for _ in range(depth)])
    for part in parts:
        for key, counter in part.vertex_sets.items():
            out.vertex_sets.setdefault(key, Counter()).update(counter)
        for key, counter in part.values.items():
            out.values.setdefault(key, Counter()).update(counter)
        for level, counter in enumerate(part.edge_labels):
            out.edge_labels[level].update(counter)
    return out


class NTForest:
    """Write-once cache of trees and decompositions for one (graph, depth)."""

    def __init__(self, graph: Hypergraph, depth: int):
        self.graph = graph
        self.depth = depth
        self._trees: dict[str, NeighbourhoodTree] = {}
        self._multisets: dict[str, NTMultisets] = {}
        self._lock = threading.Lock()

    def tree(self, vid: str) -> NeighbourhoodTree:
        nt = self._trees.get(vid)
        if nt is None:
            nt = build_nt(self.graph, vid, self.depth)
            with self._lock:
                nt = self._trees.setdefault(vid, nt)
        return nt

    def multisets(self, vid: str) -> NTMultisets:
        ms = self._multisets.get(vid)
        if ms is None:
            ms = decompose(self.tree(vid), self.graph)
            with self._lock:
                ms = self._multisets.setdefault(vid, ms)
        return ms


def format_tree(nt: NeighbourhoodTree, multisets: NTMultisets) -> str:
    """Stable text dump used by `curled inspect --nt`."""
    lines = [f"root {nt.root} depth {nt.depth}"]
    for level, occurrences in enumerate(nt.levels):
        names = sorted((o.vertex, o.in_label or "-") for o in occurrences)
        listing = " ".join(f"{v}[{lab}]" for v, lab in names) or "(empty)"
        lines.append(f"level {level}: {listing}")
    for (level, tname), counter in sorted(multisets.vertex_sets.items()):
        body = " ".join(f"{v}:{c}" for v, c in sorted(counter.items()))
        lines.append(f"V[{level}][{tname}] = {{{body}}}")
    for level, counter in enumerate(multisets.edge_labels):
        body = " ".join(f"{lab}:{c}" for lab, c in sorted(counter.items()))
        lines.append(f"E[{level}] = {{{body}}}")
    for (level, tname, attr), counter in sorted(multisets.values.items()):
        body = " ".join(f"{v}:{c}" for v, c in sorted(counter.items(), key=lambda kv: str(kv[0])))
        lines.append(f"B[{level}][{tname}][{attr}] = {{{body}}}")
    return "\n".join(lines) + "\n"


def is_numeric_attr(graph: Hypergraph, type_name: str, attr: str) -> bool:
    vtype = graph.types[type_name]
    for name, kind in vtype.schema:
        if name == attr:
            return kind == NUMERIC
    raise KeyError((type_name, attr))
