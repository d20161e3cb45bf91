"""Typed, labelled in-memory hypergraph.

Vertices carry positional attribute vectors validated against their type's
schema; hyperedges are ordered and labelled. Construction is single-writer;
once `freeze()` has been called (the pipeline does this after ingestion) the
graph is read-only and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import ArityTooSmall, DuplicateId, SchemaMismatch, UnknownVertex

CATEGORICAL = "categorical"
NUMERIC = "numeric"


@dataclass(frozen=True)
class AttributeValue:
    kind: str  # CATEGORICAL or NUMERIC
    value: str | float

    def __post_init__(self):
        if self.kind == NUMERIC:
            if not isinstance(self.value, (int, float)) or not math.isfinite(self.value):
                raise SchemaMismatch(f"numeric attribute value must be finite, got {self.value!r}")
            object.__setattr__(self, "value", float(self.value))
        elif self.kind == CATEGORICAL:
            if not isinstance(self.value, str) or not self.value:
                raise SchemaMismatch(f"categorical attribute label must be a non-empty string, got {self.value!r}")
        else:
            raise SchemaMismatch(f"unknown attribute kind {self.kind!r}")


def cat(value: str) -> AttributeValue:
    return AttributeValue(CATEGORICAL, value)


def num(value: float) -> AttributeValue:
    return AttributeValue(NUMERIC, value)


@dataclass(frozen=True)
class VertexType:
    name: str
    schema: tuple[tuple[str, str], ...]  # ordered (attribute name, kind)

    def __post_init__(self):
        names = [a for a, _ in self.schema]
        if len(set(names)) != len(names):
            raise SchemaMismatch(f"duplicate attribute name in type {self.name!r}")
        for _, kind in self.schema:
            if kind not in (CATEGORICAL, NUMERIC):
                raise SchemaMismatch(f"unknown attribute kind {kind!r} in type {self.name!r}")


@dataclass(frozen=True)
class Vertex:
    id: str
    type: VertexType
    attributes: tuple[AttributeValue, ...]


@dataclass(frozen=True)
class Hyperedge:
    index: int
    label: str
    endpoints: tuple[str, ...]
    signature: tuple  # (label, (type name, ...)) derived at insertion

    @property
    def arity(self) -> int:
        return len(self.endpoints)


class Neighbour(NamedTuple):
    vertex: str
    label: str
    positions: tuple[int, int]  # (position of the queried vertex, position of the neighbour)


@dataclass
class Hypergraph:
    vertices: dict[str, Vertex] = field(default_factory=dict)
    edges: list[Hyperedge] = field(default_factory=list)
    # incidence: vertex id -> [(edge index, endpoint position), ...], one entry
    # per endpoint occurrence so self-loops expand with full multiplicity
    incidence: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    types: dict[str, VertexType] = field(default_factory=dict)
    _numeric_ranges: dict[tuple[str, str], tuple[float, float]] = field(default_factory=dict)
    _frozen: bool = False

    def _check_mutable(self):
        if self._frozen:
            raise RuntimeError("hypergraph is frozen; construction is single-writer")

    def add_vertex(self, vtype: VertexType, vid: str, attrs: Iterable) -> Vertex:
        self._check_mutable()
        if vid in self.vertices:
            raise DuplicateId(f"vertex id {vid!r} already present")
        known = self.types.get(vtype.name)
        if known is not None and known != vtype:
            raise SchemaMismatch(f"conflicting redeclaration of type {vtype.name!r}")
        coerced = tuple(self._coerce(vtype, vid, attrs))
        vertex = Vertex(vid, vtype, coerced)
        self.types.setdefault(vtype.name, vtype)
        self.vertices[vid] = vertex
        self.incidence[vid] = []
        for (name, kind), value in zip(vtype.schema, coerced):
            if kind != NUMERIC:
                continue
            key = (vtype.name, name)
            lo, hi = self._numeric_ranges.get(key, (math.inf, -math.inf))
            v = float(value.value)
            self._numeric_ranges[key] = (min(lo, v), max(hi, v))
        return vertex

    @staticmethod
    def _coerce(vtype: VertexType, vid: str, attrs: Iterable) -> list[AttributeValue]:
        attrs = list(attrs)
        if len(attrs) != len(vtype.schema):
            raise SchemaMismatch(
                f"vertex {vid!r}: expected {len(vtype.schema)} attribute(s) for type "
                f"{vtype.name!r}, got {len(attrs)}"
            )
        out = []
        for (name, kind), raw in zip(vtype.schema, attrs):
            if not isinstance(raw, AttributeValue):
                raw = AttributeValue(kind, raw)
            if raw.kind != kind:
                raise SchemaMismatch(f"vertex {vid!r}: attribute {name!r} expects {kind}, got {raw.kind}")
            out.append(raw)
        return out

    def add_hyperedge(self, label: str, endpoints: Iterable[str]) -> Hyperedge:
        self._check_mutable()
        endpoints = tuple(endpoints)
        if len(endpoints) < 2:
            raise ArityTooSmall(f"hyperedge {label!r} needs arity >= 2, got {len(endpoints)}")
        for e in endpoints:
            if e not in self.vertices:
                raise UnknownVertex(f"hyperedge {label!r} references unknown vertex {e!r}")
        signature = (label, tuple(self.vertices[e].type.name for e in endpoints))
        edge = Hyperedge(len(self.edges), label, endpoints, signature)
        self.edges.append(edge)
        for pos, e in enumerate(endpoints):
            self.incidence[e].append((edge.index, pos))
        return edge

    def freeze(self) -> "Hypergraph":
        self._frozen = True
        return self

    # -- queries ---------------------------------------------------------

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.vertices[vid]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vid!r}") from None

    def incident_edges(self, vid: str) -> list[tuple[int, int]]:
        self.vertex(vid)
        return self.incidence[vid]

    def neighbours(self, vid: str) -> list[Neighbour]:
        """Every co-endpoint of every incident edge, once per occurrence."""
        out = []
        for edge_idx, pos in self.incident_edges(vid):
            edge = self.edges[edge_idx]
            for other_pos, other in enumerate(edge.endpoints):
                if other_pos == pos:
                    continue
                out.append(Neighbour(other, edge.label, (pos, other_pos)))
        return out

    def numeric_range_width(self, type_name: str, attr: str) -> float:
        """Dataset-global range width; degenerate (min == max) ranges count as 1."""
        lo, hi = self._numeric_ranges.get((type_name, attr), (0.0, 0.0))
        width = hi - lo
        return width if width > 0.0 else 1.0

    def vertex_ids_of_type(self, type_name: str) -> list[str]:
        return [vid for vid, v in self.vertices.items() if v.type.name == type_name]

    def edge_signatures(self) -> list[tuple]:
        seen: dict[tuple, None] = {}
        for e in self.edges:
            seen.setdefault(e.signature, None)
        return list(seen)

    def edges_with_signature(self, signature: tuple) -> list[Hyperedge]:
        return [e for e in self.edges if e.signature == signature]
