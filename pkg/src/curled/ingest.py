"""Line-based fact format and run configuration parsing.

Fact grammar (UTF-8, one statement per line, `#` starts a comment):

    type <TypeName> <attr>:<categorical|numeric> ...
    node <TypeName> <id> <value> ...
    edge <label> <id1> <id2> [... <idn>]

Config grammar is `key = value`; the `interpretation` key may repeat, one
5-weight vector per line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import (
    ArityTooSmall,
    CurledError,
    InvalidValue,
    ParseError,
    UndeclaredType,
    UnknownVertex,
)
from .hypergraph import CATEGORICAL, NUMERIC, AttributeValue, Hypergraph, VertexType

# type names and edge labels must stay manifest- and predicate-safe
_NAME_RE = re.compile(r"^[A-Za-z0-9_.+-]+$")

SPECTRAL = "spectral"
HIERARCHICAL = "hierarchical"
DIFFERENCE = "difference"
SILHOUETTE = "silhouette"
COMBINATION = "combination"
MERGING = "merging"


@dataclass(frozen=True)
class RunConfig:
    depth: int = 2
    interpretations: tuple[tuple[float, float, float, float, float], ...] = ()
    algorithms: tuple[str, ...] = (SPECTRAL, HIERARCHICAL)
    selection: str = DIFFERENCE
    alpha: float = 0.05
    k_max: int = 20
    edge_mode: str = MERGING
    layers: int = 1
    seed: int = 42


def _tokens(line: str) -> list[str]:
    code = line.split("#", 1)[0]
    return code.split()


def parse_facts(text: str) -> Hypergraph:
    """Parse the fact format into a frozen hypergraph.

    Total over arbitrary input: anything malformed raises a CurledError
    carrying the offending line number.
    """
    graph = Hypergraph()
    types: dict[str, VertexType] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokens(raw)
        if not tokens:
            continue
        stmt, args = tokens[0], tokens[1:]
        if stmt == "type":
            _parse_type(args, lineno, types)
        elif stmt == "node":
            _parse_node(args, lineno, types, graph)
        elif stmt == "edge":
            _parse_edge(args, lineno, graph)
        else:
            raise ParseError(f"unknown statement {stmt!r}", line=lineno)
    return graph.freeze()


def _parse_type(args: list[str], lineno: int, types: dict[str, VertexType]):
    if not args:
        raise ParseError("type declaration needs a name", line=lineno)
    name, specs = args[0], args[1:]
    if not _NAME_RE.match(name):
        raise ParseError(f"invalid type name {name!r}", line=lineno)
    schema = []
    for spec in specs:
        attr, sep, kind = spec.partition(":")
        if not sep or kind not in (CATEGORICAL, NUMERIC):
            raise ParseError(f"invalid attribute spec {spec!r}", line=lineno)
        if not _NAME_RE.match(attr):
            raise ParseError(f"invalid attribute name {attr!r}", line=lineno)
        schema.append((attr, kind))
    vtype = VertexType(name, tuple(schema))
    previous = types.get(name)
    if previous is not None and previous != vtype:
        raise ParseError(f"conflicting redeclaration of type {name!r}", line=lineno)
    types[name] = vtype


def _parse_node(args: list[str], lineno: int, types: dict[str, VertexType], graph: Hypergraph):
    if len(args) < 2:
        raise ParseError("node statement needs a type and an id", line=lineno)
    type_name, vid, values = args[0], args[1], args[2:]
    vtype = types.get(type_name)
    if vtype is None:
        raise UndeclaredType(f"type {type_name!r} used before declaration", line=lineno)
    if '"' in vid:
        raise ParseError(f"vertex id {vid!r} may not contain a quote", line=lineno)
    if len(values) != len(vtype.schema):
        raise ParseError(
            f"type {type_name!r} expects {len(vtype.schema)} value(s), got {len(values)}",
            line=lineno,
        )
    attrs = []
    for (attr, kind), token in zip(vtype.schema, values):
        if kind == NUMERIC:
            try:
                value = float(token)
            except ValueError:
                raise ParseError(f"attribute {attr!r} expects a number, got {token!r}", line=lineno) from None
            if not math.isfinite(value):
                raise ParseError(f"attribute {attr!r} must be finite, got {token!r}", line=lineno)
            attrs.append(AttributeValue(NUMERIC, value))
        else:
            attrs.append(AttributeValue(CATEGORICAL, token))
    try:
        graph.add_vertex(vtype, vid, attrs)
    except CurledError as exc:
        raise ParseError(str(exc), line=lineno) from None


def _parse_edge(args: list[str], lineno: int, graph: Hypergraph):
    if not args:
        raise ParseError("edge statement needs a label", line=lineno)
    label, endpoints = args[0], args[1:]
    if not _NAME_RE.match(label):
        raise ParseError(f"invalid edge label {label!r}", line=lineno)
    if len(endpoints) < 2:
        raise ArityTooSmall(f"edge {label!r} needs at least 2 endpoints", line=lineno)
    for e in endpoints:
        if e not in graph.vertices:
            raise UnknownVertex(f"edge {label!r} references undeclared node {e!r}", line=lineno)
    graph.add_hyperedge(label, endpoints)


def serialize_facts(graph: Hypergraph) -> str:
    """Emit a graph in the fact grammar; stable under repeated round trips."""
    lines = ["# fact file"]
    for vtype in graph.types.values():
        specs = " ".join(f"{a}:{k}" for a, k in vtype.schema)
        lines.append(f"type {vtype.name} {specs}".rstrip())
    for vertex in graph.vertices.values():
        values = " ".join(
            v.value if v.kind == CATEGORICAL else repr(v.value) for v in vertex.attributes
        )
        lines.append(f"node {vertex.type.name} {vertex.id} {values}".rstrip())
    for edge in graph.edges:
        lines.append(f"edge {edge.label} " + " ".join(edge.endpoints))
    return "\n".join(lines) + "\n"


# -- run configuration -----------------------------------------------------

_CONFIG_DEFAULTS = RunConfig()
_SCALAR_KEYS = {"depth", "algorithms", "selection", "alpha", "k_max", "edge_mode", "layers", "seed"}


def parse_config(text: str) -> RunConfig:
    """Parse `key = value` lines into a RunConfig, applying defaults."""
    seen: dict[str, int] = {}
    fields: dict = {}
    interpretations: list[tuple[float, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0].strip()
        if not code:
            continue
        key, sep, value = code.partition("=")
        if not sep:
            raise ParseError(f"expected 'key = value', got {code!r}", line=lineno)
        key, value = key.strip(), value.strip()
        if key == "interpretation":
            interpretations.append(_parse_weights(value, lineno))
            continue
        if key not in _SCALAR_KEYS:
            raise ParseError(f"unknown configuration key {key!r}", line=lineno)
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first on line {seen[key]})", line=lineno)
        seen[key] = lineno
        fields[key] = _parse_scalar(key, value, lineno)
    if interpretations:
        fields["interpretations"] = tuple(interpretations)
    return RunConfig(**fields)


def _parse_weights(value: str, lineno: int) -> tuple[float, ...]:
    tokens = value.replace(",", " ").split()
    if len(tokens) != 5:
        raise InvalidValue(f"interpretation needs 5 weights, got {len(tokens)}", line=lineno)
    try:
        weights = tuple(float(t) for t in tokens)
    except ValueError:
        raise ParseError(f"non-numeric weight in {value!r}", line=lineno) from None
    if any(not math.isfinite(w) or w < 0 for w in weights):
        raise InvalidValue("weights must be finite and >= 0", line=lineno)
    if not any(w > 0 for w in weights):
        raise InvalidValue("at least one weight must be > 0", line=lineno)
    return weights


def _parse_scalar(key: str, value: str, lineno: int):
    if key in ("depth", "k_max", "layers", "seed"):
        try:
            parsed = int(value)
        except ValueError:
            raise ParseError(f"{key} expects an integer, got {value!r}", line=lineno) from None
        minimum = {"depth": 1, "k_max": 2, "layers": 1, "seed": -(2**63)}[key]
        if parsed < minimum:
            raise InvalidValue(f"{key} must be >= {minimum}", line=lineno)
        return parsed
    if key == "alpha":
        try:
            parsed = float(value)
        except ValueError:
            raise ParseError(f"alpha expects a number, got {value!r}", line=lineno) from None
        if not math.isfinite(parsed) or parsed <= 0:
            raise InvalidValue("alpha must be a finite positive number", line=lineno)
        return parsed
    if key == "algorithms":
        algos = tuple(value.replace(",", " ").split())
        if not algos or any(a not in (SPECTRAL, HIERARCHICAL) for a in algos):
            raise InvalidValue(f"algorithms must be a subset of {{{SPECTRAL}, {HIERARCHICAL}}}", line=lineno)
        if len(set(algos)) != len(algos):
            raise InvalidValue("repeated algorithm", line=lineno)
        return algos
    if key == "selection":
        if value not in (DIFFERENCE, SILHOUETTE):
            raise InvalidValue(f"selection must be {DIFFERENCE} or {SILHOUETTE}", line=lineno)
        return value
    if key == "edge_mode":
        if value not in (COMBINATION, MERGING):
            raise InvalidValue(f"edge_mode must be {COMBINATION} or {MERGING}", line=lineno)
        return value
    raise AssertionError(key)


def serialize_config(config: RunConfig) -> str:
    """Echo a RunConfig in the config grammar (used for the run directory)."""
    lines = [
        f"depth = {config.depth}",
    ]
    for weights in config.interpretations:
        lines.append("interpretation = " + " ".join(repr(w) for w in weights))
    lines += [
        "algorithms = " + " ".join(config.algorithms),
        f"selection = {config.selection}",
        f"alpha = {config.alpha!r}",
        f"k_max = {config.k_max}",
        f"edge_mode = {config.edge_mode}",
        f"layers = {config.layers}",
        f"seed = {config.seed}",
    ]
    return "\n".join(lines) + "\n"
