"""Flat array encoding of neighbourhood multisets for the pairwise kernels.

A group of comparable objects (all vertices of one type, or all hyperedges of
one signature) is encoded once: every (level, type, attribute) value multiset,
(level, type) vertex multiset and per-level edge-label multiset becomes a
"slot". Categorical and identity slots become CSR runs of sorted value codes;
numeric slots carry running sums and counts so the kernel can compare means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph
from .neighbourhood import NTMultisets, is_numeric_attr

# slot component tags consumed by the kernels
ROOT_ATTRS = 0
NEIGHBOUR_ATTRS = 1
VERTEX_SET = 2
EDGE_LABELS = 4


@dataclass
class GroupEncoding:
    n_objects: int
    slot_comp: np.ndarray
    slot_is_num: np.ndarray
    slot_range: np.ndarray
    ms_index: np.ndarray
    num_index: np.ndarray
    n_ms: int
    indptr: np.ndarray
    codes: np.ndarray
    counts: np.ndarray
    num_sum: np.ndarray
    num_cnt: np.ndarray


def encode_group(graph: Hypergraph, profiles: list[NTMultisets]) -> GroupEncoding:
    n = len(profiles)
    max_depth = max(p.depth for p in profiles) if profiles else 0

    value_keys: set[tuple[int, str, str]] = set()
    vertex_keys: set[tuple[int, str]] = set()
    edge_levels: set[int] = set()
    for p in profiles:
        value_keys.update(p.values)
        vertex_keys.update(k for k in p.vertex_sets if k[0] >= 1)
        edge_levels.update(l for l in range(max_depth) if l < len(p.edge_labels) and p.edge_labels[l])

    # deterministic slot order: component tag, then the structural key
    slots: list[tuple[int, tuple]] = []
    for level, tname, attr in sorted(value_keys):
        comp = ROOT_ATTRS if level == 0 else NEIGHBOUR_ATTRS
        slots.append((comp, (level, tname, attr)))
    for key in sorted(vertex_keys):
        slots.append((VERTEX_SET, key))
    for level in sorted(edge_levels):
        slots.append((EDGE_LABELS, (level,)))

    ns = len(slots)
    slot_comp = np.zeros(ns, dtype=np.int64)
    slot_is_num = np.zeros(ns, dtype=np.bool_)
    slot_range = np.ones(ns, dtype=np.float64)
    ms_index = np.full(ns, -1, dtype=np.int64)
    num_index = np.full(ns, -1, dtype=np.int64)

    code_maps: list[dict | None] = []
    n_ms = 0
    n_num = 0
    for s, (comp, key) in enumerate(slots):
        slot_comp[s] = comp
        if comp in (ROOT_ATTRS, NEIGHBOUR_ATTRS):
            level, tname, attr = key
            if is_numeric_attr(graph, tname, attr):
                slot_is_num[s] = True
                slot_range[s] = graph.numeric_range_width(tname, attr)
                num_index[s] = n_num
                n_num += 1
                code_maps.append(None)
                continue
        universe: set = set()
        for p in profiles:
            counter = _slot_counter(p, comp, key)
            if counter:
                universe.update(counter)
        code_maps.append({v: c for c, v in enumerate(sorted(universe, key=str))})
        ms_index[s] = n_ms
        n_ms += 1

    indptr = np.zeros(n * n_ms + 1, dtype=np.int64)
    codes_acc: list[np.ndarray] = []
    counts_acc: list[np.ndarray] = []
    num_sum = np.zeros((n, max(n_num, 1)), dtype=np.float64)
    num_cnt = np.zeros((n, max(n_num, 1)), dtype=np.float64)

    nnz = 0
    for i, p in enumerate(profiles):
        for s, (comp, key) in enumerate(slots):
            if slot_is_num[s]:
                counter = _slot_counter(p, comp, key)
                if counter:
                    q = num_index[s]
                    num_sum[i, q] = float(sum(v * c for v, c in counter.items()))
                    num_cnt[i, q] = float(sum(counter.values()))
                continue
            m = ms_index[s]
            counter = _slot_counter(p, comp, key)
            if counter:
                code_map = code_maps[s]
                pairs = sorted((code_map[v], float(c)) for v, c in counter.items())
                codes_acc.append(np.fromiter((c for c, _ in pairs), dtype=np.int64, count=len(pairs)))
                counts_acc.append(np.fromiter((c for _, c in pairs), dtype=np.float64, count=len(pairs)))
                nnz += len(pairs)
            indptr[i * n_ms + m + 1] = nnz

    codes = np.concatenate(codes_acc) if codes_acc else np.zeros(0, dtype=np.int64)
    counts = np.concatenate(counts_acc) if counts_acc else np.zeros(0, dtype=np.float64)
    return GroupEncoding(
        n_objects=n,
        slot_comp=slot_comp,
        slot_is_num=slot_is_num,
        slot_range=slot_range,
        ms_index=ms_index,
        num_index=num_index,
        n_ms=max(n_ms, 1),
        indptr=np.zeros(n * max(n_ms, 1) + 1, dtype=np.int64) if n_ms == 0 else indptr,
        codes=codes,
        counts=counts,
        num_sum=num_sum,
        num_cnt=num_cnt,
    )


def _slot_counter(p: NTMultisets, comp: int, key: tuple):
    if comp in (ROOT_ATTRS, NEIGHBOUR_ATTRS):
        return p.values.get(key)
    if comp == VERTEX_SET:
        return p.vertex_sets.get(key)
    level = key[0]
    if level < len(p.edge_labels):
        return p.edge_labels[level]
    return None
