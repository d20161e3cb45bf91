"""Hot numeric kernels, written once and compiled two ways.

`build_kernels(decorate)` returns the kernel set; the numba backend passes
``njit`` as the decorator, the numpy fallback passes identity. Keeping a
single source guarantees both paths execute the same floating-point
operations in the same order.

Encoded group layout consumed by the dissimilarity kernels:
  slot_comp[s]   0 root attributes, 1 neighbour attributes,
                 2 vertex multiset (feeds connectivity + identity),
                 4 edge labels
  slot_is_num[s] numeric slots compare scaled means instead of histograms
  slot_range[s]  dataset-global range width for numeric slots, else 1.0
  ms_index / num_index map a slot to its multiset or numeric column
  indptr/codes/counts  CSR of per-(object, multiset slot) sorted code runs
  num_sum/num_cnt      per-(object, numeric slot) value sums and counts
"""

from __future__ import annotations

import numpy as np


def build_kernels(decorate):
    @decorate
    def pair_components(
        i, j, slot_comp, slot_is_num, slot_range, ms_index, num_index, n_ms,
        indptr, codes, counts, num_sum, num_cnt, comp_sums, comp_cnts,
    ):
        for c in range(5):
            comp_sums[c] = 0.0
            comp_cnts[c] = 0.0
        for s in range(slot_comp.shape[0]):
            comp = slot_comp[s]
            if slot_is_num[s]:
                q = num_index[s]
                ci = num_cnt[i, q]
                cj = num_cnt[j, q]
                if ci == 0.0 and cj == 0.0:
                    continue
                if ci > 0.0 and cj > 0.0:
                    dist = abs(num_sum[i, q] / ci - num_sum[j, q] / cj) / slot_range[s]
                    if dist > 1.0:
                        dist = 1.0
                else:
                    dist = 1.0
                comp_sums[comp] += dist
                comp_cnts[comp] += 1.0
                continue
            m = ms_index[s]
            a0 = indptr[i * n_ms + m]
            a1 = indptr[i * n_ms + m + 1]
            b0 = indptr[j * n_ms + m]
            b1 = indptr[j * n_ms + m + 1]
            if a0 == a1 and b0 == b1:
                continue
            na = 0.0
            for p in range(a0, a1):
                na += counts[p]
            nb = 0.0
            for p in range(b0, b1):
                nb += counts[p]
            if comp == 2:
                mx = na if na > nb else nb
                if mx < 1.0:
                    mx = 1.0
                comp_sums[2] += abs(na - nb) / mx
                comp_cnts[2] += 1.0
                inter = 0.0
                union = 0.0
                p = a0
                q = b0
                while p < a1 or q < b1:
                    if q >= b1 or (p < a1 and codes[p] < codes[q]):
                        union += counts[p]
                        p += 1
                    elif p >= a1 or codes[q] < codes[p]:
                        union += counts[q]
                        q += 1
                    else:
                        ca = counts[p]
                        cb = counts[q]
                        inter += ca if ca < cb else cb
                        union += ca if ca > cb else cb
                        p += 1
                        q += 1
                if inter > union:
                    inter = union
                comp_sums[3] += 1.0 - inter / union
                comp_cnts[3] += 1.0
            else:
                if na == 0.0 or nb == 0.0:
                    dist = 1.0
                else:
                    acc = 0.0
                    p = a0
                    q = b0
                    while p < a1 or q < b1:
                        if q >= b1 or (p < a1 and codes[p] < codes[q]):
                            acc += counts[p] / na
                            p += 1
                        elif p >= a1 or codes[q] < codes[p]:
                            acc += counts[q] / nb
                            q += 1
                        else:
                            d = counts[p] / na - counts[q] / nb
                            acc += d if d >= 0.0 else -d
                            p += 1
                            q += 1
                    dist = 0.5 * acc
                    if dist > 1.0:
                        dist = 1.0
                comp_sums[comp] += dist
                comp_cnts[comp] += 1.0

    @decorate
    def combine_weighted(comp_sums, comp_cnts, weights):
        present_weight = 0.0
        acc = 0.0
        for c in range(5):
            if comp_cnts[c] > 0.0:
                present_weight += weights[c]
                acc += weights[c] * (comp_sums[c] / comp_cnts[c])
        if present_weight <= 0.0:
            return -1.0  # no comparable weighted component
        return acc / present_weight

    @decorate
    def dissimilarity_matrix(
        n_obj, weights, slot_comp, slot_is_num, slot_range, ms_index, num_index,
        n_ms, indptr, codes, counts, num_sum, num_cnt,
    ):
        out = np.zeros((n_obj, n_obj))
        comp_sums = np.zeros(5)
        comp_cnts = np.zeros(5)
        for i in range(n_obj):
            for j in range(i + 1, n_obj):
                pair_components(
                    i, j, slot_comp, slot_is_num, slot_range, ms_index, num_index,
                    n_ms, indptr, codes, counts, num_sum, num_cnt, comp_sums, comp_cnts,
                )
                d = combine_weighted(comp_sums, comp_cnts, weights)
                out[i, j] = d
                out[j, i] = d
        return out

    @decorate
    def average_linkage(dissim):
        """Merge sequence under average linkage over cluster slots.

        Slot index doubles as the cluster's smallest member, so keeping the
        first minimum in ascending (i, j) order realizes the documented
        tie-break on equal merge costs.
        """
        n = dissim.shape[0]
        sums = dissim.copy()
        size = np.ones(n)
        active = np.ones(n, np.bool_)
        left = np.empty(n - 1, np.int64)
        right = np.empty(n - 1, np.int64)
        for step in range(n - 1):
            best_i = -1
            best_j = -1
            best = 0.0
            for i in range(n):
                if not active[i]:
                    continue
                for j in range(i + 1, n):
                    if not active[j]:
                        continue
                    cost = sums[i, j] / (size[i] * size[j])
                    if best_i < 0 or cost < best:
                        best = cost
                        best_i = i
                        best_j = j
            left[step] = best_i
            right[step] = best_j
            for c in range(n):
                if active[c] and c != best_i and c != best_j:
                    merged = sums[best_i, c] + sums[best_j, c]
                    sums[best_i, c] = merged
                    sums[c, best_i] = merged
            size[best_i] += size[best_j]
            active[best_j] = False
        return left, right

    @decorate
    def farthest_first(points, k, first):
        n = points.shape[0]
        dim = points.shape[1]
        chosen = np.empty(k, np.int64)
        chosen[0] = first
        min_dist = np.full(n, np.inf)
        for c in range(1, k):
            prev = chosen[c - 1]
            for i in range(n):
                d = 0.0
                for t in range(dim):
                    diff = points[i, t] - points[prev, t]
                    d += diff * diff
                if d < min_dist[i]:
                    min_dist[i] = d
            best = 0
            best_val = -1.0
            for i in range(n):
                if min_dist[i] > best_val:
                    best_val = min_dist[i]
                    best = i
            chosen[c] = best
        return chosen

    @decorate
    def lloyd(points, centers_init, max_iter, tol):
        n = points.shape[0]
        dim = points.shape[1]
        k = centers_init.shape[0]
        centers = centers_init.copy()
        labels = np.zeros(n, np.int64)
        for _ in range(max_iter):
            changed = False
            for i in range(n):
                best = 0
                best_d = np.inf
                for c in range(k):
                    d = 0.0
                    for t in range(dim):
                        diff = points[i, t] - centers[c, t]
                        d += diff * diff
                    if d < best_d:
                        best_d = d
                        best = c
                if labels[i] != best:
                    labels[i] = best
                    changed = True
            new_centers = np.zeros((k, dim))
            members = np.zeros(k)
            for i in range(n):
                members[labels[i]] += 1.0
                for t in range(dim):
                    new_centers[labels[i], t] += points[i, t]
            shift = 0.0
            for c in range(k):
                if members[c] > 0.0:
                    for t in range(dim):
                        new_centers[c, t] /= members[c]
                else:
                    # re-seed an emptied cluster on the point farthest from
                    # its current center; deterministic first-max keeps runs
                    # reproducible
                    far = -1.0
                    far_i = 0
                    for i in range(n):
                        d = 0.0
                        for t in range(dim):
                            diff = points[i, t] - centers[labels[i], t]
                            d += diff * diff
                        if d > far:
                            far = d
                            far_i = i
                    for t in range(dim):
                        new_centers[c, t] = points[far_i, t]
                    changed = True
                for t in range(dim):
                    diff = new_centers[c, t] - centers[c, t]
                    shift += diff * diff
            centers = new_centers
            if not changed and shift <= tol:
                break
        return labels

    class KernelSet:
        pass

    kernels = KernelSet()
    kernels.pair_components = pair_components
    kernels.combine_weighted = combine_weighted
    kernels.dissimilarity_matrix = dissimilarity_matrix
    kernels.average_linkage = average_linkage
    kernels.farthest_first = farthest_first
    kernels.lloyd = lloyd
    return kernels
