"""Leiden community detection (modularity with a resolution parameter).

Each level runs fast local moving, a deterministic refinement that only
merges singletons into well-connected sub-communities of their community
(greedy choice of the best non-negative gain), and aggregation on the
refined partition with the unrefined partition as the starting point of the
next level.  Vertices are visited in the order of the seeding permutation,
which makes the result deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..graph import DirectedGraph, Partition, Permutation


@dataclass(frozen=True)
class LeidenConfig:
    resolution: float = 1.0
    seed: int = 0
    max_iterations: int = 2

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@njit(cache=True)
def _move_nodes(indptr, indices, weights, strength, comm, order, gamma, two_m):
    n = indptr.shape[0] - 1
    tot = np.zeros(n, np.float64)
    for i in range(n):
        tot[comm[i]] += strength[i]
    wto = np.zeros(n, np.float64)
    touched = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    inq = np.zeros(n, np.bool_)
    head = 0
    size = n
    for t in range(n):
        queue[t] = order[t]
        inq[order[t]] = True
    moves = 0
    while size > 0:
        i = queue[head]
        head = (head + 1) % n
        size -= 1
        inq[i] = False
        c = comm[i]
        nt = 0
        for j in range(indptr[i], indptr[i + 1]):
            u = indices[j]
            if u == i:
                continue
            cu = comm[u]
            if wto[cu] == 0.0:
                touched[nt] = cu
                nt += 1
            wto[cu] += weights[j]
        tot[c] -= strength[i]
        ki = strength[i] * gamma / two_m
        best = c
        best_gain = wto[c] - ki * tot[c]
        for t in range(nt):
            cc = touched[t]
            gain = wto[cc] - ki * tot[cc]
            if gain > best_gain or (gain == best_gain and cc < best and best != c):
                best = cc
                best_gain = gain
        for t in range(nt):
            wto[touched[t]] = 0.0
        tot[best] += strength[i]
        if best != c:
            comm[i] = best
            moves += 1
            for j in range(indptr[i], indptr[i + 1]):
                u = indices[j]
                if not inq[u] and comm[u] != best:
                    queue[(head + size) % n] = u
                    size += 1
                    inq[u] = True
    return moves


@njit(cache=True)
def _refine(indptr, indices, weights, strength, comm, order, gamma, two_m):
    n = indptr.shape[0] - 1
    ctot = np.zeros(n, np.float64)
    for i in range(n):
        ctot[comm[i]] += strength[i]
    ref = np.arange(n)
    rtot = strength.copy()
    rsize = np.ones(n, np.int64)
    # weight from each refined community to the rest of its community
    rext = np.zeros(n, np.float64)
    for i in range(n):
        for j in range(indptr[i], indptr[i + 1]):
            u = indices[j]
            if u != i and comm[u] == comm[i]:
                rext[i] += weights[j]
    wto = np.zeros(n, np.float64)
    touched = np.empty(n, np.int64)
    for t in range(n):
        i = order[t]
        if rsize[ref[i]] != 1:
            continue
        c = comm[i]
        ki = strength[i]
        if rext[i] < gamma * ki * (ctot[c] - ki) / two_m:
            continue
        nt = 0
        for j in range(indptr[i], indptr[i + 1]):
            u = indices[j]
            if u == i or comm[u] != c:
                continue
            r = ref[u]
            if wto[r] == 0.0:
                touched[nt] = r
                nt += 1
            wto[r] += weights[j]
        best = -1
        best_gain = 0.0
        for q in range(nt):
            r = touched[q]
            if rext[r] < gamma * rtot[r] * (ctot[c] - rtot[r]) / two_m:
                continue
            gain = wto[r] - gamma * ki * rtot[r] / two_m
            if gain >= 0.0 and (best < 0 or gain > best_gain or (gain == best_gain and r < best)):
                best = r
                best_gain = gain
        if best >= 0:
            own = ref[i]
            ref[i] = best
            rtot[best] += ki
            rsize[best] += 1
            rsize[own] = 0
            rext[best] += rext[i] - 2.0 * wto[best]
        for q in range(nt):
            wto[touched[q]] = 0.0
    return ref


@njit(cache=True)
def _aggregate(indptr, indices, weights, label, k):
    n = indptr.shape[0] - 1
    members = np.argsort(label, kind="mergesort")
    start = np.zeros(k + 1, np.int64)
    for i in range(n):
        start[label[i] + 1] += 1
    for c in range(k):
        start[c + 1] += start[c]
    acc = np.zeros(k, np.float64)
    touched = np.empty(k, np.int64)
    out_ptr = np.zeros(k + 1, np.int64)
    out_idx = np.empty(indices.shape[0], np.int64)
    out_w = np.empty(indices.shape[0], np.float64)
    e = 0
    for c in range(k):
        nt = 0
        for q in range(start[c], start[c + 1]):
            i = members[q]
            for j in range(indptr[i], indptr[i + 1]):
                d = label[indices[j]]
                if acc[d] == 0.0:
                    touched[nt] = d
                    nt += 1
                acc[d] += weights[j]
        srt = np.sort(touched[:nt])
        for q in range(nt):
            out_idx[e] = srt[q]
            out_w[e] = acc[srt[q]]
            acc[srt[q]] = 0.0
            e += 1
        out_ptr[c + 1] = e
    return out_ptr, out_idx[:e].copy(), out_w[:e].copy()


def _renumber(labels: np.ndarray, order: np.ndarray) -> tuple[np.ndarray, int]:
    """Dense relabelling by first appearance along ``order``."""
    first = np.full(labels.max() + 1 if labels.size else 0, -1, dtype=np.int64)
    k = 0
    for v in order:
        lab = labels[v]
        if first[lab] < 0:
            first[lab] = k
            k += 1
    return first[labels], k


def _leiden_run(indptr, indices, order, membership, gamma):
    n = indptr.shape[0] - 1
    weights = np.ones(indices.shape[0], dtype=np.float64)
    strength = np.diff(indptr).astype(np.float64)
    two_m = float(strength.sum())
    comm, _ = _renumber(membership, order)
    agg_of = np.arange(n, dtype=np.int64)
    level_order = order
    for _level in range(64):
        nn = indptr.shape[0] - 1
        _move_nodes(indptr, indices, weights, strength, comm, level_order, gamma, two_m)
        comm, k = _renumber(comm, level_order)
        if k == nn:
            break
        ref = _refine(indptr, indices, weights, strength, comm, level_order, gamma, two_m)
        ref, kr = _renumber(ref, level_order)
        if kr == nn:
            ref, kr = comm, k
        next_comm = np.empty(kr, dtype=np.int64)
        next_comm[ref] = comm
        indptr, indices, weights = _aggregate(indptr, indices, weights, ref, kr)
        strength = np.bincount(ref, weights=strength, minlength=kr)
        agg_of = ref[agg_of]
        comm = next_comm
        level_order = np.arange(kr, dtype=np.int64)
    return comm[agg_of]


def leiden_partition(g: DirectedGraph, cfg: LeidenConfig = LeidenConfig(),
                     init: Permutation | None = None) -> Partition:
    """Partition a symmetric graph; ``init`` fixes visiting order and initial labels."""
    n = g.n
    if n == 0:
        return Partition(np.zeros(0, dtype=np.int64))
    if g.m == 0:
        return Partition(np.arange(n))
    order = (init.order() - 1) if init is not None else np.arange(n, dtype=np.int64)
    membership = np.arange(n, dtype=np.int64)
    for _ in range(cfg.max_iterations):
        new = _leiden_run(g.indptr, g.indices, order, membership, float(cfg.resolution))
        same = np.array_equal(_renumber(new, order)[0], _renumber(membership, order)[0])
        membership = new
        if same:
            break
    return Partition.from_labels(membership)


def modularity(g: DirectedGraph, part: Partition, resolution: float = 1.0) -> float:
    """Modularity of a partition of a symmetric graph (each arc counts once)."""
    two_m = g.m
    if two_m == 0:
        return 0.0
    c = part.cluster_of
    src = np.repeat(np.arange(g.n), g.degrees())
    inside = np.count_nonzero(c[src] == c[g.indices])
    tot = np.bincount(c, weights=g.degrees(), minlength=part.k)
    return inside / two_m - resolution * float((tot ** 2).sum()) / two_m ** 2
