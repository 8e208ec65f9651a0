"""Two-stage community-aware ordering: global LLP seed, Leiden partition,
per-cluster LLP, clusters concatenated by decreasing size."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..graph import DirectedGraph, Partition, Permutation, induced_subgraph, symmetrize
from .leiden import LeidenConfig, leiden_partition
from .llp import LlpConfig, llp_order

GLOBAL_PASSES = 3
CLUSTER_PASSES = 5


def cluster_sequence(part: Partition) -> list[np.ndarray]:
    """Clusters (1-based members, ascending) by decreasing size, ties by smallest member."""
    members = part.members()
    return sorted(members, key=lambda m: (-m.size, int(m[0])))


def leiden_llp_order(g: DirectedGraph, llp_cfg: LlpConfig = LlpConfig(),
                     leiden_cfg: LeidenConfig = LeidenConfig(),
                     return_partition: bool = False):
    """Leiden+LLP permutation of ``g`` (symmetrised internally).

    ``llp_cfg.passes`` drives the global seeding run; each cluster of size
    greater than two is ordered by an LLP run of ``CLUSTER_PASSES`` passes on
    its induced subgraph, seeded by ``llp_cfg.seed`` and its smallest member.
    """
    sym = symmetrize(g)
    sigma0 = llp_order(sym, llp_cfg)
    part = leiden_partition(sym, leiden_cfg, init=sigma0)
    order: list[np.ndarray] = []
    clusters = cluster_sequence(part)
    for members in clusters:
        if members.size <= 2:
            order.append(members)
            continue
        sub, local_to_global = induced_subgraph(sym, members)
        cfg = replace(llp_cfg, passes=CLUSTER_PASSES,
                      seed=int(np.random.SeedSequence([llp_cfg.seed, int(members[0])]).generate_state(1)[0]))
        local = llp_order(sub, cfg).order()
        order.append(local_to_global[local - 1])
    perm = Permutation.from_order(np.concatenate(order) if order else np.zeros(0, dtype=np.int64))
    if return_partition:
        return perm, part, [m.size for m in clusters]
    return perm


def segment_bounds(sizes: list[int], k: int) -> list[int]:
    """Group consecutive cluster sizes into ``k`` contiguous ranges of near-equal
    vertex count; returns the range sizes (sum = n)."""
    n = int(sum(sizes))
    if k <= 1 or n == 0:
        return [n]
    bounds = np.cumsum(sizes)
    out, prev = [], 0
    for j in range(1, k):
        target = n * j / k
        i = int(np.searchsorted(bounds, target))
        cut = int(bounds[min(i, len(bounds) - 1)])
        if cut > prev and cut < n:
            out.append(cut - prev)
            prev = cut
    out.append(n - prev)
    return out
