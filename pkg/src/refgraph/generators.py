"""Synthetic graph generators: Erdős–Rényi, a locality web model and LFR."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph, Partition


class InfeasibleParameters(ValueError):
    pass


def entropy_bound(p: float) -> float:
    """Entropy of an ER adjacency bit per present edge, h(p)/p."""
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    h = -p * math.log2(p) - (1 - p) * math.log2(1 - p)
    return h / p


def _sample_without(rng: np.random.Generator, n: int, k: int, exclude: int) -> np.ndarray:
    """k distinct values of 0..n-1 other than ``exclude``."""
    if k <= 0:
        return np.zeros(0, dtype=np.int64)
    if 3 * k > n:
        pool = np.delete(np.arange(n), exclude)
        return np.sort(rng.choice(pool, size=k, replace=False))
    got = np.zeros(0, dtype=np.int64)
    while got.size < k:
        draw = rng.integers(0, n - 1, size=2 * (k - got.size) + 4)
        draw = draw + (draw >= exclude)
        got = np.unique(np.concatenate([got, draw]))
    return np.sort(rng.permutation(got)[:k])


def erdos_renyi(n: int, p: float, seed: int = 0) -> DirectedGraph:
    """Directed G(n, p) without self-loops."""
    if n < 1 or not 0 < p <= 1:
        raise ValueError("need n >= 1 and p in (0, 1]")
    rng = np.random.default_rng(seed)
    degs = rng.binomial(n - 1, p, size=n)
    src = np.repeat(np.arange(n), degs)
    dst = np.concatenate([_sample_without(rng, n, int(k), v) for v, k in enumerate(degs)]) \
        if n > 1 else np.zeros(0, dtype=np.int64)
    return DirectedGraph.from_arrays(n, src, dst.astype(np.int64))


def _power_law_degrees(rng, n: int, mean: float, exponent: float, cap: int) -> np.ndarray:
    """Integer degrees floor(x_min * U^(-1/(exponent-1))), capped, with x_min
    chosen by bisection so that the sample mean matches ``mean``."""
    u = rng.random(n)
    base = u ** (-1.0 / (exponent - 1.0))

    def sample(xmin):
        return np.minimum(np.floor(xmin * base), cap).astype(np.int64)

    lo, hi = 1e-3, float(cap)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if sample(mid).mean() < mean:
            lo = mid
        else:
            hi = mid
    return np.maximum(sample(hi), 0)


def web_graph(n: int, avg_deg: float = 8.0, locality_width: int = 200,
              long_link_frac: float = 0.1, deg_exponent: float = 2.2,
              copy_prob: float = 0.5, copy_window: int = 8, copy_keep: float = 0.8,
              seed: int = 0) -> DirectedGraph:
    """Locality web model.

    Outdegrees follow a power law with the requested mean.  With probability
    ``copy_prob`` a vertex first copies each successor of a random vertex among
    its ``copy_window`` predecessors with probability ``copy_keep``; remaining
    successors land uniformly within ``locality_width`` of the source, or
    anywhere with probability ``long_link_frac``.
    """
    if n < 2:
        raise ValueError("web graph needs n >= 2")
    rng = np.random.default_rng(seed)
    degs = _power_law_degrees(rng, n, avg_deg, deg_exponent, n - 1)
    lists: list[np.ndarray] = []
    for v in range(n):
        d = int(degs[v])
        chosen: set[int] = set()
        if v > 0 and rng.random() < copy_prob:
            proto = lists[v - 1 - int(rng.integers(0, min(copy_window, v)))]
            keep = proto[rng.random(proto.size) < copy_keep]
            chosen.update(int(x) for x in keep[:d] if x != v)
        tries = 0
        while len(chosen) < d and tries < 4 * d + 8:
            tries += 1
            if rng.random() < long_link_frac:
                u = int(rng.integers(0, n))
            else:
                u = v + int(rng.integers(-locality_width, locality_width + 1))
            if 0 <= u < n and u != v:
                chosen.add(u)
        lists.append(np.array(sorted(chosen), dtype=np.int64))
    src = np.repeat(np.arange(n), [x.size for x in lists])
    return DirectedGraph.from_arrays(n, src, np.concatenate(lists) if lists else np.zeros(0, np.int64))


@dataclass(frozen=True)
class LfrResult:
    graph: DirectedGraph
    communities: Partition


def _truncated_power_law(rng, size: int, exponent: float, lo: float, hi: float) -> np.ndarray:
    u = rng.random(size)
    a = 1.0 - exponent
    return (lo ** a + u * (hi ** a - lo ** a)) ** (1.0 / a)


def _mean_truncated(exponent: float, lo: float, hi: float) -> float:
    a = 1.0 - exponent
    b = 2.0 - exponent
    return (a / b) * (hi ** b - lo ** b) / (hi ** a - lo ** a)


def _pair_stubs(rng, stubs: np.ndarray) -> np.ndarray:
    stubs = rng.permutation(stubs)
    if stubs.size % 2:
        stubs = stubs[:-1]
    return stubs.reshape(-1, 2)


def lfr_graph(n: int, avg_deg: float = 15.0, max_deg: int = 50, mu: float = 0.1,
              deg_exponent: float = 2.5, community_exponent: float = 1.5,
              min_community: int = 20, max_community: int = 100, seed: int = 0) -> LfrResult:
    """LFR benchmark graph with planted communities, both edge directions present.

    Degrees follow a truncated power law with the requested mean, community
    sizes a truncated power law in ``[min_community, max_community]``; each
    vertex keeps ``round((1 - mu) * k)`` stubs inside its community and the
    rest outside, and stubs are matched by a configuration model (self-loops,
    duplicates and misplaced external pairs are dropped).
    """
    if not 0 <= mu <= 1:
        raise ValueError("mu must lie in [0, 1]")
    if n < 1 or avg_deg <= 0 or max_deg < 1 or min_community < 1 or max_community < min_community:
        raise InfeasibleParameters("counts must be positive and ranges ordered")
    if max_community > n:
        max_community = n
        if min_community > n:
            raise InfeasibleParameters("minimum community size exceeds n")
    if not avg_deg < max_deg:
        raise InfeasibleParameters("average degree must be below the maximum degree")
    rng = np.random.default_rng(seed)
    lo, hi = 1.0, float(max_deg)
    if _mean_truncated(deg_exponent, lo, hi) > avg_deg:
        raise InfeasibleParameters("average degree too small for the degree range")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _mean_truncated(deg_exponent, mid, max_deg) < avg_deg:
            lo = mid
        else:
            hi = mid
    degs = np.rint(_truncated_power_law(rng, n, deg_exponent, lo, max_deg)).astype(np.int64)
    k_int = np.rint((1.0 - mu) * degs).astype(np.int64)

    sizes: list[int] = []
    while sum(sizes) < n:
        sizes.append(int(np.rint(_truncated_power_law(rng, 1, community_exponent,
                                                      min_community, max_community)[0])))
    excess = sum(sizes) - n
    while excess > 0:
        i = int(np.argmax(sizes))
        cut = min(excess, sizes[i] - min_community)
        if cut <= 0:
            sizes.pop(int(np.argmin(sizes)))
            excess = sum(sizes) - n
            if excess < 0:
                sizes[int(np.argmin(sizes))] -= excess
                excess = 0
            continue
        sizes[i] -= cut
        excess -= cut
    sizes_arr = np.array(sizes, dtype=np.int64)
    if k_int.max(initial=0) >= sizes_arr.max():
        raise InfeasibleParameters("internal degree exceeds every community size")

    # place vertices with the largest internal degree first
    free = sizes_arr.copy()
    member = np.full(n, -1, dtype=np.int64)
    for v in np.argsort(-k_int, kind="stable"):
        ok = np.flatnonzero((free > 0) & (sizes_arr > k_int[v]))
        if ok.size == 0:
            raise InfeasibleParameters("no community can host a vertex's internal degree")
        c = int(rng.choice(ok))
        member[v] = c
        free[c] -= 1

    edges = set()
    for c in range(sizes_arr.size):
        vs = np.flatnonzero(member == c)
        stubs = np.repeat(vs, k_int[vs])
        for _ in range(10):
            if stubs.size < 2:
                break
            left = []
            for a, b in _pair_stubs(rng, stubs):
                key = (min(a, b), max(a, b))
                if a == b or key in edges:
                    left.extend((a, b))
                else:
                    edges.add(key)
            stubs = np.array(left, dtype=np.int64)
    ext = np.repeat(np.arange(n), degs - k_int)
    for _ in range(10):
        if ext.size < 2:
            break
        left = []
        for a, b in _pair_stubs(rng, ext):
            key = (min(a, b), max(a, b))
            if a == b or member[a] == member[b] or key in edges:
                left.extend((a, b))
            else:
                edges.add(key)
        ext = np.array(left, dtype=np.int64)
    arr = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    g = DirectedGraph.from_arrays(n, np.concatenate([arr[:, 0], arr[:, 1]]),
                                  np.concatenate([arr[:, 1], arr[:, 0]]))
    return LfrResult(g, Partition.from_labels(member))


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    p: float = 0.01
    avg_deg: float = 8.0
    mu: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("er", "web", "lfr"):
            raise ValueError(f"unknown generator {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == "er" and not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")
        if not 0 <= self.mu <= 1:
            raise ValueError("mu must lie in [0, 1]")


def generate(spec: GenSpec):
    """Graph for ``spec``; LFR specs return an :class:`LfrResult`."""
    if spec.kind == "er":
        return erdos_renyi(spec.n, spec.p, spec.seed)
    if spec.kind == "web":
        return web_graph(spec.n, spec.avg_deg, seed=spec.seed)
    return lfr_graph(spec.n, spec.avg_deg, mu=spec.mu, seed=spec.seed)
