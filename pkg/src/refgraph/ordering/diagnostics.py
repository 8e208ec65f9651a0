"""Ordering-quality diagnostics: successor-gap entropy and the share of
post-copy residual gaps equal to one."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..graph import DirectedGraph, Permutation, apply_permutation


@dataclass(frozen=True)
class OrderingReport:
    gap_entropy: float
    gap1_fraction: float
    gaps: int
    residual_gaps: int


def _first_gaps(g: DirectedGraph) -> np.ndarray:
    """Per-edge gaps: |s1 - v| for the first successor, then consecutive differences."""
    if g.m == 0:
        return np.zeros(0, dtype=np.int64)
    src = np.repeat(np.arange(g.n), g.degrees())
    gaps = np.diff(g.indices, prepend=0)
    first = g.indptr[:-1][g.degrees() > 0]
    gaps[first] = np.abs(g.indices[first] - src[first])
    return gaps


def gap_entropy(g: DirectedGraph) -> float:
    """Shannon entropy (bits) of ⌊log2 gap⌋ buckets over all successor gaps."""
    gaps = _first_gaps(g)
    if gaps.size == 0:
        return 0.0
    buckets = np.where(gaps > 0, np.floor(np.log2(np.maximum(gaps, 1))), -1).astype(np.int64) + 1
    p = np.bincount(buckets) / gaps.size
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


@njit(cache=True)
def _residual_gaps(indptr, indices, w):
    n = indptr.shape[0] - 1
    out = np.empty(indices.shape[0], np.int64)
    c = 0
    mark = np.zeros(n, np.bool_)
    for v in range(n):
        lo, hi = indptr[v], indptr[v + 1]
        if lo == hi:
            continue
        for j in range(lo, hi):
            mark[indices[j]] = True
        best, best_ov = -1, 0
        for r in range(v - 1, max(v - w, 0) - 1, -1):
            ov = 0
            for j in range(indptr[r], indptr[r + 1]):
                if mark[indices[j]]:
                    ov += 1
            if ov > best_ov:
                best, best_ov = r, ov
        if best >= 0:
            for j in range(indptr[best], indptr[best + 1]):
                mark[indices[j]] = False
        prev = -1
        for j in range(lo, hi):
            u = indices[j]
            if mark[u]:
                out[c] = abs(u - v) if prev < 0 else u - prev
                c += 1
                prev = u
            mark[u] = False
    return out[:c]


def gap1_fraction(g: DirectedGraph, window: int = 7) -> tuple[float, int]:
    """Fraction of residual gaps equal to 1 after copying from the window
    vertex with maximal overlap (ties: nearest)."""
    gaps = _residual_gaps(g.indptr, g.indices, int(window))
    return (float(np.mean(gaps == 1)) if gaps.size else 0.0), int(gaps.size)


def ordering_diagnostics(g: DirectedGraph, p: Permutation | None = None, window: int = 7) -> OrderingReport:
    h = apply_permutation(g, p) if p is not None else g
    frac, nres = gap1_fraction(h, window)
    return OrderingReport(gap_entropy(h), frac, h.m, nres)
