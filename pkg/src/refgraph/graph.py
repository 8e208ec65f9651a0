"""In-memory directed graphs in CSR form.

Vertex IDs are 1..n at the API surface; internally successor lists are
stored 0-based in ``indices`` with row pointers ``indptr`` (the scipy CSR
convention), each row sorted ascending and duplicate-free.
"""
from __future__ import annotations

import io
import os
import re
import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np
from numba import njit

from .bitcodes import BitReader, BitWriter, CodeFamily


class GraphFormatError(ValueError):
    pass


def _sorted_csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Build a deduplicated, row-sorted CSR from 0-based edge arrays."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size:
        key = src * n + dst
        key = np.unique(key)
        src, dst = np.divmod(key, n) if n else (key, key)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst.astype(np.int64)


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "DirectedGraph":
        """Build from 1-based (src, dst) pairs."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 1 or arr.max() > n):
            raise ValueError(f"edge endpoint outside 1..{n}")
        return cls(*_sorted_csr(n, arr[:, 0] - 1, arr[:, 1] - 1))

    @classmethod
    def from_arrays(cls, n: int, src0: np.ndarray, dst0: np.ndarray) -> "DirectedGraph":
        """Build from 0-based source/target arrays (duplicates removed)."""
        return cls(*_sorted_csr(n, src0, dst0))

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]]) -> "DirectedGraph":
        """Build from per-vertex 1-based successor lists."""
        n = len(lists)
        src = np.repeat(np.arange(n), [len(x) for x in lists])
        dst = np.fromiter((u - 1 for x in lists for u in x), dtype=np.int64, count=len(src))
        if dst.size and (dst.min() < 0 or dst.max() >= n):
            raise ValueError(f"successor outside 1..{n}")
        return cls(*_sorted_csr(n, src, dst))

    @classmethod
    def empty(cls, n: int = 0) -> "DirectedGraph":
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.indptr.shape[0] - 1

    @property
    def m(self) -> int:
        return int(self.indptr[-1])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v] - self.indptr[v - 1])

    def successors(self, v: int) -> np.ndarray:
        """Sorted 1-based successors of vertex ``v`` (1-based)."""
        if not 1 <= v <= self.n:
            raise IndexError(f"vertex {v} outside 1..{self.n}")
        return self.indices[self.indptr[v - 1]: self.indptr[v]] + 1

    def lists(self) -> list[list[int]]:
        return [self.successors(v).tolist() for v in range(1, self.n + 1)]

    def edges(self) -> np.ndarray:
        """(m, 2) array of 1-based edges in row order."""
        src = np.repeat(np.arange(1, self.n + 1), self.degrees())
        return np.column_stack([src, self.indices + 1])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.indices[self.indptr[u - 1]: self.indptr[u]]
        i = np.searchsorted(row, v - 1)
        return bool(i < row.size and row[i] == v - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"

    def validate(self) -> None:
        if self.indptr[0] != 0 or np.any(np.diff(self.indptr) < 0):
            raise GraphFormatError("indptr must start at 0 and be non-decreasing")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.n):
            raise GraphFormatError("successor outside vertex range")
        for v in range(self.n):
            row = self.indices[self.indptr[v]: self.indptr[v + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise GraphFormatError(f"successor list of {v + 1} not strictly ascending")


@dataclass(frozen=True)
class Permutation:
    """``forward[old - 1] = new`` with both sides 1-based."""

    forward: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.forward, dtype=np.int64)
        object.__setattr__(self, "forward", f)
        n = f.shape[0]
        seen = np.zeros(n + 1, dtype=bool)
        if n and (f.min() < 1 or f.max() > n):
            raise ValueError("permutation values must lie in 1..n")
        seen[f] = True
        if not seen[1:].all():
            raise ValueError("permutation is not a bijection")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(1, n + 1))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Permutation":
        """``order[i]`` is the old (1-based) ID placed at new position i+1."""
        order = np.asarray(order, dtype=np.int64)
        fwd = np.empty_like(order)
        fwd[order - 1] = np.arange(1, order.shape[0] + 1)
        return cls(fwd)

    @classmethod
    def random(cls, n: int, seed: int) -> "Permutation":
        return cls(np.random.default_rng(seed).permutation(n) + 1)

    @property
    def n(self) -> int:
        return self.forward.shape[0]

    def order(self) -> np.ndarray:
        """Old IDs listed in new-ID order."""
        out = np.empty_like(self.forward)
        out[self.forward - 1] = np.arange(1, self.n + 1)
        return out

    def inverse(self) -> "Permutation":
        return Permutation(self.order())

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        return Permutation(other.forward[self.forward - 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.forward, other.forward)


@dataclass(frozen=True)
class Partition:
    """``cluster_of[old - 1]`` in 0..K-1."""

    cluster_of: np.ndarray
    cluster_sizes: np.ndarray = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.cluster_of, dtype=np.int64)
        object.__setattr__(self, "cluster_of", c)
        k = int(c.max()) + 1 if c.size else 0
        sizes = np.bincount(c, minlength=k).astype(np.int64)
        if c.size and (c.min() < 0 or np.any(sizes == 0)):
            raise ValueError("cluster indices must be dense 0..K-1")
        object.__setattr__(self, "cluster_sizes", sizes)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        """Renumber arbitrary labels densely by first appearance."""
        _, first, inv = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
        rank = np.empty(first.shape[0], dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
        return cls(rank[inv])

    @property
    def k(self) -> int:
        return int(self.cluster_sizes.shape[0])

    def members(self) -> list[np.ndarray]:
        """1-based members of each cluster, ascending."""
        order = np.argsort(self.cluster_of, kind="stable")
        return np.split(order + 1, np.cumsum(self.cluster_sizes)[:-1]) if self.k else []


# --------------------------------------------------------------------------
# ingestion


_DENSE_HEADER = re.compile(r"#\s*refgraph n=(\d+)")


def load_edge_list(source: str | os.PathLike | TextIO, return_labels: bool = False):
    """Parse "src dst" lines, remapping IDs densely in first-seen order.

    Lines starting with '#' (or '%') and blank lines are skipped.  Files
    written by :func:`write_edge_list` start with ``# refgraph n=<n> ...``;
    their IDs are already dense and are kept as-is (isolated vertices too).
    """
    if isinstance(source, (str, os.PathLike)) and not (isinstance(source, str) and "\n" in source) \
            and os.path.exists(source):
        with open(source) as fh:
            return load_edge_list(fh, return_labels)
    fh = io.StringIO(source) if isinstance(source, str) else source
    ids: dict[str, int] = {}
    src: list[int] = []
    dst: list[int] = []
    dense_n = None
    for lineno, line in enumerate(fh, 1):
        s = line.strip()
        if not s or s[0] in "#%":
            hit = _DENSE_HEADER.match(s)
            if hit and not src:
                dense_n = int(hit.group(1))
                ids = {str(i): i - 1 for i in range(1, dense_n + 1)}
            continue
        parts = s.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected 'src dst', got {s!r}")
        a, b = parts[0], parts[1]
        for tok in (a, b):
            if not tok.lstrip("-").isdigit():
                raise GraphFormatError(f"line {lineno}: non-integer vertex {tok!r}")
            if dense_n is not None and tok not in ids:
                raise GraphFormatError(f"line {lineno}: vertex {tok} outside 1..{dense_n}")
        src.append(ids.setdefault(a, len(ids)))
        dst.append(ids.setdefault(b, len(ids)))
    if not ids and dense_n is None:
        raise GraphFormatError("edge list is empty")
    g = DirectedGraph.from_arrays(len(ids), np.array(src), np.array(dst))
    if return_labels:
        labels = np.empty(len(ids), dtype=object)
        for k, v in ids.items():
            labels[v] = k
        return g, labels
    return g


def write_edge_list(g: DirectedGraph, dest: str | os.PathLike | TextIO) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            return write_edge_list(g, fh)
    dest.write(f"# refgraph n={g.n} m={g.m}\n")
    for u, v in g.edges():
        dest.write(f"{u}\t{v}\n")


# --------------------------------------------------------------------------
# transforms


def symmetrize(g: DirectedGraph) -> DirectedGraph:
    e = g.edges() - 1
    return DirectedGraph.from_arrays(g.n, np.concatenate([e[:, 0], e[:, 1]]),
                                     np.concatenate([e[:, 1], e[:, 0]]))


def is_symmetric(g: DirectedGraph) -> bool:
    return symmetrize(g) == g


def induced_subgraph(g: DirectedGraph, members: Iterable[int]) -> tuple[DirectedGraph, np.ndarray]:
    """Subgraph over ``members`` (1-based).

    Returns the subgraph and ``local_to_global`` (local ID i+1 corresponds to
    global ID ``local_to_global[i]``); members are numbered in ascending order.
    """
    mem = np.unique(np.asarray(list(members), dtype=np.int64))
    if mem.size == 0:
        raise ValueError("empty member set")
    if mem[0] < 1 or mem[-1] > g.n:
        raise ValueError("member outside vertex range")
    local = np.full(g.n, -1, dtype=np.int64)
    local[mem - 1] = np.arange(mem.size)
    src, dst = _induced(g.indptr, g.indices, mem - 1, local)
    return DirectedGraph.from_arrays(mem.size, src, dst), mem


@njit(cache=True)
def _induced(indptr, indices, mem0, local):
    cnt = 0
    for v in mem0:
        for j in range(indptr[v], indptr[v + 1]):
            if local[indices[j]] >= 0:
                cnt += 1
    src = np.empty(cnt, np.int64)
    dst = np.empty(cnt, np.int64)
    c = 0
    for v in mem0:
        for j in range(indptr[v], indptr[v + 1]):
            u = local[indices[j]]
            if u >= 0:
                src[c] = local[v]
                dst[c] = u
                c += 1
    return src, dst


@njit(cache=True)
def _tarjan(indptr, indices):
    # iterative Tarjan; returns component id per vertex
    n = indptr.shape[0] - 1
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    onstack = np.zeros(n, np.bool_)
    comp = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    sp = 0
    call_v = np.empty(n, np.int64)
    call_e = np.empty(n, np.int64)
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        depth = 0
        call_v[0] = root
        call_e[0] = indptr[root]
        index[root] = low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        while depth >= 0:
            v = call_v[depth]
            e = call_e[depth]
            if e < indptr[v + 1]:
                call_e[depth] = e + 1
                w = indices[e]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    depth += 1
                    call_v[depth] = w
                    call_e[depth] = indptr[w]
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                depth -= 1
                if depth >= 0:
                    p = call_v[depth]
                    if low[v] < low[p]:
                        low[p] = low[v]
    return comp, ncomp


def strongly_connected_components(g: DirectedGraph) -> np.ndarray:
    comp, _ = _tarjan(g.indptr, g.indices)
    return comp


def largest_scc(g: DirectedGraph) -> np.ndarray:
    """1-based members of the largest SCC (ties: the one holding the smallest ID)."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    comp = strongly_connected_components(g)
    sizes = np.bincount(comp)
    best = sizes.max()
    # first vertex (smallest ID) whose component has maximal size
    v = int(np.flatnonzero(sizes[comp] == best)[0])
    return np.flatnonzero(comp == comp[v]) + 1


def apply_permutation(g: DirectedGraph, p: Permutation) -> DirectedGraph:
    if p.n != g.n:
        raise ValueError(f"permutation size {p.n} != vertex count {g.n}")
    f0 = p.forward - 1
    src = np.repeat(f0, g.degrees())
    return DirectedGraph.from_arrays(g.n, src, f0[g.indices])


# --------------------------------------------------------------------------
# binary snapshot: b"RGA1" | n:u32 | m:u64 | payload (gamma-coded lists)

_SNAP_MAGIC = b"RGA1"


def save_snapshot(g: DirectedGraph, path: str | os.PathLike) -> None:
    w = BitWriter(capacity_bytes=g.m * 2 + 64)
    gam = CodeFamily.gamma()
    for v in range(g.n):
        row = g.indices[g.indptr[v]: g.indptr[v + 1]]
        w.write_int(row.size + 1, gam)
        prev = None
        for u in row.tolist():
            if prev is None:
                x = u - v
                w.write_int(2 * x + 1 if x >= 0 else -2 * x, gam)
            else:
                w.write_int(u - prev, gam)
            prev = u
    with open(path, "wb") as fh:
        fh.write(_SNAP_MAGIC + struct.pack("<IQ", g.n, g.m) + w.getvalue())


def load_snapshot(path: str | os.PathLike) -> DirectedGraph:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _SNAP_MAGIC:
        raise GraphFormatError("not an adjacency snapshot")
    n, m = struct.unpack_from("<IQ", data, 4)
    r = BitReader(data[16:])
    gam = CodeFamily.gamma()
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(m, dtype=np.int64)
    c = 0
    for v in range(n):
        d = r.read_int(gam) - 1
        prev = None
        for _ in range(d):
            x = r.read_int(gam)
            if prev is None:
                u = v + (x - 1) // 2 if x % 2 else v - x // 2
            else:
                u = prev + x
            indices[c] = u
            c += 1
            prev = u
        indptr[v + 1] = c
    if c != m:
        raise GraphFormatError(f"snapshot declares {m} edges, decoded {c}")
    return DirectedGraph(indptr, indices)
