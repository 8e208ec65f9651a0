"""Whole-graph codecs: the BV-style baseline and the BG, CS and CG encoders.

A *bitstream* is a codec preamble followed by one record per vertex.  The
container module wraps bitstreams with the file header and the optional
sampled index; everything a decoder needs beyond ``n``, the window, the code
family and the index stride lives in the preamble.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .bitcodes import (DELTA, GAMMA, ZETA, BitReader, BitWriter, CodeFamily, code_len,
                       get_bit, length_table, put_bits, read_code, write_code)
from .graph import DirectedGraph, Partition
from .kernel import (C_LR, C_STOP, C_W, HEADER_BG, HEADER_CG, HEADER_CS, HEADER_FIXED,
                     KernelConfig, cost_table, decode_vertex, delta_cost, emit_delta,
                     emit_vertex, kernel_lists, make_workspace, plan_vertex_nb, read_delta,
                     zigzag)

CODEC_IDS = {"bv": 0, "bg": 1, "cs": 2, "cg": 3}
CODEC_NAMES = {v: k for k, v in CODEC_IDS.items()}
CONTAINER_FAMILIES = ("fibonacci", "zeta3")


class CorruptStream(ValueError):
    """Undecodable bitstream; ``position`` is the bit offset where decoding failed."""

    def __init__(self, position: int, reason: str = "corrupt stream"):
        super().__init__(f"{reason} at bit {position}")
        self.position = position


# --------------------------------------------------------------------------
# codec presets


def bg_config(window: int = 8, family: CodeFamily | None = None, **overrides) -> KernelConfig:
    """BG: merged VLC headers, multi-reference, low-degree reference search, LR-split."""
    base = KernelConfig(window=window, family=family or CodeFamily.fibonacci(), header=HEADER_BG)
    return replace(base, **overrides)


def cs_config(window: int = 8, family: CodeFamily | None = None, **overrides) -> KernelConfig:
    """CS: fixed prefix-tree headers, every feature but multi-reference and LR hard-wired."""
    base = KernelConfig(window=window, family=family or CodeFamily.fibonacci(), header=HEADER_CS,
                        multi_ref=False, lr_split=False)
    return replace(base, **overrides)


def cg_config(window: int = 8, family: CodeFamily | None = None, **overrides) -> KernelConfig:
    """CG: fixed-width reference headers, LR-split always on, no multi-reference."""
    base = KernelConfig(window=window, family=family or CodeFamily.fibonacci(), header=HEADER_CG,
                        multi_ref=False, lr_split=True, fixed_offsets=True)
    return replace(base, **overrides)


PRESETS = {"bg": bg_config, "cs": cs_config, "cg": cg_config}


@dataclass(frozen=True)
class BvParams:
    window: int = 7
    max_ref: int = 3
    mil: int = 4
    zeta_k: int = 3


# --------------------------------------------------------------------------
# shared numba helpers


@njit(cache=True)
def _grow(arr, need):
    if need <= arr.shape[0]:
        return arr
    new = np.empty(max(need, 2 * arr.shape[0] + 16), arr.dtype)
    new[: arr.shape[0]] = arr
    return new


def _floors(n: int, window: int, starts: np.ndarray, stride: int | None) -> np.ndarray:
    v = np.arange(n, dtype=np.int64)
    f = np.maximum(v - window, starts)
    if stride:
        f = np.maximum(f, (v // stride) * stride)
    return np.maximum(f, 0)


# --------------------------------------------------------------------------
# kernel codecs (BG / CS / CG)


@njit(cache=True)
def _extra_cost(xptr, xidx, v, xcfg, LT):
    cnt = xptr[v + 1] - xptr[v]
    if cnt == 0:
        return 1
    return 1 + delta_cost(xidx[xptr[v]:xptr[v + 1]], cnt, v, xcfg, LT)


@njit(cache=True)
def _encode_records(kptr, kidx, has_loop, xptr, xidx, vl, floors, loops_flag, extra_flag,
                    cfg, xcfg, hcode, hlen, LT, pre, pre_bits):
    n = kptr.shape[0] - 1
    ws = make_workspace(n, cfg[C_W])
    plans = np.zeros((n, 6), np.int64)
    total = pre_bits
    for v in range(n):
        c, a, o1, o2, v1, v2 = plan_vertex_nb(v, vl[v], floors[v], kptr, kidx, cfg, hlen, LT, ws)
        plans[v, 0] = c
        plans[v, 1] = a
        plans[v, 2] = o1
        plans[v, 3] = o2
        plans[v, 4] = v1
        plans[v, 5] = v2
        total += c + loops_flag
        if extra_flag:
            total += _extra_cost(xptr, xidx, v, xcfg, LT)
    nbytes = (total + 7) // 8
    buf = np.zeros(nbytes + 8, np.uint8)
    buf[: pre.shape[0]] = pre
    st = np.zeros(3, np.int64)
    st[0] = pre_bits
    pos = np.empty(n, np.int64)
    for v in range(n):
        pos[v] = st[0]
        if loops_flag:
            put_bits(buf, st, 1 if has_loop[v] else 0, 1)
        emit_vertex(buf, st, v, vl[v], plans[v, 1], plans[v, 2], plans[v, 3], plans[v, 4],
                    plans[v, 5], kptr, kidx, cfg, hcode, hlen, ws)
        if extra_flag:
            cnt = xptr[v + 1] - xptr[v]
            put_bits(buf, st, 1 if cnt > 0 else 0, 1)
            if cnt > 0:
                emit_delta(buf, st, xidx[xptr[v]:xptr[v + 1]], cnt, v, xcfg)
    return buf[:nbytes], pos, total, plans, st[0]


@njit(cache=True)
def _decode_records(buf, limit, start_pos, v0, v1, n, starts, ends, floors, loops_flag,
                    extra_flag, cfg, xcfg, hcode, hlen, maxloc):
    """Decode records of vertices ``v0..v1-1`` starting at bit ``start_pos``.

    Returns ``(indptr, indices, end_pos, error_code)`` with global 0-based IDs.
    """
    cnt = v1 - v0
    kp = np.zeros(cnt + 1, np.int64)
    ki = np.empty(16, np.int64)
    op = np.zeros(cnt + 1, np.int64)
    oi = np.empty(16, np.int64)
    ws = make_workspace(maxloc, cfg[C_W])
    out = np.empty(maxloc + 2, np.int64)
    xout = np.empty(n + 2, np.int64)
    st = np.zeros(3, np.int64)
    st[0] = start_pos
    st[1] = limit
    for v in range(v0, v1):
        r = v - v0
        a = starts[v]
        nloc = ends[v] - a
        loop = get_bit(buf, st) if loops_flag else 0
        if floors[v] < v0:
            st[2] = 2
        if st[2]:
            return op[: r + 1], oi[: op[r]], st[0], st[2]
        c = decode_vertex(buf, st, r, v - a, floors[v] - v0, nloc, kp, ki, cfg, hcode, hlen, ws, out)
        if st[2]:
            return op[: r + 1], oi[: op[r]], st[0], st[2]
        ki = _grow(ki, kp[r] + c)
        ki[kp[r]:kp[r] + c] = out[:c]
        kp[r + 1] = kp[r] + c
        cx = 0
        if extra_flag and get_bit(buf, st) == 1:
            cx = read_delta(buf, st, v, n, xcfg, xout, 0)
            for i in range(cx):
                if (xout[i] >= a and xout[i] < ends[v]) or (i > 0 and xout[i] <= xout[i - 1]):
                    st[2] = 2
        if st[2]:
            return op[: r + 1], oi[: op[r]], st[0], st[2]
        total = c + cx + loop
        oi = _grow(oi, op[r] + total)
        base = op[r]
        for i in range(c):
            oi[base + i] = out[i] + a
        for i in range(cx):
            oi[base + c + i] = xout[i]
        if loop:
            oi[base + c + cx] = v
        oi[base:base + total] = np.sort(oi[base:base + total])
        op[r + 1] = base + total
    return op, oi[: op[cnt]], st[0], 0


# --------------------------------------------------------------------------
# BV-style baseline

BV_OUTDEGREE, BV_REFERENCE, BV_BLOCKS, BV_INTERVALS, BV_RESIDUALS = range(5)
BV_COMPONENTS = ("outdegrees", "references", "copy blocks", "intervals", "residuals")


@njit(cache=True)
def _bv_parts(v, off, indptr, indices, mil, mark, R, left, runs):
    """Copy runs count + residual list after copying from ``v - off``.

    Returns ``(n_runs, r, nl)``: runs in ``runs``, post-copy values in ``R[:r]``.
    """
    S = indices[indptr[v]:indptr[v + 1]]
    for x in S:
        mark[x] = 1
    nr = 0
    if off > 0:
        u = v - off
        L = indices[indptr[u]:indptr[u + 1]]
        i = 0
        state = 1
        while i < L.shape[0]:
            j = i
            while j < L.shape[0] and mark[L[j]] == state:
                j += 1
            runs[nr] = j - i
            nr += 1
            state ^= 1
            i = j
        for y in L:
            if mark[y] == 1:
                mark[y] = 2
    r = 0
    for x in S:
        if mark[x] == 1:
            R[r] = x
            r += 1
        mark[x] = 0
    return nr, r


@njit(cache=True)
def _bv_cost(v, off, indptr, indices, mil, LG, LZ, ws):
    mark, R, left, runs, starts, lens = ws
    d = indptr[v + 1] - indptr[v]
    bits = LG[d + 1]
    if d == 0:
        return bits
    bits += LG[off + 1]
    nr, r = _bv_parts(v, off, indptr, indices, mil, mark, R, left, runs)
    if off > 0 and indptr[v - off + 1] > indptr[v - off]:
        bits += LG[nr]
        for t in range(nr - 1):
            bits += LG[runs[0] + 1] if t == 0 else LG[runs[t]]
    nint = 0
    nl = 0
    prev_end = -1
    i = 0
    ib = 0
    while i < r:
        j = i
        while j + 1 < r and R[j + 1] == R[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            ib += LG[zigzag(R[i] - v) + 1] if nint == 0 else LG[R[i] - prev_end - 1]
            ib += LG[ln - mil + 1]
            prev_end = R[j]
            nint += 1
        else:
            for t in range(i, j + 1):
                left[nl] = R[t]
                nl += 1
        i = j + 1
    bits += LG[nint + 1] + ib
    for t in range(nl):
        bits += LZ[left[t] + 1] if t == 0 else LZ[left[t] - left[t - 1]]
    return bits


@njit(cache=True)
def _bv_emit(buf, st, v, off, indptr, indices, mil, zk, ws, budget):
    mark, R, left, runs, starts, lens = ws
    d = indptr[v + 1] - indptr[v]
    p = st[0]
    write_code(buf, st, d + 1, GAMMA, 0)
    budget[BV_OUTDEGREE] += st[0] - p
    if d == 0:
        return
    p = st[0]
    write_code(buf, st, off + 1, GAMMA, 0)
    budget[BV_REFERENCE] += st[0] - p
    nr, r = _bv_parts(v, off, indptr, indices, mil, mark, R, left, runs)
    p = st[0]
    if off > 0 and indptr[v - off + 1] > indptr[v - off]:
        write_code(buf, st, nr, GAMMA, 0)
        for t in range(nr - 1):
            write_code(buf, st, runs[0] + 1 if t == 0 else runs[t], GAMMA, 0)
    budget[BV_BLOCKS] += st[0] - p
    nint = 0
    nl = 0
    i = 0
    while i < r:
        j = i
        while j + 1 < r and R[j + 1] == R[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            starts[nint] = R[i]
            lens[nint] = ln
            nint += 1
        else:
            for t in range(i, j + 1):
                left[nl] = R[t]
                nl += 1
        i = j + 1
    p = st[0]
    write_code(buf, st, nint + 1, GAMMA, 0)
    for t in range(nint):
        if t == 0:
            write_code(buf, st, zigzag(starts[0] - v) + 1, GAMMA, 0)
        else:
            write_code(buf, st, starts[t] - (starts[t - 1] + lens[t - 1] - 1) - 1, GAMMA, 0)
        write_code(buf, st, lens[t] - mil + 1, GAMMA, 0)
    budget[BV_INTERVALS] += st[0] - p
    p = st[0]
    for t in range(nl):
        write_code(buf, st, left[t] + 1 if t == 0 else left[t] - left[t - 1], ZETA, zk)
    budget[BV_RESIDUALS] += st[0] - p


@njit(cache=True)
def _bv_workspace(n):
    m = max(n, 1) + 2
    return (np.zeros(m, np.int64), np.empty(m, np.int64), np.empty(m, np.int64),
            np.empty(m + 1, np.int64), np.empty(m, np.int64), np.empty(m, np.int64))


@njit(cache=True)
def _bv_encode(indptr, indices, floors, window, max_ref, mil, zk, LG, LZ, pre, pre_bits):
    n = indptr.shape[0] - 1
    ws = _bv_workspace(n)
    offs = np.zeros(n, np.int64)
    depth = np.zeros(n, np.int64)
    total = pre_bits
    for v in range(n):
        best = _bv_cost(v, 0, indptr, indices, mil, LG, LZ, ws)
        bo = 0
        if indptr[v + 1] > indptr[v]:
            for off in range(1, window + 1):
                u = v - off
                if u < floors[v]:
                    break
                if depth[u] + 1 > max_ref:
                    continue
                c = _bv_cost(v, off, indptr, indices, mil, LG, LZ, ws)
                if c < best:
                    best = c
                    bo = off
        offs[v] = bo
        depth[v] = depth[v - bo] + 1 if bo > 0 else 0
        total += best
    nbytes = (total + 7) // 8
    buf = np.zeros(nbytes + 8, np.uint8)
    buf[: pre.shape[0]] = pre
    st = np.zeros(3, np.int64)
    st[0] = pre_bits
    pos = np.empty(n, np.int64)
    budget = np.zeros(5, np.int64)
    for v in range(n):
        pos[v] = st[0]
        _bv_emit(buf, st, v, offs[v], indptr, indices, mil, zk, ws, budget)
    return buf[:nbytes], pos, total, offs, budget, st[0]


@njit(cache=True)
def _bv_decode(buf, limit, start_pos, v0, v1, n, floors, window, mil, zk):
    cnt = v1 - v0
    op = np.zeros(cnt + 1, np.int64)
    oi = np.empty(16, np.int64)
    mark = np.zeros(n + 1, np.int64)
    st = np.zeros(3, np.int64)
    st[0] = start_pos
    st[1] = limit
    for v in range(v0, v1):
        r = v - v0
        base = op[r]
        d = read_code(buf, st, GAMMA, 0) - 1
        if st[2] or d < 0 or d > n:
            return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
        oi = _grow(oi, base + d)
        if d == 0:
            op[r + 1] = base
            continue
        off = read_code(buf, st, GAMMA, 0) - 1
        if st[2] or off < 0 or off > window or (off > 0 and v - off < max(floors[v], v0)):
            return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
        c = 0
        if off > 0:
            u = v - off - v0
            L = oi[op[u]:op[u + 1]]
            ln = L.shape[0]
            if ln > 0:
                nr = read_code(buf, st, GAMMA, 0)
                if st[2] or nr < 1 or nr > ln + 1:
                    return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
                pos = 0
                state = 1
                for t in range(nr):
                    if t == nr - 1:
                        k = ln - pos
                    elif t == 0:
                        k = read_code(buf, st, GAMMA, 0) - 1
                    else:
                        k = read_code(buf, st, GAMMA, 0)
                    if st[2] or k < 0 or pos + k > ln:
                        return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
                    if state == 1:
                        if c + k > d:
                            return op[: r + 1], oi[: op[r]], st[0], 2
                        for i in range(pos, pos + k):
                            oi[base + c] = L[i]
                            c += 1
                    pos += k
                    state ^= 1
        nint = read_code(buf, st, GAMMA, 0) - 1
        prev_end = -1
        for t in range(nint):
            if st[2]:
                break
            if t == 0:
                z = read_code(buf, st, GAMMA, 0) - 1
                start = v + (z // 2 if z % 2 == 0 else -(z + 1) // 2)
            else:
                start = prev_end + 1 + read_code(buf, st, GAMMA, 0)
            ln = read_code(buf, st, GAMMA, 0) + mil - 1
            if st[2] or start < 0 or start + ln > n or c + ln > d:
                return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
            for x in range(start, start + ln):
                oi[base + c] = x
                c += 1
            prev_end = start + ln - 1
        prev = -1
        for t in range(d - c):
            x = read_code(buf, st, ZETA, zk)
            prev = x - 1 if t == 0 else prev + x
            if st[2] or prev < 0 or prev >= n:
                return op[: r + 1], oi[: op[r]], st[0], 2 if not st[2] else st[2]
            oi[base + c] = prev
            c += 1
        if st[2]:
            return op[: r + 1], oi[: op[r]], st[0], st[2]
        oi[base:base + d] = np.sort(oi[base:base + d])
        for i in range(base + 1, base + d):
            if oi[i] == oi[i - 1]:
                return op[: r + 1], oi[: op[r]], st[0], 2
        op[r + 1] = base + d
    return op, oi[: op[cnt]], st[0], 0


# --------------------------------------------------------------------------
# Python surface


@dataclass(frozen=True)
class BvVertexParts:
    """Human-readable view of one baseline record (1-based ids)."""
    reference: int | None
    blocks: list[int]
    copied: int
    intervals: list[tuple[int, int]]
    residuals: list[int]
    residual_gaps: list[int]


def bv_vertex_parts(g: DirectedGraph, v: int, offset: int, mil: int = 4) -> BvVertexParts:
    """Copy blocks, intervals and residual gaps of vertex ``v`` (1-based) when it
    references ``v - offset`` (``offset`` 0 = no reference)."""
    v0 = v - 1
    if not 0 <= offset <= v0:
        raise ValueError("reference must be an earlier vertex")
    mark, R, left, runs, _, _ = _bv_workspace(g.n)
    nr, r = _bv_parts(v0, offset, g.indptr, g.indices, mil, mark, R, left, runs)
    blocks = runs[:nr].tolist() if offset else []
    rest = R[:r].tolist()
    intervals, leftover = [], []
    i = 0
    while i < len(rest):
        j = i
        while j + 1 < len(rest) and rest[j + 1] == rest[j] + 1:
            j += 1
        if j - i + 1 >= mil:
            intervals.append((rest[i] + 1, j - i + 1))
        else:
            leftover.extend(rest[i:j + 1])
        i = j + 1
    gaps = [x + 1 if t == 0 else x - leftover[t - 1] for t, x in enumerate(leftover)]
    return BvVertexParts(v - offset if offset else None, blocks, g.degree(v) - r, intervals,
                         [x + 1 for x in leftover], gaps)


@dataclass
class EncodedStream:
    """A codec bitstream plus everything the container needs to frame it."""

    codec: str
    n: int
    m: int
    data: bytes
    bits: int
    preamble_bits: int
    positions: np.ndarray
    window: int
    family: CodeFamily
    stride: int | None = None
    cluster_sizes: tuple[int, ...] = (1,)
    actions: np.ndarray | None = None
    record_bits: np.ndarray | None = None
    budget: dict[str, int] = field(default_factory=dict)
    config: KernelConfig | BvParams | None = None

    @property
    def cluster_offsets(self) -> np.ndarray:
        """Bit position of the first record of each cluster."""
        starts = np.concatenate([[0], np.cumsum(self.cluster_sizes)[:-1]]).astype(np.int64)
        return np.array([self.positions[s] if s < self.n else self.bits for s in starts], dtype=np.int64)


def _cluster_arrays(n: int, clusters) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    if clusters is None:
        sizes: tuple[int, ...] = (n,) if n else ()
    elif isinstance(clusters, Partition):
        sizes_list = []
        c = clusters.cluster_of
        if c.shape[0] != n:
            raise ValueError("partition size does not match the graph")
        breaks = np.flatnonzero(np.diff(c)) + 1
        bounds = np.concatenate([[0], breaks, [n]])
        if len(bounds) - 1 != clusters.k:
            raise ValueError("clusters must occupy contiguous vertex ranges")
        sizes_list = np.diff(bounds).tolist()
        sizes = tuple(int(s) for s in sizes_list)
    else:
        sizes = tuple(int(s) for s in clusters)
        if any(s < 1 for s in sizes) or sum(sizes) != n:
            raise ValueError("cluster sizes must be positive and sum to n")
    sz = np.asarray(sizes, dtype=np.int64)
    first = np.cumsum(sz) - sz
    starts = np.repeat(first, sz)
    ends = np.repeat(first + sz, sz)
    return starts, ends, sizes


def _kernel_preamble(cfg: KernelConfig, has_loops: bool, sizes: tuple[int, ...] | None) -> BitWriter:
    w = BitWriter()
    w.write_bit(int(has_loops))
    for flag in (cfg.copy_blocks, cfg.adaptive_copy, cfg.stop_lists, cfg.tight_intervals,
                 cfg.lr_split, cfg.multi_ref, cfg.header == HEADER_BG):
        w.write_bit(int(flag))
    if sizes is not None:
        g = CodeFamily.gamma()
        w.write_int(len(sizes) + 1, g)
        for s in sizes:
            w.write_int(s, g)
    return w


def _check_family(family: CodeFamily) -> None:
    if family.name not in CONTAINER_FAMILIES:
        raise ValueError(f"container supports {CONTAINER_FAMILIES} codes, not {family.name}")


def encode_kernel(g: DirectedGraph, codec: str, cfg: KernelConfig, clusters=None,
                  stride: int | None = None) -> EncodedStream:
    """Encode ``g`` with a kernel codec (bg, cs or cg)."""
    _check_family(cfg.family)
    if codec != "cg" and clusters is not None:
        raise ValueError("only the cg codec takes clusters")
    expected = {"bg": (HEADER_BG, HEADER_FIXED), "cs": (HEADER_CS,), "cg": (HEADER_CG,)}[codec]
    if cfg.header not in expected:
        raise ValueError(f"{codec} streams need {expected} headers, got {cfg.header}")
    n = g.n
    starts, ends, sizes = _cluster_arrays(n, clusters)
    multi_cluster = len(sizes) > 1
    kptr, kidx, has_loop = kernel_lists(g.indptr, g.indices, starts, ends)
    if multi_cluster:
        src = np.repeat(np.arange(n), g.degrees())
        outside = (g.indices < starts[src]) | (g.indices >= ends[src])
        xidx = g.indices[outside]
        xptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src[outside], minlength=n), out=xptr[1:])
    else:
        xptr, xidx = np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    loops = bool(has_loop.any())
    pre = _kernel_preamble(cfg, loops, sizes if codec == "cg" else None)
    vec = cfg.vector()
    xvec = vec.copy()
    xvec[C_LR], xvec[C_STOP] = 0, 1
    hcode, hlen = cfg.tables()
    floors = _floors(n, cfg.window, starts, stride)
    vl = np.arange(n, dtype=np.int64) - starts
    buf, pos, total, plans, written = _encode_records(
        kptr, kidx, has_loop, xptr, xidx, vl, floors, int(loops), int(multi_cluster), vec, xvec,
        hcode, hlen, cost_table(n, cfg.family), np.frombuffer(pre.getvalue(), np.uint8), pre.bits)
    if written != total:
        raise AssertionError(f"emitted {written} bits, planned {total}")
    return EncodedStream(codec, n, g.m, bytes(buf), int(total), pre.bits, pos, cfg.window,
                         cfg.family, stride, sizes, plans[:, 1].copy(), plans[:, 0].copy(),
                         config=cfg)


def encode_bv(g: DirectedGraph, params: BvParams = BvParams(), stride: int | None = None) -> EncodedStream:
    """Encode ``g`` with the BV-style baseline; ``budget`` splits the record bits."""
    n = g.n
    pre = BitWriter()
    gm = CodeFamily.gamma()
    for x in (params.window, params.max_ref, params.mil, params.zeta_k):
        pre.write_int(x, gm)
    floors = _floors(n, params.window, np.zeros(n, dtype=np.int64), stride)
    LG = length_table(2 * n + 16, GAMMA, 0)
    LZ = length_table(2 * n + 16, ZETA, params.zeta_k)
    buf, pos, total, offs, budget, written = _bv_encode(
        g.indptr, g.indices, floors, params.window, params.max_ref, params.mil, params.zeta_k,
        LG, LZ, np.frombuffer(pre.getvalue(), np.uint8), pre.bits)
    if written != total:
        raise AssertionError(f"emitted {written} bits, planned {total}")
    rec = np.diff(np.append(pos, total))
    return EncodedStream("bv", n, g.m, bytes(buf), int(total), pre.bits, pos, params.window,
                         CodeFamily.zeta(params.zeta_k), stride, (n,) if n else (), offs, rec,
                         dict(zip(BV_COMPONENTS, budget.tolist())), config=params)


def encode(g: DirectedGraph, codec: str, window: int | None = None,
           family: CodeFamily | None = None, clusters=None, stride: int | None = None,
           **overrides) -> EncodedStream:
    """Encode with ``codec`` in {bv, bg, cs, cg}; ``overrides`` tweak the kernel config."""
    if codec == "bv":
        params = BvParams(window=window or 7, **overrides)
        return encode_bv(g, params, stride)
    if codec not in PRESETS:
        raise ValueError(f"unknown codec {codec!r}")
    cfg = PRESETS[codec](window or 8, family, **overrides)
    return encode_kernel(g, codec, cfg, clusters, stride)


@dataclass(frozen=True)
class StreamInfo:
    """Decoder state recovered from a preamble."""

    codec: str
    n: int
    window: int
    family: CodeFamily
    stride: int | None
    records_start: int
    cluster_sizes: tuple[int, ...]
    config: KernelConfig | BvParams
    has_loops: bool = False


def read_preamble(data: bytes, codec: str, n: int, window: int, family: CodeFamily,
                  stride: int | None = None) -> StreamInfo:
    r = BitReader(data)
    gm = CodeFamily.gamma()
    if codec == "bv":
        w, mr, mil, k = (r.read_int(gm) for _ in range(4))
        if not 2 <= mil or k < 1:
            raise CorruptStream(r.position, "bad baseline parameters")
        return StreamInfo(codec, n, w, CodeFamily.zeta(k), stride, r.position, (n,),
                          BvParams(w, mr, mil, k))
    loops = bool(r.read_bit())
    blocks, adapt, stop, tight, lr, multi, vlc = (bool(r.read_bit()) for _ in range(7))
    sizes: tuple[int, ...] = (n,) if n else ()
    if codec == "cg":
        k = r.read_int(gm) - 1
        sizes = tuple(r.read_int(gm) for _ in range(k))
        if sum(sizes) != n:
            raise CorruptStream(r.position, "cluster sizes do not sum to n")
    header = {"bg": HEADER_BG if vlc else HEADER_FIXED, "cs": HEADER_CS, "cg": HEADER_CG}[codec]
    cfg = KernelConfig(window=window, family=family, copy_blocks=blocks, adaptive_copy=adapt,
                       stop_lists=stop, tight_intervals=tight, lr_split=lr, multi_ref=multi,
                       header=header, fixed_offsets=codec == "cg")
    return StreamInfo(codec, n, window, family, stride, r.position, sizes, cfg, loops)


def decode_range(data: bytes, info: StreamInfo, v0: int, v1: int, start_bit: int,
                 limit_bits: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Decode records ``v0..v1-1`` (0-based) starting at ``start_bit``.

    ``v0`` must be a point the encoder's window never reaches behind
    (vertex 0, or an index sample when the stream was built with a stride).
    Returns CSR ``(indptr, indices)`` of the decoded lists, 0-based.
    """
    buf = np.frombuffer(data + b"\0" * 8, dtype=np.uint8)
    limit = 8 * len(data) if limit_bits is None else limit_bits
    n = info.n
    if info.codec == "bv":
        p = info.config
        floors = _floors(n, p.window, np.zeros(n, dtype=np.int64), info.stride)
        op, oi, end, err = _bv_decode(buf, limit, start_bit, v0, v1, n, floors, p.window, p.mil, p.zeta_k)
    else:
        cfg = info.config
        starts, ends, sizes = _cluster_arrays(n, info.cluster_sizes if n else None)
        floors = _floors(n, cfg.window, starts, info.stride)
        vec = cfg.vector()
        xvec = vec.copy()
        xvec[C_LR], xvec[C_STOP] = 0, 1
        hcode, hlen = cfg.tables()
        maxloc = max(sizes) if sizes else 1
        op, oi, end, err = _decode_records(buf, limit, start_bit, v0, v1, n, starts, ends, floors,
                                           int(info.has_loops), int(len(sizes) > 1), vec, xvec,
                                           hcode, hlen, maxloc)
    if err:
        what = "truncated stream" if err == 1 else "corrupt record"
        raise CorruptStream(int(min(end, limit)), f"{what} (vertex {v0 + len(op)})")
    return op, oi


def decode_stream(data: bytes, codec: str, n: int, window: int, family: CodeFamily,
                  stride: int | None = None, limit_bits: int | None = None) -> DirectedGraph:
    """Decode a full bitstream back into a graph."""
    info = read_preamble(data, codec, n, window, family, stride)
    op, oi = decode_range(data, info, 0, n, info.records_start, limit_bits)
    return DirectedGraph(op, oi)


def action_histogram(stream: EncodedStream) -> dict[str, int]:
    from .kernel import action_name
    if stream.codec == "bv" or stream.actions is None:
        raise ValueError("action histograms exist for kernel codecs only")
    ids, counts = np.unique(stream.actions, return_counts=True)
    return {action_name(int(a)): int(c) for a, c in sorted(zip(ids, counts), key=lambda t: -t[1])}
