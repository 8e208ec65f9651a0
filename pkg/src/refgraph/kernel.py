"""Per-vertex encoding kernel shared by the BG, CS and CG codecs.

A vertex record encodes the *kernel list* ``S`` of a vertex: its successors
with the self-loop removed, expressed as local IDs (0-based, relative to the
vertex's cluster).  A record is

    header(action) · offsets · copy descriptors · residual section

where the action is one of 28: the empty action (``S`` is empty) or
``1 + 9·mode + kind`` with ``mode`` in {none, ref, multi} and ``kind`` in
{delta, interval(MIL 2..5), rle(MIL 2..5)}.  See ``docs/FORMAT.md`` for the
bit layout.

The planner evaluates every candidate with closed-form costs computed from a
code-length table; the emitter re-derives the record from the compact plan
``(aid, off1, off2, var1, var2)`` and the two must agree bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .bitcodes import (CodeFamily, code_len, get_bit, get_bits, length_table, put_bits,
                       read_code, write_code)

# --------------------------------------------------------------------------
# action space

N_ACTIONS = 28
MODE_NONE, MODE_REF, MODE_MULTI = 0, 1, 2
MODE_NAMES = ("none", "ref", "multi")
KIND_DELTA = 0
MILS = (2, 3, 4, 5)

VAR_BLOCKS, VAR_BITMAP, VAR_COMPLEMENT = 0, 1, 2
VARIANT_NAMES = ("blocks", "bitmap", "complement")


def action_id(mode: int, kind: int) -> int:
    return 1 + 9 * mode + kind


def action_parts(aid: int) -> tuple[int, int]:
    """(mode, kind) of a non-empty action."""
    if not 1 <= aid < N_ACTIONS:
        raise ValueError(f"action {aid} has no mode/kind")
    return (aid - 1) // 9, (aid - 1) % 9


def kind_name(kind: int) -> str:
    if kind == 0:
        return "delta"
    if kind <= 4:
        return f"interval{kind + 1}"
    return f"rle{kind - 3}"


def action_name(aid: int) -> str:
    if aid == 0:
        return "empty"
    mode, kind = action_parts(aid)
    return f"{MODE_NAMES[mode]}+{kind_name(kind)}"


@njit(cache=True)
def _kind_mil(kind):
    return kind + 1 if kind <= 4 else kind - 3


# --------------------------------------------------------------------------
# configuration vector

C_W, C_T, C_TOPK, C_MINDEG, C_FAM, C_ZK, C_BLOCKS, C_ADAPT, C_STOP, C_TIGHT, C_LR, \
    C_MULTI, C_OFFBITS, C_FAST = range(14)
N_CFG = 14

HEADER_BG, HEADER_FIXED, HEADER_CS, HEADER_CG = "bg", "fixed", "cs", "cg"

# BG merged variable-length header: (aid, length) in frequency-rank order.
BG_VLC_LENGTHS = (
    [(10, 1), (1, 2), (0, 3), (4, 4), (13, 6), (3, 7), (12, 7), (2, 8), (11, 8),
     (5, 9), (14, 9), (19, 10)]
    + [(a, 10) for a in range(6, 10)] + [(a, 10) for a in range(15, 19)]
    + [(a, 11) for a in range(20, 28)]
)


def canonical_code(lengths: Sequence[tuple[int, int]]) -> dict[int, tuple[int, int]]:
    """Canonical prefix code: symbols sorted by (length, listed rank)."""
    ranked = sorted(enumerate(lengths), key=lambda t: (t[1][1], t[0]))
    out, code, prev_len = {}, 0, None
    for _, (sym, ln) in ranked:
        if prev_len is not None:
            code = (code + 1) << (ln - prev_len)
        out[sym] = (code, ln)
        prev_len = ln
    if sum(2.0 ** -ln for _, ln in lengths) > 1:
        raise ValueError("lengths violate the Kraft inequality")
    return out


def header_tables(style: str) -> tuple[np.ndarray, np.ndarray]:
    """``(code, length)`` arrays indexed by action id; length 0 = not encodable."""
    code = np.zeros(N_ACTIONS, dtype=np.int64)
    length = np.zeros(N_ACTIONS, dtype=np.int64)
    if style == HEADER_BG:
        for aid, (c, ln) in canonical_code(BG_VLC_LENGTHS).items():
            code[aid], length[aid] = c, ln
    elif style == HEADER_FIXED:
        code[:] = np.arange(N_ACTIONS)
        length[:] = 5
    elif style == HEADER_CS:
        fixed = {10: (0b0, 1), 1: (0b10, 2), 4: (0b1100, 4), 13: (0b1101, 4), 0: (0b1110, 4)}
        for aid in range(N_ACTIONS):
            code[aid], length[aid] = fixed.get(aid, ((0b1111 << 5) | aid, 9))
    elif style == HEADER_CG:
        # flag bit (1 = reference), then kind code; multi is not encodable
        code[0], length[0] = 0b0111, 4
        for mode in (MODE_NONE, MODE_REF):
            for kind in range(9):
                if kind == 0:
                    kc, kl = 0b0, 1
                elif kind <= 4:
                    kc, kl = (0b10 << 2) | (kind - 1), 4
                else:
                    kc, kl = (0b110 << 2) | (kind - 5), 5
                aid = action_id(mode, kind)
                code[aid], length[aid] = (mode << kl) | kc, 1 + kl
    else:
        raise ValueError(f"unknown header style {style!r}")
    return code, length


@dataclass(frozen=True)
class KernelConfig:
    """Search and format parameters of the per-vertex kernel."""

    window: int = 8
    shortlist: int = 8
    multi_ref_topk: int = 5
    min_ref_degree: int = 1
    cost_model: str = "exact"
    family: CodeFamily = field(default_factory=CodeFamily.fibonacci)
    copy_blocks: bool = True
    adaptive_copy: bool = True
    stop_lists: bool = True
    tight_intervals: bool = True
    lr_split: bool = True
    multi_ref: bool = True
    header: str = HEADER_BG
    fixed_offsets: bool = False

    def __post_init__(self):
        w = self.window
        if w < 1 or w & (w - 1):
            raise ValueError("window must be a power of two >= 1")
        if self.shortlist < 1 or self.multi_ref_topk < 1 or self.min_ref_degree < 1:
            raise ValueError("shortlist, top-K and min_ref_degree must be >= 1")
        if self.cost_model not in ("exact", "fast"):
            raise ValueError("cost_model must be 'exact' or 'fast'")
        header_tables(self.header)
        if self.multi_ref and self.header in (HEADER_CS, HEADER_CG):
            raise ValueError(f"{self.header} headers cannot express multi-reference actions")

    @property
    def offset_bits(self) -> int:
        return (self.window - 1).bit_length() if self.fixed_offsets else -1

    def vector(self) -> np.ndarray:
        v = np.zeros(N_CFG, dtype=np.int64)
        v[C_W] = self.window
        v[C_T] = self.shortlist
        v[C_TOPK] = self.multi_ref_topk
        v[C_MINDEG] = self.min_ref_degree
        v[C_FAM] = self.family.kind
        v[C_ZK] = self.family.k
        v[C_BLOCKS] = self.copy_blocks
        v[C_ADAPT] = self.adaptive_copy
        v[C_STOP] = self.stop_lists
        v[C_TIGHT] = self.tight_intervals
        v[C_LR] = self.lr_split
        v[C_MULTI] = self.multi_ref
        v[C_OFFBITS] = self.offset_bits
        v[C_FAST] = self.cost_model == "fast"
        return v

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        return header_tables(self.header)


def cost_table(n: int, family: CodeFamily) -> np.ndarray:
    """Code lengths for every value a record over ``n`` vertices can hold."""
    return length_table(2 * n + 16, family.kind, family.k)


# --------------------------------------------------------------------------
# numba: costs


@njit(cache=True)
def zigzag(x):
    return 2 * x if x >= 0 else -2 * x - 1


@njit(cache=True)
def unzigzag(z):
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


@njit(cache=True)
def _list_frame(cnt, cfg, LT):
    return cnt + 1 if cfg[C_STOP] else LT[cnt + 1]


@njit(cache=True)
def delta_cost(vals, cnt, v, cfg, LT):
    """Bits of a delta list (LR-split or plain) over ``vals[:cnt]``."""
    if cnt == 0:
        return 2 * _list_frame(0, cfg, LT) if cfg[C_LR] else _list_frame(0, cfg, LT)
    bits = 0
    if cfg[C_LR]:
        p = 0
        while p < cnt and vals[p] < v:
            p += 1
        prev = v
        for i in range(p - 1, -1, -1):
            bits += LT[prev - vals[i]]
            prev = vals[i]
        prev = v
        for i in range(p, cnt):
            bits += LT[vals[i] - prev]
            prev = vals[i]
        return bits + _list_frame(p, cfg, LT) + _list_frame(cnt - p, cfg, LT)
    bits = LT[zigzag(vals[0] - v) + 1]
    for i in range(1, cnt):
        bits += LT[vals[i] - vals[i - 1]]
    return bits + _list_frame(cnt, cfg, LT)


@njit(cache=True)
def _first_pos_cost(start, v, cfg, LT):
    return LT[zigzag(start - v) + 1] if cfg[C_TIGHT] else LT[start + 1]


@njit(cache=True)
def interval_cost(vals, cnt, v, mil, cfg, LT, left):
    bits = 0
    nint = 0
    nl = 0
    prev_end = -1
    i = 0
    while i < cnt:
        j = i
        while j + 1 < cnt and vals[j + 1] == vals[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            if nint == 0:
                bits += _first_pos_cost(vals[i], v, cfg, LT)
            else:
                bits += LT[vals[i] - prev_end - 1]
            bits += LT[ln - mil + 1]
            prev_end = vals[j]
            nint += 1
        else:
            for t in range(i, j + 1):
                left[nl] = vals[t]
                nl += 1
        i = j + 1
    return bits + _list_frame(nint, cfg, LT) + delta_cost(left, nl, v, cfg, LT)


@njit(cache=True)
def rle_cost(vals, cnt, v, mil, cfg, LT):
    bits = 0
    items = 0
    prev_end = -1
    i = 0
    while i < cnt:
        j = i
        while j + 1 < cnt and vals[j + 1] == vals[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            bits += (_first_pos_cost(vals[i], v, cfg, LT) if items == 0 else LT[vals[i] - prev_end])
            bits += LT[ln - mil + 2]
            prev_end = vals[j]
            items += 1
        else:
            for t in range(i, j + 1):
                bits += (_first_pos_cost(vals[t], v, cfg, LT) if items == 0 else LT[vals[t] - prev_end])
                bits += LT[1]
                prev_end = vals[t]
                items += 1
        i = j + 1
    return bits + _list_frame(items, cfg, LT)


@njit(cache=True)
def residual_cost(kind, vals, cnt, v, cfg, LT, left):
    if kind == 0:
        return delta_cost(vals, cnt, v, cfg, LT)
    if kind <= 4:
        return interval_cost(vals, cnt, v, kind + 1, cfg, LT, left)
    return rle_cost(vals, cnt, v, kind - 3, cfg, LT)


@njit(cache=True)
def _runs(mask, ln, first_state, runs):
    """Alternating run lengths of ``mask[:ln]`` starting with ``first_state``."""
    r = 0
    i = 0
    state = first_state
    while i < ln:
        j = i
        while j < ln and mask[j] == state:
            j += 1
        runs[r] = j - i
        r += 1
        state ^= 1
        i = j
    return r


@njit(cache=True)
def _runs_cost(mask, ln, first_state, LT, runs):
    r = _runs(mask, ln, first_state, runs)
    bits = LT[r]
    for t in range(r - 1):
        bits += LT[runs[0] + 1] if t == 0 else LT[runs[t]]
    return bits


@njit(cache=True)
def desc_variant_cost(mask, ln, var, cfg, LT, runs):
    """Bits of copy descriptor variant ``var``; -1 if not allowed by ``cfg``."""
    if ln == 0:
        return 0 if var == VAR_BLOCKS else -1
    if not cfg[C_BLOCKS]:
        return ln if var == VAR_BITMAP else -1
    if not cfg[C_ADAPT]:
        return _runs_cost(mask, ln, 1, LT, runs) if var == VAR_BLOCKS else -1
    if var == VAR_BLOCKS:
        return 1 + _runs_cost(mask, ln, 1, LT, runs)
    if var == VAR_BITMAP:
        return 2 + ln
    return 2 + _runs_cost(mask, ln, 0, LT, runs)


@njit(cache=True)
def desc_cost(mask, ln, cfg, LT, runs):
    """Cheapest allowed descriptor: (bits, variant); ties prefer blocks, bitmap, complement."""
    best = -1
    bv = 0
    for var in range(3):
        c = desc_variant_cost(mask, ln, var, cfg, LT, runs)
        if c >= 0 and (best < 0 or c < best):
            best = c
            bv = var
    return best, bv


@njit(cache=True)
def offset_cost(off, cfg, LT):
    return cfg[C_OFFBITS] if cfg[C_OFFBITS] >= 0 else LT[off]


@njit(cache=True)
def _best_kind(vals, cnt, v, mode, cfg, hlen, LT, left):
    best = -1
    bk = 0
    for kind in range(9):
        aid = 1 + 9 * mode + kind
        if hlen[aid] == 0:
            continue
        c = hlen[aid] + residual_cost(kind, vals, cnt, v, cfg, LT, left)
        if best < 0 or c < best:
            best = c
            bk = kind
    return best, bk


# --------------------------------------------------------------------------
# numba: workspace + planner


@njit(cache=True)
def make_workspace(n, w):
    """(mark, R, left, runs, mask, l2, cand_off, cand_ov)."""
    m = max(n, 1) + 1
    return (np.zeros(m, np.int64), np.empty(m, np.int64), np.empty(m, np.int64),
            np.empty(m + 1, np.int64), np.empty(m, np.int64), np.empty(2 * m + 2, np.int64),
            np.empty(w + 1, np.int64), np.empty(w + 1, np.int64))


@njit(cache=True)
def _candidates(v, floor, kptr, kidx, cfg, mark, cand_off, cand_ov):
    """Legal window references (ascending offset) and their overlaps with S."""
    nc = 0
    for off in range(1, cfg[C_W] + 1):
        u = v - off
        if u < floor:
            break
        lu = kptr[u + 1] - kptr[u]
        if lu < cfg[C_MINDEG]:
            continue
        ov = 0
        for j in range(kptr[u], kptr[u + 1]):
            if mark[kidx[j]] == 1:
                ov += 1
        cand_off[nc] = off
        cand_ov[nc] = ov
        nc += 1
    return nc


@njit(cache=True)
def shortlist_order(cand_ov, nc):
    """Indices of candidates by decreasing overlap, ties by smaller offset."""
    return np.argsort(-cand_ov[:nc], kind="mergesort")


@njit(cache=True)
def plan_vertex_nb(v, vl, floor, kptr, kidx, cfg, hlen, LT, ws):
    """Cheapest record for vertex index ``v`` (local ID ``vl``).

    Returns ``(bits, aid, off1, off2, var1, var2)``.
    """
    mark, R, left, runs, mask, l2, cand_off, cand_ov = ws
    s0, s1 = kptr[v], kptr[v + 1]
    cnt = s1 - s0
    if cnt == 0:
        return hlen[0], 0, 0, 0, 0, 0
    S = kidx[s0:s1]
    for x in S:
        mark[x] = 1
    best, kind = _best_kind(S, cnt, vl, MODE_NONE, cfg, hlen, LT, left)
    b_aid, b_o1, b_o2, b_v1, b_v2 = 1 + kind, 0, 0, 0, 0
    if cnt >= cfg[C_MINDEG] and hlen[1 + 9 * MODE_REF] > 0:
        nc = _candidates(v, floor, kptr, kidx, cfg, mark, cand_off, cand_ov)
        order = shortlist_order(cand_ov, nc)
        T = cfg[C_T]
        if cfg[C_FAST] and T > 2:
            T = 2
        ns = min(nc, T)
        for t in range(ns):
            off = cand_off[order[t]]
            u = v - off
            L = kidx[kptr[u]:kptr[u + 1]]
            ln = L.shape[0]
            for i in range(ln):
                mask[i] = 1 if mark[L[i]] == 1 else 0
            dc, dv = desc_cost(mask, ln, cfg, LT, runs)
            r = 0
            for x in S:
                mark[x] = 1
            for i in range(ln):
                if mask[i]:
                    mark[L[i]] = 2
            for x in S:
                if mark[x] == 1:
                    R[r] = x
                    r += 1
            rc, kind = _best_kind(R, r, vl, MODE_REF, cfg, hlen, LT, left)
            for i in range(ln):
                if mask[i]:
                    mark[L[i]] = 1
            total = rc + offset_cost(off, cfg, LT) + dc
            if total < best:
                best, b_aid, b_o1, b_o2, b_v1, b_v2 = total, 1 + 9 + kind, off, 0, dv, 0
        if cfg[C_MULTI] and not cfg[C_FAST]:
            for t in range(min(nc, cfg[C_TOPK])):
                if cand_ov[order[t]] == 0:
                    break
                off1 = cand_off[order[t]]
                u1 = v - off1
                L1 = kidx[kptr[u1]:kptr[u1 + 1]]
                ln1 = L1.shape[0]
                for i in range(ln1):
                    mask[i] = 1 if mark[L1[i]] == 1 else 0
                dc1, dv1 = desc_cost(mask, ln1, cfg, LT, runs)
                for i in range(ln1):
                    if mask[i]:
                        mark[L1[i]] = 2
                base = dc1 + offset_cost(off1, cfg, LT)
                for c2 in range(nc):
                    off2 = cand_off[c2]
                    if off2 == off1:
                        continue
                    u2 = v - off2
                    n2 = 0
                    ov2 = 0
                    for j in range(kptr[u2], kptr[u2 + 1]):
                        y = kidx[j]
                        if mark[y] != 2:
                            l2[n2] = y
                            mask[n2] = 1 if mark[y] == 1 else 0
                            ov2 += mask[n2]
                            n2 += 1
                    if ov2 == 0:
                        continue
                    dc2, dv2 = desc_cost(mask, n2, cfg, LT, runs)
                    for i in range(n2):
                        if mask[i]:
                            mark[l2[i]] = 3
                    r = 0
                    for x in S:
                        if mark[x] == 1:
                            R[r] = x
                            r += 1
                    rc, kind = _best_kind(R, r, vl, MODE_MULTI, cfg, hlen, LT, left)
                    for i in range(n2):
                        if mask[i]:
                            mark[l2[i]] = 1
                    total = rc + base + offset_cost(off2, cfg, LT) + dc2
                    if total < best:
                        best, b_aid, b_o1, b_o2, b_v1, b_v2 = total, 1 + 18 + kind, off1, off2, dv1, dv2
                for x in S:
                    mark[x] = 1
    for x in S:
        mark[x] = 0
    return best, b_aid, b_o1, b_o2, b_v1, b_v2


# --------------------------------------------------------------------------
# numba: emission


@njit(cache=True)
def _put_code(buf, st, x, cfg):
    write_code(buf, st, x, cfg[C_FAM], cfg[C_ZK])


@njit(cache=True)
def _emit_frame_start(buf, st, cnt, cfg):
    if not cfg[C_STOP]:
        _put_code(buf, st, cnt + 1, cfg)


@njit(cache=True)
def _emit_item_flag(buf, st, cfg):
    if cfg[C_STOP]:
        put_bits(buf, st, 1, 1)


@njit(cache=True)
def _emit_frame_end(buf, st, cfg):
    if cfg[C_STOP]:
        st[0] += 1


@njit(cache=True)
def emit_delta(buf, st, vals, cnt, v, cfg):
    if cfg[C_LR]:
        p = 0
        while p < cnt and vals[p] < v:
            p += 1
        _emit_frame_start(buf, st, p, cfg)
        prev = v
        for i in range(p - 1, -1, -1):
            _emit_item_flag(buf, st, cfg)
            _put_code(buf, st, prev - vals[i], cfg)
            prev = vals[i]
        _emit_frame_end(buf, st, cfg)
        _emit_frame_start(buf, st, cnt - p, cfg)
        prev = v
        for i in range(p, cnt):
            _emit_item_flag(buf, st, cfg)
            _put_code(buf, st, vals[i] - prev, cfg)
            prev = vals[i]
        _emit_frame_end(buf, st, cfg)
        return
    _emit_frame_start(buf, st, cnt, cfg)
    for i in range(cnt):
        _emit_item_flag(buf, st, cfg)
        _put_code(buf, st, zigzag(vals[0] - v) + 1 if i == 0 else vals[i] - vals[i - 1], cfg)
    _emit_frame_end(buf, st, cfg)


@njit(cache=True)
def _first_pos_value(start, v, cfg):
    return zigzag(start - v) + 1 if cfg[C_TIGHT] else start + 1


@njit(cache=True)
def split_intervals(vals, cnt, mil, starts, lens, left):
    """Maximal runs of length >= mil; returns (n_intervals, n_leftovers)."""
    nint = 0
    nl = 0
    i = 0
    while i < cnt:
        j = i
        while j + 1 < cnt and vals[j + 1] == vals[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            starts[nint] = vals[i]
            lens[nint] = ln
            nint += 1
        else:
            for t in range(i, j + 1):
                left[nl] = vals[t]
                nl += 1
        i = j + 1
    return nint, nl


@njit(cache=True)
def emit_intervals(buf, st, vals, cnt, v, mil, cfg, left, scratch):
    starts = scratch[: cnt + 1]
    lens = scratch[cnt + 1: 2 * cnt + 2]
    nint, nl = split_intervals(vals, cnt, mil, starts, lens, left)
    _emit_frame_start(buf, st, nint, cfg)
    prev_end = -1
    for t in range(nint):
        _emit_item_flag(buf, st, cfg)
        _put_code(buf, st, _first_pos_value(starts[t], v, cfg) if t == 0 else starts[t] - prev_end - 1, cfg)
        _put_code(buf, st, lens[t] - mil + 1, cfg)
        prev_end = starts[t] + lens[t] - 1
    _emit_frame_end(buf, st, cfg)
    emit_delta(buf, st, left, nl, v, cfg)


@njit(cache=True)
def _rle_items(vals, cnt, mil, starts, codes):
    items = 0
    i = 0
    while i < cnt:
        j = i
        while j + 1 < cnt and vals[j + 1] == vals[j] + 1:
            j += 1
        ln = j - i + 1
        if ln >= mil:
            starts[items] = vals[i]
            codes[items] = ln - mil + 2
            items += 1
        else:
            for t in range(i, j + 1):
                starts[items] = vals[t]
                codes[items] = 1
                items += 1
        i = j + 1
    return items


@njit(cache=True)
def emit_rle(buf, st, vals, cnt, v, mil, cfg, scratch):
    starts = scratch[: cnt + 1]
    codes = scratch[cnt + 1: 2 * cnt + 2]
    items = _rle_items(vals, cnt, mil, starts, codes)
    _emit_frame_start(buf, st, items, cfg)
    prev_end = -1
    for t in range(items):
        _emit_item_flag(buf, st, cfg)
        _put_code(buf, st, _first_pos_value(starts[t], v, cfg) if t == 0 else starts[t] - prev_end, cfg)
        _put_code(buf, st, codes[t], cfg)
        prev_end = starts[t] + (codes[t] + mil - 2 if codes[t] > 1 else 1) - 1
    _emit_frame_end(buf, st, cfg)


@njit(cache=True)
def emit_residual(buf, st, kind, vals, cnt, v, cfg, left, scratch):
    if kind == 0:
        emit_delta(buf, st, vals, cnt, v, cfg)
    elif kind <= 4:
        emit_intervals(buf, st, vals, cnt, v, kind + 1, cfg, left, scratch)
    else:
        emit_rle(buf, st, vals, cnt, v, kind - 3, cfg, scratch)


@njit(cache=True)
def _emit_runs(buf, st, mask, ln, first_state, cfg, runs):
    r = _runs(mask, ln, first_state, runs)
    _put_code(buf, st, r, cfg)
    for t in range(r - 1):
        _put_code(buf, st, runs[0] + 1 if t == 0 else runs[t], cfg)


@njit(cache=True)
def emit_desc(buf, st, mask, ln, var, cfg, runs):
    if ln == 0:
        return
    if cfg[C_BLOCKS] and cfg[C_ADAPT]:
        if var == VAR_BLOCKS:
            put_bits(buf, st, 0, 1)
        else:
            put_bits(buf, st, 2 if var == VAR_BITMAP else 3, 2)
    if var == VAR_BITMAP:
        for i in range(ln):
            put_bits(buf, st, mask[i], 1)
    else:
        _emit_runs(buf, st, mask, ln, 1 if var == VAR_BLOCKS else 0, cfg, runs)


@njit(cache=True)
def _emit_offset(buf, st, off, cfg):
    if cfg[C_OFFBITS] >= 0:
        put_bits(buf, st, off - 1, cfg[C_OFFBITS])
    else:
        _put_code(buf, st, off, cfg)


@njit(cache=True)
def emit_vertex(buf, st, v, vl, aid, off1, off2, var1, var2, kptr, kidx, cfg, hcode, hlen, ws):
    mark, R, left, runs, mask, l2, _co, _cv = ws
    put_bits(buf, st, hcode[aid], hlen[aid])
    if aid == 0:
        return
    mode = (aid - 1) // 9
    kind = (aid - 1) % 9
    S = kidx[kptr[v]:kptr[v + 1]]
    for x in S:
        mark[x] = 1
    if mode >= 1:
        _emit_offset(buf, st, off1, cfg)
    if mode == 2:
        _emit_offset(buf, st, off2, cfg)
    if mode >= 1:
        u = v - off1
        L = kidx[kptr[u]:kptr[u + 1]]
        for i in range(L.shape[0]):
            mask[i] = 1 if mark[L[i]] == 1 else 0
        emit_desc(buf, st, mask, L.shape[0], var1, cfg, runs)
        for i in range(L.shape[0]):
            if mask[i]:
                mark[L[i]] = 2
    if mode == 2:
        u = v - off2
        n2 = 0
        for j in range(kptr[u], kptr[u + 1]):
            y = kidx[j]
            if mark[y] != 2:
                l2[n2] = y
                mask[n2] = 1 if mark[y] == 1 else 0
                n2 += 1
        emit_desc(buf, st, mask, n2, var2, cfg, runs)
        for i in range(n2):
            if mask[i]:
                mark[l2[i]] = 2
    r = 0
    for x in S:
        if mark[x] == 1:
            R[r] = x
            r += 1
        mark[x] = 0
    emit_residual(buf, st, kind, R, r, vl, cfg, left, l2)


# --------------------------------------------------------------------------
# numba: decoding

ERR_NONE, ERR_TRUNCATED, ERR_CORRUPT = 0, 1, 2


@njit(cache=True)
def _get_code(buf, st, cfg):
    return read_code(buf, st, cfg[C_FAM], cfg[C_ZK])


@njit(cache=True)
def read_header(buf, st, hcode, hlen):
    code = 0
    for ln in range(1, 17):
        code = (code << 1) | get_bit(buf, st)
        if st[2]:
            return -1
        for aid in range(hcode.shape[0]):
            if hlen[aid] == ln and hcode[aid] == code:
                return aid
    st[2] = ERR_CORRUPT
    return -1


@njit(cache=True)
def _read_count(buf, st, cfg):
    """Item count of a count-prefixed list, or -1 for a STOP list."""
    if cfg[C_STOP]:
        return -1
    return _get_code(buf, st, cfg) - 1


@njit(cache=True)
def _more(buf, st, cfg, done, count):
    if cfg[C_STOP]:
        return get_bit(buf, st) == 1 and not st[2]
    return done < count and not st[2]


@njit(cache=True)
def _push(out, c, x, nloc, st):
    if x < 0 or x >= nloc or c >= nloc:
        st[2] = ERR_CORRUPT
        return c
    out[c] = x
    return c + 1


@njit(cache=True)
def read_delta(buf, st, v, nloc, cfg, out, c):
    if cfg[C_LR]:
        for side in (-1, 1):
            count = _read_count(buf, st, cfg)
            done = 0
            prev = v
            while _more(buf, st, cfg, done, count):
                prev = prev + side * _get_code(buf, st, cfg)
                c = _push(out, c, prev, nloc, st)
                done += 1
                if st[2]:
                    return c
        return c
    count = _read_count(buf, st, cfg)
    done = 0
    prev = v
    while _more(buf, st, cfg, done, count):
        x = _get_code(buf, st, cfg)
        prev = v + unzigzag(x - 1) if done == 0 else prev + x
        c = _push(out, c, prev, nloc, st)
        done += 1
        if st[2]:
            return c
    return c


@njit(cache=True)
def _read_first_pos(buf, st, v, cfg):
    x = _get_code(buf, st, cfg)
    return v + unzigzag(x - 1) if cfg[C_TIGHT] else x - 1


@njit(cache=True)
def read_intervals(buf, st, v, nloc, mil, cfg, out, c):
    count = _read_count(buf, st, cfg)
    done = 0
    prev_end = -1
    while _more(buf, st, cfg, done, count):
        start = _read_first_pos(buf, st, v, cfg) if done == 0 else prev_end + 1 + _get_code(buf, st, cfg)
        ln = _get_code(buf, st, cfg) + mil - 1
        if st[2] or start < 0 or start + ln > nloc:
            st[2] = ERR_CORRUPT
            return c
        for x in range(start, start + ln):
            c = _push(out, c, x, nloc, st)
        if st[2]:
            return c
        prev_end = start + ln - 1
        done += 1
    return read_delta(buf, st, v, nloc, cfg, out, c)


@njit(cache=True)
def read_rle(buf, st, v, nloc, mil, cfg, out, c):
    count = _read_count(buf, st, cfg)
    done = 0
    prev_end = -1
    while _more(buf, st, cfg, done, count):
        start = _read_first_pos(buf, st, v, cfg) if done == 0 else prev_end + _get_code(buf, st, cfg)
        code = _get_code(buf, st, cfg)
        ln = code + mil - 2 if code > 1 else 1
        if st[2] or start < 0 or start + ln > nloc:
            st[2] = ERR_CORRUPT
            return c
        for x in range(start, start + ln):
            c = _push(out, c, x, nloc, st)
        if st[2]:
            return c
        prev_end = start + ln - 1
        done += 1
    return c


@njit(cache=True)
def read_desc(buf, st, ln, cfg, mask, runs):
    """Fill ``mask[:ln]``; returns False on a malformed descriptor."""
    if ln == 0:
        return True
    var = VAR_BLOCKS
    if cfg[C_BLOCKS] and cfg[C_ADAPT]:
        if get_bit(buf, st) == 1:
            var = VAR_BITMAP if get_bit(buf, st) == 0 else VAR_COMPLEMENT
    elif not cfg[C_BLOCKS]:
        var = VAR_BITMAP
    if var == VAR_BITMAP:
        for i in range(ln):
            mask[i] = get_bit(buf, st)
        return not st[2]
    r = _get_code(buf, st, cfg)
    if st[2] or r < 1 or r > ln + 1:
        return False
    pos = 0
    state = 1 if var == VAR_BLOCKS else 0
    for t in range(r):
        if t == r - 1:
            k = ln - pos
        elif t == 0:
            k = _get_code(buf, st, cfg) - 1
        else:
            k = _get_code(buf, st, cfg)
        if st[2] or k < 0 or pos + k > ln:
            return False
        for i in range(pos, pos + k):
            mask[i] = state
        pos += k
        state ^= 1
    return True


@njit(cache=True)
def _read_offset(buf, st, cfg):
    if cfg[C_OFFBITS] >= 0:
        return get_bits(buf, st, cfg[C_OFFBITS]) + 1
    return _get_code(buf, st, cfg)


@njit(cache=True)
def decode_vertex(buf, st, v, vl, floor, nloc, kptr, kidx, cfg, hcode, hlen, ws, out):
    """Decode one record into ``out``; returns the (sorted) list length.

    ``kptr``/``kidx`` hold the already decoded lists of vertices
    ``floor..v-1`` (indices relative to the decoding range).
    On failure ``st[2]`` is set and the return value is meaningless.
    """
    mark, R, left, runs, mask, l2, _co, _cv = ws
    aid = read_header(buf, st, hcode, hlen)
    if aid <= 0:
        return 0
    mode = (aid - 1) // 9
    kind = (aid - 1) % 9
    c = 0
    off1 = 0
    off2 = 0
    if mode >= 1:
        off1 = _read_offset(buf, st, cfg)
    if mode == 2:
        off2 = _read_offset(buf, st, cfg)
    if st[2]:
        return 0
    if (mode >= 1 and (off1 < 1 or off1 > cfg[C_W] or v - off1 < floor)) or \
            (mode == 2 and (off2 < 1 or off2 > cfg[C_W] or v - off2 < floor or off2 == off1)):
        st[2] = ERR_CORRUPT
        return 0
    if mode >= 1:
        u = v - off1
        L = kidx[kptr[u]:kptr[u + 1]]
        if not read_desc(buf, st, L.shape[0], cfg, mask, runs):
            st[2] = ERR_CORRUPT
            return 0
        for i in range(L.shape[0]):
            if mask[i]:
                out[c] = L[i]
                c += 1
                mark[L[i]] = 1
    if mode == 2:
        u = v - off2
        n2 = 0
        for j in range(kptr[u], kptr[u + 1]):
            if mark[kidx[j]] == 0:
                l2[n2] = kidx[j]
                n2 += 1
        ok = read_desc(buf, st, n2, cfg, mask, runs)
        for i in range(c):
            mark[out[i]] = 0
        if not ok:
            st[2] = ERR_CORRUPT
            return 0
        for i in range(n2):
            if mask[i]:
                out[c] = l2[i]
                c += 1
    else:
        for i in range(c):
            mark[out[i]] = 0
    if kind == 0:
        c = read_delta(buf, st, vl, nloc, cfg, out, c)
    elif kind <= 4:
        c = read_intervals(buf, st, vl, nloc, kind + 1, cfg, out, c)
    else:
        c = read_rle(buf, st, vl, nloc, kind - 3, cfg, out, c)
    if st[2]:
        return 0
    srt = np.sort(out[:c])
    for i in range(c):
        if srt[i] == vl or (i > 0 and srt[i] == srt[i - 1]):
            st[2] = ERR_CORRUPT
            return 0
        out[i] = srt[i]
    return c


# --------------------------------------------------------------------------
# exhaustive oracle (serialises every legal candidate)


@njit(cache=True)
def _variants(cfg, out):
    """Descriptor variants allowed by ``cfg`` (written to ``out``); returns the count."""
    if not cfg[C_BLOCKS]:
        out[0] = VAR_BITMAP
        return 1
    out[0] = VAR_BLOCKS
    if not cfg[C_ADAPT]:
        return 1
    out[1] = VAR_BITMAP
    out[2] = VAR_COMPLEMENT
    return 3


@njit(cache=True)
def plan_cost_nb(v, vl, aid, off1, off2, var1, var2, kptr, kidx, cfg, hlen, LT, ws):
    """Closed-form bit cost of a forced plan (no serialisation)."""
    mark, R, left, runs, mask, l2, _co, _cv = ws
    bits = hlen[aid]
    if aid == 0:
        return bits
    mode = (aid - 1) // 9
    kind = (aid - 1) % 9
    S = kidx[kptr[v]:kptr[v + 1]]
    for x in S:
        mark[x] = 1
    if mode >= 1:
        bits += offset_cost(off1, cfg, LT)
        u = v - off1
        L = kidx[kptr[u]:kptr[u + 1]]
        for i in range(L.shape[0]):
            mask[i] = 1 if mark[L[i]] == 1 else 0
        d = desc_variant_cost(mask, L.shape[0], var1, cfg, LT, runs)
        bits += d if L.shape[0] else 0
        for i in range(L.shape[0]):
            if mask[i]:
                mark[L[i]] = 2
    if mode == 2:
        bits += offset_cost(off2, cfg, LT)
        u = v - off2
        n2 = 0
        for j in range(kptr[u], kptr[u + 1]):
            y = kidx[j]
            if mark[y] != 2:
                l2[n2] = y
                mask[n2] = 1 if mark[y] == 1 else 0
                n2 += 1
        d = desc_variant_cost(mask, n2, var2, cfg, LT, runs)
        bits += d if n2 else 0
        for i in range(n2):
            if mask[i]:
                mark[l2[i]] = 2
    r = 0
    for x in S:
        if mark[x] == 1:
            R[r] = x
            r += 1
        mark[x] = 0
    return bits + residual_cost(kind, R, r, vl, cfg, LT, left)


@njit(cache=True)
def brute_force_vertex(v, vl, floor, kptr, kidx, cfg, hcode, hlen, ws, buf):
    """Minimum serialised size over every legal (action, references,
    descriptor variants) combination, measured by emitting each one."""
    mark, R, left, runs, mask, l2, cand_off, cand_ov = ws
    st = np.zeros(3, np.int64)
    cnt = kptr[v + 1] - kptr[v]
    if cnt == 0:
        buf[:] = 0
        emit_vertex(buf, st, v, vl, 0, 0, 0, 0, 0, kptr, kidx, cfg, hcode, hlen, ws)
        return st[0]
    legal = np.zeros(cfg[C_W] + 1, np.bool_)
    refs_ok = cnt >= cfg[C_MINDEG]
    for off in range(1, cfg[C_W] + 1):
        u = v - off
        if u >= floor and kptr[u + 1] - kptr[u] >= cfg[C_MINDEG] and refs_ok:
            legal[off] = True
    nvars = np.empty(3, np.int64)
    nv = _variants(cfg, nvars)
    best = -1
    for aid in range(1, N_ACTIONS):
        if hlen[aid] == 0:
            continue
        mode = (aid - 1) // 9
        if mode == 2 and not cfg[C_MULTI]:
            continue
        o1max = cfg[C_W] if mode >= 1 else 0
        for off1 in range(0 if mode == 0 else 1, o1max + 1):
            if mode >= 1 and not legal[off1]:
                continue
            for off2 in range(0 if mode < 2 else 1, (cfg[C_W] if mode == 2 else 0) + 1):
                if mode == 2 and (not legal[off2] or off2 == off1):
                    continue
                for a in range(nv if mode >= 1 else 1):
                    for b in range(nv if mode == 2 else 1):
                        st[0] = 0
                        buf[:] = 0
                        emit_vertex(buf, st, v, vl, aid, off1, off2, nvars[a], nvars[b],
                                    kptr, kidx, cfg, hcode, hlen, ws)
                        if best < 0 or st[0] < best:
                            best = st[0]
    return best


# --------------------------------------------------------------------------
# Python surface


def kernel_lists(indptr: np.ndarray, indices: np.ndarray, starts: np.ndarray | None = None,
                 ends: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Strip self-loops and keep successors inside each vertex's cluster
    ``[starts[v], ends[v])``, expressed relative to ``starts[v]``.

    Returns ``(kptr, kidx, has_loop)``.
    """
    n = indptr.shape[0] - 1
    src = np.repeat(np.arange(n), np.diff(indptr))
    if starts is None:
        starts = np.zeros(n, dtype=np.int64)
        ends = np.full(n, n, dtype=np.int64)
    loop = indices == src
    keep = ~loop & (indices >= starts[src]) & (indices < ends[src])
    has_loop = np.zeros(n, dtype=bool)
    has_loop[src[loop]] = True
    kidx = (indices - starts[src])[keep]
    kptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src[keep], minlength=n), out=kptr[1:])
    return kptr, kidx.astype(np.int64), has_loop


def _csr(lists: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(lists) + 1, dtype=np.int64)
    np.cumsum([len(x) for x in lists], out=ptr[1:])
    idx = np.fromiter((y for x in lists for y in x), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


@dataclass(frozen=True)
class CopyDescriptor:
    variant: str
    mask: tuple[int, ...]
    runs: tuple[int, ...]
    bits: int
    copied: tuple[int, ...]

    @property
    def blocks(self) -> tuple[int, ...]:
        return self.runs


def copy_descriptor(v_list: Sequence[int], ref_list: Sequence[int],
                    cfg: KernelConfig = KernelConfig(), variant: str | None = None) -> CopyDescriptor:
    """Cheapest (or the requested) representation of the copy mask of
    ``ref_list`` against ``v_list``; ``runs`` are alternating copy/skip
    lengths (skip/copy for the complement variant)."""
    sv = set(v_list)
    ref = np.asarray(sorted(ref_list), dtype=np.int64)
    mask = np.array([1 if x in sv else 0 for x in ref.tolist()], dtype=np.int64)
    ln = mask.shape[0]
    c = cfg.vector()
    LT = length_table(2 * (int(max(ln, 1))) + 16, cfg.family.kind, cfg.family.k)
    scratch = np.empty(ln + 2, dtype=np.int64)
    if variant is None:
        bits, var = desc_cost(mask, ln, c, LT, scratch)
    else:
        var = VARIANT_NAMES.index(variant)
        bits = desc_variant_cost(mask, ln, var, c, LT, scratch)
        if bits < 0:
            raise ValueError(f"variant {variant!r} not available under this configuration")
    runs: tuple[int, ...] = ()
    if var != VAR_BITMAP and ln:
        r = _runs(mask, ln, 1 if var == VAR_BLOCKS else 0, scratch)
        runs = tuple(int(x) for x in scratch[:r])
    return CopyDescriptor(VARIANT_NAMES[var], tuple(mask.tolist()), runs, int(bits),
                          tuple(int(x) for x in ref[mask == 1]))


def detect_intervals(values: Sequence[int], mil: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Maximal runs of >= ``mil`` consecutive integers as ``(start, length - mil)``
    pairs, plus the leftover values."""
    if not 2 <= mil <= 5:
        raise ValueError("MIL must lie in 2..5")
    vals = np.asarray(sorted(values), dtype=np.int64)
    n = vals.shape[0]
    starts, lens, left = np.empty(n + 1, np.int64), np.empty(n + 1, np.int64), np.empty(n + 1, np.int64)
    k, nl = split_intervals(vals, n, mil, starts, lens, left)
    return ([(int(starts[i]), int(lens[i] - mil)) for i in range(k)], left[:nl].tolist())


def lr_split(residuals: Sequence[int], v: int) -> tuple[list[int], list[int]]:
    """Left/right distance-delta sequences around ``v`` (first element is the
    distance, later ones differences of ascending distances)."""
    left = sorted(v - r for r in residuals if r < v)
    right = sorted(r - v for r in residuals if r > v)
    if any(r == v for r in residuals):
        raise ValueError("v must not be among the residuals")
    return ([b - a for a, b in zip([0] + left, left)], [b - a for a, b in zip([0] + right, right)])


def lr_merge(left: Sequence[int], right: Sequence[int], v: int) -> list[int]:
    """Inverse of :func:`lr_split`."""
    return sorted([v - d for d in np.cumsum(left, dtype=np.int64).tolist()]
                  + [v + d for d in np.cumsum(right, dtype=np.int64).tolist()])


@dataclass(frozen=True)
class VertexPlan:
    """Chosen record of one vertex (IDs as in the kernel lists, 1-based)."""

    action: int
    ref_offsets: tuple[int, ...]
    copy_descriptors: tuple[CopyDescriptor, ...]
    intervals: tuple[tuple[int, int], ...]
    residual_left: tuple[int, ...]
    residual_right: tuple[int, ...]
    residuals: tuple[int, ...]
    exact_bit_cost: int

    @property
    def action_name(self) -> str:
        return action_name(self.action)

    @property
    def mode(self) -> str:
        return "empty" if self.action == 0 else MODE_NAMES[action_parts(self.action)[0]]

    @property
    def kind(self) -> str:
        return "empty" if self.action == 0 else kind_name(action_parts(self.action)[1])


class KernelContext:
    """Kernel lists of a whole graph plus the arrays the numba planner needs."""

    def __init__(self, lists_or_graph, cfg: KernelConfig = KernelConfig(),
                 starts: np.ndarray | None = None, ends: np.ndarray | None = None,
                 floors: np.ndarray | None = None):
        if hasattr(lists_or_graph, "indptr"):
            indptr, indices = lists_or_graph.indptr, lists_or_graph.indices
        else:
            indptr, indices = _csr([[u - 1 for u in x] for x in lists_or_graph])
        self.n = indptr.shape[0] - 1
        self.starts = np.zeros(self.n, np.int64) if starts is None else starts
        self.ends = np.full(self.n, self.n, np.int64) if ends is None else ends
        self.kptr, self.kidx, self.has_loop = kernel_lists(indptr, indices, self.starts, self.ends)
        self.cfg = cfg
        self.vec = cfg.vector()
        self.hcode, self.hlen = cfg.tables()
        self.LT = cost_table(self.n, cfg.family)
        self.floors = (np.maximum(np.arange(self.n) - cfg.window, self.starts)
                       if floors is None else floors)
        self.ws = make_workspace(self.n, cfg.window)
        deg = np.diff(self.kptr)
        self.maxdeg = int(deg.max()) if self.n else 0

    def _scratch(self) -> np.ndarray:
        return np.zeros((512 + 160 * (3 * self.maxdeg + 4)) // 8 + 1, dtype=np.uint8)

    def local(self, v0: int) -> int:
        return v0 - int(self.starts[v0])

    def plan(self, v0: int) -> tuple[int, int, int, int, int, int]:
        return plan_vertex_nb(v0, self.local(v0), int(self.floors[v0]), self.kptr, self.kidx,
                              self.vec, self.hlen, self.LT, self.ws)

    def emit(self, v0: int, plan: tuple[int, int, int, int, int]) -> tuple[bytes, int]:
        buf = self._scratch()
        st = np.zeros(3, np.int64)
        emit_vertex(buf, st, v0, self.local(v0), *plan, self.kptr, self.kidx, self.vec,
                    self.hcode, self.hlen, self.ws)
        return bytes(buf[: (st[0] + 7) // 8]), int(st[0])

    def cost(self, v0: int, plan: tuple[int, int, int, int, int]) -> int:
        """Closed-form cost of a forced plan."""
        return int(plan_cost_nb(v0, self.local(v0), *plan, self.kptr, self.kidx, self.vec,
                                self.hlen, self.LT, self.ws))

    def brute_force(self, v0: int) -> int:
        buf = self._scratch()
        return int(brute_force_vertex(v0, self.local(v0), int(self.floors[v0]), self.kptr, self.kidx,
                                      self.vec, self.hcode, self.hlen, self.ws, buf))

    def list_of(self, v0: int) -> np.ndarray:
        return self.kidx[self.kptr[v0]:self.kptr[v0 + 1]]

    def shortlist(self, v0: int) -> list[tuple[int, int]]:
        """(offset, overlap) pairs of the shortlist for ``v0``."""
        mark = self.ws[0]
        S = self.list_of(v0)
        mark[S] = 1
        co, cv = self.ws[6], self.ws[7]
        nc = _candidates(v0, int(self.floors[v0]), self.kptr, self.kidx, self.vec, mark, co, cv)
        mark[S] = 0
        if S.shape[0] < self.cfg.min_ref_degree:
            return []
        order = shortlist_order(cv, nc)[: self.cfg.shortlist]
        return [(int(co[i]), int(cv[i])) for i in order]

    def describe(self, v0: int, plan=None) -> VertexPlan:
        """Expand a compact plan into a :class:`VertexPlan`."""
        if plan is None:
            cost, *plan = self.plan(v0)
        else:
            cost = None
        aid, off1, off2, var1, var2 = plan
        _, bits = self.emit(v0, tuple(plan))
        if cost is not None and cost != bits:
            raise AssertionError(f"analytical cost {cost} != emitted {bits} for vertex {v0 + 1}")
        S = self.list_of(v0).tolist()
        vl = self.local(v0)
        if aid == 0:
            return VertexPlan(0, (), (), (), (), (), (), bits)
        mode, kind = action_parts(aid)
        offs = (off1,) if mode == 1 else (off1, off2) if mode == 2 else ()
        remaining = list(S)
        descs = []
        copied: set[int] = set()
        for off, var in zip(offs, (var1, var2)):
            ref = [y for y in self.list_of(v0 - off).tolist() if y not in copied]
            d = copy_descriptor(remaining, ref, self.cfg, VARIANT_NAMES[var])
            descs.append(d)
            copied.update(d.copied)
            remaining = [x for x in remaining if x not in copied]
        intervals: list[tuple[int, int]] = []
        if 1 <= kind <= 4:
            intervals, remaining = detect_intervals(remaining, kind + 1)
        left, right = lr_split(remaining, vl) if self.cfg.lr_split and kind <= 4 else ((), ())
        return VertexPlan(aid, offs, tuple(descs), tuple(intervals), tuple(left), tuple(right),
                          tuple(x + 1 for x in remaining), bits)


def find_reference_candidates(g, v: int, cfg: KernelConfig = KernelConfig()) -> list[tuple[int, int]]:
    """Shortlisted references of 1-based vertex ``v`` as (offset, overlap)."""
    return KernelContext(g, cfg).shortlist(v - 1)


def plan_vertex(g, v: int, cfg: KernelConfig = KernelConfig()) -> VertexPlan:
    """Cost-optimal record for 1-based vertex ``v`` of graph ``g``."""
    return KernelContext(g, cfg).describe(v - 1)


def analytical_cost(g, v: int, cfg: KernelConfig, plan: tuple[int, int, int, int, int]) -> int:
    """Closed-form bit cost of forcing ``plan = (aid, off1, off2, var1, var2)``
    on 1-based vertex ``v``."""
    return KernelContext(g, cfg).cost(v - 1, plan)
