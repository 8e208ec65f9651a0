"""Benchmark harness: ordering x codec matrices, window sweeps and the
cumulative BG feature ablation.  Every compressed artifact is decoded and
compared with its input before a row is reported."""
from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Mapping, Sequence

from .bitcodes import CodeFamily
from .codecs import bg_config, encode, encode_kernel
from .container import build_container, decompress
from .graph import DirectedGraph, Permutation, apply_permutation, symmetrize
from .ordering import LeidenConfig, LlpConfig, leiden_llp_order, llp_order

ORDERINGS = ("original", "llp", "leiden_llp")
CODECS = ("bv", "bg", "cs", "cg")
CSV_FIELDS = ("dataset", "ordering", "codec", "params", "bpe", "encode_us_per_edge",
              "decode_us_per_edge")


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchRow:
    dataset: str
    ordering: str
    codec: str
    params: str
    bpe: float
    encode_us_per_edge: float
    decode_us_per_edge: float

    def __post_init__(self):
        if not self.bpe > 0:
            raise ValueError("bpe must be positive")


@dataclass
class Dataset:
    name: str
    graph: DirectedGraph
    synthetic: bool = True


def order_graph(g: DirectedGraph, ordering: str, seed: int = 0, synthetic: bool = True) -> Permutation:
    """Permutation for ``ordering``; the original order of a synthetic graph
    is a seeded random relabelling (file order for ingested data)."""
    if ordering == "original":
        return Permutation.random(g.n, seed) if synthetic else Permutation.identity(g.n)
    if ordering == "llp":
        return llp_order(symmetrize(g), LlpConfig(seed=seed))
    if ordering == "leiden_llp":
        return leiden_llp_order(g, LlpConfig(seed=seed), LeidenConfig(seed=seed))
    raise ValueError(f"unknown ordering {ordering!r}")


def ordered_variants(ds: Dataset, orderings: Sequence[str], seed: int = 0) -> dict[str, DirectedGraph]:
    """Relabelled copies of ``ds.graph``; LLP/Leiden orderings are computed on
    the original (random) labelling so they cannot inherit generator order."""
    base = apply_permutation(ds.graph, order_graph(ds.graph, "original", seed, ds.synthetic))
    out = {}
    for name in orderings:
        out[name] = base if name == "original" else apply_permutation(base, order_graph(base, name, seed))
    return out


def measure(g: DirectedGraph, codec: str, window: int | None = None, mode: str = "children",
            stride: int = 64, **kwargs) -> tuple[float, float, float, bytes]:
    """(bpe, encode µs/edge, decode µs/edge, file) with a mandatory roundtrip check."""
    t0 = time.perf_counter()
    stream = encode(g, codec, window=window, stride=stride if mode == "index" else None, **kwargs)
    data = build_container(stream, mode)
    t1 = time.perf_counter()
    back = decompress(data)
    t2 = time.perf_counter()
    if back != g:
        raise VerificationError(f"roundtrip mismatch for codec {codec} (window {window})")
    m = max(g.m, 1)
    return 8 * len(data) / m, 1e6 * (t1 - t0) / m, 1e6 * (t2 - t1) / m, data


def run_matrix(datasets: Iterable[Dataset], orderings: Sequence[str] = ORDERINGS,
               codecs: Sequence[str] = CODECS, windows: Sequence[int] = (8,),
               seed: int = 0, cost_model: str = "exact", family: str = "fibonacci") -> list[BenchRow]:
    rows = []
    fam = CodeFamily.parse(family)
    for ds in datasets:
        variants = ordered_variants(ds, orderings, seed)
        for oname, g in variants.items():
            for codec in codecs:
                # the baseline has its own fixed window, so it is measured once
                for w in (windows[:1] if codec == "bv" else windows):
                    kw = {} if codec == "bv" else {"family": fam, "cost_model": cost_model}
                    win = w if codec != "bv" else None
                    try:
                        b, te, td, _ = measure(g, codec, win, **kw)
                    except VerificationError as exc:
                        raise VerificationError(f"{ds.name}/{oname}/{codec}/w={w}: {exc}") from exc
                    params = f"w={w if codec != 'bv' else 7}"
                    rows.append(BenchRow(ds.name, oname, codec, params, b, te, td))
    return rows


def transfer_deltas(rows: Sequence[BenchRow], codecs: Sequence[str] = ("bg", "cs", "cg")) -> dict:
    """Per (dataset, params): bpe(leiden_llp) - bpe(llp) for each codec and
    the spread max - min across ``codecs``."""
    table: dict[tuple[str, str], dict[str, float]] = {}
    idx = {(r.dataset, r.params, r.codec, r.ordering): r.bpe for r in rows}
    for (ds, params, codec, _o) in idx:
        if codec not in codecs:
            continue
        a, b = idx.get((ds, params, codec, "leiden_llp")), idx.get((ds, params, codec, "llp"))
        if a is not None and b is not None:
            table.setdefault((ds, params), {})[codec] = a - b
    out = {}
    for key, d in table.items():
        out[key] = {"deltas": d, "spread": max(d.values()) - min(d.values())}
    return out


def write_csv(rows: Sequence[BenchRow], dest: str | os.PathLike | io.TextIOBase) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="") as fh:
            return write_csv(rows, fh)
    w = csv.DictWriter(dest, fieldnames=CSV_FIELDS)
    w.writeheader()
    for r in rows:
        d = asdict(r)
        d["bpe"] = f"{r.bpe:.6f}"
        d["encode_us_per_edge"] = f"{r.encode_us_per_edge:.4f}"
        d["decode_us_per_edge"] = f"{r.decode_us_per_edge:.4f}"
        w.writerow(d)


def window_sweep(g: DirectedGraph, windows: Sequence[int] = (8, 16, 32, 64, 128, 256),
                 codec: str = "bg", dataset: str = "graph", ordering: str = "given",
                 cost_model: str = "exact") -> list[BenchRow]:
    rows = []
    for w in windows:
        b, te, td, _ = measure(g, codec, w, cost_model=cost_model)
        rows.append(BenchRow(dataset, ordering, codec, f"w={w},cost_model={cost_model}", b, te, td))
    return rows


# cumulative ablation: (step label, config changes applied on top of the previous row)
ABLATION_BASELINE = dict(window=8, family=CodeFamily.zeta(3), copy_blocks=False, adaptive_copy=False,
                         stop_lists=False, header="fixed", tight_intervals=False, lr_split=False,
                         multi_ref=False, min_ref_degree=3)
ABLATION_STEPS = (
    ("copy-blocks", dict(copy_blocks=True)),
    ("window 64", dict(window=64)),
    ("fibonacci codes", dict(family=CodeFamily.fibonacci())),
    ("adaptive copy", dict(adaptive_copy=True)),
    ("stop deltas", dict(stop_lists=True)),
    ("vlc header + tight intervals", dict(header="bg", tight_intervals=True)),
    ("lr-split", dict(lr_split=True)),
    ("multi-ref", dict(multi_ref=True)),
    ("low-degree ref search", dict(min_ref_degree=1)),
)


@dataclass(frozen=True)
class AblationRow:
    step: str
    bpe: float
    delta: float


def _bg_bpe(g: DirectedGraph, cfg) -> float:
    stream = encode_kernel(g, "bg", cfg)
    data = build_container(stream)
    if decompress(data) != g:
        raise VerificationError(f"roundtrip mismatch in ablation ({cfg})")
    return 8 * len(data) / max(g.m, 1)


def feature_ablation(g: DirectedGraph, steps=ABLATION_STEPS, baseline: Mapping = ABLATION_BASELINE,
                     shortlist: int = 8) -> list[AblationRow]:
    """Enable BG features one at a time, cumulatively; the first row is the
    baseline with every feature off."""
    cfg = bg_config(**{**baseline, "shortlist": shortlist})
    prev = _bg_bpe(g, cfg)
    rows = [AblationRow("baseline", prev, 0.0)]
    for label, change in steps:
        cfg = replace(cfg, **change)
        cur = _bg_bpe(g, cfg)
        rows.append(AblationRow(label, cur, cur - prev))
        prev = cur
    return rows


@dataclass(frozen=True)
class BudgetLine:
    component: str
    bits: int
    bpe: float
    share: float


def budget_table(components: Mapping[str, int], m: int) -> list[BudgetLine]:
    """Per-component bits, bits per edge and share, plus a closing total row."""
    if m <= 0:
        raise ValueError("budget needs m > 0")
    total = sum(components.values())
    lines = [BudgetLine(k, v, v / m, v / total if total else 0.0) for k, v in components.items()]
    lines.append(BudgetLine("total", total, total / m, 1.0 if total else 0.0))
    return lines


def format_budget(components: Mapping[str, int], m: int) -> str:
    out = [f"{'component':<12} {'bits':>12} {'bpe':>8} {'share':>7}"]
    for ln in budget_table(components, m):
        out.append(f"{ln.component:<12} {ln.bits:>12,} {ln.bpe:>8.3f} {100 * ln.share:>6.1f}%")
    return "\n".join(out)
