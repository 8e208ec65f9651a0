"""Command-line interface: ``refgraph <command> ...``.

Defaults may also come from a ``--config`` file of ``key=value`` lines (keys are
option names without dashes, e.g. ``window=64``); explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .bitcodes import CodeFamily
from .codecs import CODEC_IDS, action_histogram, encode
from .container import (build_container, bpe, decompress, open_container, read_container,
                        write_container)
from .generators import GenSpec, generate
from .graph import (DirectedGraph, GraphFormatError, Permutation, apply_permutation, induced_subgraph,
                    largest_scc, load_edge_list, load_snapshot, save_snapshot, write_edge_list)
from .ordering import (LeidenConfig, LlpConfig, leiden_llp_order, ordering_diagnostics,
                       read_permutation, segment_bounds, write_permutation)

SNAPSHOT_SUFFIX = ".rga"


class CliError(Exception):
    pass


def load_graph(path: str, scc: bool = False, return_labels: bool = False):
    """Edge list or snapshot; ``labels[i]`` is the input id of dense vertex i+1."""
    if path.endswith(SNAPSHOT_SUFFIX):
        g = load_snapshot(path)
        labels = np.arange(1, g.n + 1)
    else:
        g, labels = load_edge_list(path, return_labels=True)
        labels = np.asarray(labels)
    if scc:
        g, keep = induced_subgraph(g, largest_scc(g))
        labels = labels[keep - 1]
    return (g, labels) if return_labels else g


def save_graph(g: DirectedGraph, path: str) -> None:
    if path.endswith(SNAPSHOT_SUFFIX):
        save_snapshot(g, path)
    else:
        write_edge_list(g, path)


def _ordered(g: DirectedGraph, args) -> tuple[DirectedGraph, Permutation, list[int] | None]:
    """Apply ``--order-file`` or ``--ordering``; returns cluster sizes for leiden_llp."""
    if args.order_file:
        p = read_permutation(args.order_file)
        if p.n != g.n:
            raise CliError(f"permutation covers {p.n} vertices, graph has {g.n}")
        return apply_permutation(g, p), p, None
    if args.ordering == "leiden_llp":
        p, _part, sizes = leiden_llp_order(g, LlpConfig(seed=args.seed), LeidenConfig(seed=args.seed),
                                           return_partition=True)
        return apply_permutation(g, p), p, sizes
    p = bench.order_graph(g, args.ordering, args.seed, synthetic=False)
    return apply_permutation(g, p), p, None


def _encode_args(args, sizes: list[int] | None) -> dict:
    kw = {"window": args.window}
    if args.codec != "bv":
        kw["family"] = CodeFamily.parse(args.family)
        kw["cost_model"] = args.cost_model
    if args.clusters > 1:
        if args.codec != "cg":
            raise CliError("--clusters applies to the cg codec only")
        if sizes is None:
            raise CliError("--clusters K>1 needs --ordering leiden_llp (clusters must be contiguous)")
        kw["clusters"] = segment_bounds(sizes, args.clusters)
    return kw


def _compress(g: DirectedGraph, args, sizes) -> bytes:
    kw = _encode_args(args, sizes)
    stream = encode(g, args.codec, stride=args.stride if args.mode == "index" else None, **kw)
    return build_container(stream, args.mode)


# ----------------------------------------------------------------------------- commands

def cmd_generate(args) -> int:
    spec = GenSpec(args.kind, args.n, p=args.p, avg_deg=args.avg_deg, mu=args.mu, seed=args.seed)
    res = generate(spec)
    g = res.graph if args.kind == "lfr" else res
    save_graph(g, args.out)
    if args.kind == "lfr" and args.communities:
        np.savetxt(args.communities, res.communities.cluster_of + 1, fmt="%d")
    print(f"generated {args.kind}: n={g.n} m={g.m} -> {args.out}")
    return 0


def cmd_order(args) -> int:
    g = load_graph(args.input, args.scc)
    if args.ordering == "original" and args.order_file is None:
        p = Permutation.identity(g.n)
    else:
        _, p, _ = _ordered(g, args)
    write_permutation(p, args.out, binary=args.binary)
    rep = ordering_diagnostics(g, p)
    print(f"ordering {args.ordering}: gap entropy {rep.gap_entropy:.4f}, "
          f"residual gap-1 fraction {rep.gap1_fraction:.4f} -> {args.out}")
    return 0


def cmd_compress(args) -> int:
    g, labels = load_graph(args.input, args.scc, return_labels=True)
    if g.m == 0:
        raise CliError("graph has no edges")
    h, perm, sizes = _ordered(g, args)
    data = _compress(h, args, sizes)
    if decompress(data) != h:
        print("verification failed: decoded graph differs from input", file=sys.stderr)
        return 1
    write_container(args.out, data)
    # input id of every vertex of the container, in container order
    np.savetxt(args.out + ".ids", labels[perm.order() - 1], fmt="%s")
    print(f"{args.codec} {args.mode}: n={h.n} m={h.m} bytes={len(data)} bpe={bpe(data, h.m):.4f} -> {args.out}")
    return 0


def cmd_decompress(args) -> int:
    g = decompress(read_container(args.input))
    save_graph(g, args.out)
    print(f"decoded n={g.n} m={g.m} -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    data = read_container(args.input)
    g = decompress(data)
    if args.graph:
        ref = load_graph(args.graph, args.scc)
        if args.order_file:
            ref = apply_permutation(ref, read_permutation(args.order_file))
        if g != ref:
            print("verification failed: container does not match the reference graph", file=sys.stderr)
            return 1
    print(f"ok: n={g.n} m={g.m}")
    return 0


def cmd_stats(args) -> int:
    path = args.input
    with open(path, "rb") as fh:
        is_container = fh.read(4) == b"MGS3"
    if is_container:
        data = read_container(path)
        c = open_container(data)
        g = decompress(data)
        out = {"codec": c.header.codec, "n": g.n, "m": g.m, "bytes": len(data),
               "bpe": bpe(data, g.m) if g.m else None, "window": c.header.window,
               "family": c.header.family, "index_mode": c.header.index_mode,
               "stride": c.header.stride, "index_bytes": c.index_bytes}
    else:
        g = load_graph(path, args.scc)
        rep = ordering_diagnostics(g)
        out = {"n": g.n, "m": g.m, "gap_entropy": rep.gap_entropy, "gap1_fraction": rep.gap1_fraction}
        if args.codec != "bv" and g.m:
            h, _, sizes = _ordered(g, args)
            stream = encode(h, args.codec, **_encode_args(args, sizes))
            out["actions"] = action_histogram(stream)
    print(json.dumps(out, indent=2))
    return 0


def _datasets(args) -> list[bench.Dataset]:
    ds = [bench.Dataset(Path(p).stem, load_graph(p, args.scc), synthetic=False) for p in args.graphs]
    for spec in args.gen or []:
        kind, _, rest = spec.partition(":")
        kv = dict(x.split("=", 1) for x in rest.split(",") if x)
        gs = GenSpec(kind, int(kv.get("n", 10000)), p=float(kv.get("p", 0.01)),
                     avg_deg=float(kv.get("avg_deg", 15 if kind == "lfr" else 8)),
                     mu=float(kv.get("mu", 0.1)), seed=int(kv.get("seed", args.seed)))
        res = generate(gs)
        ds.append(bench.Dataset(spec, res.graph if kind == "lfr" else res, synthetic=True))
    if not ds:
        raise CliError("bench needs graph files or --gen specs")
    return ds


def cmd_bench(args) -> int:
    codecs = args.codecs.split(",")
    orderings = args.orderings.split(",")
    windows = [int(w) for w in args.windows.split(",")]
    try:
        rows = bench.run_matrix(_datasets(args), orderings, codecs, windows, args.seed,
                                args.cost_model, args.family)
    except bench.VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    bench.write_csv(rows, args.out if args.out else sys.stdout)
    for (ds, params), t in bench.transfer_deltas(rows).items():
        deltas = " ".join(f"{c}={d:+.3f}" for c, d in t["deltas"].items())
        print(f"# transfer {ds} {params}: {deltas} spread={t['spread']:.3f}", file=sys.stderr)
    return 0


def cmd_ablate(args) -> int:
    g = load_graph(args.input, args.scc)
    if args.ordering != "original" or args.order_file:
        g, _, _ = _ordered(g, args)
    rows = bench.feature_ablation(g)
    lines = ["step,bpe,delta"] + [f"{r.step},{r.bpe:.6f},{r.delta:+.6f}" for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    g = load_graph(args.input, args.scc)
    if args.ordering != "original" or args.order_file:
        g, _, _ = _ordered(g, args)
    windows = [int(w) for w in args.windows.split(",")]
    rows = bench.window_sweep(g, windows, args.codec, Path(args.input).stem, args.ordering, args.cost_model)
    bench.write_csv(rows, args.out if args.out else sys.stdout)
    return 0


# ----------------------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser, *, codec=False, ordering=False) -> None:
    p.add_argument("--config", help="key=value defaults file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scc", action="store_true", help="restrict to the largest strongly connected component")
    if ordering:
        p.add_argument("--ordering", choices=bench.ORDERINGS, default="original")
        p.add_argument("--order-file", help="permutation file (text 'old new' lines or binary)")
    if codec:
        p.add_argument("--codec", choices=sorted(CODEC_IDS), default="bg")
        p.add_argument("--window", type=int, default=None, help="reference window (power of two; bv: any)")
        p.add_argument("--clusters", type=int, default=1, help="CG cluster segments K")
        p.add_argument("--mode", choices=("children", "index"), default="children")
        p.add_argument("--stride", type=int, default=64, help="index sampling stride k")
        p.add_argument("--cost-model", choices=("exact", "fast"), default="exact")
        p.add_argument("--family", choices=("fibonacci", "zeta3"), default="fibonacci")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph")
    _common(p)
    p.add_argument("kind", choices=("er", "web", "lfr"))
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--avg-deg", type=float, default=8.0)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--communities", help="LFR: write planted community ids (1-based) here")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("order", help="compute a vertex ordering and write the permutation")
    _common(p, ordering=True)
    p.add_argument("input")
    p.add_argument("--binary", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("compress", help="order, encode and write a container")
    _common(p, codec=True, ordering=True)
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode a container to an edge list")
    _common(p)
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("verify", help="decode a container and compare with a graph")
    _common(p)
    p.add_argument("input")
    p.add_argument("--graph", help="reference graph (edge list or snapshot)")
    p.add_argument("--order-file", help="permutation applied to the reference graph")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="describe a container or a graph")
    _common(p, codec=True, ordering=True)
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="ordering x codec matrix as CSV")
    _common(p)
    p.add_argument("graphs", nargs="*")
    p.add_argument("--gen", action="append", help="generator spec, e.g. lfr:n=2000,mu=0.2,seed=7")
    p.add_argument("--codecs", default="bv,bg,cs,cg")
    p.add_argument("--orderings", default=",".join(bench.ORDERINGS))
    p.add_argument("--windows", default="8")
    p.add_argument("--cost-model", choices=("exact", "fast"), default="exact")
    p.add_argument("--family", choices=("fibonacci", "zeta3"), default="fibonacci")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ablate", help="cumulative BG feature ablation")
    _common(p, ordering=True)
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("sweep", help="bpe and speed across reference windows")
    _common(p, ordering=True)
    p.add_argument("input")
    p.add_argument("--codec", choices=("bg", "cs", "cg"), default="bg")
    p.add_argument("--windows", default="8,16,32,64,128,256")
    p.add_argument("--cost-model", choices=("exact", "fast"), default="exact")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], ns: argparse.Namespace) -> argparse.Namespace:
    """Re-parse with config-file values installed as subcommand defaults."""
    conf = read_config(ns.config)
    subparser = parser._subparsers._group_actions[0].choices[ns.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in conf.items():
        act = actions.get(key)
        if act is None or key in ("config", "func"):
            raise CliError(f"unknown config key {key!r} for {ns.command}")
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            val = act.type(raw) if act.type else raw
            if act.choices is not None and val not in act.choices:
                raise CliError(f"config {key}={raw}: choose from {list(act.choices)}")
            defaults[key] = val
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except (CliError, GraphFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
