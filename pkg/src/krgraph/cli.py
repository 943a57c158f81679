"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 infeasible request, limit exceeded
or unparsable input.  JSON is the canonical output; every report embeds the
full run configuration, and identical configurations give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import census as cen
from . import enumeration as enm
from . import graph as gr
from . import incompressibility as inc
from . import topology as top


class UsageError(Exception):
    pass


class Infeasible(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    k: int | None = None
    seed: int | None = None
    samples: int | None = None
    c_const: float = 0.0
    c_K: float = 0.0
    compressor_id: str = "zlib"
    format: str = "json"
    limits: dict = field(default_factory=dict)
    output: str | None = None
    extra: dict = field(default_factory=dict)


# -- deterministic rendering ------------------------------------------------


def _scalar(x) -> str:
    if isinstance(x, bool) or x is None:
        return {True: "true", False: "false", None: "null"}[x]
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return _scalar(str(x))
        return format(x, ".17g")
    if isinstance(x, Fraction):
        return _scalar(enm._frac_str(x))
    return _json_str(str(x))


def _json_str(s: str) -> str:
    return json.dumps(s)


def render_json(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_str(str(k))}: {render_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + render_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for r in rows:
        writer.writerow([_csv_cell(v) for v in r.values()])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)):
        return " ".join(_scalar(x) for x in v)
    return _scalar(v)


def _rng_info(seed, samples=None) -> dict:
    info = {"generator": gr.RNG_ID, "seed": seed}
    if samples is not None:
        info["streams"] = f"SeedSequence({seed}).spawn({samples})"
    return info


# -- subcommands ------------------------------------------------------------


def _limits(args) -> dict:
    return {"enum": args.limit_enum, "aut": enm.AUT_LIMIT, "burnside": enm.BURNSIDE_LIMIT}


def _config(args, **extra) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=getattr(args, "nodes", None),
        k=getattr(args, "k", None),
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", None),
        c_const=getattr(args, "c_const", 0.0),
        c_K=getattr(args, "ck_const", 0.0),
        compressor_id=getattr(args, "compressor", "zlib"),
        format=args.format,
        limits=_limits(args),
        output=args.out,
        extra=extra,
    )


def cmd_gen(args) -> str:
    if args.nodes is None or args.nodes < 1:
        raise UsageError("--nodes must be a positive integer")
    G = gr.random_graph(args.nodes, args.seed)
    if args.format == "graph6":
        return gr.to_graph6(G) + "\n"
    if args.format == "native":
        return gr.to_native(G) + "\n"
    if args.format == "json":
        cfg = _config(args)
        return render_json({"config": asdict(cfg), "rng": _rng_info(args.seed),
                            "graph": {"n": G.n, "bits": gr.encode(G), "native": gr.to_native(G),
                                      "graph6": gr.to_graph6(G)}}) + "\n"
    raise UsageError(f"gen does not support format {args.format!r}")


def _read_graph(path: str) -> gr.Graph:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="ascii").read()
    except (OSError, UnicodeDecodeError) as exc:
        raise Infeasible(f"cannot read {path}: {exc}") from None
    try:
        return gr.parse_graph(text)
    except ValueError as exc:
        raise Infeasible(f"cannot parse graph: {exc}") from None


def analyze(G: gr.Graph, compressor_id: str = "zlib", c_const: float = 0.0) -> dict:
    """Every per-graph statistic in one ordered dictionary."""
    n = G.n
    est = inc.estimate_deficiency(G, compressor_id)
    degs = gr.degree_sequence(G)
    report: dict = {
        "graph": {"n": n, "native": gr.to_native(G), "edges": G.edge_count()},
        "deficiency": est.to_dict(),
        "degrees": {"sequence": degs, "min": min(degs), "max": max(degs),
                    "mean": float(np.mean(degs)), "expected": (n - 1) / 2},
    }
    if n >= 2:
        cn = top.common_neighbor_counts(G)
        iu, ju = np.triu_indices(n, k=1)
        vals = cn[iu, ju]
        report["two_paths"] = {"pairs": len(vals), "min": int(vals.min()), "max": int(vals.max()),
                               "mean": float(vals.mean()), "expected": (n - 2) / 4}
        report["connectivity"] = top.node_connectivity(G)
    else:
        report["two_paths"] = None
        report["connectivity"] = None
    report["diameter"] = top.diameter(G)
    report["max_clique"] = top.max_clique(G)
    report["clique_reference"] = {"two_log2_n": 2 * math.log2(n) if n > 1 else 0.0,
                                  "c_const": c_const}
    if n <= enm.AUT_LIMIT:
        aut = enm.automorphisms(G)
        report["automorphisms"] = aut.to_dict()
        report["rigidity"] = enm.rigidity_deficiency_check(G, est.delta_hat).to_dict()
    else:
        report["automorphisms"] = None
        report["rigidity"] = None
    return report


def cmd_analyze(args) -> str:
    G = _read_graph(args.graph)
    try:
        inc.get_compressor(args.compressor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = _config(args, graph_file=args.graph)
    return render_json({"config": asdict(cfg), **analyze(G, args.compressor, args.c_const)}) + "\n"


def _census_graphs(args) -> list[tuple[str, gr.Graph]]:
    if args.graph:
        return [(args.graph, _read_graph(args.graph))]
    if args.nodes is None or args.nodes < 1:
        raise UsageError("census needs --nodes or --graph")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    streams = gr.spawn_seeds(args.seed, args.samples)
    return [(f"{args.seed}/{i}", gr.random_graph(args.nodes, s)) for i, s in enumerate(streams)]


def cmd_census(args) -> str:
    if args.k is None or args.k < 1:
        raise UsageError("--k must be a positive integer")
    graphs = _census_graphs(args)
    n = graphs[0][1].n
    k = args.k
    if k > n:
        raise Infeasible(f"k={k} exceeds n={n}")
    family = None
    if args.covers:
        if n % k:
            raise Infeasible(f"cover mode needs k | n (k={k}, n={n}); use --no-covers")
        try:
            family = cen.baranyai_covers(n, k)
        except ValueError as exc:
            raise Infeasible(str(exc)) from None
    rows = []
    within = []
    for label, G in graphs:
        try:
            results = cen.subgraph_census(G, k, family, delta=args.delta, c=args.c_const, c_K=args.ck_const,
                                 variant=args.variant)
        except ValueError as exc:
            raise Infeasible(str(exc)) from None
        ok = all(r.within for r in results) if family else None
        within.append(ok)
        for r in results:
            d = r.to_dict()
            row = {"sample": label, "n": n, **d}
            row.update({"delta": args.delta, "c_const": args.c_const, "ck_const": args.ck_const,
                        "variant": args.variant if family else None})
            if args.format == "csv":
                row.pop("per_cover")
            rows.append(row)
    if args.format == "csv":
        return render_csv(rows)
    summary = {"samples": len(graphs), "patterns": 1 << gr.num_pairs(k)}
    if family:
        summary["within_fraction"] = sum(bool(w) for w in within) / len(within)
        summary["h"] = family.h
        summary["N"] = family.N
    cfg = _config(args, delta=args.delta, variant=args.variant, covers=args.covers,
                  graph_file=args.graph)
    rng = None if args.graph else _rng_info(args.seed, args.samples)
    return render_json({"config": asdict(cfg), "rng": rng, "summary": summary, "rows": rows}) + "\n"


def cmd_covers(args) -> str:
    if args.nodes is None or args.k is None or args.nodes < 1 or args.k < 1:
        raise UsageError("covers needs positive --nodes and --k")
    try:
        fam = cen.baranyai_covers(args.nodes, args.k)
    except ValueError as exc:
        raise Infeasible(str(exc)) from None
    return render_json({"config": asdict(_config(args)), **fam.to_dict()}) + "\n"


def enumerate_rows(n_max: int, limit: int) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        _, counts = enm.enumerate_unlabeled(n, limit)
        b = enm.burnside_g(n)
        rows.append({
            "n": n, "g_enum": counts.g_n, "g_burnside": b, "agree": b == counts.g_n,
            "E_n": enm._frac_str(counts.E_n), "E_n_decimal": float(counts.E_n),
            "lower": enm._frac_str(counts.lower), "lower_decimal": float(counts.lower),
            "upper": enm._frac_str(counts.upper), "upper_decimal": float(counts.upper),
            "within_bounds": counts.within_bounds,
            "per_m_histogram": " ".join(f"{m}:{c}" for m, c in sorted(counts.per_m_histogram.items())),
        })
    return rows


def cmd_enumerate(args) -> str:
    if args.nodes is None or args.nodes < 1:
        raise UsageError("--nodes must be a positive integer")
    if args.nodes > args.limit_enum:
        raise Infeasible(f"enumeration is limited to n <= {args.limit_enum}")
    rows = enumerate_rows(args.nodes, args.limit_enum)
    if args.format == "csv":
        return render_csv(rows)
    return render_json({"config": asdict(_config(args)), "rows": rows}) + "\n"


def bounds_report(n: int, k: int | None, delta: float, block_len: int, c: float, c_K: float) -> dict:
    out: dict = {"random_fraction": inc.random_fraction_bound(delta)}
    params = inc.BlockStatParams(n=n, l=block_len, K_y=inc.prefix_surrogate(block_len, c_K),
                                 delta=delta, c=c)
    out["block"] = inc.block_deviation_bound(params).to_dict()
    if n >= 2:
        thr = cen.k_threshold(n, c_K)
        out["k_threshold"] = {"k": thr.k, "K_surrogate": thr.K_surrogate}
    if k is not None and k >= 1 and n % k == 0:
        kh = cen.pattern_K_surrogate(k, c_K)
        out["frequency"] = {
            "k": k, "K_H": kh, "expected": math.comb(n, k) * 2.0 ** -gr.num_pairs(k),
            "theorem": cen.frequency_bound(n, k, kh, delta, c, "theorem"),
            "lemma": cen.frequency_bound(n, k, kh, delta, c, "lemma"),
        }
    out["automorphism_classes"] = [
        {"m": m, "aut_bound": str(enm.aut_bound(n, m)),
         "prob_bound": enm.prob_class_bound(n, m).value,
         "vacuous": enm.prob_class_bound(n, m).vacuous} for m in range(n + 1)]
    counts = enm.unlabeled_counts(n, enm.burnside_g(n)) if n <= enm.BURNSIDE_LIMIT else None
    if counts is not None:
        out["unlabeled"] = counts.to_dict()
    out["rigidity_threshold"] = enm.rigidity_threshold(n)
    return out


def cmd_bounds(args) -> str:
    if args.nodes is None or args.nodes < 1:
        raise UsageError("--nodes must be a positive integer")
    if args.delta < 0 or args.block_len < 1:
        raise UsageError("--delta must be >= 0 and --block-len >= 1")
    rep = bounds_report(args.nodes, args.k, args.delta, args.block_len, args.c_const, args.ck_const)
    cfg = _config(args, delta=args.delta, block_len=args.block_len)
    return render_json({"config": asdict(cfg), **rep}) + "\n"


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    default_enum = int(os.environ.get("KRGRAPH_LIMIT_ENUM") or enm.ENUM_LIMIT)
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--limit-enum", type=int, default=default_enum,
                        help="largest n for exhaustive enumeration (env KRGRAPH_LIMIT_ENUM)")
    consts = _Parser(add_help=False)
    consts.add_argument("--c-const", type=float, default=0.0, help="additive constant c in the bounds")
    consts.add_argument("--ck-const", type=float, default=0.0, help="constant c_K in the K surrogate")

    p = _Parser(prog="krgraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="emit a seeded uniform random graph")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["native", "graph6", "json"], default="native")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", parents=[common, consts], help="statistics of one graph file")
    a.add_argument("graph", help="graph file in native or graph6 format ('-' for stdin)")
    a.add_argument("--compressor", default="zlib", help="zlib, bz2 or lzma")
    a.add_argument("--format", choices=["json"], default="json")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("census", parents=[common, consts], help="ordered subgraph census")
    c.add_argument("--nodes", type=int)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=1)
    c.add_argument("--graph", help="census a graph file instead of random samples")
    c.add_argument("--delta", type=float, default=0.0, help="deficiency used in the bound")
    c.add_argument("--variant", choices=["theorem", "lemma"], default="theorem")
    c.add_argument("--covers", action=argparse.BooleanOptionalAction, default=True,
                   help="per-cover counts and bounds (needs k | n)")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.set_defaults(func=cmd_census)

    v = sub.add_parser("covers", parents=[common], help="Baranyai cover partition as JSON")
    v.add_argument("--nodes", type=int, required=True)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--format", choices=["json"], default="json")
    v.set_defaults(func=cmd_covers)

    e = sub.add_parser("enumerate", parents=[common], help="unlabeled graph counts for 1..n")
    e.add_argument("--nodes", type=int, required=True)
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("bounds", parents=[common, consts], help="evaluate the bound formulas")
    b.add_argument("--nodes", type=int, required=True)
    b.add_argument("--k", type=int)
    b.add_argument("--delta", type=float, default=0.0)
    b.add_argument("--block-len", type=int, default=1)
    b.add_argument("--format", choices=["json"], default="json")
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors exit 1
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"krgraph {args.command}: {exc}", file=sys.stderr)
        return 1
    except (Infeasible, enm.LimitExceeded) as exc:
        print(f"krgraph {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
