"""Command line interface.

Exit codes: 0 success, 1 data error, 2 usage error.  Data errors are printed
to stderr as ``error: <Category>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from .capacity import (AffiliationBipartite, capacity_from_affiliation, complete_mask,
                       full_graph, validate_against)
from .errors import InvalidParams, MaskViolation, RCCError
from .graph import Graph
from .harness import ExperimentConfig, oracle_check, run_sweep
from .io import (LabelTable, atomic_write, format_membership, format_pairs, parse_edge_list,
                 parse_membership, parse_pair_list, write_sweep_csv)
from .metrics import (average_local_clustering, global_clustering, local_clustering,
                      relative_local_clustering, rcc_from_counts, triangle_census)
from .model import MAX_SEED, ModelParams, replicate_streams, sample_affiliation, sample_network


def _render(value, undefined_as_zero: bool = False) -> str:
    if value is None:
        return "0 (0.000000)" if undefined_as_zero else "undefined"
    return f"{value} ({float(value):.6f})"


def _json_value(value, undefined_as_zero: bool = False):
    if value is None:
        return 0.0 if undefined_as_zero else None
    return {"fraction": str(value), "value": float(value)}


def _probability(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text}")
    return p


def _prob_list(text: str) -> list:
    return [_probability(t) for t in text.split(",") if t.strip()]


def _seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= s <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text}")
    return v


def _open(path: str):
    return sys.stdin if path == "-" else open(path, encoding="utf-8")


def _align(graph: Graph, labels: LabelTable, aff: AffiliationBipartite, people: LabelTable):
    """Put graph vertices and membership individuals on one label table.

    Individuals absent from the graph become isolated vertices.
    """
    joint = LabelTable(labels)
    remap = [joint.add(people.label(i)) for i in range(aff.n_individuals)]
    memberships = tuple((remap[i], g) for i, g in aff.memberships)
    aff = AffiliationBipartite(len(joint), aff.m_groups, memberships)
    graph = Graph._trusted(len(joint), graph.edges)
    return graph, joint, capacity_from_affiliation(aff)


def cmd_metrics(args) -> int:
    with _open(args.graph) as fh:
        stats = Counter()
        graph, labels = parse_edge_list(fh, strict=not args.lenient, stats=stats)
    notes = []
    if stats:
        notes.append(f"lenient parse dropped {stats['duplicates']} duplicate edge(s) "
                     f"and {stats['self_loops']} self-loop(s)")
    if args.membership:
        with _open(args.membership) as fh:
            aff, people, _ = parse_membership(fh)
        graph, labels, mask = _align(graph, labels, aff, people)
    elif args.pairs:
        with _open(args.pairs) as fh:
            joint = LabelTable(labels)
            mask, joint = parse_pair_list(fh, joint)
        graph, labels = Graph._trusted(len(joint), graph.edges), joint
    else:
        mask = complete_mask(graph.n)
        notes.append("no capacity given: complete mask assumed, so C_R equals C")

    report = validate_against(graph, mask)
    if not report.ok:
        if not args.allow_violations:
            raise MaskViolation([(labels.label(u), labels.label(v)) for u, v in report.violations])
        notes.append(f"{len(report.violations)} edge(s) lie on capacity-0 pairs: " + ", ".join(
            f"{labels.label(u)}-{labels.label(v)}" for u, v in report.violations))

    census = triangle_census(graph, mask, validate=False)
    coeffs = {
        "C": global_clustering(graph),
        "C_R": rcc_from_counts(census.closed_allowed, census.open_allowed),
        "avg_local_C": average_local_clustering(graph),
    }
    local = {}
    if args.local:
        for v in range(graph.n):
            local[labels.label(v)] = (local_clustering(graph, v),
                                      relative_local_clustering(graph, mask, v))

    z = args.undefined_as_zero
    if args.json:
        doc = {
            "n_vertices": graph.n, "n_edges": graph.m, "n_allowed_pairs": len(mask),
            "census": {"triangles": census.triangles, "wedges": census.wedges,
                       "closed_allowed": census.closed_allowed, "open_allowed": census.open_allowed},
            "coefficients": {k: _json_value(v, z) for k, v in coeffs.items()},
            "notes": notes,
        }
        if local:
            doc["local"] = {k: {"C_i": _json_value(a, z), "C_R_i": _json_value(b, z)}
                            for k, (a, b) in local.items()}
        print(json.dumps(doc, indent=2))
    else:
        for note in notes:
            print(f"note: {note}", file=sys.stderr)
        print(f"vertices {graph.n}  edges {graph.m}  allowed pairs {len(mask)}")
        print(f"triangles {census.triangles}  wedges {census.wedges}  "
              f"closed_allowed {census.closed_allowed}  open_allowed {census.open_allowed}")
        for k, v in coeffs.items():
            print(f"{k} = {_render(v, z)}")
        for name, (a, b) in local.items():
            print(f"  {name}: C_i = {_render(a, z)}  C_R_i = {_render(b, z)}")
    return 0


def cmd_fullgraph(args) -> int:
    with _open(args.membership) as fh:
        aff, people, _ = parse_membership(fh)
    text = format_pairs(full_graph(capacity_from_affiliation(aff)), people)
    _emit(text, args.out)
    return 0


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with atomic_write(path) as fh:
            fh.write(text)


def _params(args, p: float = 1.0) -> ModelParams:
    return ModelParams(args.n, args.m, q=args.q, k=args.k, edge_prob=p)


def cmd_generate(args) -> int:
    params = _params(args, args.p)
    aff_rng, net_rng = replicate_streams(args.seed, args.replicate)
    aff = sample_affiliation(params, aff_rng)
    mask = capacity_from_affiliation(aff)
    graph = sample_network(mask, args.p, net_rng)
    outputs = {
        ".edges": format_pairs(graph),
        ".mask": format_pairs(mask),
        ".groups": format_membership(aff),
    }
    # render everything before touching the filesystem
    for suffix, text in outputs.items():
        with atomic_write(args.out_prefix + suffix) as fh:
            fh.write(text)
    print(f"wrote {', '.join(args.out_prefix + s for s in outputs)} "
          f"(vertices {graph.n}, edges {graph.m}, allowed pairs {len(mask)})")
    return 0


def cmd_sweep(args) -> int:
    config = ExperimentConfig(_params(args), args.p, args.reps, args.seed, workers=args.workers)
    result = run_sweep(config)
    if args.out is None or args.out == "-":
        write_sweep_csv(result, sys.stdout)
    else:
        with atomic_write(args.out) as fh:
            write_sweep_csv(result, fh)
    for a in result.aggregates:
        cr = a.c_relative
        skipped = cr.n_skipped + a.c_global.n_skipped
        print(f"p={a.p:g}: mean C_R={_fmt(cr.mean)} sd={_fmt(cr.sd)}  mean C={_fmt(a.c_global.mean)}  "
              f"p*C'={_fmt(a.p_times_c_prime)}  undefined skipped={skipped}", file=sys.stderr)
    return 0


def _fmt(x) -> str:
    return "NA" if x is None else f"{x:.6f}"


def cmd_oracle_check(args) -> int:
    agree, bad = oracle_check(args.instances, max_n=args.max_n, seed=args.seed)
    print(f"{agree}/{args.instances} agree")
    for i, g, mask, fast, slow in bad[:10]:
        print(f"instance {i}: n={g.n} fast={fast.as_tuple()} oracle={slow.as_tuple()}", file=sys.stderr)
    return 0 if not bad else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcc", description="Relative and classical clustering coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="coefficients and triangle census of a graph")
    p.add_argument("--graph", required=True, help="edge-list file ('-' for stdin)")
    cap = p.add_mutually_exclusive_group()
    cap.add_argument("--membership", help="membership file defining capacity")
    cap.add_argument("--pairs", help="explicit allowed-pair list defining capacity")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--local", action="store_true", help="also print per-vertex coefficients")
    p.add_argument("--undefined-as-zero", action="store_true",
                   help="render undefined coefficients as 0")
    p.add_argument("--allow-violations", action="store_true",
                   help="compute even if edges fall on capacity-0 pairs")
    p.add_argument("--lenient", action="store_true",
                   help="drop duplicate edges and self-loops instead of failing")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("fullgraph", help="edge list of the full graph of a membership file")
    p.add_argument("--membership", required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_fullgraph)

    def model_args(p):
        p.add_argument("--n", type=_count, required=True, help="number of individuals")
        p.add_argument("--m", type=_count, required=True, help="number of groups")
        mode = p.add_mutually_exclusive_group(required=True)
        mode.add_argument("--q", type=_probability, help="per-(individual, group) membership probability")
        mode.add_argument("--k", type=_count, help="groups per individual")
        p.add_argument("--seed", type=_seed, required=True)

    p = sub.add_parser("generate", help="sample one network with its mask and memberships")
    model_args(p)
    p.add_argument("--p", type=_probability, required=True, help="edge probability")
    p.add_argument("--replicate", type=_count, default=0, help="replicate index for sub-seeding")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over edge probabilities, CSV output")
    model_args(p)
    p.add_argument("--p", type=_prob_list, required=True, help="comma-separated probabilities")
    p.add_argument("--reps", type=int, required=True, help="replicates per p")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare the census with brute force on random inputs")
    p.add_argument("--instances", type=_count, default=1000)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--seed", type=_seed, required=True)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParams as exc:
        parser.exit(2, f"error: {exc.category}: {exc}\n")
    except RCCError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IOError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
