"""Command-line entry point: ``perturbtree <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .embed import EmbedError, embed_spanning_tree
from .enumerate import enumerate_free_trees
from .expansion import (
    NotRegularError,
    ExpansionCertificate,
    spectral_certificate,
    verify_expander_exact,
    verify_expander_sampled,
)
from .generators import TREE_FAMILIES, alpha_graph, generate_binomial, generate_tree
from .expansion import prune_to_expander
from .graph import GraphError, embedding_violation, union
from .harness import BracketError, ExperimentConfig, estimate_threshold, universality_check_exhaustive, write_sweep
from .params import Params
from .tree_decomp import DecompositionError, find_separable_subtree, select_star_centers


def _check_expansion(args) -> int:
    g = io.read_graph(args.graph)
    if args.mode == "exact":
        cert = verify_expander_exact(g, args.p, args.eps, args.C)
    elif args.mode == "sampled":
        cert = verify_expander_sampled(g, args.p, args.eps, args.C, args.trials, args.seed)
    else:
        try:
            sc = spectral_certificate(g)
        except NotRegularError as exc:
            print(f"verdict fail\nmode spectral\nreason {exc}")
            return 1
        cert = ExpansionCertificate("spectral", True, args.p, args.eps, args.C, d=sc.d, lam=sc.lam)
    sys.stdout.write(cert.to_text())
    return 0 if cert.passed else 1


def _decompose(args) -> int:
    t = io.read_tree(args.tree)
    res = find_separable_subtree(t, args.beta, args.eps, args.delta)
    print("t1 " + " ".join(map(str, sorted(res.t1))))
    print(f"cut_edge {res.cut_edge[0]} {res.cut_edge[1]}")
    print("t_prime " + " ".join(map(str, sorted(res.t_prime))))
    return 0


def _star_centers(args) -> int:
    t = io.read_tree(args.tree)
    res = select_star_centers(t)
    print("centers " + " ".join(map(str, res.centers)))
    return 0


def _embed(args) -> int:
    t = io.read_tree(args.tree)
    g = io.read_graph(args.g)
    g_alpha = io.read_graph(args.galpha)
    alpha = args.alpha if args.alpha is not None else g_alpha.min_degree / t.n
    overrides = {k: v for k, v in (("beta", args.beta), ("eps_prime", args.eps_prime)) if v is not None}
    params = Params(
        alpha, args.delta if args.delta else t.max_degree, args.C, args.D,
        overrides=overrides, paper_exact=args.paper_exact,
        reservoir_threshold=args.reservoir_threshold, retries=args.retries,
    )
    try:
        emb, trace = embed_spanning_tree(t, g, g_alpha, params, args.seed)
    except EmbedError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 1
    io.write_embedding(emb, t.n, args.out if args.out else sys.stdout)
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace.to_dict(), indent=1, default=str) + "\n")
    return 0


def _verify_embedding(args) -> int:
    t = io.read_tree(args.tree)
    h = io.read_graph(args.host)
    if args.galpha:
        h = union(h, io.read_graph(args.galpha))
    _, emb = io.read_embedding(args.embedding)
    problem = embedding_violation(t, h, emb, spanning=True)
    if problem:
        print(f"invalid: {problem}")
        return 1
    print("valid")
    return 0


def _sweep(args) -> int:
    config = ExperimentConfig.load(args.config)
    rows = write_sweep(config, args.out, args.master_seed, args.workers)
    for row in rows:
        print(f"{row['family']:>12} n={row['n']} D={row['D']} {row['successes']}/{row['seeds']}")
    return 0


def _universality(args) -> int:
    h = io.read_graph(args.host)
    res = universality_check_exhaustive(h, args.delta)
    for form, ok in res.table:
        print(f"{'yes' if ok else 'no ':3} {form}")
    print("universal" if res.universal else "not universal")
    return 0 if res.universal else 1


def _threshold(args) -> int:
    config = ExperimentConfig.load(args.config_slice)
    try:
        est = estimate_threshold(config, args.target_rate, args.grid, args.master_seed)
    except BracketError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 1
    for p in est.points:
        print(f"D={p.D:g} rate={p.rate:.3f} wilson=[{p.low:.3f}, {p.high:.3f}] ({p.successes}/{p.trials})")
    print(f"D_estimate {est.D:g}")
    return 0


def _enumerate_trees(args) -> int:
    trees = enumerate_free_trees(args.n, args.delta)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, t in enumerate(trees):
            io.write_tree(t, out / f"tree_{i:05d}.txt")
    print(len(trees))
    return 0


def _generate(args) -> int:
    if args.kind == "binomial":
        g = generate_binomial(args.n, args.p, args.seed)
        if args.prune_D:
            g = prune_to_expander(g, args.prune_D, args.C)
        io.write_graph(g, args.out or sys.stdout)
    elif args.kind == "dense":
        family = args.family or "bipartite"
        io.write_graph(alpha_graph(family, args.n, args.alpha, args.seed), args.out or sys.stdout)
    else:
        family = args.family or "path"
        io.write_tree(generate_tree(args.n, family, args.delta, args.seed), args.out or sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perturbtree", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-expansion", help="certify the (n,p,eps,C) density property")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("exact", "sampled", "spectral"), default="sampled")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--C", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_check_expansion)

    p = sub.add_parser("decompose", help="split off a separable subtree")
    p.add_argument("tree")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(func=_decompose)

    p = sub.add_parser("star-centers", help="greedy distance-5 centers")
    p.add_argument("tree")
    p.set_defaults(func=_star_centers)

    p = sub.add_parser("embed", help="embed a spanning tree into G_alpha | G")
    p.add_argument("--tree", required=True)
    p.add_argument("--galpha", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--alpha", type=float, help="density of G_alpha (default: its minimum degree over n)")
    p.add_argument("--delta", type=int)
    p.add_argument("--C", type=float, default=2.0)
    p.add_argument("--D", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--eps-prime", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=50)
    p.add_argument("--reservoir-threshold", type=int, default=0)
    p.add_argument("--paper-exact", action="store_true")
    p.add_argument("--out")
    p.add_argument("--trace")
    p.set_defaults(func=_embed)

    p = sub.add_parser("verify-embedding", help="check a spanning embedding")
    p.add_argument("--tree", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--galpha", help="optional second host graph, unioned with --host")
    p.add_argument("--embedding", required=True)
    p.set_defaults(func=_verify_embedding)

    p = sub.add_parser("sweep", help="run an experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_sweep)

    p = sub.add_parser("universality", help="exhaustive T(n, Delta)-universality of a small host")
    p.add_argument("--host", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(func=_universality)

    p = sub.add_parser("threshold", help="bisect for the smallest D reaching a success rate")
    p.add_argument("--config-slice", required=True)
    p.add_argument("--target-rate", type=float, required=True)
    p.add_argument("--grid", type=float, nargs="+", default=[8, 16, 32, 64, 128])
    p.add_argument("--master-seed", type=int, default=0)
    p.set_defaults(func=_threshold)

    p = sub.add_parser("enumerate-trees", help="count (and optionally write) free trees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_enumerate_trees)

    p = sub.add_parser("generate", help="write a random graph, dense graph or tree")
    p.add_argument("kind", choices=("binomial", "dense", "tree"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--prune-D", type=float)
    p.add_argument("--C", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--family", help=f"dense: bipartite|cliques|random; tree: {'|'.join(TREE_FAMILIES)}")
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_generate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, DecompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
