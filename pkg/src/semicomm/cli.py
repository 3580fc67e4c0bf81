"""Command-line entry point: ``semicomm <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness
from .constraints import emit_constraints, load_constraints
from .gn import GnConfig, generate_gn
from .graph import emit_edge_list, emit_labels, load_edge_list, load_labels
from .metrics import matched_accuracy, modularity_q, nmi, select_k_by_q
from .models import MODELS, detect

log = logging.getLogger("semicomm")


def _write(text: str, path: str | None):
    if not text.endswith("\n") and text:
        text += "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _add_dataset_args(p):
    p.add_argument("--dataset", choices=harness.DATASETS, default=None)
    p.add_argument("--edges", help="edge-list file")
    p.add_argument("--labels", help="ground-truth label file")
    p.add_argument("--exclude", help="file of nodes whose labels are ignored")
    p.add_argument("--indexing", choices=("zero", "one"), default=None)
    p.add_argument("--zout", type=float, default=None, dest="z_out")


def _add_model_args(p):
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--iter", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--objective", choices=("a1", "sk"), default=None)
    p.add_argument("--beta", type=float, default=None, help="diffusion rate for --objective sk")
    p.add_argument("--sqrt-degree-normalization", action="store_true",
                   help="spectral: use D^1/2 B D^1/2 instead of D^-1/2 B D^-1/2")


def _config(args, **extra) -> harness.ExperimentConfig:
    text = Path(args.config).read_text() if getattr(args, "config", None) else ""
    overrides = {
        "dataset": args.dataset, "edges": args.edges, "labels": args.labels,
        "exclude": args.exclude, "indexing": args.indexing, "z_out": args.z_out,
        "k": args.k, "iter": args.iter, "alpha": args.alpha, "objective": args.objective,
        "beta": args.beta,
    }
    if args.sqrt_degree_normalization:
        overrides["normalization"] = "sqrt-degree"
    overrides.update(extra)
    return harness.load_config(text, **overrides)


def cmd_generate_gn(args):
    g = generate_gn(GnConfig(z_out=args.zout, seed=args.seed))
    _write(emit_edge_list(g), args.out)
    if args.labels:
        _write(emit_labels(g.labels), args.labels)
    log.info("GN network: %d nodes, %d edges", g.n, g.n_edges)


def cmd_run(args):
    cfg = _config(args, models=(args.model,), fractions=(args.fraction,),
                  constraint_mode=args.constraint_mode, master_seed=args.seed, trials=1)
    g = harness.load_dataset(cfg)
    if args.constraints:
        cs = load_constraints(Path(args.constraints).read_text())
        x = harness.objective_matrix(cfg, g, cs)
        k = cfg.k or len(set(g.labels.values()))
        _, m_seed = np.random.SeedSequence(args.seed).generate_state(2)
        labels = detect(args.model, x, k, int(m_seed), iter=cfg.iter,
                        normalization=cfg.normalization)
        row = {"labels": labels, **harness.score(g, labels)}
    else:
        row = harness.run_trial(cfg, args.model, args.fraction, args.seed, graph=g)
        if args.emit_constraints:
            c_seed, _ = np.random.SeedSequence(args.seed).generate_state(2)
            a1 = harness.adjacency_a1(g)
            cs = harness.build_constraints(cfg, g, a1, args.fraction, int(c_seed))
            _write(emit_constraints(cs), args.emit_constraints)
    _write(emit_labels(row.pop("labels")), args.out)
    summary = {k: row[k] for k in ("nmi", "q", "accuracy") if k in row}
    print(json.dumps(summary), file=sys.stderr)


def cmd_sweep(args):
    kw = {"master_seed": args.master_seed, "trials": args.trials,
          "constraint_mode": args.constraint_mode, "timing": args.timing or None}
    if args.models:
        kw["models"] = tuple(args.models.split(","))
    if args.fractions:
        kw["fractions"] = tuple(float(f) for f in args.fractions.split(","))
    cfg = _config(args, **kw)
    result = harness.run_sweep(cfg)
    _write(harness.emit_results(result, args.format), args.out)


def cmd_evaluate(args):
    idx = args.indexing or "zero"
    truth = load_labels(Path(args.truth).read_text(), idx)
    computed = load_labels(Path(args.computed).read_text(), idx)
    if args.metric == "q":
        if not args.edges:
            raise SystemExit("error: --metric q needs --edges")
        g = load_edge_list(Path(args.edges).read_text(), idx)
        labels = [computed[i] for i in range(g.n)]
        value = modularity_q(g, labels)
    else:
        common = sorted(truth.keys() & computed.keys())
        t = [truth[i] for i in common]
        c = [computed[i] for i in common]
        value = nmi(t, c) if args.metric == "nmi" else matched_accuracy(t, c)
    print(f"{args.metric}\t{value:.6f}")


def cmd_select_k(args):
    cfg = _config(args, master_seed=args.seed, trials=args.trials)
    g = harness.load_dataset(cfg)
    a1 = harness.adjacency_a1(g)

    def fit_predict(graph, k, seed):
        return detect(args.model, a1, k, seed, iter=cfg.iter, normalization=cfg.normalization)

    k_best, table = select_k_by_q(g, fit_predict, range(args.k_min, args.k_max + 1),
                                  args.trials, args.seed)
    for k, q in table.items():
        print(f"{k}\t{q:.4f}")
    print(f"k_best\t{k_best}")


def cmd_case_football(args):
    cfg = _config(args, dataset="football", models=(args.model,), master_seed=args.seed,
                  trials=args.trials, indexing=args.indexing or "one")
    fractions = tuple(float(f) for f in args.fractions.split(","))
    report = harness.football_case_study(cfg, range(args.k_min, args.k_max + 1), fractions)
    base = 1 if cfg.indexing == "one" else 0
    for frac in report["fractions"].values():
        frac["node_frequency"] = {i + base: c for i, c in frac["node_frequency"].items()}
    report["fractions"] = {str(f): v for f, v in report["fractions"].items()}
    _write(json.dumps(report, indent=1), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semicomm",
        description="Semi-supervised community detection with pairwise constraints.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-gn", help="write a GN benchmark network")
    p.add_argument("--zout", type=float, default=8.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_generate_gn)

    p = sub.add_parser("run", help="detect communities once")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--config")
    p.add_argument("--model", choices=MODELS, default="nmf-lse")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fraction", type=float, default=0.0)
    p.add_argument("--constraint-mode", choices=("random", "rule-based"), default="random")
    p.add_argument("--constraints", help="replay a constraint file instead of sampling")
    p.add_argument("--emit-constraints", help="write the sampled constraints here")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a constraint sweep and emit CSV/JSON")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--config")
    p.add_argument("--models", help="comma-separated, e.g. nmf-lse,spectral")
    p.add_argument("--fractions", help="comma-separated fractions, e.g. 0,0.05,0.1")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--constraint-mode", choices=("random", "rule-based"), default=None)
    p.add_argument("--timing", action="store_true", help="record wall-clock time per cell")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("evaluate", help="score a computed partition")
    p.add_argument("--truth", required=True)
    p.add_argument("--computed", required=True)
    p.add_argument("--metric", choices=("nmi", "q", "acc"), default="nmi")
    p.add_argument("--edges")
    p.add_argument("--indexing", choices=("zero", "one"))
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("select-k", help="choose k by mean modularity")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--model", choices=MODELS, default="nmf-lse")
    p.add_argument("--k-min", type=int, default=8)
    p.add_argument("--k-max", type=int, default=12)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_select_k)

    p = sub.add_parser("case-football", help="football k-selection and mis-clustering report")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--model", choices=MODELS, default="nmf-lse")
    p.add_argument("--k-min", type=int, default=8)
    p.add_argument("--k-max", type=int, default=12)
    p.add_argument("--fractions", default="0,0.05,0.2")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_case_football)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ValueError, OSError, harness.ExperimentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
