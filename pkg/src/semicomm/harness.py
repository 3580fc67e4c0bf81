"""Constraint sweeps over datasets and models, with reproducible seeding.

Seeds
-----
Every number drawn in a sweep descends from ``master_seed`` through
``numpy.random.SeedSequence``:

* GN graph for trial ``t``: ``SeedSequence(master_seed, spawn_key=(0, t))``,
  shared by all models and fractions so comparisons are paired.
* cell ``(model m, fraction f, trial t)``:
  ``SeedSequence(master_seed, spawn_key=(1, m, f, t))``. Its first two
  generated words seed constraint sampling and the solver.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .constraints import (
    ConstraintSet,
    encode_b,
    pair_universe,
    sample_random_constraints,
    sample_rule_based_constraints,
)
from .gn import GnConfig, generate_gn
from .graph import (
    Graph,
    adjacency_a1,
    drop_labels,
    football_exclusions,
    load_graph_files,
    load_karate,
)
from .kernels import diffusion_kernel, opposite_laplacian, similarity_sk
from .metrics import best_label_map, matched_accuracy, modularity_q, nmi, select_k_by_q
from .models import MODELS, detect

DATASETS = ("gn", "karate", "football", "edge-list", "lfr-file")
COLUMNS = ("dataset", "model", "fraction", "trial", "seed", "nmi", "q", "accuracy", "wall_time")


class ExperimentError(RuntimeError):
    """A sweep cell failed; the message names the cell."""


@dataclass
class ExperimentConfig:
    dataset: str = "gn"
    models: tuple = ("nmf-lse",)
    fractions: tuple = (0.0,)
    constraint_mode: str = "random"
    trials: int = 10
    alpha: float = 2.0
    k: int | None = None
    master_seed: int = 0
    z_out: float = 8.0
    edges: str | None = None
    labels: str | None = None
    exclude: str | None = None
    indexing: str = "zero"
    iter: int = 100
    objective: str = "a1"
    beta: float = 0.2
    normalization: str = "symmetric"
    timing: bool = False
    # LFR generation parameters, carried through as metadata only
    lfr_gamma: float | None = None
    lfr_beta: float | None = None
    lfr_mu: float | None = None

    def __post_init__(self):
        self.models = tuple(self.models)
        self.fractions = tuple(float(f) for f in self.fractions)
        if self.dataset not in DATASETS:
            raise ValueError(f"dataset must be one of {DATASETS}, got {self.dataset!r}")
        for m in self.models:
            if m not in MODELS:
                raise ValueError(f"unknown model {m!r}; choose from {MODELS}")
        if any(not 0.0 <= f <= 1.0 for f in self.fractions):
            raise ValueError("fractions must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.constraint_mode not in ("random", "rule-based"):
            raise ValueError("constraint_mode must be 'random' or 'rule-based'")
        if self.objective not in ("a1", "sk"):
            raise ValueError("objective must be 'a1' or 'sk'")
        if self.dataset in ("football", "edge-list", "lfr-file") and not self.edges:
            raise ValueError(f"dataset {self.dataset!r} needs an edge-list path")


def _coerce(name, raw: str):
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[name]
    if name in ("models", "fractions"):
        items = [s.strip() for s in raw.split(",") if s.strip()]
        return tuple(float(s) for s in items) if name == "fractions" else tuple(items)
    if raw.lower() in ("none", ""):
        return None
    if "bool" in kind:
        return raw.lower() in ("1", "true", "yes", "on")
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("float"):
        return float(raw)
    return raw


def load_config(text: str, **overrides) -> ExperimentConfig:
    """Read an ``[experiment]`` INI section; non-None overrides win."""
    parser = configparser.ConfigParser()
    parser.read_string(text)
    section = parser["experiment"] if parser.has_section("experiment") else {}
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for key, raw in section.items():
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def child_seed(master_seed: int, key: tuple) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=key).generate_state(1)[0])


def load_dataset(cfg: ExperimentConfig, trial: int = 0) -> Graph:
    if cfg.dataset == "gn":
        return generate_gn(GnConfig(z_out=cfg.z_out, seed=child_seed(cfg.master_seed, (0, trial))))
    if cfg.dataset == "karate":
        return load_karate()
    g = load_graph_files(cfg.edges, cfg.labels, cfg.indexing, cfg.exclude)
    if cfg.dataset == "football" and cfg.exclude is None:
        g = drop_labels(g, football_exclusions())
    return g


def _n_truth_communities(g: Graph) -> int:
    return len(set(g.labels.values()))


def build_constraints(cfg, g, a1, fraction, seed) -> ConstraintSet:
    if fraction == 0:
        return ConstraintSet()
    if not g.labels:
        raise ValueError("constraint sampling needs ground-truth labels")
    if cfg.constraint_mode == "random":
        return sample_random_constraints(g.labels, fraction, seed)
    count = int(np.floor(fraction * len(pair_universe(g.labels)) + 1e-9)) // 2 * 2
    return sample_rule_based_constraints(a1, g.labels, count, seed)


def objective_matrix(cfg: ExperimentConfig, g: Graph, cs: ConstraintSet) -> np.ndarray:
    if cfg.objective == "sk":
        if len(cs):
            raise ValueError("constraints cannot be combined with the 'sk' objective")
        return np.clip(similarity_sk(diffusion_kernel(opposite_laplacian(g), cfg.beta)), 0, None)
    return encode_b(adjacency_a1(g), cs, cfg.alpha)


def score(g: Graph, labels) -> dict:
    """NMI and accuracy on the labelled nodes, modularity on the whole graph."""
    out = {"nmi": float("nan"), "q": float("nan"), "accuracy": float("nan")}
    if g.n_edges:
        out["q"] = modularity_q(g, labels)
    if g.labels:
        nodes = g.labelled_nodes()
        truth = [g.labels[i] for i in nodes]
        out["nmi"] = nmi(truth, labels[nodes])
        out["accuracy"] = matched_accuracy(truth, labels[nodes])
    return out


def run_trial(cfg: ExperimentConfig, model: str, fraction: float, trial_seed: int,
              graph: Graph | None = None, trial: int = 0) -> dict:
    """One pipeline pass: constraints, encoding, detection, scoring."""
    g = graph if graph is not None else load_dataset(cfg, trial)
    if fraction > 0 and not g.labels:
        raise ValueError("fraction > 0 needs ground-truth labels")
    c_seed, m_seed = np.random.SeedSequence(trial_seed).generate_state(2)
    start = time.perf_counter()
    a1 = adjacency_a1(g)
    cs = build_constraints(cfg, g, a1, fraction, int(c_seed))
    x = objective_matrix(cfg, g, cs)
    k = cfg.k or (_n_truth_communities(g) if g.labels else None)
    if k is None:
        raise ValueError("k must be given when the dataset has no labels")
    labels = detect(model, x, k, int(m_seed), iter=cfg.iter, normalization=cfg.normalization)
    elapsed = time.perf_counter() - start
    row = {"dataset": cfg.dataset, "model": model, "fraction": fraction, "trial": trial,
           "seed": int(trial_seed), **score(g, labels),
           "wall_time": elapsed if cfg.timing else 0.0}
    row["labels"] = labels
    return row


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)

    def means(self) -> list[dict]:
        groups: dict = {}
        for r in self.rows:
            groups.setdefault((r["dataset"], r["model"], r["fraction"]), []).append(r)
        out = []
        for (ds, model, frac), rs in groups.items():
            out.append({
                "dataset": ds, "model": model, "fraction": frac, "trial": "mean", "seed": "",
                **{c: float(np.mean([r[c] for r in rs])) for c in ("nmi", "q", "accuracy", "wall_time")},
            })
        return out

    def mean_of(self, model: str, fraction: float, column: str = "nmi") -> float:
        vals = [r[column] for r in self.rows if r["model"] == model and r["fraction"] == fraction]
        return float(np.mean(vals))


def run_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Run every (model, fraction, trial) cell, ordered by cell index."""
    static = None if cfg.dataset == "gn" else load_dataset(cfg)
    rows = []
    graphs = {}
    for mi, model in enumerate(cfg.models):
        for fi, fraction in enumerate(cfg.fractions):
            for t in range(cfg.trials):
                if static is None:
                    if t not in graphs:
                        graphs[t] = load_dataset(cfg, t)
                    g = graphs[t]
                else:
                    g = static
                seed = child_seed(cfg.master_seed, (1, mi, fi, t))
                try:
                    row = run_trial(cfg, model, fraction, seed, graph=g, trial=t)
                except Exception as exc:
                    raise ExperimentError(
                        f"cell model={model} fraction={fraction} trial={t} failed: {exc}"
                    ) from exc
                row.pop("labels")
                rows.append(row)
    return SweepResult(rows)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_results(r: SweepResult, fmt: str = "csv") -> str:
    """Serialise per-cell rows followed by per-(model, fraction) means."""
    if fmt == "json":
        return json.dumps({"columns": list(COLUMNS),
                           "rows": [{c: row[c] for c in COLUMNS} for row in r.rows],
                           "means": r.means()}, indent=1)
    if fmt != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in r.rows + r.means():
        w.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def load_results(text: str) -> SweepResult:
    """Inverse of ``emit_results(..., 'json')``."""
    data = json.loads(text)
    return SweepResult([{c: row[c] for c in COLUMNS} for row in data["rows"]])


def football_case_study(cfg: ExperimentConfig, k_range=range(8, 13),
                        fractions=(0.0, 0.05, 0.20)) -> dict:
    """Pick k by modularity, then track mis-clustered labelled teams per fraction.

    A labelled node is mis-clustered when its community, after the best
    one-to-one matching of computed communities to ground-truth ones, differs
    from its ground truth.
    """
    g = load_dataset(cfg)
    if not g.labels:
        raise ValueError("case study needs ground-truth labels")
    model = cfg.models[0] if cfg.models else "nmf-lse"
    a1 = adjacency_a1(g)

    def fit_predict(graph, k, seed):
        return detect(model, a1, k, seed, iter=cfg.iter, normalization=cfg.normalization)

    k_best, q_table = select_k_by_q(g, fit_predict, k_range, cfg.trials, cfg.master_seed)
    k = cfg.k or k_best
    nodes = g.labelled_nodes()
    truth = {i: g.labels[i] for i in nodes}
    report = {"model": model, "k_best": k_best, "k_used": k, "q_table": q_table,
              "n_labelled": len(nodes), "n_pairs": len(pair_universe(truth)), "fractions": {}}
    for fi, fraction in enumerate(fractions):
        counts, freq = [], {}
        for t in range(cfg.trials):
            seed = child_seed(cfg.master_seed, (2, fi, t))
            c_seed, m_seed = np.random.SeedSequence(seed).generate_state(2)
            cs = build_constraints(cfg, g, a1, fraction, int(c_seed))
            labels = detect(model, encode_b(a1, cs, cfg.alpha), k, int(m_seed),
                            iter=cfg.iter, normalization=cfg.normalization)
            mapping = best_label_map([truth[i] for i in nodes], labels[nodes])
            wrong = [i for i in nodes if mapping.get(int(labels[i])) != truth[i]]
            counts.append(len(wrong))
            for i in wrong:
                freq[i] = freq.get(i, 0) + 1
        report["fractions"][fraction] = {
            "mean_misclustered": float(np.mean(counts)),
            "misclustered_counts": counts,
            "node_frequency": dict(sorted(freq.items())),
        }
    return report


def config_as_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)
