"""Repeated-split evaluation protocols for the link tasks and SDSBM clustering."""
from __future__ import annotations

import csv
import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import SignedDiGraph
from .maglap import laplacian_normalized, q_max
from .nn import ModelConfig, MsgnnModel, train_link, train_node
from .spectral import kmeans, spectral_embed
from .synthgen import SdsbmParams, generate_sdsbm
from .tasks import FeatureSpec, accuracy, ari, build_features, split_links, split_nodes

Q_SWEEP = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
REPORT_FIELDS = ("dataset", "task", "q", "feature_spec", "mean", "std", "n_runs", "wall_seconds")


def thread_count() -> int:
    """Worker cap from ``MSGNN_THREADS`` (default 1)."""
    raw = os.environ.get("MSGNN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"MSGNN_THREADS must be an integer, got {raw!r}") from None


def resolve_q(mode, g: SignedDiGraph, task: str = "") -> float:
    """Turn a q mode into a number.

    Accepted: ``"zero"``, ``"q0"``, ``"auto"`` (0 for sign prediction, q0
    otherwise), a multiple such as ``"0.4q0"``, or a plain number.
    """
    if isinstance(mode, (int, float)):
        return float(mode)
    text = str(mode).strip().lower()
    if text == "auto":
        text = "zero" if task.upper() == "SP" else "q0"
    if text == "zero":
        return 0.0
    if text == "q0":
        return q_max(g)
    mult = re.fullmatch(r"([0-9.eE+-]+)\s*\*?\s*q0", text)
    if mult:
        factor = float(mult.group(1))
        return 0.0 if factor == 0 else factor * q_max(g)
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"unrecognized q mode {mode!r}") from None


@dataclass
class Summary:
    dataset: str
    task: str
    q: str
    feature_spec: str
    mean: float
    std: float
    n_runs: int
    wall_seconds: float
    runs: list = field(default_factory=list)

    def row(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_FIELDS}

    def table_cell(self, scale: float = 100.0) -> str:
        return f"{scale * self.mean:.1f}±{scale * self.std:.1f}"


def write_report(summaries: list[Summary], json_path=None, csv_path=None) -> None:
    if json_path is not None:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump([asdict(s) for s in summaries], fh, indent=2, sort_keys=True)
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            out = csv.DictWriter(fh, fieldnames=list(REPORT_FIELDS))
            out.writeheader()
            for s in summaries:
                out.writerow(s.row())


@dataclass
class LinkRun:
    split_seed: int
    q: float
    accuracy: float
    seconds: float


def _one_link_run(g, task, q_value, features, seed, hidden, epochs, none_size, phase):
    t0 = time.perf_counter()
    split = split_links(g, task, seed=seed, none_size=none_size)
    x = build_features(split.observed, features)
    cfg = ModelConfig(x.shape[1], split.num_classes, task="link", q=q_value, hidden=hidden, seed=seed, phase=phase)
    model = MsgnnModel.build(cfg, split.observed)
    train_link(model, x, split.train_pairs, split.train_labels, epochs=epochs)
    acc = accuracy(model.predict(x, split.test_pairs), split.test_labels)
    return LinkRun(seed, q_value, acc, time.perf_counter() - t0)


def run_link(
    g: SignedDiGraph,
    task: str,
    dataset: str = "graph",
    q="auto",
    features: FeatureSpec = FeatureSpec(),
    seeds=range(5),
    hidden: int = 16,
    epochs: int = 300,
    none_size: str = "sum",
    phase: str = "magnitude",
) -> Summary:
    """Train and test on each seeded split; summarize with mean and sample std."""
    task = task.upper()
    q_value = resolve_q(q, g, task)
    seeds = list(seeds)
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        runs = list(pool.map(lambda s: _one_link_run(g, task, q_value, features, s, hidden, epochs, none_size, phase), seeds))
    accs = np.array([r.accuracy for r in runs])
    std = float(accs.std(ddof=1)) if len(accs) > 1 else 0.0
    return Summary(dataset, task, _q_label(q, q_value), features.label(), float(accs.mean()), std, len(runs), time.perf_counter() - t0, [asdict(r) for r in runs])


def run_link_q_sweep(g, task, dataset="graph", multiples=Q_SWEEP, **kw) -> list[Summary]:
    """One summary per multiple of q0."""
    return [run_link(g, task, dataset, q=f"{m}q0", **kw) for m in multiples]


def _q_label(mode, value: float) -> str:
    if isinstance(mode, (int, float)) or str(mode).strip().lower() == "zero":
        return f"{value:.6g}"
    try:
        float(mode)
        return f"{value:.6g}"
    except ValueError:
        return f"{mode}={value:.6g}"


def spectral_baseline_labels(g: SignedDiGraph, c: int, q: float = 0.25, seed: int = 0, phase: str = "magnitude") -> np.ndarray:
    """k-means on the real and imaginary parts of the top ``c + 1`` eigenvectors of L_N."""
    emb = spectral_embed(laplacian_normalized(g, q, phase), c + 1, order="largest")
    return kmeans(emb, c, seed=seed)


@dataclass
class ClusterRun:
    network_seed: int
    split_seed: int
    ari: float
    baseline_ari: float | None
    best_epoch: int | None
    seconds: float


def run_cluster(
    meta,
    n: int = 1000,
    p: float = 0.1,
    rho: float = 1.5,
    eta: float = 0.0,
    q: float = 0.25,
    features: FeatureSpec = FeatureSpec(),
    networks=range(5),
    splits=range(2),
    hidden: int = 16,
    max_epochs: int = 1000,
    patience: int = 200,
    baseline: bool = True,
    dataset: str = "sdsbm",
    phase: str = "magnitude",
) -> tuple[Summary, Summary | None]:
    """Semi-supervised clustering over generated networks x node splits.

    Returns the trained-model summary and, if requested, the spectral baseline
    summary, each with mean and standard error of the test ARI.
    """
    meta = np.asarray(meta, dtype=np.float64)
    c = meta.shape[0]
    networks, splits = list(networks), list(splits)
    t0 = time.perf_counter()

    def per_network(net_seed):
        g, labels = generate_sdsbm(SdsbmParams(meta, n, p, rho, eta, seed=net_seed))
        x = build_features(g, features)
        base = spectral_baseline_labels(g, c, q=0.25, seed=net_seed, phase=phase) if baseline else None
        out = []
        for sp in splits:
            t1 = time.perf_counter()
            split = split_nodes(labels, seed=sp)
            cfg = ModelConfig(x.shape[1], c, task="node", q=q, hidden=hidden, seed=sp, phase=phase)
            model = MsgnnModel.build(cfg, g)
            hist = train_node(model, x, labels, split.seeds, split.val, max_epochs=max_epochs, patience=patience)
            pred = model.predict(x)
            b = ari(base[split.test], labels[split.test]) if base is not None else None
            out.append(ClusterRun(net_seed, sp, ari(pred[split.test], labels[split.test]), b, hist.best_epoch, time.perf_counter() - t1))
        return out

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        runs = [r for chunk in pool.map(per_network, networks) for r in chunk]
    wall = time.perf_counter() - t0
    label = f"{dataset}(n={n},p={p},rho={rho},eta={eta})"
    scores = np.array([r.ari for r in runs])
    main = Summary(label, "cluster", f"{q:.6g}", features.label(), float(scores.mean()), _stderr(scores), len(runs), wall, [asdict(r) for r in runs])
    base_summary = None
    if baseline:
        b = np.array([r.baseline_ari for r in runs])
        base_summary = Summary(label, "cluster-spectral", "0.25", "eigvec", float(b.mean()), _stderr(b), len(runs), wall)
    return main, base_summary


def _stderr(v: np.ndarray) -> float:
    return float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0
