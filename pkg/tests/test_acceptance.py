"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.

The real-data link benchmark reads ``bitcoin_alpha.csv`` and
``bitcoin_otc.csv`` (``src,dst,weight[,time]``, optionally gzipped) from the
directory named by ``MSGNN_DATA_DIR`` (default: ``data/`` beside ``tests/``).
"""
from __future__ import annotations

import os
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gen_stats import block_frequency_zscores  # noqa: E402
from oracles import (  # noqa: E402
    TOY_EDGES,
    magnetic_laplacian_unsigned,
    magnetic_signed_laplacians,
    ols_slope,
    random_signed_dense,
    signed_laplacian_undirected,
)

from msgnn.experiments import run_cluster, run_link  # noqa: E402
from msgnn.fill import lead_lag_matrix, sparsify_top, synthetic_panel  # noqa: E402
from msgnn.graph import SignedDiGraph, absolute_degree, read_edge_csv, symmetrized_adjacency  # noqa: E402
from msgnn.maglap import hermitian_adjacency, laplacian_normalized, laplacian_unnormalized  # noqa: E402
from msgnn.nn import ModelConfig, MsgnnModel  # noqa: E402
from msgnn.spectral import eigh  # noqa: E402
from msgnn.synthgen import meta_f1, meta_f2  # noqa: E402
from msgnn.tasks import FeatureSpec, build_features  # noqa: E402

RESULTS: list[str] = []


def report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{name}] {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# -- spectrum bounds ---------------------------------------------------------

def test_spectrum_bounds_on_random_graphs():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    lo_u, lo_n, hi_n, worst_gap = np.inf, np.inf, -np.inf, 0.0
    for k in range(200):
        n = int(rng.integers(1, 51))
        a = random_signed_dense(rng, n, rng.uniform(0.02, 0.6), weighted=bool(rng.integers(2)))
        q = rng.uniform(0, 1)
        phase = ("magnitude", "signed")[k % 2]
        g = SignedDiGraph.from_dense(a)
        eu = eigh(laplacian_unnormalized(g, q, phase)).eigenvalues
        en = eigh(laplacian_normalized(g, q, phase)).eigenvalues
        lo_u, lo_n, hi_n = min(lo_u, eu[0]), min(lo_n, en[0]), max(hi_n, en[-1])
        # the dense reference agrees with the in-house solver
        _, lu_ref, ln_ref = magnetic_signed_laplacians(a, q, phase)
        worst_gap = max(worst_gap, np.abs(np.linalg.eigvalsh(ln_ref) - en).max(), np.abs(np.linalg.eigvalsh(lu_ref) - eu).max() / max(1.0, np.abs(eu).max()))
    secs = time.perf_counter() - t0
    ok = lo_u >= -1e-9 and lo_n >= -1e-9 and hi_n <= 2 + 1e-9 and secs < 30 and worst_gap < 1e-8
    report("spectrum", ok, f"min eig L_U {lo_u:.2e}, min eig L_N {lo_n:.2e}, max eig L_N {hi_n:.12f}, reference gap {worst_gap:.1e}, {secs:.1f}s")


# -- reductions --------------------------------------------------------------

def test_reductions():
    rng = np.random.default_rng(7)
    q0_exact = True
    unsigned_err = signed_err = scaling_err = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 30))
        a = random_signed_dense(rng, n, 0.3)
        g = SignedDiGraph.from_dense(a)
        lu0 = laplacian_unnormalized(g, 0.0)
        expect = np.diag(absolute_degree(g)) - symmetrized_adjacency(g).toarray()
        q0_exact &= lu0.is_real() and np.array_equal(lu0.toarray(), expect)

        q = rng.uniform(0, 1)
        au = random_signed_dense(rng, n, 0.3, signed=False)
        gu = SignedDiGraph.from_dense(au)
        lu_ref, ln_ref = magnetic_laplacian_unsigned(au, q)
        unsigned_err = max(unsigned_err, np.abs(laplacian_unnormalized(gu, q).toarray() - lu_ref).max(), np.abs(laplacian_normalized(gu, q).toarray() - ln_ref).max())

        asym = random_signed_dense(rng, n, 0.3, directed=False)
        gs = SignedDiGraph.from_dense(asym)
        lu_s, ln_s = signed_laplacian_undirected(asym)
        signed_err = max(signed_err, np.abs(laplacian_unnormalized(gs, 0.0).toarray() - lu_s).max(), np.abs(laplacian_normalized(gs, 0.0).toarray() - ln_s).max())

        deg = absolute_degree(g)
        live = deg > 0
        s = np.where(live, 1 / np.sqrt(np.where(live, deg, 1)), 0)
        lhs = s[:, None] * laplacian_unnormalized(g, q).toarray() * s[None, :]
        diff = (lhs - laplacian_normalized(g, q).toarray())[np.ix_(live, live)]
        scaling_err = max(scaling_err, np.abs(diff).max(initial=0.0))
    ok = q0_exact and unsigned_err <= 1e-12 and signed_err <= 1e-12 and scaling_err <= 1e-12
    report("reductions", ok, f"q=0 exact {q0_exact}, unsigned-directed {unsigned_err:.1e}, signed-undirected {signed_err:.1e}, degree scaling {scaling_err:.1e}")


# -- golden values -----------------------------------------------------------

def test_golden_values():
    g = SignedDiGraph.from_edge_list(TOY_EDGES)
    expected = {
        "F,F": [2, 3],
        "F,T": [0, 3.4],
        "F,T'": [6, 3.6],
        "T,F": [1, 2, 1, 1],
        "T,T": [3, 3.5, 3, 0.1],
    }
    mismatches = []
    for tup, vec in expected.items():
        got = build_features(g, FeatureSpec.parse(tup), normalize=False)[0]
        if not np.allclose(got, vec, rtol=0, atol=1e-12):
            mismatches.append(f"{tup}: {got.tolist()}")
    pair_ok = True
    for sign in (1.0, -1.0):
        h = hermitian_adjacency(SignedDiGraph.from_edge_list([(0, 1, sign)]), 0.25).toarray()
        pair_ok &= abs(h[0, 1] - sign * 0.5j) < 1e-15 and abs(h[1, 0] + sign * 0.5j) < 1e-15
    ok = not mismatches and pair_ok
    report("golden", ok, f"5 feature tuples {'match' if not mismatches else mismatches}; q=0.25 one-way edge gives +-i/2 antisymmetric pair: {pair_ok}")


# -- gradient check ----------------------------------------------------------

def test_gradient_check_both_heads():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    a = random_signed_dense(rng, 10, 0.4)
    g = SignedDiGraph.from_dense(a)
    x0 = rng.standard_normal((10, 4))
    worst, count = 0.0, 0
    h = 1e-5
    for task in ("node", "link"):
        model = MsgnnModel.build(ModelConfig(4, 3, task=task, q=0.25, hidden=4, num_layers=2, seed=1), g)
        for layer in model.layers:
            layer.bias[:] = 0.2 * rng.standard_normal(layer.bias.shape)
        if task == "node":
            kw, labels = {"nodes": np.arange(10)}, rng.integers(0, 3, 10)
        else:
            kw, labels = {"pairs": rng.integers(0, 10, (16, 2))}, rng.integers(0, 3, 16)
        _, grads = model.loss_and_grad(x0, labels, **kw)
        for name, p in model.parameters().items():
            for idx in np.ndindex(p.shape):
                old = p[idx]
                p[idx] = old + h
                lp, _ = model.loss_and_grad(x0, labels, **kw)
                p[idx] = old - h
                lm, _ = model.loss_and_grad(x0, labels, **kw)
                p[idx] = old
                num = (lp - lm) / (2 * h)
                ana = grads[name][idx]
                denom = max(abs(num), abs(ana))
                # entries whose gradient is exactly zero on both sides are skipped
                if denom > 1e-10:
                    worst = max(worst, abs(num - ana) / denom)
                count += 1
    secs = time.perf_counter() - t0
    report("gradient", worst < 1e-4 and secs < 10, f"{count} parameter entries, max relative error {worst:.2e}, {secs:.2f}s")


# -- meta-graphs -------------------------------------------------------------

def test_meta_graph_matrices():
    def f1(y):
        return [[0.5, y, -y], [1 - y, 0.5, -0.5], [-1 + y, -0.5, 0.5]]

    def f2(y):
        return [[0.5, y, -y, -y], [1 - y, 0.5, -0.5, -y], [-1 + y, -0.5, 0.5, -y], [-1 + y, -1 + y, -1 + y, 0.5]]

    ok = all(np.array_equal(meta_f1(y), f1(y)) and np.array_equal(meta_f2(y), f2(y)) for y in (0.0, 0.25, 0.5))
    report("meta-graphs", ok, "F1 and F2 at gamma 0, 0.25, 0.5 match entrywise" if ok else "mismatch")


# -- real-data link benchmark --------------------------------------------------

DATA_DIR = Path(os.environ.get("MSGNN_DATA_DIR", Path(__file__).resolve().parent.parent / "data"))
LINK_TARGETS = [
    ("bitcoin_alpha", "SP", 0.680),
    ("bitcoin_otc", "SP", 0.690),
    ("bitcoin_alpha", "3C", 0.810),
]


def _find_dataset(name: str) -> Path | None:
    for suffix in (".csv", ".csv.gz"):
        p = DATA_DIR / f"{name}{suffix}"
        if p.exists():
            return p
    return None


@pytest.mark.slow
@pytest.mark.parametrize("dataset,task,threshold", LINK_TARGETS, ids=[f"{d}-{t}" for d, t, _ in LINK_TARGETS])
def test_bitcoin_link_accuracy(dataset, task, threshold):
    path = _find_dataset(dataset)
    if path is None:
        report(f"link {dataset} {task}", False, f"dataset file {dataset}.csv not found in {DATA_DIR}; set MSGNN_DATA_DIR")
    g, _ = read_edge_csv(path)
    t0 = time.perf_counter()
    summary = run_link(g, task, dataset)
    secs = time.perf_counter() - t0
    ok = summary.mean >= threshold and secs <= 600
    report(f"link {dataset} {task}", ok, f"accuracy {summary.table_cell()} over {summary.n_runs} splits (need >= {100 * threshold:.1f}), {secs:.0f}s")


# -- synthetic clustering ----------------------------------------------------

@pytest.mark.slow
def test_sdsbm_clustering_properties():
    t0 = time.perf_counter()
    base_kw = dict(n=1000, p=0.1, rho=1.5)
    main, spectral = run_cluster(meta_f1(0.0), eta=0.0, q=0.25, **base_kw)
    noisy, _ = run_cluster(meta_f1(0.0), eta=0.15, q=0.25, baseline=False, **base_kw)
    undirected, _ = run_cluster(meta_f1(0.0), eta=0.0, q=0.0, baseline=False, **base_kw)
    checks = {
        "a": main.mean >= 0.5,
        "b": main.mean > spectral.mean,
        "c": main.mean >= noisy.mean,
        "d": main.mean >= undirected.mean,
    }
    detail = (
        f"ARI q=0.25 {main.mean:.4f}+-{main.std:.4f} ({main.n_runs} runs), spectral {spectral.mean:.4f}, "
        f"eta=0.15 {noisy.mean:.4f}, q=0 {undirected.mean:.4f}; "
        + " ".join(f"({k}) {'ok' if v else 'FAILED'}" for k, v in checks.items())
        + f", {time.perf_counter() - t0:.0f}s"
    )
    report("sdsbm clustering", all(checks.values()), detail)


# -- generator statistics ----------------------------------------------------

def test_generator_statistics():
    cases = [
        (meta_f1(0.0), 0.0),
        (meta_f1(0.25), 0.1),
        (meta_f2(0.1), 0.3),
    ]
    worst_block, worst_flip = 0.0, 0.0
    for meta, eta in cases:
        z, flip_z, _ = block_frequency_zscores(meta, 300, 0.1, 1.5, eta, range(50))
        worst_block = max(worst_block, float(np.abs(z).max()))
        worst_flip = max(worst_flip, abs(flip_z))
    ok = worst_block <= 4 and worst_flip <= 4
    report("generator statistics", ok, f"max |z| block frequency {worst_block:.2f}, sign flips {worst_flip:.2f} (50 seeds x 3 settings)")


# -- lead-lag pipeline -------------------------------------------------------

def test_lead_lag_pipeline():
    rng = np.random.default_rng(5)
    r = rng.standard_normal((4, 245))
    r[2, 1:] = r[0, :-1]
    beta = lead_lag_matrix(r)[0, 2]
    beta_ok = abs(beta - 1.0) <= 1e-10 and abs(ols_slope(r[0, :-1], r[2, 1:]) - 1.0) <= 1e-10

    panel = synthetic_panel(60, 245, strength=0.6, seed=3)
    mat = lead_lag_matrix(panel)
    g = sparsify_top(mat, 0.2)
    count = int(np.ceil(0.2 * (60 * 60 - 60)))
    count_ok = g.num_edges == count
    t0 = time.perf_counter()
    summary = run_link(g, "5C", "synthetic-leadlag")
    ran = summary.n_runs == 5 and np.isfinite(summary.mean)
    report(
        "lead-lag pipeline",
        beta_ok and count_ok and ran,
        f"constructed beta {beta:.12f}, kept {g.num_edges}/{count} edges, 5C accuracy {summary.table_cell()} over {summary.n_runs} splits in {time.perf_counter() - t0:.1f}s",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
