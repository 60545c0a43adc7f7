"""Self-checks runnable from the command line without the test suite."""
from __future__ import annotations

import time

import numpy as np

from .graph import SignedDiGraph, absolute_degree, symmetrized_adjacency
from .maglap import laplacian_normalized, laplacian_unnormalized
from .nn import ModelConfig, MsgnnModel


def random_signed_digraph(rng, n: int, density: float = 0.3, weighted: bool = True) -> SignedDiGraph:
    mask = rng.random((n, n)) < density
    w = rng.uniform(0.1, 3.0, (n, n)) if weighted else np.ones((n, n))
    a = np.where(mask, w * rng.choice([-1.0, 1.0], (n, n)), 0.0)
    return SignedDiGraph.from_dense(a)


def spectrum_suite(count: int = 200, max_n: int = 50, seed: int = 0, tol: float = 1e-9) -> dict:
    """Positive semidefiniteness of both Laplacians and the [0, 2] bound for the normalized one."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst_u, worst_lo, worst_hi = np.inf, np.inf, -np.inf
    for _ in range(count):
        g = random_signed_digraph(rng, int(rng.integers(1, max_n + 1)), rng.uniform(0.05, 0.6))
        q = rng.uniform(0, 1)
        eu = np.linalg.eigvalsh(laplacian_unnormalized(g, q).toarray())
        en = np.linalg.eigvalsh(laplacian_normalized(g, q).toarray())
        worst_u = min(worst_u, eu.min())
        worst_lo = min(worst_lo, en.min())
        worst_hi = max(worst_hi, en.max())
    ok = worst_u >= -tol and worst_lo >= -tol and worst_hi <= 2 + tol
    return {"name": "spectrum", "ok": bool(ok), "min_eig_unnormalized": float(worst_u), "min_eig_normalized": float(worst_lo), "max_eig_normalized": float(worst_hi), "seconds": time.perf_counter() - t0}


def reduction_suite(count: int = 50, seed: int = 0) -> dict:
    """q = 0 gives D~ - A~; the normalized Laplacian is the degree-scaled unnormalized one."""
    rng = np.random.default_rng(seed)
    err0, errn = 0.0, 0.0
    for _ in range(count):
        g = random_signed_digraph(rng, int(rng.integers(2, 30)))
        deg = absolute_degree(g)
        lu0 = laplacian_unnormalized(g, 0.0).toarray()
        err0 = max(err0, np.abs(lu0 - (np.diag(deg) - symmetrized_adjacency(g).toarray())).max())
        q = rng.uniform(0, 1)
        s = np.where(deg > 0, 1 / np.sqrt(np.where(deg > 0, deg, 1)), 0.0)
        scaled = s[:, None] * laplacian_unnormalized(g, q).toarray() * s[None, :]
        ln = laplacian_normalized(g, q).toarray()
        live = deg > 0
        errn = max(errn, np.abs((scaled - ln)[np.ix_(live, live)]).max(initial=0.0))
    return {"name": "reduction", "ok": bool(err0 == 0.0 and errn <= 1e-12), "q0_error": float(err0), "normalized_error": float(errn)}


def gradient_suite(seed: int = 0, h: float = 1e-5, tol: float = 1e-4) -> dict:
    """Central differences against the analytic gradient for both heads."""
    rng = np.random.default_rng(seed)
    g = random_signed_digraph(rng, 10, 0.4)
    x0 = rng.standard_normal((10, 4))
    worst = 0.0
    for task in ("node", "link"):
        model = MsgnnModel.build(ModelConfig(4, 3, task=task, q=0.3, hidden=4, seed=seed), g)
        for layer in model.layers:
            layer.bias[:] = 0.3 * rng.standard_normal(layer.bias.shape)
        if task == "node":
            kw = {"nodes": np.arange(10)}
            labels = rng.integers(0, 3, 10)
        else:
            kw = {"pairs": rng.integers(0, 10, (12, 2))}
            labels = rng.integers(0, 3, 12)
        _, grads = model.loss_and_grad(x0, labels, **kw)
        for name, p in model.parameters().items():
            num = np.zeros_like(p)
            for idx in np.ndindex(p.shape):
                old = p[idx]
                p[idx] = old + h
                lp, _ = model.loss_and_grad(x0, labels, **kw)
                p[idx] = old - h
                lm, _ = model.loss_and_grad(x0, labels, **kw)
                p[idx] = old
                num[idx] = (lp - lm) / (2 * h)
            scale = max(np.linalg.norm(num), np.linalg.norm(grads[name]), 1e-12)
            worst = max(worst, float(np.linalg.norm(num - grads[name]) / scale))
    return {"name": "gradient", "ok": worst < tol, "max_relative_error": worst}


SUITES = {"spectrum": spectrum_suite, "reduction": reduction_suite, "gradient": gradient_suite}
