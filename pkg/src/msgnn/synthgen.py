"""Signed (directed) stochastic block models driven by a meta-graph."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SignedDiGraph


def meta_f1(gamma: float) -> np.ndarray:
    """Three-block meta-graph with directional noise level ``gamma``."""
    _check_gamma(gamma)
    g = gamma
    return np.array(
        [
            [0.5, g, -g],
            [1 - g, 0.5, -0.5],
            [-1 + g, -0.5, 0.5],
        ]
    )


def meta_f2(gamma: float) -> np.ndarray:
    """Four-block meta-graph: the three blocks of :func:`meta_f1` plus one with mostly negative out-edges."""
    _check_gamma(gamma)
    g = gamma
    return np.array(
        [
            [0.5, g, -g, -g],
            [1 - g, 0.5, -0.5, -g],
            [-1 + g, -0.5, 0.5, -g],
            [-1 + g, -1 + g, -1 + g, 0.5],
        ]
    )


def _check_gamma(gamma):
    if not 0.0 <= gamma <= 0.5:
        raise ValueError("gamma must lie in [0, 0.5]")


def block_sizes(n: int, c: int, rho: float) -> np.ndarray:
    """Nondecreasing block sizes summing to ``n`` with max/min close to ``rho``.

    Sizes follow ``rho ** (t / (c - 1))``, rescaled to ``n`` and rounded by
    largest remainder.
    """
    if c < 1 or n < c:
        raise ValueError("need 1 <= c <= n")
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if c == 1:
        return np.array([n])
    w = rho ** (np.arange(c) / (c - 1))
    exact = n * w / w.sum()
    sizes = np.floor(exact).astype(np.int64)
    short = n - sizes.sum()
    # ties go to the later (larger) block, keeping the result sorted
    order = np.lexsort((-np.arange(c), -(exact - sizes)))
    sizes[order[:short]] += 1
    sizes = np.maximum(sizes, 1)
    while sizes.sum() > n:
        sizes[np.argmax(sizes)] -= 1
    return np.sort(sizes)


@dataclass(frozen=True)
class SdsbmParams:
    F: np.ndarray
    n: int
    p: float
    rho: float = 1.0
    eta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        f = np.asarray(self.F, dtype=np.float64)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError("meta-graph must be square")
        if np.any(np.abs(f) > 1):
            raise ValueError("meta-graph entries must lie in [-1, 1]")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.rho < 1:
            raise ValueError("rho must be >= 1")
        if not 0 <= self.eta <= 0.5:
            raise ValueError("eta must lie in [0, 0.5]")
        if self.n < f.shape[0]:
            raise ValueError("need at least one node per block")


def _assign_labels(n, sizes, rng):
    labels = np.empty(n, dtype=np.int64)
    labels[rng.permutation(n)] = np.repeat(np.arange(len(sizes)), sizes)
    return labels


def generate_sdsbm(params: SdsbmParams) -> tuple[SignedDiGraph, np.ndarray]:
    """Sample each ordered pair ``i != j`` independently with probability ``p |F_kl|``."""
    f = np.asarray(params.F, dtype=np.float64)
    rng = np.random.default_rng(params.seed)
    n = params.n
    labels = _assign_labels(n, block_sizes(n, f.shape[0], params.rho), rng)
    src_parts, dst_parts = [], []
    # row-blocked so memory stays O(block * n)
    step = max(1, 2_000_000 // max(n, 1))
    for start in range(0, n, step):
        rows = np.arange(start, min(start + step, n))
        prob = params.p * np.abs(f[labels[rows]][:, labels])
        hit = rng.random((len(rows), n)) < prob
        hit[np.arange(len(rows)), rows] = False
        r, col = np.nonzero(hit)
        src_parts.append(rows[r])
        dst_parts.append(col)
    src = np.concatenate(src_parts) if src_parts else np.zeros(0, np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.zeros(0, np.int64)
    w = np.where(f[labels[src], labels[dst]] >= 0, 1.0, -1.0)
    flip = rng.random(len(w)) < params.eta
    w[flip] *= -1
    return SignedDiGraph.from_arrays(src, dst, w, n=n), labels


def generate_ssbm(n: int, c: int, p: float, rho: float = 1.0, eta: float = 0.0, seed: int = 0):
    """Undirected signed SBM stored as reciprocal directed edges of equal weight."""
    if not 0 <= eta <= 0.5:
        raise ValueError("eta must lie in [0, 0.5]")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    labels = _assign_labels(n, block_sizes(n, c, rho), rng)
    iu_parts, ju_parts = [], []
    step = max(1, 2_000_000 // max(n, 1))
    for start in range(0, n, step):
        rows = np.arange(start, min(start + step, n))
        hit = (rng.random((len(rows), n)) < p) & (np.arange(n)[None, :] > rows[:, None])
        r, col = np.nonzero(hit)
        iu_parts.append(rows[r])
        ju_parts.append(col)
    iu = np.concatenate(iu_parts) if iu_parts else np.zeros(0, np.int64)
    ju = np.concatenate(ju_parts) if ju_parts else np.zeros(0, np.int64)
    w = np.where(labels[iu] == labels[ju], 1.0, -1.0)
    w[rng.random(len(w)) < eta] *= -1
    return (
        SignedDiGraph.from_arrays(np.concatenate([iu, ju]), np.concatenate([ju, iu]), np.concatenate([w, w]), n=n),
        labels,
    )
