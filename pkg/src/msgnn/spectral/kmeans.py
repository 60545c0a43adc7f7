"""Lloyd's k-means with k-means++ seeding and multiple restarts."""
from __future__ import annotations

import numpy as np


def _sq_dists(x, centers):
    d = (x * x).sum(1)[:, None] - 2.0 * x @ centers.T + (centers * centers).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _plusplus(x, k, rng):
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = _sq_dists(x, centers[:1]).ravel()
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers[c] = x[idx]
        closest = np.minimum(closest, _sq_dists(x, centers[c : c + 1]).ravel())
    return centers


def _lloyd(x, centers, max_iter, tol):
    prev = np.inf
    for _ in range(max_iter):
        d = _sq_dists(x, centers)
        labels = d.argmin(1)
        inertia = d[np.arange(len(x)), labels].sum()
        for c in range(len(centers)):
            members = labels == c
            if members.any():
                centers[c] = x[members].mean(0)
        if np.isfinite(prev) and prev - inertia <= tol * prev:
            break
        prev = inertia
    d = _sq_dists(x, centers)
    labels = d.argmin(1)
    return labels, d[np.arange(len(x)), labels].sum()


def _pad_empty(x, labels, k):
    """Give every empty cluster one point, taken from a multi-member cluster."""
    labels = labels.copy()
    for c in range(k):
        if np.any(labels == c):
            continue
        counts = np.bincount(labels, minlength=k)
        donors = np.flatnonzero(counts[labels] > 1)
        centers = np.stack([x[labels == j].mean(0) if counts[j] else np.zeros(x.shape[1]) for j in range(k)])
        spread = ((x[donors] - centers[labels[donors]]) ** 2).sum(1)
        labels[donors[np.argmax(spread)]] = c
    return labels


def kmeans(points, k: int, seed: int = 0, restarts: int = 50, max_iter: int = 300, tol: float = 1e-6) -> np.ndarray:
    """Cluster labels in ``[0, k)``; best of ``restarts`` runs by inertia.

    When there are fewer distinct points than ``k`` the surplus clusters are
    filled with singletons so that every label is used.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if k < 1 or x.shape[0] < k:
        raise ValueError("need k >= 1 and at least k points")
    rng = np.random.default_rng(seed)
    best, best_inertia = None, np.inf
    for _ in range(restarts):
        labels, inertia = _lloyd(x, _plusplus(x, k, rng), max_iter, tol)
        if inertia < best_inertia - 1e-12 * max(abs(best_inertia), 1.0) or best is None:
            best, best_inertia = labels, inertia
    return _pad_empty(x, best, k)
