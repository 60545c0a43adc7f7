from __future__ import annotations

import numpy as np


def accuracy(pred, truth) -> float:
    pred, truth = np.asarray(pred), np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must have equal length")
    if pred.size == 0:
        raise ValueError("empty input")
    return float(np.mean(pred == truth))


def _pairs(x):
    x = np.asarray(x, dtype=np.float64)
    return (x * (x - 1) / 2).sum()


def ari(pred, truth) -> float:
    """Adjusted Rand index from the contingency table of the two labelings."""
    pred, truth = np.asarray(pred), np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must have equal length")
    n = pred.size
    if n == 0:
        raise ValueError("empty input")
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    table = np.zeros((p.max() + 1, t.max() + 1))
    np.add.at(table, (p, t), 1)
    index = _pairs(table)
    a = _pairs(table.sum(1))
    b = _pairs(table.sum(0))
    expected = a * b / (n * (n - 1) / 2) if n > 1 else 0.0
    top = 0.5 * (a + b)
    if top == expected:
        return 1.0
    return float((index - expected) / (top - expected))
