"""Lead-lag networks from daily return panels.

``A[i, j]`` is the OLS slope (with intercept) of stock ``j``'s return on day
``t`` against stock ``i``'s return on day ``t - 1``, so a positive entry means
``i`` leads ``j``.  The ``"literal"`` orientation swaps the roles and returns
the transpose.
"""
from __future__ import annotations

import csv
import math
import warnings

import numpy as np

from .graph import SignedDiGraph

ORIENTATIONS = ("semantic", "literal")


def lead_lag_matrix(panel, orientation: str = "semantic") -> np.ndarray:
    """Dense ``S x S`` matrix of lag-one regression slopes, zero diagonal.

    ``panel`` is ``S x T`` (one row per stock).  Entries whose regressor has
    zero variance are set to 0 with a warning.
    """
    r = np.asarray(panel, dtype=np.float64)
    if r.ndim != 2:
        raise ValueError("return panel must be 2-D (stocks x days)")
    if r.shape[1] < 3:
        raise ValueError("need at least 3 days of returns")
    if not np.all(np.isfinite(r)):
        raise ValueError("return panel contains missing or non-finite values")
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    x = r[:, :-1]
    y = r[:, 1:]
    xc = x - x.mean(axis=1, keepdims=True)
    yc = y - y.mean(axis=1, keepdims=True)
    cov = xc @ yc.T  # cov[i, j] pairs i's lagged series with j's current one
    var = np.einsum("ij,ij->i", xc, xc)
    # relative threshold so that numerically constant series count as flat
    flat = var <= 1e-24 * np.maximum(1.0, np.einsum("ij,ij->i", x, x))
    if flat.any():
        warnings.warn(f"{int(flat.sum())} series have zero variance; their slopes are set to 0", RuntimeWarning, stacklevel=2)
    denom = np.where(flat, 1.0, var)
    out = cov / denom[:, None]
    out[flat, :] = 0.0
    np.fill_diagonal(out, 0.0)
    return out if orientation == "semantic" else out.T.copy()


def sparsify_top(m, frac: float = 0.2) -> SignedDiGraph:
    """Keep the ``ceil(frac * (S^2 - S))`` off-diagonal entries largest in magnitude.

    Ties are broken by row then column index.  Exact zeros among the kept
    entries cannot be edges and are dropped.
    """
    m = np.asarray(m, dtype=np.float64)
    s = m.shape[0]
    if m.shape != (s, s):
        raise ValueError("matrix must be square")
    if not 0 < frac <= 1:
        raise ValueError("frac must lie in (0, 1]")
    keep = math.ceil(frac * (s * s - s) - 1e-12)
    i, j = np.nonzero(~np.eye(s, dtype=bool))
    v = m[i, j]
    order = np.lexsort((j, i, -np.abs(v)))[:keep]
    i, j, v = i[order], j[order], v[order]
    nz = v != 0
    return SignedDiGraph.from_arrays(i[nz], j[nz], v[nz], n=s)


def read_returns_csv(path) -> tuple[np.ndarray, list[str], list[str]]:
    """Read a returns file whose first column is a date and whose header names the stocks.

    Returns ``(panel, stock_ids, dates)`` with ``panel`` shaped stocks x days.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    header, body = rows[0], [r for r in rows[1:] if r]
    stocks = [h.strip() for h in header[1:]]
    dates = [r[0] for r in body]
    try:
        values = np.array([[float(c) for c in r[1:]] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric return value ({exc})") from None
    if values.shape[1] != len(stocks):
        raise ValueError(f"{path}: rows do not match the header width")
    return values.T.copy(), stocks, dates


def write_returns_csv(panel, path, stocks=None, dates=None) -> None:
    panel = np.asarray(panel, dtype=np.float64)
    s, t = panel.shape
    stocks = stocks or [f"s{k}" for k in range(s)]
    dates = dates or [f"d{k}" for k in range(t)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["date", *stocks])
        for k in range(t):
            out.writerow([dates[k], *(repr(float(v)) for v in panel[:, k])])


def synthetic_panel(s: int, t: int = 245, leaders: int | None = None, strength: float = 0.5, noise: float = 1.0, seed: int = 0) -> np.ndarray:
    """Factor-driven toy panel: each follower loads on one leader's previous-day return."""
    rng = np.random.default_rng(seed)
    leaders = leaders or max(1, s // 5)
    r = noise * rng.standard_normal((s, t))
    loads = strength * rng.choice([-1.0, 1.0], size=s)
    lead_of = rng.integers(0, leaders, size=s)
    for k in range(leaders, s):
        r[k, 1:] += loads[k] * r[lead_of[k], :-1]
    return r
