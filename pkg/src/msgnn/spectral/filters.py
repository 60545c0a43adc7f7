"""Chebyshev polynomial filters and eigenvector embeddings."""
from __future__ import annotations

import numpy as np

from ..maglap import HermitianMatrix
from .eigen import eigh


def cheb_apply(m: HermitianMatrix, lambda_max: float, coeffs, x) -> np.ndarray:
    """``sum_k coeffs[k] T_k(L~) x`` with ``L~ = (2 / lambda_max) m - I``.

    Uses the three-term recurrence, so only sparse products with ``m`` are formed.
    """
    if lambda_max <= 0:
        raise ValueError("lambda_max must be positive")
    coeffs = np.asarray(coeffs, dtype=np.float64)
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != m.n:
        raise ValueError(f"x has {x.shape[0]} rows, matrix is {m.n}x{m.n}")
    scale = 2.0 / lambda_max

    def ltil(v):
        return scale * (m.csr @ v) - v

    t_prev = x
    out = coeffs[0] * t_prev
    if len(coeffs) == 1:
        return out
    t_cur = ltil(x)
    out = out + coeffs[1] * t_cur
    for c in coeffs[2:]:
        t_prev, t_cur = t_cur, 2.0 * ltil(t_cur) - t_prev
        out = out + c * t_cur
    return out


def spectral_embed(m, k: int, order: str = "largest") -> np.ndarray:
    """Real ``n x 2k`` embedding: real parts then imaginary parts of ``k`` eigenvectors.

    ``order="largest"`` takes the eigenvectors of the ``k`` largest eigenvalues
    (largest first); ``"smallest"`` the ``k`` smallest (smallest first).
    """
    dec = eigh(m)
    n = dec.eigenvalues.shape[0]
    if not 0 < k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if order == "largest":
        cols = np.arange(n - 1, n - 1 - k, -1)
    elif order == "smallest":
        cols = np.arange(k)
    else:
        raise ValueError("order must be 'largest' or 'smallest'")
    u = dec.eigenvectors[:, cols]
    return np.hstack([u.real, u.imag])
