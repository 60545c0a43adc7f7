"""Phase matrix, Hermitian adjacency and the magnetic signed Laplacians."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .graph import SignedDiGraph, absolute_degree, symmetrized_adjacency


class NoDirectionError(ValueError):
    """The graph is symmetric, so there is no asymmetry to scale the charge by."""


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Sparse complex Hermitian matrix stored as complex128 CSR.

    Only build these through :meth:`from_upper` or :meth:`from_dense`; both
    mirror the upper triangle so conjugate symmetry holds bit-for-bit.
    """

    n: int
    csr: sp.csr_matrix = field(repr=False)

    @classmethod
    def from_upper(cls, n: int, rows, cols, values, diag=None) -> "HermitianMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.complex128)
        if np.any(rows >= cols):
            raise ValueError("from_upper expects strictly upper-triangular entries")
        d = np.zeros(n) if diag is None else np.asarray(diag, dtype=np.float64)
        keep = values != 0
        rows, cols, values = rows[keep], cols[keep], values[keep]
        dn = np.flatnonzero(d)
        r = np.concatenate([rows, cols, dn])
        c = np.concatenate([cols, rows, dn])
        v = np.concatenate([values, np.conj(values), d[dn].astype(np.complex128)])
        m = sp.csr_matrix((v, (r, c)), shape=(n, n), dtype=np.complex128)
        m.sort_indices()
        return cls(n, m)

    @classmethod
    def from_dense(cls, m) -> "HermitianMatrix":
        m = np.asarray(m, dtype=np.complex128)
        n = m.shape[0]
        r, c = np.triu_indices(n, 1)
        return cls.from_upper(n, r, c, m[r, c], np.real(np.diag(m)))

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def diagonal(self) -> np.ndarray:
        return np.real(self.csr.diagonal())

    @property
    def nnz(self) -> int:
        return int(self.csr.nnz)

    def __matmul__(self, x):
        return self.csr @ x

    def is_real(self) -> bool:
        return not np.any(self.csr.data.imag)

    def scaled(self, lambda_max: float) -> "HermitianMatrix":
        """``(2 / lambda_max) * M - I``, the Chebyshev rescaling."""
        coo = sp.triu(self.csr, k=1).tocoo()
        s = 2.0 / lambda_max
        return HermitianMatrix.from_upper(self.n, coo.row, coo.col, s * coo.data, s * self.diagonal() - 1.0)


PHASES = ("magnitude", "signed")


def _upper_phases(g: SignedDiGraph, q: float, phase: str = "magnitude"):
    """Upper-triangle support of A~ with the phase of each entry.

    ``phase="magnitude"`` takes the asymmetry from ``|A|`` so the sign stays in
    A~ and a one-way negative edge is the negation of a positive one.
    ``phase="signed"`` takes it from ``A`` itself; there a one-way edge of
    weight -w gets the same phase as a reversed edge of weight w.
    """
    if phase not in PHASES:
        raise ValueError(f"phase must be one of {PHASES}")
    at = symmetrized_adjacency(g)
    upper = sp.triu(at, k=1).tocoo()
    r, c = upper.row.astype(np.int64), upper.col.astype(np.int64)
    a = abs(g.adjacency) if phase == "magnitude" else g.adjacency
    if len(r):
        skew = np.asarray(a[r, c]).ravel() - np.asarray(a[c, r]).ravel()
    else:
        skew = np.zeros(0)
    theta = np.mod(2.0 * math.pi * q * skew, 2.0 * math.pi)
    return at, r, c, upper.data, theta


def q_max(g: SignedDiGraph) -> float:
    """``q0 = 1 / (2 max_ij (A_ij - A_ji))``: maps the largest asymmetry to phase pi."""
    a = g.adjacency
    diff = (a - a.T).tocsr()
    top = diff.data.max() if diff.nnz else 0.0
    if top <= 0:
        raise NoDirectionError("graph has no directional information; use q=0")
    return 1.0 / (2.0 * float(top))


def hermitian_adjacency(g: SignedDiGraph, q: float, phase: str = "magnitude") -> HermitianMatrix:
    """``H = A~ * exp(i Theta)`` with ``Theta_ij = 2 pi q (|A_ij| - |A_ji|)``.

    See :func:`_upper_phases` for ``phase``.
    """
    if not math.isfinite(q):
        raise ValueError("charge parameter must be finite")
    at, r, c, vals, theta = _upper_phases(g, q, phase)
    return HermitianMatrix.from_upper(g.n, r, c, vals * (np.cos(theta) + 1j * np.sin(theta)), at.diagonal())


def laplacian_unnormalized(g: SignedDiGraph, q: float, phase: str = "magnitude") -> HermitianMatrix:
    h = hermitian_adjacency(g, q, phase)
    upper = sp.triu(h.csr, k=1).tocoo()
    return HermitianMatrix.from_upper(g.n, upper.row, upper.col, -upper.data, absolute_degree(g) - h.diagonal())


def _inv_sqrt_degree(g: SignedDiGraph) -> np.ndarray:
    d = absolute_degree(g)
    out = np.zeros_like(d)
    np.divide(1.0, np.sqrt(d), out=out, where=d > 0)
    return out


def laplacian_normalized(g: SignedDiGraph, q: float, phase: str = "magnitude") -> HermitianMatrix:
    """``I - (D~^-1/2 A~ D~^-1/2) * exp(i Theta)``; isolated nodes get an identity row."""
    at, r, c, vals, theta = _upper_phases(g, q, phase)
    s = _inv_sqrt_degree(g)
    rot = np.cos(theta) + 1j * np.sin(theta)
    diag = 1.0 - s * s * at.diagonal()
    return HermitianMatrix.from_upper(g.n, r, c, -(s[r] * vals * s[c]) * rot, diag)


def dump_csv(m: HermitianMatrix, path) -> None:
    coo = m.csr.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["i", "j", "re", "im"])
        for k in order:
            v = coo.data[k]
            out.writerow([int(coo.row[k]), int(coo.col[k]), repr(float(v.real)), repr(float(v.imag))])
