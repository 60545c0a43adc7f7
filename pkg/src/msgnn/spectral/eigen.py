"""Dense Hermitian eigensolver and a power-iteration bound on the top eigenvalue.

The dense path reduces the Hermitian matrix to a complex tridiagonal one with
Householder reflectors, rotates the subdiagonal to be real and nonnegative by a
diagonal unitary, then diagonalises the real symmetric tridiagonal with the
implicit-shift QL iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..maglap import HermitianMatrix

DENSE_CAP = 4000


class DimensionTooLargeError(ValueError):
    """Dense decomposition refused; use :func:`lambda_max` for an iterative bound."""


class NonConvergenceError(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


@njit(cache=True)
def _householder(a):
    """In-place tridiagonalisation; returns (diag, complex subdiag, Q) with Q^H A Q = T."""
    n = a.shape[0]
    vs = np.zeros((n, n), dtype=np.complex128)
    active = np.zeros(n, dtype=np.bool_)
    for k in range(n - 2):
        m = n - k - 1
        xnorm2 = 0.0
        for i in range(m):
            z = a[k + 1 + i, k]
            xnorm2 += z.real * z.real + z.imag * z.imag
        xnorm = math.sqrt(xnorm2)
        x0 = a[k + 1, k]
        tail2 = xnorm2 - (x0.real * x0.real + x0.imag * x0.imag)
        if tail2 <= 0.0:
            continue
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        alpha = -phase * xnorm
        v = np.empty(m, dtype=np.complex128)
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] -= alpha
        vn2 = 0.0
        for i in range(m):
            vn2 += v[i].real * v[i].real + v[i].imag * v[i].imag
        vn = math.sqrt(vn2)
        for i in range(m):
            v[i] /= vn
        # p = A22 v
        p = np.zeros(m, dtype=np.complex128)
        for i in range(m):
            acc = 0.0 + 0.0j
            for j in range(m):
                acc += a[k + 1 + i, k + 1 + j] * v[j]
            p[i] = acc
        kk = 0.0
        for i in range(m):
            kk += (v[i].conjugate() * p[i]).real
        w = p - kk * v
        # A22 <- A22 - 2 (v w^H + w v^H)
        for i in range(m):
            vi = v[i]
            wi = w[i]
            for j in range(m):
                a[k + 1 + i, k + 1 + j] -= 2.0 * (vi * w[j].conjugate() + wi * v[j].conjugate())
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha.conjugate()
        for i in range(k + 2, n):
            a[i, k] = 0.0
            a[k, i] = 0.0
        for i in range(m):
            vs[k, k + 1 + i] = v[i]
        active[k] = True
    # backward accumulation: Q = H_0 H_1 ... H_{n-3}
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 3, -1, -1):
        if not active[k]:
            continue
        m = n - k - 1
        for c in range(k + 1, n):
            acc = 0.0 + 0.0j
            for i in range(m):
                acc += vs[k, k + 1 + i].conjugate() * q[k + 1 + i, c]
            if acc != 0.0:
                for i in range(m):
                    q[k + 1 + i, c] -= 2.0 * vs[k, k + 1 + i] * acc
    d = np.empty(n)
    e = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        d[i] = a[i, i].real
    for i in range(n - 1):
        e[i] = a[i + 1, i]
    return d, e, q


@njit(cache=True)
def _tql(d, e, zt):
    """Implicit-shift QL on a real symmetric tridiagonal.

    ``d`` diagonal, ``e[i]`` the (i+1, i) entry (``e[n-1]`` ignored).  Rotations
    are accumulated into the rows of ``zt`` (so eigenvectors are ``zt.T``).
    Returns False if some eigenvalue needed more than 60 sweeps.
    """
    n = d.shape[0]
    if n > 0:
        e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return False
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * f
                    zt[i, k] = c * zt[i, k] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return True


def _fix_phase(u: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    idx = np.argmax(np.abs(u), axis=0)
    lead = u[idx, np.arange(u.shape[1])]
    mag = np.abs(lead)
    rot = np.where(mag > 0, np.conj(lead) / np.where(mag > 0, mag, 1.0), 1.0)
    return u * rot


def eigh(m, cap: int = DENSE_CAP) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    if isinstance(m, HermitianMatrix):
        a = m.toarray()
    else:
        a = np.array(m, dtype=np.complex128)
        a = np.triu(a) + np.triu(a, 1).conj().T
        a[np.diag_indices_from(a)] = a.diagonal().real
    n = a.shape[0]
    if n > cap:
        raise DimensionTooLargeError(f"dimension {n} exceeds dense cap {cap}; use lambda_max instead")
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    a = np.ascontiguousarray(a, dtype=np.complex128)
    d, e, q = _householder(a)
    # unitary diagonal that makes the subdiagonal real nonnegative
    ph = np.ones(n, dtype=np.complex128)
    ereal = np.zeros(n)
    for i in range(n - 1):
        mag = abs(e[i])
        ereal[i] = mag
        ph[i + 1] = ph[i] * (e[i] / mag if mag > 0 else 1.0)
    zt = np.eye(n)
    if not _tql(d, ereal, zt):
        raise NonConvergenceError("QL iteration did not converge")
    order = np.argsort(d, kind="stable")
    u = (q * ph) @ zt[order].T
    return EigenDecomposition(d[order].copy(), _fix_phase(u))


def lambda_max(m, tol: float = 1e-8, max_iter: int = 20000, seed: int = 0) -> float:
    """Largest eigenvalue of a Hermitian PSD matrix by power iteration.

    Stops once the Rayleigh quotient has a residual below ``tol``, which puts it
    within ``tol`` of an eigenvalue; the Rayleigh quotient never exceeds the top
    eigenvalue, so the estimate approaches it from below.
    """
    op = m.csr if isinstance(m, HermitianMatrix) else m
    n = op.shape[0]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    rho = 0.0
    for _ in range(max_iter):
        y = op @ x
        rho = float(np.real(np.vdot(x, y)))
        res = np.linalg.norm(y - rho * x)
        if res <= tol:
            return rho
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
    raise NonConvergenceError(f"power iteration did not converge in {max_iter} steps", estimate=rho)
