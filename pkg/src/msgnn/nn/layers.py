"""Complex spectral convolution layer (Chebyshev order one) and its backward pass.

Features are complex ``n x F`` arrays; weights and bias are real.  Real weights
act identically on the real and imaginary parts, and the single bias vector is
added to both parts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def relu_mask(z: np.ndarray) -> np.ndarray:
    """True where ``-pi/2 <= arg(z) < pi/2``; ``arg(0)`` is taken as 0."""
    return (z.real > 0) | ((z.real == 0) & (z.imag <= 0))


def complex_relu(z):
    z = np.asarray(z, dtype=np.complex128)
    return np.where(relu_mask(z), z, 0)


@dataclass
class ChebConvLayer:
    w_self: np.ndarray
    w_neigh: np.ndarray
    bias: np.ndarray

    @classmethod
    def init(cls, f_in: int, f_out: int, rng) -> "ChebConvLayer":
        lim = np.sqrt(6.0 / (f_in + f_out))
        return cls(
            rng.uniform(-lim, lim, (f_in, f_out)),
            rng.uniform(-lim, lim, (f_in, f_out)),
            np.zeros(f_out),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.w_self.shape


def layer_forward(layer: ChebConvLayer, ltil, x: np.ndarray, cache: bool = False):
    """``sigma(X W_self + L~ X W_neigh + b(1 + i))``.

    ``ltil`` is anything supporting ``ltil @ x`` (a sparse matrix or
    :class:`~msgnn.maglap.HermitianMatrix`).  With ``cache`` the intermediates
    needed by :func:`layer_backward` are returned as a second value.
    """
    if x.shape[1] != layer.w_self.shape[0]:
        raise ValueError(f"layer expects {layer.w_self.shape[0]} input channels, got {x.shape[1]}")
    y = ltil @ x
    pre = x @ layer.w_self + y @ layer.w_neigh + layer.bias * (1 + 1j)
    mask = relu_mask(pre)
    out = np.where(mask, pre, 0)
    if cache:
        return out, (x, y, mask)
    return out


def layer_backward(layer: ChebConvLayer, ltil, grad_out: np.ndarray, cache):
    """Gradients given ``grad_out = dL/dRe(out) + i dL/dIm(out)``.

    Returns ``(grad_x, {"w_self", "w_neigh", "bias"})`` with ``grad_x`` in the
    same complex packing.
    """
    x, y, mask = cache
    g = np.where(mask, grad_out, 0)
    grads = {
        "w_self": np.real(x.conj().T @ g),
        "w_neigh": np.real(y.conj().T @ g),
        "bias": (g.real + g.imag).sum(axis=0),
    }
    # L~ is Hermitian, so its adjoint is itself
    grad_x = g @ layer.w_self.T + ltil @ (g @ layer.w_neigh.T)
    return grad_x, grads
