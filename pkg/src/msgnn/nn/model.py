"""The MSGNN network: stacked complex convolutions, unwind, linear head, softmax."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp

from ..graph import SignedDiGraph
from ..maglap import HermitianMatrix, laplacian_normalized, laplacian_unnormalized
from ..spectral import lambda_max as power_lambda_max
from .layers import ChebConvLayer, layer_backward, layer_forward

TASK_KINDS = ("node", "link")


@dataclass
class ModelConfig:
    in_dim: int
    num_classes: int
    task: str = "node"
    q: float = 0.0
    hidden: int = 16
    num_layers: int = 2
    normalized: bool = True
    # None: 2 for the normalized Laplacian, power iteration otherwise
    lambda_max: float | None = None
    power_iteration: bool = False
    seed: int = 0
    phase: str = "magnitude"

    def __post_init__(self):
        if self.task not in TASK_KINDS:
            raise ValueError(f"task must be one of {TASK_KINDS}")
        if self.num_layers < 1:
            raise ValueError("need at least one convolution layer")


def scaled_laplacian(g: SignedDiGraph, cfg: ModelConfig) -> HermitianMatrix:
    build = laplacian_normalized if cfg.normalized else laplacian_unnormalized
    lap = build(g, cfg.q, cfg.phase)
    lmax = cfg.lambda_max
    if lmax is None:
        lmax = power_lambda_max(lap, tol=1e-6) if (cfg.power_iteration or not cfg.normalized) else 2.0
    if lmax <= 0:
        # empty graph: L~ = -I keeps the self path meaningful
        lmax = 2.0
    return lap.scaled(lmax)


@dataclass
class MsgnnModel:
    config: ModelConfig
    layers: list[ChebConvLayer]
    head: np.ndarray
    ltil: HermitianMatrix | None = field(default=None, repr=False)

    @classmethod
    def build(cls, cfg: ModelConfig, graph: SignedDiGraph | None = None) -> "MsgnnModel":
        rng = np.random.default_rng(cfg.seed)
        dims = [cfg.in_dim] + [cfg.hidden] * cfg.num_layers
        layers = [ChebConvLayer.init(a, b, rng) for a, b in zip(dims[:-1], dims[1:])]
        width = 2 * cfg.hidden * (2 if cfg.task == "link" else 1)
        lim = np.sqrt(6.0 / (width + cfg.num_classes))
        head = rng.uniform(-lim, lim, (width, cfg.num_classes))
        model = cls(cfg, layers, head)
        if graph is not None:
            model.attach(graph)
        return model

    def attach(self, graph: SignedDiGraph) -> "MsgnnModel":
        """Cache the rescaled Laplacian of ``graph`` for subsequent passes."""
        self.ltil = scaled_laplacian(graph, self.config)
        self._op = self.ltil.csr
        return self

    # parameters ---------------------------------------------------------
    def parameters(self) -> dict[str, np.ndarray]:
        out = {}
        for i, layer in enumerate(self.layers):
            out[f"layers.{i}.w_self"] = layer.w_self
            out[f"layers.{i}.w_neigh"] = layer.w_neigh
            out[f"layers.{i}.bias"] = layer.bias
        out["head"] = self.head
        return out

    def set_parameters(self, params: dict[str, np.ndarray]) -> None:
        for i, layer in enumerate(self.layers):
            layer.w_self = np.array(params[f"layers.{i}.w_self"], dtype=np.float64)
            layer.w_neigh = np.array(params[f"layers.{i}.w_neigh"], dtype=np.float64)
            layer.bias = np.array(params[f"layers.{i}.bias"], dtype=np.float64)
        self.head = np.array(params["head"], dtype=np.float64)

    def copy_parameters(self) -> dict[str, np.ndarray]:
        return {k: v.copy() for k, v in self.parameters().items()}

    # passes -------------------------------------------------------------
    def _check(self, pairs):
        if self.ltil is None:
            raise RuntimeError("model has no graph attached; call attach(graph)")
        if self.config.task == "node" and pairs is not None:
            raise ValueError("node task does not take node pairs")
        if self.config.task == "link" and pairs is None:
            raise ValueError("link task needs node pairs")

    def embed(self, x0):
        """Unwound final-layer representation, ``n x 2F``."""
        x = np.asarray(x0).astype(np.complex128)
        for layer in self.layers:
            x = layer_forward(layer, self._op, x)
        return np.hstack([x.real, x.imag])

    def _head_logits(self, h, nodes=None, pairs=None):
        """Logits for the selected rows; pair rows concatenate both endpoints."""
        if pairs is None:
            proj = h @ self.head
            return proj if nodes is None else proj[nodes]
        f2 = h.shape[1]
        return (h @ self.head[:f2])[pairs[:, 0]] + (h @ self.head[f2:])[pairs[:, 1]]

    def logits(self, x0, pairs=None):
        self._check(pairs)
        if pairs is not None:
            pairs = np.asarray(pairs, dtype=np.int64)
        return self._head_logits(self.embed(x0), pairs=pairs)

    def forward(self, x0, pairs=None) -> np.ndarray:
        """Class probabilities per node (node task) or per pair (link task)."""
        return softmax(self.logits(x0, pairs))

    def predict(self, x0, pairs=None) -> np.ndarray:
        return self.logits(x0, pairs).argmax(axis=1)

    def loss_and_grad(self, x0, labels, nodes=None, pairs=None):
        """Mean cross-entropy and its gradient for every parameter.

        For the node task ``nodes`` selects the labeled rows (all rows when
        None); for the link task ``pairs`` lists the labeled node pairs.
        """
        self._check(pairs)
        labels = np.asarray(labels, dtype=np.int64)
        x = np.asarray(x0).astype(np.complex128)
        caches = []
        for layer in self.layers:
            x, c = layer_forward(layer, self._op, x, cache=True)
            caches.append(c)
        h = np.hstack([x.real, x.imag])
        n = h.shape[0]
        if pairs is None:
            idx = np.arange(n) if nodes is None else np.asarray(nodes, dtype=np.int64)
            logit = self._head_logits(h, nodes=idx)
        else:
            pairs = np.asarray(pairs, dtype=np.int64)
            logit = self._head_logits(h, pairs=pairs)
        b = len(labels)
        loss = float(-np.mean(log_softmax(logit)[np.arange(b), labels]))
        dlogit = softmax(logit)
        dlogit[np.arange(b), labels] -= 1.0
        dlogit /= b
        # scatter per-row logit gradients back onto nodes
        if pairs is None:
            s = _scatter(idx, dlogit, n)
            grads = {"head": h.T @ s}
            dh = s @ self.head.T
        else:
            f2 = h.shape[1]
            su, sv = _scatter(pairs[:, 0], dlogit, n), _scatter(pairs[:, 1], dlogit, n)
            grads = {"head": np.vstack([h.T @ su, h.T @ sv])}
            dh = su @ self.head[:f2].T + sv @ self.head[f2:].T
        f = h.shape[1] // 2
        g = dh[:, :f] + 1j * dh[:, f:]
        for i in range(len(self.layers) - 1, -1, -1):
            g, lg = layer_backward(self.layers[i], self._op, g, caches[i])
            for k, v in lg.items():
                grads[f"layers.{i}.{k}"] = v
        return loss, grads

    def config_dict(self) -> dict:
        return asdict(self.config)


def _scatter(rows, values, n):
    """``out[r] += values[k]`` for ``r = rows[k]``."""
    sel = sp.csr_matrix((np.ones(len(rows)), (rows, np.arange(len(rows)))), shape=(n, len(rows)))
    return sel @ values


def log_softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def softmax(z):
    e = np.exp(z - z.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)
