"""Degree-based and eigenvector-based node features."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import SignedDiGraph, absolute_degree, signed_subgraphs, symmetrized_adjacency
from ..spectral import eigh

WEIGHTINGS = ("none", "net-sum", "abs-sum")


@dataclass(frozen=True)
class FeatureSpec:
    """``signed`` splits statistics by edge sign; ``weighted`` picks the statistic.

    ``none`` counts edges, ``net-sum`` sums weights and ``abs-sum`` sums
    absolute weights.  Within a single-sign subgraph both sums use magnitudes.
    """

    signed: bool = True
    weighted: str = "net-sum"

    def __post_init__(self):
        if self.weighted not in WEIGHTINGS:
            raise ValueError(f"weighted must be one of {WEIGHTINGS}")

    @property
    def dim(self) -> int:
        return 4 if self.signed else 2

    @classmethod
    def parse(cls, text: str) -> "FeatureSpec":
        """Parse ablation tuples such as ``"T,T"``, ``"F,T'"`` or ``"(T, F)"``."""
        parts = [p.strip() for p in text.strip("() ").split(",")]
        if len(parts) != 2:
            raise ValueError(f"bad feature tuple {text!r}")
        signed = {"T": True, "F": False}[parts[0].upper()]
        weighted = {"F": "none", "T": "net-sum", "T'": "abs-sum", "T`": "abs-sum"}[parts[1].upper()]
        return cls(signed, weighted)

    def label(self) -> str:
        w = {"none": "F", "net-sum": "T", "abs-sum": "T'"}[self.weighted]
        return f"({'T' if self.signed else 'F'},{w})"


def _in_out(g: SignedDiGraph, weighted: str, magnitude: bool):
    a = g.adjacency.copy()
    if weighted == "none":
        a.data = np.ones_like(a.data)
    elif weighted == "abs-sum" or magnitude:
        a.data = np.abs(a.data)
    return np.asarray(a.sum(axis=0)).ravel(), np.asarray(a.sum(axis=1)).ravel()


def standardize(x: np.ndarray) -> np.ndarray:
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    return (x - mu) / np.where(sd > 0, sd, 1.0)


def build_features(g: SignedDiGraph, spec: FeatureSpec = FeatureSpec(), normalize: bool = True) -> np.ndarray:
    """Columns ``[in, out]`` or ``[in+, out+, in-, out-]``, z-scored when ``normalize``."""
    if spec.signed:
        pos, neg = signed_subgraphs(g)
        cols = [*_in_out(pos, spec.weighted, True), *_in_out(neg, spec.weighted, True)]
    else:
        cols = list(_in_out(g, spec.weighted, False))
    x = np.column_stack(cols).astype(np.float64)
    return standardize(x) if normalize else x


def eigenvector_features(g: SignedDiGraph, c: int) -> np.ndarray:
    """Top-``c`` eigenvectors of ``A~ + (mean |degree| / n) J`` for undirected signed graphs."""
    n = g.n
    at = symmetrized_adjacency(g).toarray()
    reg = at + absolute_degree(g).mean() / n
    dec = eigh(reg)
    return np.real(dec.eigenvectors[:, ::-1][:, :c])
