"""Signed weighted directed graphs and the real matrices derived from them.

A :class:`SignedDiGraph` stores the adjacency matrix ``A`` in CSR form with
sorted column indices.  ``A[i, j] = w`` encodes an edge ``i -> j`` of weight
``w``; weights are nonzero reals whose sign is the edge sign.
"""
from __future__ import annotations

import csv
import gzip
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

GRAPH_MAGIC = b"MSG1"


class GraphError(ValueError):
    """Raised for malformed graph input (duplicates, zero weights, bad indices)."""


def _sorted_csr(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=np.float64)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


@dataclass(frozen=True, eq=False)
class SignedDiGraph:
    """Immutable signed directed graph on nodes ``0..n-1``."""

    n: int
    adjacency: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        a = self.adjacency
        if a.shape != (self.n, self.n):
            raise GraphError(f"adjacency shape {a.shape} does not match n={self.n}")
        if a.nnz and not np.all(np.isfinite(a.data)):
            raise GraphError("non-finite edge weight")
        a.data.setflags(write=False)
        a.indices.setflags(write=False)
        a.indptr.setflags(write=False)

    # construction -------------------------------------------------------
    @classmethod
    def from_arrays(cls, src, dst, weight, n: int | None = None) -> "SignedDiGraph":
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        weight = np.asarray(weight, dtype=np.float64).ravel()
        if not (len(src) == len(dst) == len(weight)):
            raise GraphError("src, dst and weight must have equal length")
        if len(src) and (src.min() < 0 or dst.min() < 0):
            raise GraphError("node indices must be nonnegative")
        if not np.all(np.isfinite(weight)):
            raise GraphError("non-finite edge weight")
        if np.any(weight == 0):
            raise GraphError("zero edge weight")
        top = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1
        if n is None:
            n = top
        elif top > n:
            raise GraphError(f"node index {top - 1} out of range for n={n}")
        if len(src):
            key = src * n + dst
            uniq, counts = np.unique(key, return_counts=True)
            if np.any(counts > 1):
                k = int(uniq[np.argmax(counts > 1)])
                raise GraphError(f"duplicate edge ({k // n}, {k % n})")
        a = sp.csr_matrix((weight, (src, dst)), shape=(n, n))
        a.sort_indices()
        return cls(int(n), a)

    @classmethod
    def from_edge_list(cls, rows: Iterable[Sequence], n: int | None = None) -> "SignedDiGraph":
        rows = list(rows)
        if not rows:
            return cls.from_arrays([], [], [], n=n or 0)
        src, dst, w = zip(*[(r[0], r[1], r[2]) for r in rows])
        return cls.from_arrays(src, dst, w, n=n)

    @classmethod
    def from_dense(cls, a) -> "SignedDiGraph":
        a = np.asarray(a, dtype=np.float64)
        src, dst = np.nonzero(a)
        return cls.from_arrays(src, dst, a[src, dst], n=a.shape[0])

    # views --------------------------------------------------------------
    @property
    def num_edges(self) -> int:
        return int(self.adjacency.nnz)

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(src, dst, weight)`` in row-major order."""
        coo = self.adjacency.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()

    def to_dense(self) -> np.ndarray:
        return self.adjacency.toarray()

    def reversed(self) -> "SignedDiGraph":
        return SignedDiGraph(self.n, _sorted_csr(self.adjacency.T))

    def without_edges(self, src, dst) -> "SignedDiGraph":
        """Copy of the graph with the listed ordered pairs removed."""
        s, d, w = self.edges()
        drop = np.asarray(src, dtype=np.int64) * self.n + np.asarray(dst, dtype=np.int64)
        keep = ~np.isin(s * self.n + d, drop)
        return SignedDiGraph.from_arrays(s[keep], d[keep], w[keep], n=self.n)

    def unweighted(self) -> "SignedDiGraph":
        s, d, w = self.edges()
        return SignedDiGraph.from_arrays(s, d, np.sign(w), n=self.n)

    def permuted(self, perm) -> "SignedDiGraph":
        """Relabel node ``i`` as ``perm[i]``."""
        perm = np.asarray(perm)
        s, d, w = self.edges()
        return SignedDiGraph.from_arrays(perm[s], perm[d], w, n=self.n)

    def __eq__(self, other):
        if not isinstance(other, SignedDiGraph):
            return NotImplemented
        return self.n == other.n and (self.adjacency != other.adjacency).nnz == 0

    __hash__ = object.__hash__


def symmetrized_adjacency(g: SignedDiGraph) -> sp.csr_matrix:
    """``(A + A^T) / 2`` with exactly cancelled entries removed from the support."""
    a = g.adjacency
    return _sorted_csr((a + a.T) * 0.5)


def absolute_degree(g: SignedDiGraph) -> np.ndarray:
    """Diagonal of ``D~``: half the total absolute in- and out-weight of each node."""
    absa = abs(g.adjacency)
    out_w = np.asarray(absa.sum(axis=1)).ravel()
    in_w = np.asarray(absa.sum(axis=0)).ravel()
    return 0.5 * (out_w + in_w)


def signed_subgraphs(g: SignedDiGraph) -> tuple[SignedDiGraph, SignedDiGraph]:
    """Split into (positive-edge graph, negative-edge graph); weights keep their sign."""
    s, d, w = g.edges()
    pos = w > 0
    return (
        SignedDiGraph.from_arrays(s[pos], d[pos], w[pos], n=g.n),
        SignedDiGraph.from_arrays(s[~pos], d[~pos], w[~pos], n=g.n),
    )


# ---------------------------------------------------------------------------
# I/O


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_edge_csv(path, relabel: bool = True, n: int | None = None):
    """Read ``src,dst,weight`` rows; extra trailing columns are ignored.

    Files ending in ``.gz`` are decompressed on the fly.  A header is assumed
    when the weight field of the first row is not numeric, so string node ids
    may appear on the first data row.  With ``relabel`` node identifiers are
    mapped to dense indices in sorted order (numeric order when every id is an
    integer) and the mapping is returned alongside the graph; otherwise ids
    must already be integer indices and the mapping is ``None``.
    """
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", newline="", encoding="utf-8-sig") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if rows and (len(rows[0]) < 3 or not _is_number(rows[0][2].strip())):
        rows = rows[1:]
    for r in rows:
        if len(r) < 3:
            raise GraphError(f"expected at least 3 columns, got {r!r}")
    src = [r[0].strip() for r in rows]
    dst = [r[1].strip() for r in rows]
    w = [float(r[2]) for r in rows]
    if not relabel:
        return SignedDiGraph.from_arrays([int(x) for x in src], [int(x) for x in dst], w, n=n), None
    ids = set(src) | set(dst)
    try:
        ordered = sorted(ids, key=int)
    except ValueError:
        ordered = sorted(ids)
    index = {k: i for i, k in enumerate(ordered)}
    g = SignedDiGraph.from_arrays(
        [index[x] for x in src], [index[x] for x in dst], w, n=n if n is not None else len(ordered)
    )
    return g, ordered


def write_edge_csv(g: SignedDiGraph, path, header: bool = True) -> None:
    s, d, w = g.edges()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        if header:
            out.writerow(["src", "dst", "weight"])
        for a, b, c in zip(s.tolist(), d.tolist(), w.tolist()):
            out.writerow([a, b, repr(c)])


def write_node_map(ids: Sequence[str], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["index", "id"])
        for i, k in enumerate(ids):
            out.writerow([i, k])


def save_binary(g: SignedDiGraph, path) -> None:
    """``MSG1`` magic, little-endian u64 ``n``, then ``(u64 src, u64 dst, f64 w)`` triples."""
    s, d, w = g.edges()
    rec = np.empty(len(s), dtype=[("src", "<u8"), ("dst", "<u8"), ("w", "<f8")])
    rec["src"], rec["dst"], rec["w"] = s, d, w
    with open(path, "wb") as fh:
        fh.write(GRAPH_MAGIC)
        fh.write(struct.pack("<Q", g.n))
        fh.write(rec.tobytes())


def load_binary(path) -> SignedDiGraph:
    raw = Path(path).read_bytes()
    if raw[:4] != GRAPH_MAGIC:
        raise GraphError("not an MSG1 graph container")
    (n,) = struct.unpack_from("<Q", raw, 4)
    body = raw[12:]
    if len(body) % 24:
        raise GraphError("truncated edge record")
    rec = np.frombuffer(body, dtype=[("src", "<u8"), ("dst", "<u8"), ("w", "<f8")])
    return SignedDiGraph.from_arrays(rec["src"].astype(np.int64), rec["dst"].astype(np.int64), rec["w"], n=int(n))
