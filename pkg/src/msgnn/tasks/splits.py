"""Train/test splits for the link tasks and stratified node splits for clustering.

Link class schemes, for a labeled pair ``(u, v)``:

* ``SP``: 0 ``(u,v)`` positive, 1 ``(u,v)`` negative
* ``DP``: 0 ``u -> v``, 1 ``v -> u``
* ``3C``: DP classes plus 2 "no edge either way"
* ``4C``: 0 ``u -> v`` positive, 1 ``u -> v`` negative, 2 ``v -> u`` positive, 3 ``v -> u`` negative
* ``5C``: 4C classes plus 4 "no edge either way"
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..graph import SignedDiGraph

LINK_TASKS = ("SP", "DP", "3C", "4C", "5C")
NUM_CLASSES = {"SP": 2, "DP": 2, "3C": 3, "4C": 4, "5C": 5}


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class LinkSplit:
    task: str
    observed: SignedDiGraph
    train_pairs: np.ndarray
    train_labels: np.ndarray
    test_pairs: np.ndarray
    test_labels: np.ndarray
    seed: int

    @property
    def num_classes(self) -> int:
        return NUM_CLASSES[self.task]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            out = csv.writer(fh)
            out.writerow(["i", "j", "class", "partition"])
            for part, pairs, labels in (("train", self.train_pairs, self.train_labels), ("test", self.test_pairs, self.test_labels)):
                for (i, j), c in zip(pairs.tolist(), labels.tolist()):
                    out.writerow([i, j, c, part])


def read_split_csv(path):
    """Return ``{partition: (pairs, labels)}`` from a split file."""
    parts: dict[str, tuple[list, list]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            pairs, labels = parts.setdefault(row["partition"], ([], []))
            pairs.append((int(row["i"]), int(row["j"])))
            labels.append(int(row["class"]))
    return {k: (np.array(p, dtype=np.int64).reshape(-1, 2), np.array(c, dtype=np.int64)) for k, (p, c) in parts.items()}


def _sample_non_edges(g: SignedDiGraph, count: int, rng, exclude: set) -> np.ndarray:
    """Ordered pairs ``(u, v)``, ``u != v``, with no edge in either direction."""
    n = g.n
    s, d, _ = g.edges()
    taken = set((s * n + d).tolist()) | set((d * n + s).tolist()) | exclude
    possible = n * (n - 1) - len({k for k in taken if k // n != k % n})
    if count > possible:
        raise SplitError("not enough non-adjacent pairs for the no-edge class")
    out: list[int] = []
    chosen: set[int] = set()
    while len(out) < count:
        u = rng.integers(0, n, size=2 * (count - len(out)) + 16)
        v = rng.integers(0, n, size=u.size)
        for a, b in zip(u.tolist(), v.tolist()):
            k = a * n + b
            if a == b or k in taken or k in chosen:
                continue
            chosen.add(k)
            out.append(k)
            if len(out) == count:
                break
    arr = np.array(out, dtype=np.int64)
    return np.column_stack([arr // n, arr % n])


def split_links(
    g: SignedDiGraph,
    task: str,
    test_frac: float = 0.2,
    seed: int = 0,
    none_size: str = "sum",
) -> LinkSplit:
    """Sample labeled node pairs for ``task`` and hold out ``test_frac`` of them.

    Edges are the sampling unit.  Self-loops are never labeled, and a pair is
    discarded when it meets more than one class condition (for the direction
    tasks this is every reciprocated pair); discarded edges stay in the
    observed graph.  Edge classes are balanced by subsampling to the smallest
    class.  Direction-aware tasks label each edge in both orientations.  The
    no-edge class gets as many pairs as all edge classes together
    (``none_size="sum"``) or as one edge class (``"mean"``).  Held-out edges are
    removed from the observed graph.
    """
    task = task.upper()
    if task not in LINK_TASKS:
        raise SplitError(f"unknown link task {task!r}")
    if not 0 < test_frac < 1:
        raise SplitError("test_frac must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    n = g.n
    s, d, w = g.edges()
    loop = s == d
    s, d, w = s[~loop], d[~loop], w[~loop]
    keys = s * n + d
    reciprocal = np.isin(d * n + s, keys)

    if task == "SP":
        unit_class = np.where(w > 0, 0, 1)
        usable = np.ones(len(s), dtype=bool)
        n_unit_classes = 2
    elif task in ("DP", "3C"):
        unit_class = np.zeros(len(s), dtype=np.int64)
        usable = ~reciprocal
        n_unit_classes = 1
    else:
        unit_class = np.where(w > 0, 0, 1)
        usable = ~reciprocal
        n_unit_classes = 2
    idx_by_class = [np.flatnonzero(usable & (unit_class == c)) for c in range(n_unit_classes)]
    # every edge discarded (e.g. a fully reciprocal graph) gives an empty split
    if any(len(ix) == 0 for ix in idx_by_class) and any(len(ix) for ix in idx_by_class):
        raise SplitError(f"task {task}: a required edge class is empty")
    m = min(len(ix) for ix in idx_by_class)
    train_units, test_units = [], []
    for ix in idx_by_class:
        pick = rng.permutation(ix)[:m]
        n_test = int(round(test_frac * m))
        if m >= 2:
            n_test = min(max(n_test, 1), m - 1)
        test_units.append(pick[:n_test])
        train_units.append(pick[n_test:])
    train_units = np.sort(np.concatenate(train_units)).astype(np.int64)
    test_units = np.sort(np.concatenate(test_units)).astype(np.int64)

    def label_units(units):
        u, v, c = s[units], d[units], unit_class[units]
        if task == "SP":
            return np.column_stack([u, v]), c
        if task in ("DP", "3C"):
            pairs = np.concatenate([np.column_stack([u, v]), np.column_stack([v, u])])
            return pairs, np.concatenate([np.zeros(len(u), np.int64), np.ones(len(u), np.int64)])
        pairs = np.concatenate([np.column_stack([u, v]), np.column_stack([v, u])])
        return pairs, np.concatenate([c, c + 2])

    tr_pairs, tr_labels = label_units(train_units)
    te_pairs, te_labels = label_units(test_units)
    tr_pairs, te_pairs = tr_pairs.reshape(-1, 2), te_pairs.reshape(-1, 2)

    if task in ("3C", "5C"):
        edge_classes = NUM_CLASSES[task] - 1
        if none_size == "sum":
            n_tr, n_te = len(tr_labels), len(te_labels)
        elif none_size == "mean":
            n_tr, n_te = len(tr_labels) // edge_classes, len(te_labels) // edge_classes
        else:
            raise SplitError("none_size must be 'sum' or 'mean'")
        none = _sample_non_edges(g, n_tr + n_te, rng, set())
        none_class = NUM_CLASSES[task] - 1
        tr_pairs = np.concatenate([tr_pairs, none[:n_tr]])
        tr_labels = np.concatenate([tr_labels, np.full(n_tr, none_class)])
        te_pairs = np.concatenate([te_pairs, none[n_tr:]])
        te_labels = np.concatenate([te_labels, np.full(n_te, none_class)])

    observed = g.without_edges(s[test_units], d[test_units])
    return LinkSplit(task, observed, tr_pairs, tr_labels.astype(np.int64), te_pairs, te_labels.astype(np.int64), seed)


@dataclass(frozen=True)
class NodeSplit:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    seeds: np.ndarray


def split_nodes(labels, fractions=(0.8, 0.1, 0.1), seed: int = 0, seed_frac: float = 0.1) -> NodeSplit:
    """Per-cluster shuffled split into train/validation/test plus labeled seed nodes.

    ``fractions`` is ``(train, val, test)``; seeds are ``seed_frac`` of each
    cluster's training nodes.
    """
    labels = np.asarray(labels)
    if not np.isclose(sum(fractions), 1.0):
        raise SplitError("fractions must sum to 1")
    _, f_val, f_test = fractions
    rng = np.random.default_rng(seed)
    parts: dict[str, list] = {"train": [], "val": [], "test": [], "seeds": []}
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if len(members) < 10:
            raise SplitError(f"cluster {c} has {len(members)} nodes; need at least 10")
        members = rng.permutation(members)
        n_test = int(round(f_test * len(members)))
        n_val = int(round(f_val * len(members)))
        test, val, train = members[:n_test], members[n_test : n_test + n_val], members[n_test + n_val :]
        n_seed = max(1, int(round(seed_frac * len(train))))
        parts["test"].append(test)
        parts["val"].append(val)
        parts["train"].append(train)
        parts["seeds"].append(train[:n_seed])
    return NodeSplit(**{k: np.sort(np.concatenate(v)) for k, v in parts.items()})
