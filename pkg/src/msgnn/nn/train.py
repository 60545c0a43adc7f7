"""Full-batch training loops for the link and node-clustering tasks."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ..tasks.metrics import accuracy, ari
from .model import MsgnnModel, log_softmax
from .optim import Adam


@dataclass
class History:
    loss: list = field(default_factory=list)
    metric: list = field(default_factory=list)
    metric_name: str = "metric"
    best_epoch: int | None = None

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            out = csv.writer(fh)
            out.writerow(["epoch", "loss", self.metric_name])
            for i, (l, m) in enumerate(zip(self.loss, self.metric)):
                out.writerow([i, repr(l), "" if m is None else repr(m)])


def train_link(
    model: MsgnnModel,
    x0,
    pairs,
    labels,
    epochs: int = 300,
    lr: float = 0.01,
    weight_decay: float = 5e-4,
) -> History:
    """Fixed-length full-batch Adam on the labeled training pairs."""
    opt = Adam(lr=lr, weight_decay=weight_decay)
    hist = History(metric_name="train_accuracy")
    params = model.parameters()
    for _ in range(epochs):
        loss, grads = model.loss_and_grad(x0, labels, pairs=pairs)
        opt.step(params, grads)
        hist.loss.append(loss)
        hist.metric.append(None)
    if epochs:
        hist.metric[-1] = accuracy(model.predict(x0, pairs), labels)
    return hist


def train_node(
    model: MsgnnModel,
    x0,
    labels,
    seeds,
    val,
    max_epochs: int = 1000,
    patience: int = 200,
    lr: float = 0.01,
    weight_decay: float = 5e-4,
) -> History:
    """Cross-entropy on seed nodes; keeps the parameters with the best validation ARI.

    Ties in validation ARI go to the lower validation cross-entropy, so a
    plateau at the top score keeps improving the fit instead of freezing the
    first epoch that reached it.  Stops after ``patience`` epochs without an
    improvement.
    """
    labels = np.asarray(labels)
    val = np.asarray(val)
    opt = Adam(lr=lr, weight_decay=weight_decay)
    hist = History(metric_name="val_ari")
    params = model.parameters()
    best, best_state, since = (-np.inf, -np.inf), model.copy_parameters(), 0
    for epoch in range(max_epochs):
        loss, grads = model.loss_and_grad(x0, labels[seeds], nodes=seeds)
        opt.step(params, grads)
        logit = model.logits(x0)
        score = ari(logit[val].argmax(axis=1), labels[val])
        val_loss = float(-np.mean(log_softmax(logit[val])[np.arange(len(val)), labels[val]]))
        hist.loss.append(loss)
        hist.metric.append(score)
        if (score, -val_loss) > best:
            best, best_state, since = (score, -val_loss), model.copy_parameters(), 0
            hist.best_epoch = epoch
        else:
            since += 1
            if since >= patience:
                break
    model.set_parameters(best_state)
    return hist
