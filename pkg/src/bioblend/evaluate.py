"""Screening statistics and a nearest-neighbour check of generated datasets."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .rand import RandomStream

# stands in for an infinite F-score (zero within-class, nonzero between-class spread)
F_SENTINEL = float(np.finfo(np.float64).max)


def anova_f_scores(features: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """One-way ANOVA F-statistic of every column across the label classes.

    Constant columns score 0. Columns with zero within-class spread but
    distinct class means score :data:`F_SENTINEL`.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    classes, inverse = np.unique(labels, return_inverse=True)
    n_classes = len(classes)
    if n_classes < 2:
        raise ConfigError("ANOVA needs at least two classes")
    counts = np.bincount(inverse).astype(float)
    n = x.shape[0]
    if n <= n_classes:
        raise ConfigError("ANOVA needs more samples than classes")

    sums = np.zeros((n_classes, x.shape[1]))
    np.add.at(sums, inverse, x)
    class_means = sums / counts[:, None]
    grand = x.mean(axis=0)
    ss_between = (counts[:, None] * (class_means - grand) ** 2).sum(axis=0)
    ss_within = ((x - class_means[inverse]) ** 2).sum(axis=0)

    f = np.zeros(x.shape[1])
    constant = np.ptp(x, axis=0) == 0
    separable = (ss_within == 0) & ~constant
    regular = ~constant & ~separable
    f[regular] = (ss_between[regular] / (n_classes - 1)) / (ss_within[regular] / (n - n_classes))
    f[separable] = F_SENTINEL
    return f


def top_k(scores: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` highest scores; ties go to the lower index."""
    order = np.argsort(-np.asarray(scores, dtype=float), kind="stable")
    return np.sort(order[:k])


def stratified_folds(labels: np.ndarray, folds: int, seed: int = 0) -> np.ndarray:
    """Fold id per sample; every class is spread evenly over the folds."""
    labels = np.asarray(labels)
    classes, counts = np.unique(labels, return_counts=True)
    if folds < 2:
        raise ConfigError("need at least 2 folds")
    if folds > counts.min():
        raise ConfigError(f"{folds} folds requested but the smallest class has {counts.min()} samples")
    stream = RandomStream(seed)
    fold_of = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for c in classes:
        members = np.flatnonzero(labels == c)
        members = members[stream.permutation(len(members))]
        fold_of[members] = (np.arange(len(members)) + offset) % folds
        offset += len(members)
    return fold_of


def _standardize(train: np.ndarray, test: np.ndarray):
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    std[(std == 0) | (np.ptp(train, axis=0) == 0)] = 1.0
    return (train - mean) / std, (test - mean) / std


def knn_predict(train: np.ndarray, train_labels: np.ndarray, test: np.ndarray, k: int) -> np.ndarray:
    """Majority vote of the ``k`` nearest training rows (Euclidean).

    Distance ties go to the lower training index, vote ties to the lower class.
    """
    k = min(k, len(train))
    d2 = ((test ** 2).sum(axis=1)[:, None] + (train ** 2).sum(axis=1)[None, :]
          - 2.0 * test @ train.T)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
    classes, coded = np.unique(train_labels, return_inverse=True)
    votes = np.zeros((len(test), len(classes)), dtype=np.int64)
    np.add.at(votes, (np.repeat(np.arange(len(test)), k), coded[nearest].ravel()), 1)
    return classes[np.argmax(votes, axis=1)]


def knn_accuracy(features: np.ndarray, labels: np.ndarray, k: int = 1, folds: int = 4,
                 seed: int = 0, fold_of: np.ndarray | None = None) -> float:
    """Mean stratified cross-validated k-NN accuracy on standardized features."""
    if k < 1:
        raise ConfigError("number of neighbours must be >= 1")
    x = np.asarray(features, dtype=float)
    labels = np.asarray(labels)
    if fold_of is None:
        fold_of = stratified_folds(labels, folds, seed)
    scores = []
    for fold in range(int(fold_of.max()) + 1):
        test = fold_of == fold
        train_x, test_x = _standardize(x[~test], x[test])
        pred = knn_predict(train_x, labels[~test], test_x, k)
        scores.append(np.mean(pred == labels[test]))
    return float(np.mean(scores))


@dataclass
class ScreeningReport:
    """Outcome of :func:`screening_curve`.

    ``accuracy[n][k]`` is the accuracy with ``n`` neighbours on the top-``k``
    features (selected inside each training fold); ``selected[k]`` is the
    top-``k`` set on the whole dataset.
    """

    f_scores: np.ndarray
    k_list: list[int]
    neighbors: list[int]
    folds: int
    selected: dict[int, np.ndarray]
    accuracy: dict[int, dict[int, float]]
    unreduced: dict[int, float]
    true_features: dict[int, float] | None = None
    chance: float = 0.0
    config: dict = field(default_factory=dict)

    def best(self, neighbors: int | None = None) -> float:
        n = self.neighbors[0] if neighbors is None else neighbors
        return max(self.accuracy[n].values())

    def best_k(self, neighbors: int | None = None) -> int:
        n = self.neighbors[0] if neighbors is None else neighbors
        curve = self.accuracy[n]
        return max(curve, key=lambda k: (curve[k], -k))

    def to_dict(self) -> dict:
        return {
            "folds": self.folds,
            "k_list": self.k_list,
            "neighbors": self.neighbors,
            "chance": self.chance,
            "unreduced": {str(n): a for n, a in self.unreduced.items()},
            "screened": {str(n): {str(k): a for k, a in curve.items()}
                         for n, curve in self.accuracy.items()},
            "best_screened": {str(n): self.best(n) for n in self.neighbors},
            "best_k": {str(n): self.best_k(n) for n in self.neighbors},
            "true_features": (None if self.true_features is None
                              else {str(n): a for n, a in self.true_features.items()}),
            "selected": {str(k): idx.tolist() for k, idx in self.selected.items()},
            "f_scores": [None if not np.isfinite(v) else float(v) for v in self.f_scores],
            "config": self.config,
        }


def screening_curve(bundle, k_list: Sequence[int] = (10, 25, 50, 100, 200, 400, 800),
                    folds: int = 4, neighbors: Sequence[int] = (1, 5), seed: int = 0) -> ScreeningReport:
    """k-NN accuracy after keeping the top-k features by ANOVA F-score.

    Selection is redone inside every training fold so held-out samples never
    influence which features are kept. Also reports the unreduced accuracy and,
    when the bundle carries the hidden matrix, the accuracy on the true hidden
    features.
    """
    x = np.asarray(bundle.features, dtype=float)
    labels = np.asarray(bundle.labels)
    n_features = x.shape[1]
    ks = []
    for k in k_list:
        if k < 1:
            raise ConfigError(f"k must be >= 1, got {k}")
        if k > n_features:
            warnings.warn(f"k={k} exceeds the {n_features} available features; clipped", stacklevel=2)
            k = n_features
        if k not in ks:
            ks.append(int(k))
    neighbors = [int(n) for n in neighbors]
    fold_of = stratified_folds(labels, folds, seed)

    correct = {n: {k: [] for k in ks} for n in neighbors}
    for fold in range(folds):
        test = fold_of == fold
        order = np.argsort(-anova_f_scores(x[~test], labels[~test]), kind="stable")
        for k in ks:
            cols = np.sort(order[:k])
            train_x, test_x = _standardize(x[~test][:, cols], x[test][:, cols])
            for n in neighbors:
                pred = knn_predict(train_x, labels[~test], test_x, n)
                correct[n][k].append(np.mean(pred == labels[test]))
    accuracy = {n: {k: float(np.mean(v)) for k, v in curve.items()} for n, curve in correct.items()}

    scores = anova_f_scores(x, labels)
    unreduced = {n: knn_accuracy(x, labels, n, fold_of=fold_of) for n in neighbors}
    true_acc = None
    if bundle.hidden is not None and bundle.true_mask.any():
        true_x = bundle.hidden[:, bundle.true_mask]
        true_acc = {n: knn_accuracy(true_x, labels, n, fold_of=fold_of) for n in neighbors}
    return ScreeningReport(
        f_scores=scores,
        k_list=ks,
        neighbors=neighbors,
        folds=folds,
        selected={k: top_k(scores, k) for k in ks},
        accuracy=accuracy,
        unreduced=unreduced,
        true_features=true_acc,
        chance=1.0 / len(np.unique(labels)),
        config=dict(bundle.config),
    )
