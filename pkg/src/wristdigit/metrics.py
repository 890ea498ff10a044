"""ROC curves, AUROC, confusion matrices, and per-class metrics.

AUROC uses the tie-grouped trapezoidal construction, which is exactly the
pairwise ranking statistic P(score+ > score-) + P(tie)/2. Classification
uses the fixed rule p >= threshold -> class 1.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import as_binary_labels


@dataclass(frozen=True)
class RocCurve:
    """Vertices of a receiver operating characteristic curve.

    Arrays run from (fpr, tpr) = (0, 0) to (1, 1), one vertex per distinct
    score (ties grouped). thresholds[i] is the smallest score still
    predicted positive at vertex i; the leading (0, 0) vertex carries +inf.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    def __len__(self) -> int:
        return self.fpr.shape[0]


def _check_scores_labels(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"scores must be 1-D, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    y = as_binary_labels(labels, n_rows=s.shape[0], require_both=True)
    return s, y


def roc_curve(scores, labels) -> RocCurve:
    """ROC vertices for binary labels, sweeping thresholds over distinct scores.

    Both classes must be present.
    """
    s, y = _check_scores_labels(scores, labels)
    n_pos = int(np.sum(y == 1))
    n_neg = y.shape[0] - n_pos

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    # last index of each tie group: the vertex after all samples of that score
    last_in_group = np.nonzero(np.append(np.diff(s_sorted) != 0, True))[0]
    cum_tp = np.cumsum(y_sorted == 1)
    cum_fp = np.cumsum(y_sorted == 0)

    tpr = np.concatenate(([0.0], cum_tp[last_in_group] / n_pos))
    fpr = np.concatenate(([0.0], cum_fp[last_in_group] / n_neg))
    thresholds = np.concatenate(([np.inf], s_sorted[last_in_group]))
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds)


def auroc(scores, labels) -> float:
    """Area under the ROC curve by trapezoidal integration.

    Equals the probability that a random positive outscores a random
    negative, with ties counted half.
    """
    curve = roc_curve(scores, labels)
    dx = np.diff(curve.fpr)
    mid_y = (curve.tpr[1:] + curve.tpr[:-1]) / 2.0
    return float(np.sum(dx * mid_y))


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 tally, rows = actual digit, columns = predicted digit."""

    n00: int  # actual 0, predicted 0
    n01: int  # actual 0, predicted 1
    n10: int  # actual 1, predicted 0
    n11: int  # actual 1, predicted 1

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    def as_array(self) -> np.ndarray:
        return np.array([[self.n00, self.n01], [self.n10, self.n11]], dtype=np.int64)


def confusion(probabilities, labels, threshold: float = 0.5) -> ConfusionMatrix:
    """Tally actual vs predicted digits; p >= threshold predicts digit 1."""
    p = np.asarray(probabilities, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"probabilities must be 1-D, got shape {p.shape}")
    y = as_binary_labels(labels, n_rows=p.shape[0], require_both=False)
    pred = (p >= threshold).astype(np.int64)
    return ConfusionMatrix(
        n00=int(np.sum((y == 0) & (pred == 0))),
        n01=int(np.sum((y == 0) & (pred == 1))),
        n10=int(np.sum((y == 1) & (pred == 0))),
        n11=int(np.sum((y == 1) & (pred == 1))),
    )


@dataclass(frozen=True)
class MetricsReport:
    """Accuracy plus per-class precision/recall/F1.

    Metrics whose denominator was zero are reported as 0.0 and their names
    listed in `undefined` (e.g. a class never predicted has no precision).
    """

    accuracy: float
    precision_0: float
    recall_0: float
    f1_0: float
    precision_1: float
    recall_1: float
    f1_1: float
    undefined: tuple[str, ...] = field(default=())


def _ratio(numer: int, denom: int, name: str, flags: list[str]) -> float:
    if denom == 0:
        flags.append(name)
        return 0.0
    return numer / denom


def classification_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class precision/recall/F1 and accuracy from a confusion matrix."""
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    flags: list[str] = []
    accuracy = (cm.n00 + cm.n11) / cm.total
    precision_0 = _ratio(cm.n00, cm.n00 + cm.n10, "precision_0", flags)
    recall_0 = _ratio(cm.n00, cm.n00 + cm.n01, "recall_0", flags)
    precision_1 = _ratio(cm.n11, cm.n11 + cm.n01, "precision_1", flags)
    recall_1 = _ratio(cm.n11, cm.n11 + cm.n10, "recall_1", flags)

    def f1(p: float, r: float, name: str) -> float:
        if p + r == 0:
            flags.append(name)
            return 0.0
        return 2 * p * r / (p + r)

    return MetricsReport(
        accuracy=accuracy,
        precision_0=precision_0,
        recall_0=recall_0,
        f1_0=f1(precision_0, recall_0, "f1_0"),
        precision_1=precision_1,
        recall_1=recall_1,
        f1_1=f1(precision_1, recall_1, "f1_1"),
        undefined=tuple(flags),
    )
