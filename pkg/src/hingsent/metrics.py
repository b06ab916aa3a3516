"""Confusion matrix and the F-score family.

Zero-denominator precision/recall/F1 are defined as 0 so reports stay
total. The headline score is the support-weighted F1; macro F1 and
accuracy are reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .corpus import Sentiment

N_CLASSES = 3


@dataclass(frozen=True)
class MetricsReport:
    precision: tuple[float, float, float]
    recall: tuple[float, float, float]
    f1: tuple[float, float, float]
    support: tuple[int, int, int]
    macro_f1: float
    weighted_f1: float
    accuracy: float


def confusion(gold: Sequence, pred: Sequence) -> np.ndarray:
    """3x3 counts, entry [g][p] = gold class g predicted as p."""
    if len(gold) != len(pred):
        raise ValueError(f"gold/pred length mismatch: {len(gold)} vs {len(pred)}")
    if len(gold) == 0:
        raise ValueError("empty label lists")
    cm = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    for g, p in zip(gold, pred):
        cm[int(g)][int(p)] += 1
    return cm


def f1_report(cm: np.ndarray) -> MetricsReport:
    cm = np.asarray(cm)
    total = int(cm.sum())
    if total == 0:
        raise ValueError("empty confusion matrix")
    precision, recall, f1 = [], [], []
    for c in range(N_CLASSES):
        tp = cm[c, c]
        pred_c = cm[:, c].sum()
        gold_c = cm[c, :].sum()
        p = tp / pred_c if pred_c else 0.0
        r = tp / gold_c if gold_c else 0.0
        f = 2 * p * r / (p + r) if (p + r) else 0.0
        precision.append(float(p))
        recall.append(float(r))
        f1.append(float(f))
    support = cm.sum(axis=1)
    return MetricsReport(
        precision=tuple(precision),
        recall=tuple(recall),
        f1=tuple(f1),
        support=tuple(int(s) for s in support),
        macro_f1=float(np.mean(f1)),
        weighted_f1=float(np.dot(f1, support) / total),
        accuracy=float(np.trace(cm) / total),
    )


def format_report(report: MetricsReport) -> str:
    """Aligned text table."""
    lines = [f"{'class':<10}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}"]
    for c in range(N_CLASSES):
        lines.append(
            f"{Sentiment(c).label():<10}{report.precision[c]:>10.4f}"
            f"{report.recall[c]:>10.4f}{report.f1[c]:>10.4f}{report.support[c]:>10d}"
        )
    lines.append("")
    lines.append(f"{'accuracy':<10}{report.accuracy:>40.4f}")
    lines.append(f"{'macro f1':<10}{report.macro_f1:>40.4f}")
    lines.append(f"{'weighted f1':<11}{report.weighted_f1:>39.4f}")
    return "\n".join(lines)


def write_report_machine(report: MetricsReport, stream: IO[str]) -> None:
    """`metric <TAB> class <TAB> value` rows."""
    for c in range(N_CLASSES):
        name = Sentiment(c).label()
        stream.write(f"precision\t{name}\t{report.precision[c]:.12g}\n")
        stream.write(f"recall\t{name}\t{report.recall[c]:.12g}\n")
        stream.write(f"f1\t{name}\t{report.f1[c]:.12g}\n")
        stream.write(f"support\t{name}\t{report.support[c]}\n")
    stream.write(f"accuracy\t-\t{report.accuracy:.12g}\n")
    stream.write(f"macro_f1\t-\t{report.macro_f1:.12g}\n")
    stream.write(f"weighted_f1\t-\t{report.weighted_f1:.12g}\n")
