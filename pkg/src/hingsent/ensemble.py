"""Per-class-max ensemble combination.

For each sentence the combined score of class j is the maximum of the
models' probabilities for j; the predicted class is the argmax of those
three maxima, ties going to the lowest class index.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .corpus import Sentiment
from .training import ProbMatrix


def combine(matrices: Sequence[ProbMatrix]) -> list[Sentiment]:
    if not matrices:
        raise ValueError("combine needs at least one probability matrix")
    n = len(matrices[0])
    for m in matrices[1:]:
        if len(m) != n:
            raise ValueError(
                f"row-count mismatch: {len(m)} vs {n} "
                f"({m.model_tag!r} vs {matrices[0].model_tag!r})"
            )
    stacked = np.stack([m.rows for m in matrices])  # (models, N, 3)
    per_class_max = stacked.max(axis=0)             # (N, 3)
    preds = per_class_max.argmax(axis=1)            # first max wins ties
    return [Sentiment(int(p)) for p in preds]
