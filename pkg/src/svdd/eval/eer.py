"""Equal error rate over scored trials.

Operating points sweep thresholds over the distinct scores. A trial is
accepted as bonafide when its score is >= the threshold, so at threshold t:
FAR(t) = P(deepfake score >= t) and FRR(t) = P(bonafide score < t). The EER
is read where FAR equals FRR, linearly interpolating both rates between the
adjacent operating points when the crossing falls between thresholds.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Label(str, Enum):
    BONAFIDE = "bonafide"
    DEEPFAKE = "deepfake"


@dataclass(frozen=True)
class ScoredTrial:
    clip_id: str
    label: Label
    score: float

    def __post_init__(self):
        if not np.isfinite(self.score) or not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score must be finite in [0, 1], got {self.score}")


def compute_eer(trials: list[ScoredTrial]) -> tuple[float, float]:
    """(EER as a fraction, threshold at the EER point)."""
    bona = np.array([t.score for t in trials if t.label is Label.BONAFIDE])
    deep = np.array([t.score for t in trials if t.label is Label.DEEPFAKE])
    return compute_eer_from_arrays(bona, deep)


def compute_eer_from_arrays(bonafide_scores: np.ndarray, deepfake_scores: np.ndarray) -> tuple[float, float]:
    bona = np.asarray(bonafide_scores, dtype=np.float64)
    deep = np.asarray(deepfake_scores, dtype=np.float64)
    if bona.size == 0 or deep.size == 0:
        raise ValueError("need at least one trial of each class")

    # Candidate thresholds: below the minimum (accept everything), every
    # distinct score ascending, then above the maximum (reject everything).
    distinct = np.unique(np.concatenate([bona, deep]))
    thresholds = np.concatenate([[distinct[0] - 1.0], distinct, [distinct[-1] + 1.0]])

    # counts via searchsorted on sorted copies: FAR drops, FRR rises with t
    bona_sorted = np.sort(bona)
    deep_sorted = np.sort(deep)
    far = 1.0 - np.searchsorted(deep_sorted, thresholds, side="left") / deep.size
    frr = np.searchsorted(bona_sorted, thresholds, side="left") / bona.size

    diff = far - frr  # starts at +1, non-increasing to negative or zero
    return _interpolate_crossing(far, frr, diff, thresholds)


def _interpolate_crossing(far, frr, diff, thresholds) -> tuple[float, float]:
    exact = np.nonzero(diff == 0.0)[0]
    if exact.size:
        i = exact[0]
        return float(far[i]), float(thresholds[i])

    after = np.nonzero(diff < 0.0)[0]
    if after.size == 0:
        # FAR stays above FRR through the sweep; report the final point
        return float(far[-1]), float(thresholds[-1])
    j = after[0]
    i = j - 1
    t = diff[i] / (diff[i] - diff[j])
    eer = far[i] + t * (far[j] - far[i])
    threshold = thresholds[i] + t * (thresholds[j] - thresholds[i])
    return float(eer), float(threshold)
