"""Relief feature weighting for binary-labeled samples.

Weights reward features that separate a point from its nearest neighbor of
the other class (miss) and penalize ones that separate it from its nearest
neighbor of the same class (hit). Features are min-max scaled to [0, 1]
internally, per Relief's diff convention; the weights depend only on feature
rank geometry, not on units.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstantAllFeatures, InvalidK, SingleClassInput


@dataclass
class FeatureWeights:
    weights: np.ndarray
    feature_names: list
    m_used: int  # instances visited (the full pass uses all n)


def relief_weights(X, y, feature_names=None) -> FeatureWeights:
    """One deterministic full pass over the rows, in index order.

    Nearest hit and miss are found by Euclidean distance on the scaled
    features; ties go to the lowest row index. A constant feature scores
    exactly 0. A row whose class has no second member contributes only its
    miss term.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d sample matrix, got shape {X.shape}")
    n, d = X.shape
    if np.unique(y).size < 2:
        raise SingleClassInput("relief needs both classes present")

    vmin = X.min(axis=0)
    spread = X.max(axis=0) - vmin
    if not (spread > 0).any():
        raise ConstantAllFeatures("every feature is constant")
    S = (X - vmin) / np.where(spread > 0, spread, 1.0)

    W = np.zeros(d)
    for i in range(n):
        diffs = np.abs(S - S[i])
        dist = np.sqrt(np.square(diffs).sum(axis=1))
        same = y == y[i]
        hit_dist = np.where(same, dist, np.inf)
        hit_dist[i] = np.inf
        miss_dist = np.where(same, np.inf, dist)
        j_hit = int(np.argmin(hit_dist))
        j_miss = int(np.argmin(miss_dist))
        if np.isfinite(hit_dist[j_hit]):
            W -= diffs[j_hit]
        W += diffs[j_miss]
    W /= n

    if feature_names is None:
        feature_names = [f"f{j + 1}" for j in range(d)]
    return FeatureWeights(weights=W, feature_names=list(feature_names), m_used=n)


def select_top(w: FeatureWeights, k: int = 4) -> list:
    """Indices of the k largest weights, descending; ties keep the lower index."""
    d = len(w.weights)
    if not 1 <= k <= d:
        raise InvalidK(f"k must lie in [1, {d}], got {k}")
    order = np.argsort(-w.weights, kind="stable")
    return [int(i) for i in order[:k]]
