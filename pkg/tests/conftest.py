"""Shared fixtures and independent test oracles."""

from __future__ import annotations

import pytest

from peertriage.corpus import CATEGORIES, GroundTruth, Manuscript
from peertriage.sdt import normal_cdf


def bisect_quantile(p: float) -> float:
    """Independent inverse-CDF oracle: bisection on normal_cdf.

    Works in the lower tail (where erfc keeps full relative precision) and
    mirrors, so it stays accurate for p near 1.
    """
    if p > 0.5:
        return -bisect_quantile(1.0 - p)
    lo, hi = -42.0, 0.0
    for _ in range(220):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def make_manuscript(mid: str = "m1", truth: GroundTruth | None = None,
                    default: float = 0.75, **overrides: float) -> Manuscript:
    """Manuscript with uniform features plus keyword overrides by category value."""
    features = {}
    for cat in CATEGORIES:
        features[cat] = overrides.get(cat.value, default)
    return Manuscript(id=mid, features=features, truth=truth)


@pytest.fixture
def manuscript():
    return make_manuscript()
