"""ROC curves and AUC for theoretical (fixed d') and empirical score sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError
from .sdt import normal_cdf

Point = tuple[float, float]


@dataclass(frozen=True)
class RocCurve:
    """Ordered (false-alarm, hit) points plus provenance.

    Empirical curves carry their integer cumulative counts so the area can
    be computed in exact rational arithmetic.
    """

    points: tuple[Point, ...]
    source: str
    strategy_label: str = ""
    counts: tuple[tuple[int, int], ...] | None = field(default=None, repr=False)
    n_signal: int | None = None
    n_noise: int | None = None

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValidationError("a ROC curve needs at least two points")
        prev_fa = -1.0
        for fa, hit in self.points:
            if not (0.0 <= fa <= 1.0 and 0.0 <= hit <= 1.0):
                raise ValidationError(f"ROC point ({fa}, {hit}) outside the unit square")
            if fa < prev_fa:
                raise ValidationError("ROC points must be sorted nondecreasing in fa")
            prev_fa = fa

    def to_dict(self) -> dict:
        return {
            "strategy_label": self.strategy_label,
            "source": self.source,
            "points": [[fa, hit] for fa, hit in self.points],
        }


def theoretical_roc(d_prime: float, n_points: int,
                    strategy_label: str = "") -> RocCurve:
    """Equal-variance Gaussian ROC traced by sweeping the criterion.

    The criterion runs uniformly over [-6, 6 + d']; exact (0,0) and (1,1)
    endpoints are appended, so the curve has n_points + 2 points.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    lo, hi = -6.0, 6.0 + d_prime
    step = (hi - lo) / (n_points - 1)
    pts: list[Point] = [(0.0, 0.0)]
    # descend in x_c so fa is nondecreasing
    for i in range(n_points):
        x_c = hi - i * step
        pts.append((normal_cdf(-x_c), normal_cdf(d_prime - x_c)))
    pts.append((1.0, 1.0))
    return RocCurve(points=tuple(pts), source=f"theoretical(d_prime={d_prime})",
                    strategy_label=strategy_label)


def empirical_roc(scored: Iterable[tuple[float, bool]],
                  strategy_label: str = "") -> RocCurve:
    """Threshold-sweep ROC over (score, is_signal) items; ties share a threshold."""
    items = list(scored)
    n_signal = sum(1 for _, s in items if s)
    n_noise = len(items) - n_signal
    if n_signal == 0 or n_noise == 0:
        raise ValidationError("empirical ROC needs at least one signal and one noise item")
    items.sort(key=lambda t: -t[0])
    pts: list[Point] = [(0.0, 0.0)]
    counts: list[tuple[int, int]] = [(0, 0)]
    tp = fp = 0
    i = 0
    while i < len(items):
        score = items[i][0]
        while i < len(items) and items[i][0] == score:
            if items[i][1]:
                tp += 1
            else:
                fp += 1
            i += 1
        pts.append((fp / n_noise, tp / n_signal))
        counts.append((fp, tp))
    return RocCurve(points=tuple(pts), source="empirical",
                    strategy_label=strategy_label, counts=tuple(counts),
                    n_signal=n_signal, n_noise=n_noise)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the curve over fa in [0, 1].

    For empirical curves the sum runs on the stored integer counts, so the
    result is the correctly rounded exact area (and matches the pairwise
    P(signal > noise) + 0.5 P(tie) statistic bit-for-bit).
    """
    if len(curve.points) < 2:
        raise ValidationError("AUC needs at least two points")
    if curve.counts is not None:
        total = Fraction(0)
        for (fp0, tp0), (fp1, tp1) in zip(curve.counts, curve.counts[1:]):
            total += Fraction(fp1 - fp0, curve.n_noise) * \
                Fraction(tp0 + tp1, 2 * curve.n_signal)
        return float(total)
    acc = 0.0
    pts = curve.points
    for (fa0, hit0), (fa1, hit1) in zip(pts, pts[1:]):
        acc += 0.5 * (hit0 + hit1) * (fa1 - fa0)
    return acc


def pairwise_auc(scored: Sequence[tuple[float, bool]]) -> float:
    """Brute-force AUC oracle: P(signal score > noise score) + half ties."""
    signals = [s for s, is_sig in scored if is_sig]
    noises = [s for s, is_sig in scored if not is_sig]
    if not signals or not noises:
        raise ValidationError("pairwise AUC needs both classes")
    wins = ties = 0
    for s in signals:
        for n in noises:
            if s > n:
                wins += 1
            elif s == n:
                ties += 1
    return float(Fraction(2 * wins + ties, 2 * len(signals) * len(noises)))


def downsample_curve(curve: RocCurve, max_points: int = 512) -> RocCurve:
    """Evenly thin a curve for display payloads; endpoints are kept.

    The exact-count payload is dropped, so compute AUC before thinning.
    """
    if max_points < 2:
        raise ValueError("max_points must be >= 2")
    n = len(curve.points)
    if n <= max_points:
        return RocCurve(points=curve.points, source=curve.source,
                        strategy_label=curve.strategy_label)
    idx = sorted({round(i * (n - 1) / (max_points - 1)) for i in range(max_points)})
    pts = tuple(curve.points[i] for i in idx)
    return RocCurve(points=pts, source=curve.source + " (downsampled)",
                    strategy_label=curve.strategy_label)


def write_curve_csv(curve: RocCurve, path) -> None:
    """Export a curve as CSV with header ``fa,hit``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("fa,hit\n")
        for fa, hit in curve.points:
            fh.write(f"{fa!r},{hit!r}\n")


def read_curve_csv(path, source: str = "csv", strategy_label: str = "") -> RocCurve:
    pts: list[Point] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "fa,hit":
            raise ValidationError(f"unexpected CSV header {header!r}")
        for line in fh:
            fa_s, hit_s = line.strip().split(",")
            pts.append((float(fa_s), float(hit_s)))
    return RocCurve(points=tuple(pts), source=source, strategy_label=strategy_label)
