"""Signal-detection mathematics: contingency arithmetic, d', criterion, and beta.

Conventions used throughout the package:

* The "signal" class is a legitimate manuscript and a "hit" is accepting one;
  a "false alarm" is accepting a fraudulent manuscript.  The contingency
  orientation is therefore TP = legitimate accepted, FN = legitimate rejected,
  FP = fraud accepted, TN = fraud rejected.
* Sensitivity is the equal-variance Gaussian d' = z(hit) - z(false alarm).
* The criterion C is signed relative to the midpoint between the two
  distributions: C > 0 is conservative, C < 0 permissive.
* beta = exp(d' * C), equivalently the ratio of signal to noise density at
  the criterion location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import InfeasibleRatesError, ValidationError

SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the inverse normal CDF
# (relative error < 1.15e-9 before refinement).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_pdf(x: float) -> float:
    """Standard normal density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via erfc (full relative precision in the lower tail)."""
    return 0.5 * math.erfc(-x / SQRT2)


def _acklam_lower(p: float) -> float:
    # valid for p in (0, 0.5]
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
               ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
           (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, accurate to ~1e-15 absolute.

    Rational approximation refined by two Halley steps.  Computed in the
    lower tail and mirrored, because the CDF loses resolution near 1.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"quantile requires p in (0, 1), got {p!r}")
    if p > 0.5:
        return -normal_quantile(1.0 - p)
    x = _acklam_lower(p)
    for _ in range(2):
        e = normal_cdf(x) - p
        u = e / normal_pdf(x)
        x -= u / (1.0 + 0.5 * x * u)
    return x


@dataclass(frozen=True)
class ConfusionTable:
    """TP/FP/TN/FN mass or counts, oriented so TP = legitimate accepted."""

    tp: float
    fn: float
    fp: float
    tn: float

    def __post_init__(self):
        for name in ("tp", "fn", "fp", "tn"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"confusion cell {name} must be finite and >= 0, got {v!r}")

    @property
    def total(self) -> float:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def fraud_rate(self) -> float:
        return (self.fp + self.tn) / self.total

    @property
    def accept_rate(self) -> float:
        return (self.tp + self.fp) / self.total

    def normalized(self) -> "ConfusionTable":
        t = self.total
        if t <= 0:
            raise ValidationError("cannot normalize an empty confusion table")
        return ConfusionTable(self.tp / t, self.fn / t, self.fp / t, self.tn / t)

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}

    @classmethod
    def from_dict(cls, d: dict) -> "ConfusionTable":
        return cls(tp=d["tp"], fn=d["fn"], fp=d["fp"], tn=d["tn"])


def contingency_from_rates(fraud_rate: float, accept_rate: float,
                           fraud_accept_mass: float) -> ConfusionTable:
    """Build the normalized contingency table from its marginals.

    Arithmetic is done on rationals (denominators up to 1e12) so that
    decimal-entered rates produce exact cells: (0.10, 0.20, 0.05) yields
    exactly (0.15, 0.75, 0.05, 0.05).
    """
    for name, v in (("fraud_rate", fraud_rate), ("accept_rate", accept_rate),
                    ("fraud_accept_mass", fraud_accept_mass)):
        if not 0.0 <= v <= 1.0:
            raise InfeasibleRatesError(f"{name} must be in [0, 1], got {v!r}")
    fr = Fraction(fraud_rate).limit_denominator(10 ** 12)
    ar = Fraction(accept_rate).limit_denominator(10 ** 12)
    fp = Fraction(fraud_accept_mass).limit_denominator(10 ** 12)
    tn = fr - fp
    tp = ar - fp
    fn = 1 - fr - tp
    cells = {"tp": tp, "fn": fn, "fp": fp, "tn": tn}
    for name, v in cells.items():
        if v < 0:
            raise InfeasibleRatesError(
                f"rates (fraud={fraud_rate}, accept={accept_rate}, "
                f"fraud_accepted={fraud_accept_mass}) give negative {name}={float(v)}")
    return ConfusionTable(float(tp), float(fn), float(fp), float(tn))


class Rates(NamedTuple):
    hit: float
    fa: float
    edge_corrected: bool


def rates_from_confusion(ct: ConfusionTable, n_context: int | None = None) -> Rates:
    """Hit and false-alarm rates from a confusion table.

    Rates of exactly 0 or 1 are replaced by 1/(2N) or 1 - 1/(2N), where N is
    the relevant row count.  For a normalized table, pass the total count as
    ``n_context`` so row counts can be recovered.
    """
    signal_mass = ct.tp + ct.fn
    noise_mass = ct.fp + ct.tn
    if signal_mass <= 0 or noise_mass <= 0:
        raise ValidationError("both confusion rows must have positive mass")
    scale = 1.0 if n_context is None else n_context / ct.total
    corrected = False

    def rate(numer: float, row_mass: float) -> float:
        nonlocal corrected
        r = numer / row_mass
        if r == 0.0 or r == 1.0:
            n_row = row_mass * scale
            if n_row < 1.0:
                raise ValidationError(
                    "edge correction needs row counts; pass counts or n_context")
            corrected = True
            r = 1.0 - 1.0 / (2.0 * n_row) if r == 1.0 else 1.0 / (2.0 * n_row)
        return r

    hit = rate(ct.tp, signal_mass)
    fa = rate(ct.fp, noise_mass)
    return Rates(hit, fa, corrected)


def _check_rate(name: str, value: float) -> None:
    if not (0.0 < value < 1.0):
        raise ValueError(f"{name} must lie strictly in (0, 1), got {value!r}")


def d_prime(hit: float, fa: float) -> float:
    """Equal-variance Gaussian sensitivity: z(hit) - z(false alarm)."""
    _check_rate("hit", hit)
    _check_rate("fa", fa)
    return normal_quantile(hit) - normal_quantile(fa)


def criterion_c(hit: float, fa: float) -> float:
    """Criterion location relative to the midpoint: -(z(hit) + z(fa)) / 2."""
    _check_rate("hit", hit)
    _check_rate("fa", fa)
    return -0.5 * (normal_quantile(hit) + normal_quantile(fa))


def beta_from_dc(d: float, c: float) -> float:
    """Likelihood-ratio bias beta = exp(d' * C)."""
    if not (math.isfinite(d) and math.isfinite(c)):
        raise ValueError("d' and C must be finite")
    return math.exp(d * c)


@dataclass(frozen=True)
class CriterionState:
    """Criterion location in noise-distribution units.

    B is the distance from the noise mean (= x_c) and D the distance from
    the signal mean (= x_c - d'), so D = B - d' always.
    """

    x_c: float
    d_prime: float

    def __post_init__(self):
        if not (math.isfinite(self.x_c) and math.isfinite(self.d_prime)):
            raise ValidationError("criterion state requires finite x_c and d'")

    @property
    def B(self) -> float:
        return self.x_c

    @property
    def D(self) -> float:
        return self.x_c - self.d_prime

    @classmethod
    def from_locations(cls, b: float, d_location: float,
                       d_prime: float | None = None) -> "CriterionState":
        """Build from explicit B/D locations, checking D = B - d' if d' given."""
        implied = b - d_location
        if d_prime is not None and abs(implied - d_prime) > 1e-12:
            raise ValidationError(
                f"inconsistent criterion state: B - D = {implied} but d' = {d_prime}")
        return cls(x_c=b, d_prime=implied)


def beta_density_ratio(cs: CriterionState) -> float:
    """beta as the ratio of signal to noise density at the criterion."""
    return normal_pdf(cs.D) / normal_pdf(cs.B)


@dataclass(frozen=True)
class SdtMetrics:
    """Hit/false-alarm rates with derived d', C, and beta.

    The internal identity beta = exp(d' * C) is enforced at construction.
    """

    hit: float
    fa: float
    d_prime: float
    criterion_c: float
    beta: float
    edge_corrected: bool = False

    def __post_init__(self):
        _check_rate("hit", self.hit)
        _check_rate("fa", self.fa)
        expected = math.exp(self.d_prime * self.criterion_c)
        if abs(self.beta - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValidationError(
                f"beta={self.beta} does not satisfy exp(d'*C)={expected}")

    @classmethod
    def from_rates(cls, hit: float, fa: float,
                   edge_corrected: bool = False) -> "SdtMetrics":
        d = d_prime(hit, fa)
        c = criterion_c(hit, fa)
        return cls(hit=hit, fa=fa, d_prime=d, criterion_c=c,
                   beta=beta_from_dc(d, c), edge_corrected=edge_corrected)

    @classmethod
    def from_confusion(cls, ct: ConfusionTable,
                       n_context: int | None = None) -> "SdtMetrics":
        hit, fa, corrected = rates_from_confusion(ct, n_context)
        return cls.from_rates(hit, fa, edge_corrected=corrected)

    def to_dict(self) -> dict:
        return {
            "hit": self.hit,
            "fa": self.fa,
            "d_prime": self.d_prime,
            "criterion_c": self.criterion_c,
            "beta": self.beta,
            "edge_corrected": self.edge_corrected,
        }


def simulate_observer(true_d_prime: float, x_c: float, n_trials: int,
                      seed: int) -> SdtMetrics:
    """Monte-Carlo SDT observer at a fixed criterion.

    Half the trials are signal draws from N(d', 1), half noise draws from
    N(0, 1); a trial is answered "accept" when the draw exceeds x_c.
    """
    if n_trials < 2:
        raise ValueError("need at least one signal and one noise trial")
    rng = np.random.Generator(np.random.PCG64(seed))
    n_signal = n_trials // 2
    n_noise = n_trials - n_signal
    signal = rng.standard_normal(n_signal) + true_d_prime
    noise = rng.standard_normal(n_noise)
    hits = int(np.count_nonzero(signal > x_c))
    fas = int(np.count_nonzero(noise > x_c))
    ct = ConfusionTable(tp=hits, fn=n_signal - hits, fp=fas, tn=n_noise - fas)
    return SdtMetrics.from_confusion(ct)
