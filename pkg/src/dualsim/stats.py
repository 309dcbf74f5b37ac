"""Statistical procedures used by the output-comparison experiments.

Everything here is self-contained on purpose: the Mann-Whitney U test (exact
enumeration for small samples, normal approximation with midranks plus tie and
continuity corrections otherwise), Student-t confidence intervals with the
t quantile computed from the regularized incomplete beta function, Bonferroni
correction, and the frequency histogram used for waiting-time shape checks.
Text rendering rounds to 4 decimal places; the result objects keep full
precision and serialize to JSON fragments with fixed field names.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

NO_DIFFERENCE = "no_difference"
FIRST_GREATER = "first_greater"
SECOND_GREATER = "second_greater"

EXACT = "exact"
NORMAL_APPROXIMATION = "normal_approximation"


# ---------------------------------------------------------------------------
# descriptive statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DescriptiveStats:
    """Sample size, mean, median, and n-1 spread measures.

    ``variance`` is stored as ``standard_deviation ** 2`` so the two fields are
    exactly consistent. For n == 1 the spread fields are None.
    """

    n: int
    mean: float
    median: float
    standard_deviation: float | None
    variance: float | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "median": self.median,
            "standard_deviation": self.standard_deviation,
            "variance": self.variance,
        }


def descriptive(sample: Sequence[float]) -> DescriptiveStats:
    values = [float(v) for v in sample]
    n = len(values)
    if n == 0:
        raise ValueError("descriptive statistics need at least one value")
    mean = math.fsum(values) / n
    median = statistics.median(values)
    if n == 1:
        return DescriptiveStats(n=1, mean=mean, median=median,
                                standard_deviation=None, variance=None)
    raw_var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    sd = math.sqrt(raw_var)
    return DescriptiveStats(n=n, mean=mean, median=median,
                            standard_deviation=sd, variance=sd * sd)


# ---------------------------------------------------------------------------
# Mann-Whitney U
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MannWhitneyResult:
    u_statistic: float
    p_value: float
    method: str
    n_first: int
    n_second: int

    def to_json_dict(self) -> dict:
        return {
            "u_statistic": self.u_statistic,
            "p_value": self.p_value,
            "method": self.method,
            "n_first": self.n_first,
            "n_second": self.n_second,
        }


def _midranks(values: list[float]) -> tuple[list[float], list[int]]:
    """Ranks (1-based, midranks on ties) and the tie-group sizes."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    tie_sizes: list[int] = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j + 2) / 2.0  # average of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _exact_u_counts(n: int, m: int) -> list[int]:
    """Null distribution of U for sample sizes (n, m): counts[u] over 0..n*m.

    Built with the classic recurrence on the number of rank subsets,
    c(n, m, u) = c(n-1, m, u-m) + c(n, m-1, u); integer arithmetic throughout.
    """
    table: dict[tuple[int, int], list[int]] = {}
    for a in range(n + 1):
        for b in range(m + 1):
            row = [0] * (a * b + 1)
            if a == 0 or b == 0:
                row[0] = 1
            else:
                prev_a = table[(a - 1, b)]
                prev_b = table[(a, b - 1)]
                for u in range(a * b + 1):
                    total = 0
                    if 0 <= u - b < len(prev_a):
                        total += prev_a[u - b]
                    if u < len(prev_b):
                        total += prev_b[u]
                    row[u] = total
            table[(a, b)] = row
    return table[(n, m)]


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def mann_whitney(
    x: Sequence[float], y: Sequence[float], exact_threshold: int = 8
) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    U counts the pairs where a first-sample value beats a second-sample value
    (ties count one half). The exact null distribution is enumerated when both
    samples are tie-free and ``min(n, m) <= exact_threshold``; otherwise a
    normal approximation with midranks, tie-corrected variance and a 0.5
    continuity correction is used. Identical samples come out at U = n*m/2,
    p = 1.0 on either route.
    """
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    n, m = len(xs), len(ys)
    if n == 0 or m == 0:
        raise ValueError("mann_whitney needs two non-empty samples")
    combined = xs + ys
    ranks, tie_sizes = _midranks(combined)
    rank_sum_x = math.fsum(ranks[:n])
    u = rank_sum_x - n * (n + 1) / 2.0
    has_ties = any(size > 1 for size in tie_sizes)

    if not has_ties and min(n, m) <= exact_threshold:
        counts = _exact_u_counts(n, m)
        total = sum(counts)
        u_int = int(round(u))
        cdf_le = sum(counts[: u_int + 1])
        cdf_ge = sum(counts[u_int:])
        p = min(1.0, 2.0 * min(cdf_le, cdf_ge) / total)
        return MannWhitneyResult(u, p, EXACT, n, m)

    total_n = n + m
    mean_u = n * m / 2.0
    tie_term = math.fsum(t**3 - t for t in tie_sizes) / (total_n * (total_n - 1))
    var_u = n * m / 12.0 * ((total_n + 1) - tie_term)
    if var_u <= 0.0:
        # Every observation identical: no evidence of any difference.
        return MannWhitneyResult(u, 1.0, NORMAL_APPROXIMATION, n, m)
    z = max(0.0, abs(u - mean_u) - 0.5) / math.sqrt(var_u)
    p = min(1.0, 2.0 * _normal_sf(z))
    return MannWhitneyResult(u, p, NORMAL_APPROXIMATION, n, m)


# ---------------------------------------------------------------------------
# Student-t quantile via the regularized incomplete beta function
# ---------------------------------------------------------------------------

def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Lentz's continued fraction for the incomplete beta function."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), accurate to roughly machine precision for moderate a, b."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1] (got {x})")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive (got {df})")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


@lru_cache(maxsize=256)
def student_t_quantile(p: float, df: float) -> float:
    """Inverse CDF of Student's t, solved by bisection on the CDF.

    Good to well beyond 6 significant digits; checked against published
    tables in the test suite. Cached: interval construction asks for the
    same (p, df) once per replication batch.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly within (0, 1) (got {p})")
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive (got {df})")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, df)
    hi = 1.0
    while student_t_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - p astronomically close to 1
            break
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if student_t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# confidence intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfidenceInterval:
    mean: float
    ci_lower: float
    ci_upper: float
    level: float
    n: int

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "level": self.level,
            "n": self.n,
        }


def _t_interval(values: list[float], level: float) -> ConfidenceInterval:
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1) (got {level})")
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1 or all(v == values[0] for v in values):
        # Degenerate sample: zero spread, point interval.
        return ConfidenceInterval(mean, mean, mean, level, n)
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    half = student_t_quantile(1.0 - (1.0 - level) / 2.0, n - 1) * math.sqrt(var / n)
    return ConfidenceInterval(mean, mean - half, mean + half, level, n)


def mean_ci(sample: Sequence[float], level: float = 0.95) -> ConfidenceInterval:
    """t-based confidence interval for the mean of one sample."""
    values = [float(v) for v in sample]
    if len(values) < 2:
        raise ValueError("mean_ci needs at least two values")
    return _t_interval(values, level)


def paired_t_ci(differences: Sequence[float], level: float = 0.95) -> ConfidenceInterval:
    """t-based confidence interval for the mean of paired differences.

    A sample of identical differences (including a single one) is allowed and
    yields the degenerate point interval.
    """
    values = [float(v) for v in differences]
    if not values:
        raise ValueError("paired_t_ci needs at least one difference")
    if len(values) == 1:
        return ConfidenceInterval(values[0], values[0], values[0], level, 1)
    return _t_interval(values, level)


def bonferroni_level(alpha: float, comparisons: int) -> float:
    """Per-comparison significance level alpha / c."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1) (got {alpha})")
    if not (isinstance(comparisons, int) and comparisons >= 1):
        raise ValueError(f"comparisons must be a positive integer (got {comparisons})")
    return alpha / comparisons


def classify_ci(ci_lower: float, ci_upper: float) -> str:
    """Verdict from a difference CI: bounds exactly 0 count as containing 0."""
    if ci_lower > ci_upper:
        raise ValueError(f"empty interval ({ci_lower}, {ci_upper})")
    if ci_lower > 0.0:
        return FIRST_GREATER
    if ci_upper < 0.0:
        return SECOND_GREATER
    return NO_DIFFERENCE


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyHistogram:
    """Counts over half-open bins [k*w, (k+1)*w) starting at zero."""

    bin_width: float
    counts: tuple[int, ...]
    n: int

    def bin_edges(self) -> list[tuple[float, float]]:
        return [
            (k * self.bin_width, (k + 1) * self.bin_width)
            for k in range(len(self.counts))
        ]

    def to_json_dict(self) -> dict:
        return {"bin_width": self.bin_width, "counts": list(self.counts), "n": self.n}


def histogram(sample: Sequence[float], bin_width: float) -> FrequencyHistogram:
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive (got {bin_width})")
    values = [float(v) for v in sample]
    if any(v < 0 for v in values):
        raise ValueError("histogram values must be non-negative (waiting times)")
    if not values:
        return FrequencyHistogram(bin_width=bin_width, counts=(), n=0)
    indices = [int(v // bin_width) for v in values]
    counts = [0] * (max(indices) + 1)
    for k in indices:
        counts[k] += 1
    return FrequencyHistogram(bin_width=bin_width, counts=tuple(counts), n=len(values))
