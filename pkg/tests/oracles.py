"""Independent reference implementations the test suite checks against.

Nothing in here imports the statistical code under test. The Mann-Whitney
oracle builds the exact permutation distribution by enumerating labelings,
and the degenerate-instance generator produces small fully-scripted days on
which both simulation engines can be compared output-for-output.
"""

from __future__ import annotations

import math
import random
from itertools import combinations


# ---------------------------------------------------------------------------
# Mann-Whitney by brute force
# ---------------------------------------------------------------------------

def pair_count_u(x: list[float], y: list[float]) -> float:
    """U as a direct pair count: x-values beating y-values, ties half."""
    u = 0.0
    for a in x:
        for b in y:
            if a > b:
                u += 1.0
            elif a == b:
                u += 0.5
    return u


_DIST_CACHE: dict[tuple[int, int], list[int]] = {}


def u_distribution(n: int, m: int) -> list[int]:
    """Exact null counts of U over 0..n*m, by enumerating rank labelings.

    For tie-free data the distribution depends only on the sample sizes, so
    the pooled values can be taken to be the ranks 1..n+m. Every choice of n
    positions for the first sample is equally likely under the null.
    """
    key = (n, m)
    if key not in _DIST_CACHE:
        pooled = list(range(1, n + m + 1))
        counts = [0] * (n * m + 1)
        for picked in combinations(range(n + m), n):
            chosen = set(picked)
            xs = [pooled[i] for i in picked]
            ys = [pooled[i] for i in range(n + m) if i not in chosen]
            counts[int(pair_count_u(xs, ys))] += 1
        _DIST_CACHE[key] = counts
    return _DIST_CACHE[key]


def brute_force_mann_whitney(x: list[float], y: list[float]) -> tuple[float, float]:
    """(U, two-sided p) for tie-free samples, from the enumerated null."""
    values = list(x) + list(y)
    if len(set(values)) != len(values):
        raise ValueError("the brute-force oracle only handles tie-free data")
    n, m = len(x), len(y)
    counts = u_distribution(n, m)
    total = sum(counts)
    u = int(pair_count_u(list(x), list(y)))
    le = sum(counts[: u + 1])
    ge = sum(counts[u:])
    p = min(1.0, 2.0 * min(le, ge) / total)
    return float(u), p


# ---------------------------------------------------------------------------
# degenerate simulation instances
# ---------------------------------------------------------------------------

def random_degenerate_instance(rng: random.Random) -> dict:
    """A small scripted day: fixed arrivals, dwells and job durations.

    Times come off a coarse quarter-minute grid so that coincident events
    (the hard part of cross-engine agreement) actually happen. Returns plain
    data; the caller builds engine inputs from it.
    """
    n = rng.randint(1, 20)
    arrivals = sorted(rng.sample(range(1, 2000), n))
    staffing = rng.choice([
        {1: "s1", 2: "s1", 3: "s1"},
        {1: "s1", 2: "s2", 3: "s1"},
        {1: "s1", 2: "s2", 3: "s3"},
        {1: "s1", 2: "s1", 3: "s2"},
    ])
    grid = lambda lo, hi: rng.randrange(lo, hi) * 0.25
    return {
        "arrivals": [a * 0.25 for a in arrivals],
        "dwells": [grid(1, 40) for _ in range(n)],
        "help_flags": [rng.random() < 0.3 for _ in range(n)],
        "help_points": [rng.uniform(0.1, 0.9) for _ in range(n)],
        "job_times": [(grid(1, 12), grid(1, 8), grid(1, 12)) for _ in range(n)],
        "assignment": staffing,
        "rooms": rng.randint(1, 3),
        "horizon": 600.0,
    }


def poisson_mean_interval(expected: float, replications: int, z: float = 3.0):
    """(low, high) band for the mean of `replications` Poisson counts."""
    se = math.sqrt(expected / replications)
    return expected - z * se, expected + z * se
