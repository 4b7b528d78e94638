"""Paired Wilcoxon signed-rank test: exact rank-sum enumeration for small samples,
tie-corrected normal approximation with continuity correction otherwise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EXACT_LIMIT = 20

ALTERNATIVES = ("two-sided", "greater", "less")


@dataclass
class WilcoxonResult:
    statistic: float  # sum of positive-difference ranks
    n_effective: int  # pairs remaining after zero-difference removal
    p_value: float
    alternative: str
    method: str  # "exact" or "normal-approximation"


def _ranked_abs(diffs: np.ndarray):
    """Average ranks of |d| plus the tie-group sizes."""
    absd = np.abs(diffs)
    order = np.argsort(absd, kind="stable")
    ranks = np.empty(len(absd))
    ties = []
    i = 0
    sorted_abs = absd[order]
    while i < len(absd):
        j = i
        while j + 1 < len(absd) and sorted_abs[j + 1] == sorted_abs[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        ties.append(j - i + 1)
        i = j + 1
    return ranks, ties


def _rank_sum_counts(n: int) -> np.ndarray:
    """counts[s] = number of the 2^n sign patterns whose positive-rank sum is s (ranks 1..n)."""
    top = n * (n + 1) // 2
    counts = np.zeros(top + 1)
    counts[0] = 1.0
    for r in range(1, n + 1):
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    return counts


def _norm_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank(x, y, alternative: str = "two-sided", method: str = "auto") -> WilcoxonResult:
    """Test for a location shift between paired samples.

    Zero differences are dropped. The exact null distribution is used when
    n_effective <= 20 and no |d| ties exist (unless overridden via method);
    otherwise a normal approximation with tie and continuity corrections.
    "greater" means x tends to exceed y.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    if method not in ("auto", "exact", "approx"):
        raise ValueError("method must be 'auto', 'exact', or 'approx'")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("paired samples must be equal-length 1-D sequences")
    if len(x) < 2:
        raise ValueError("need at least 2 pairs")
    diffs = x - y
    diffs = diffs[diffs != 0]
    n = len(diffs)
    if n == 0:
        raise ValueError("degenerate: no nonzero pairs")
    ranks, ties = _ranked_abs(diffs)
    statistic = float(ranks[diffs > 0].sum())
    has_ties = any(t > 1 for t in ties)

    if method == "exact" and has_ties:
        raise ValueError("exact method is undefined with tied |differences|")
    use_exact = method == "exact" or (method == "auto" and n <= EXACT_LIMIT and not has_ties)

    if use_exact:
        counts = _rank_sum_counts(n)
        total = 2.0**n
        w = int(round(statistic))
        p_greater = float(counts[w:].sum()) / total
        p_less = float(counts[: w + 1].sum()) / total
        method_used = "exact"
    else:
        mu = n * (n + 1) / 4.0
        tie_term = sum(t**3 - t for t in ties) / 48.0
        variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
        if variance <= 0:
            raise ValueError("degenerate: zero variance after tie correction")
        sd = math.sqrt(variance)
        p_greater = _norm_sf((statistic - mu - 0.5) / sd)
        p_less = _norm_cdf((statistic - mu + 0.5) / sd)
        method_used = "normal-approximation"

    if alternative == "greater":
        p = p_greater
    elif alternative == "less":
        p = p_less
    else:
        p = min(1.0, 2.0 * min(p_greater, p_less))
    return WilcoxonResult(
        statistic=statistic,
        n_effective=n,
        p_value=float(min(max(p, 0.0), 1.0)),
        alternative=alternative,
        method=method_used,
    )
