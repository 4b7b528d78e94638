"""Partition agreement measures: contingency counts, Rand indices, entropy, MI, NMI.

All measures accept integer label sequences; cluster ids need not be
contiguous. Information measures use base-2 logarithms (bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def as_labels(labels, name: str = "labels") -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name}: expected a non-empty 1-D label sequence")
    if arr.dtype.kind not in "iu":
        cast = np.asarray(arr, dtype=float)
        if not np.isfinite(cast).all() or not (cast == np.floor(cast)).all():
            raise ValueError(f"{name}: labels must be integers")
        arr = cast
    return arr.astype(np.int64)


def canonicalize(labels) -> np.ndarray:
    """Relabel cluster ids to 0..k-1 in order of first appearance."""
    arr = as_labels(labels)
    uniq, inverse = np.unique(arr, return_inverse=True)
    first = np.full(len(uniq), len(arr), dtype=np.int64)
    np.minimum.at(first, inverse, np.arange(len(arr)))
    rank = np.argsort(np.argsort(first, kind="stable"), kind="stable")
    return rank[inverse].astype(np.int64)


def _check_pair(a, b):
    a = as_labels(a, "a")
    b = as_labels(b, "b")
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return a, b


def _counts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    ka = int(ia.max()) + 1
    kb = int(ib.max()) + 1
    return np.bincount(ia * kb + ib, minlength=ka * kb).reshape(ka, kb)


@dataclass
class ContingencyTable:
    """Co-occurrence counts between two labelings, rows/cols ordered by sorted cluster id."""

    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int


def contingency(a, b) -> ContingencyTable:
    a, b = _check_pair(a, b)
    counts = _counts(a, b)
    return ContingencyTable(
        counts=counts,
        row_sums=counts.sum(axis=1),
        col_sums=counts.sum(axis=0),
        n=int(counts.sum()),
    )


def _pair_sums(counts: np.ndarray):
    c = counts.astype(np.int64)
    sum_cells = int((c * (c - 1) // 2).sum())
    rows = c.sum(axis=1)
    cols = c.sum(axis=0)
    sum_rows = int((rows * (rows - 1) // 2).sum())
    sum_cols = int((cols * (cols - 1) // 2).sum())
    n = int(c.sum())
    total = n * (n - 1) // 2
    return sum_cells, sum_rows, sum_cols, total


def rand_index(a, b) -> float:
    """Fraction of instance pairs on which the two partitions agree."""
    a, b = _check_pair(a, b)
    if len(a) < 2:
        raise ValueError("rand_index requires at least 2 instances")
    sum_cells, sum_rows, sum_cols, total = _pair_sums(_counts(a, b))
    agree = total + 2 * sum_cells - sum_rows - sum_cols
    return agree / total


def adjusted_rand(a, b) -> float:
    """Chance-corrected Rand agreement; 1 iff the partitions are identical up to relabeling."""
    a, b = _check_pair(a, b)
    if len(a) < 2:
        raise ValueError("adjusted_rand requires at least 2 instances")
    sum_cells, sum_rows, sum_cols, total = _pair_sums(_counts(a, b))
    expected = sum_rows * sum_cols / total
    denom = 0.5 * (sum_rows + sum_cols) - expected
    if denom == 0.0:
        return 1.0 if np.array_equal(canonicalize(a), canonicalize(b)) else 0.0
    return (sum_cells - expected) / denom


def entropy(labels) -> float:
    """Shannon entropy of the cluster-size distribution, in bits."""
    arr = as_labels(labels)
    counts = np.unique(arr, return_counts=True)[1]
    p = counts / len(arr)
    return max(float(-(p * np.log2(p)).sum()), 0.0)


def mutual_information(a, b) -> float:
    """Mutual information between two labelings, in bits; zero-count cells contribute 0."""
    a, b = _check_pair(a, b)
    counts = _counts(a, b)
    n = counts.sum()
    pij = counts / n
    pa = counts.sum(axis=1) / n
    pb = counts.sum(axis=0) / n
    nz = counts > 0
    outer = pa[:, None] * pb[None, :]
    val = float((pij[nz] * np.log2(pij[nz] / outer[nz])).sum())
    return max(val, 0.0)


def nmi(a, b) -> float:
    """Mutual information normalized by the geometric mean of the two entropies, in [0, 1].

    If either partition has zero entropy the value is 1 when the partitions
    are identical and 0 otherwise.
    """
    a, b = _check_pair(a, b)
    ha = entropy(a)
    hb = entropy(b)
    if ha == 0.0 or hb == 0.0:
        return 1.0 if np.array_equal(canonicalize(a), canonicalize(b)) else 0.0
    return min(mutual_information(a, b) / math.sqrt(ha * hb), 1.0)
