"""Brute-force ground truth for tests.

Deliberately plain Python: nothing here calls into the numpy kernels the
Lloyd engine uses, so agreement between the two is evidence rather than
tautology.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import DimensionMismatch, InstanceTooLarge, KExceedsN

MAX_BRUTE_FORCE_N = 12


def _rows(m):
    return [[float(v) for v in row] for row in m]


def naive_assign(m, cs):
    """Full scan with true (square-rooted) Euclidean distance; ties to lowest index."""
    rows, cents = _rows(m), _rows(cs)
    labels = []
    for x in rows:
        best, best_j = math.inf, 0
        for j, c in enumerate(cents):
            if len(c) != len(x):
                raise DimensionMismatch(f"dimension {len(x)} vs {len(c)}")
            dist = math.dist(x, c)
            if dist < best:
                best, best_j = dist, j
        labels.append(best_j)
    return labels


@dataclass(frozen=True)
class OracleResult:
    optimal_sse: float
    optimal_assignment: tuple
    enumerated_count: int


def partition_sse(rows, labels, k):
    """SSE of a labelling with every cluster scored against its own mean."""
    d = len(rows[0])
    terms = []
    for j in range(k):
        members = [x for x, lab in zip(rows, labels) if lab == j]
        if not members:
            continue
        centre = [math.fsum(x[t] for x in members) / len(members) for t in range(d)]
        terms.extend((x[t] - centre[t]) ** 2 for x in members for t in range(d))
    # fsum is exactly rounded, so relabelled copies of a partition score identically
    return math.fsum(terms)


def brute_force(m, k):
    """Globally optimal k-clustering by enumerating every surjective labelling.

    Ties go to the lexicographically smallest label vector.
    """
    rows = _rows(m)
    n = len(rows)
    if n > MAX_BRUTE_FORCE_N:
        raise InstanceTooLarge(f"n={n} exceeds the enumeration bound {MAX_BRUTE_FORCE_N}")
    if k > n:
        raise KExceedsN(k, n)
    best, best_labels, count = math.inf, None, 0
    for labels in itertools.product(range(k), repeat=n):
        if len(set(labels)) != k:
            continue
        count += 1
        score = partition_sse(rows, labels, k)
        if score < best:
            best, best_labels = score, labels
    return OracleResult(optimal_sse=best, optimal_assignment=best_labels, enumerated_count=count)
