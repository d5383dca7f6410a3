"""Distance, reference-point, midrange and SSE kernels."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EmptyPartition, IndexOutOfRange
from .ingest import as_matrix


def as_point(x, name="point"):
    p = np.asarray(x, dtype=np.float64)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1 or p.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{name} has non-finite coordinates")
    return p


def as_centroids(cs, dim=None):
    cs = as_matrix(cs, name="centroids")
    if dim is not None and cs.shape[1] != dim:
        raise DimensionMismatch(f"centroids have {cs.shape[1]} attributes, data has {dim}")
    return cs


def row_sq_norms(diff):
    """Squared Euclidean norm of each row of ``diff``.

    Assignment and SSE both go through here, so the per-record term a point
    was assigned by is bit-identical to the term SSE adds up.
    """
    return np.einsum("ij,ij->i", diff, diff)


def euclidean(x, c):
    x, c = as_point(x, "x"), as_point(c, "c")
    if x.shape != c.shape:
        raise DimensionMismatch(f"dimension {x.shape[0]} vs {c.shape[0]}")
    diff = x - c
    return float(np.sqrt(np.dot(diff, diff)))


def mean_point(m):
    """Coordinate-wise mean of all records; the DP reference point."""
    return as_matrix(m).mean(axis=0)


def midrange_point(rows):
    """Per-attribute (min + max) / 2 over a non-empty set of records."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows.reshape(-1, 1)
    if rows.shape[0] == 0:
        raise EmptyPartition("midrange of an empty partition")
    rows = as_matrix(rows, name="partition")
    # min + (max - min)/2 stays inside [min, max] even where (min + max) would overflow
    lo, hi = rows.min(axis=0), rows.max(axis=0)
    return lo + (hi - lo) / 2.0


def point_errors(m, cs, labels):
    """Squared distance of each record to the centroid it is labelled with."""
    m = as_matrix(m)
    cs = as_centroids(cs, m.shape[1])
    labels = np.asarray(labels)
    if labels.shape != (m.shape[0],):
        raise DimensionMismatch(f"assignment has shape {labels.shape}, expected ({m.shape[0]},)")
    if labels.size and (labels.min() < 0 or labels.max() >= cs.shape[0]):
        raise IndexOutOfRange(f"assignment labels must lie in [0, {cs.shape[0]})")
    return row_sq_norms(m - cs[labels])


def sse(m, cs, labels):
    """Sum of squared errors of ``m`` against the given centroids.

    Centroids are used as given (not replaced by cluster means), so initial
    centroid sets can be scored too.
    """
    return float(np.sum(point_errors(m, cs, labels)))


def distance_sum(m, cs, labels):
    """Sum of (unsquared) Euclidean distances of records to their centroids.

    Some initialization comparisons quote this figure under the name SSE,
    so the harness records it next to the true (squared) SSE.
    """
    return float(np.sum(np.sqrt(point_errors(m, cs, labels))))
