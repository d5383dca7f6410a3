"""Lloyd iteration: nearest-centroid assignment, mean update, repeat.

Iteration stops when an assignment step reproduces the previous labels
exactly. There is no tolerance on centroid movement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, KExceedsN
from .ingest import as_matrix, inverse_transform
from .metrics import as_centroids, distance_sum, row_sq_norms, sse


class EmptyClusterPolicy(str, enum.Enum):
    KEEP = "keep"  # empty cluster keeps its previous centroid
    FARTHEST = "farthest"  # move it onto the worst-fitting record


class Convergence(str, enum.Enum):
    MEMBERSHIP_STABLE = "membership_stable"
    MAX_ITER_REACHED = "max_iter_reached"


@dataclass(frozen=True)
class LloydConfig:
    max_iterations: int = 300
    empty_cluster_policy: EmptyClusterPolicy = EmptyClusterPolicy.KEEP

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        object.__setattr__(self, "empty_cluster_policy", EmptyClusterPolicy(self.empty_cluster_policy))


@dataclass(frozen=True)
class ClusteringResult:
    centroids: np.ndarray
    assignment: np.ndarray
    sse_model_space: float
    sse_raw_space: float
    iterations: int
    converged: Convergence
    empty_cluster_events: int = 0
    distance_sum_model_space: float = 0.0
    distance_sum_raw_space: float = 0.0
    # SSE after every assign step and every update step, in order
    sse_trace: tuple = field(default=(), repr=False)


def sq_distances(m, cs):
    """n x k matrix of squared distances, one column per centroid."""
    return np.column_stack([row_sq_norms(m - c) for c in cs])


def assign(m, cs):
    """Label each record with its nearest centroid (ties go to the lowest index)."""
    m = as_matrix(m)
    cs = as_centroids(cs, m.shape[1])
    return np.argmin(sq_distances(m, cs), axis=1)


def update_centroids(m, labels, k, previous, policy=EmptyClusterPolicy.KEEP):
    """New centroids as cluster means.

    Returns ``(centroids, n_empty)``; how empty clusters are filled is set by
    ``policy``.
    """
    m = as_matrix(m)
    previous = as_centroids(previous, m.shape[1])
    labels = np.asarray(labels)
    if labels.shape != (m.shape[0],):
        raise DimensionMismatch(f"assignment has shape {labels.shape}, expected ({m.shape[0]},)")
    if previous.shape[0] != k:
        raise DimensionMismatch(f"previous centroid set has {previous.shape[0]} rows, k={k}")
    new = previous.copy()
    empty = []
    for j in range(k):
        members = m[labels == j]
        if len(members):
            new[j] = members.mean(axis=0)
        else:
            empty.append(j)

    # A rounded mean can sit a few ulps off a centroid that was already
    # optimal (e.g. identical rows). Never adopt a move that raises the error.
    errors = row_sq_norms(m - previous[labels])
    moved = row_sq_norms(m - new[labels])
    for j in range(k):
        mask = labels == j
        if mask.any() and np.sum(moved[mask]) > np.sum(errors[mask]):
            new[j] = previous[j]
    if np.sum(row_sq_norms(m - new[labels])) > np.sum(errors):
        new = previous.copy()

    if empty and EmptyClusterPolicy(policy) is EmptyClusterPolicy.FARTHEST:
        errors = errors.copy()
        for j in empty:
            i = int(np.argmax(errors))
            new[j] = m[i]
            errors[i] = -1.0
    return as_matrix(new, "centroids"), len(empty)


def run_lloyd(m, init, cfg=None, params=None):
    """Run Lloyd iterations from ``init`` until membership is stable.

    ``m`` is the data in the space clustering runs in. If ``params`` is
    given, ``m`` is taken to be normalized with those parameters and the
    raw-space SSE is computed by mapping data and centroids back;
    otherwise raw-space SSE equals model-space SSE.
    """
    cfg = cfg or LloydConfig()
    m = as_matrix(m)
    centroids = as_centroids(init, m.shape[1])
    k = centroids.shape[0]
    if k > m.shape[0]:
        raise KExceedsN(k, m.shape[0])

    trace = []
    labels = None
    empty_events = 0
    status = Convergence.MAX_ITER_REACHED
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        new_labels = assign(m, centroids)
        trace.append(sse(m, centroids, new_labels))
        if labels is not None and np.array_equal(new_labels, labels):
            status = Convergence.MEMBERSHIP_STABLE
            break
        labels = new_labels
        centroids, n_empty = update_centroids(m, labels, k, centroids, cfg.empty_cluster_policy)
        empty_events += n_empty
        trace.append(sse(m, centroids, labels))

    sse_model = sse(m, centroids, labels)
    dsum_model = distance_sum(m, centroids, labels)
    if params is not None:
        raw_m, raw_c = inverse_transform(m, params), inverse_transform(centroids, params)
        sse_raw = sse(raw_m, raw_c, labels)
        dsum_raw = distance_sum(raw_m, raw_c, labels)
    else:
        sse_raw, dsum_raw = sse_model, dsum_model
    labels = labels.copy()
    labels.setflags(write=False)
    return ClusteringResult(
        centroids=centroids,
        assignment=labels,
        sse_model_space=sse_model,
        sse_raw_space=sse_raw,
        iterations=iterations,
        converged=status,
        empty_cluster_events=empty_events,
        distance_sum_model_space=dsum_model,
        distance_sum_raw_space=dsum_raw,
        sse_trace=tuple(trace),
    )
