"""Initial centroid strategies.

Four strategies share one shape: order the records somehow, cut the order
into k balanced contiguous blocks, then summarize each block.

=========  ====================================  =====================
strategy   ordering                              block summary
=========  ====================================  =====================
dp         distance to the mean of the           midrange
           normalized data (ascending)
origin     distance of raw records to the        mean
           all-zeros point (ascending)
variance   value of the highest-variance         coordinate-wise median
           attribute (ascending)
random     none; k rows sampled uniformly        the rows themselves
=========  ====================================  =====================

DP differs from the origin-point method in three places: the sort anchor
is the data mean rather than the origin, the records are normalized
before sorting, and each block is summarized by its midrange instead of
its mean. DP centroids come back in normalized space together with the
normalization parameters; the caller decides which space Lloyd runs in.

All sorts are stable, so ties keep their original row order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import KExceedsN
from .ingest import Normalization, NormalizationParams, as_matrix, compute_stats, normalize
from .metrics import mean_point, midrange_point, row_sq_norms

PRNG_NAME = "numpy.random.PCG64"


class Strategy(str, enum.Enum):
    DP = "dp"
    ORIGIN = "origin"
    RANDOM = "random"
    VARIANCE = "variance"


class SortSpace(str, enum.Enum):
    NORMALIZED = "normalized"
    RAW = "raw"


def _check_k(k, n):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise KExceedsN(k, n)


def partition_sizes(n, k):
    """Balanced block sizes: floor(n/k) each, the first n mod k get one more."""
    _check_k(k, n)
    base, extra = divmod(n, k)
    return [base + 1 if j < extra else base for j in range(k)]


@dataclass(frozen=True)
class PartitionPlan:
    k: int
    sizes: tuple
    blocks: tuple  # k arrays of positions into the sorted order

    @classmethod
    def build(cls, n, k):
        sizes = partition_sizes(n, k)
        bounds = np.cumsum([0] + sizes)
        blocks = tuple(np.arange(bounds[j], bounds[j + 1]) for j in range(k))
        return cls(k=k, sizes=tuple(sizes), blocks=blocks)


def _blocks_in_order(order, k):
    """Split a sorted row order into k contiguous row-index blocks."""
    plan = PartitionPlan.build(len(order), k)
    return [order[b] for b in plan.blocks]


def _stable_argsort(keys):
    return np.argsort(keys, kind="stable")


@dataclass(frozen=True)
class DPInit:
    centroids: np.ndarray  # normalized space
    params: NormalizationParams
    order: np.ndarray  # row indices, nearest to the reference point first
    reference: np.ndarray
    distances: np.ndarray


def init_dp(m, k, normalization=Normalization.MAX_ABS, sort_space=SortSpace.NORMALIZED):
    """Distance Part seeding.

    Normalize, take the mean of the normalized data as reference point,
    sort records by Euclidean distance to it, cut into k balanced blocks
    (nearest block first) and use each block's midrange as a centroid.
    ``sort_space="raw"`` computes the sort distances on unnormalized data
    instead; blocks are still summarized in normalized space.
    """
    m = as_matrix(m)
    _check_k(k, m.shape[0])
    normed, params = normalize(m, normalization)
    basis = normed if SortSpace(sort_space) is SortSpace.NORMALIZED else m
    reference = mean_point(basis)
    distances = np.sqrt(row_sq_norms(basis - reference))
    order = _stable_argsort(distances)
    centroids = np.vstack([midrange_point(normed[rows]) for rows in _blocks_in_order(order, k)])
    return DPInit(as_matrix(centroids, "centroids"), params, order, reference, distances)


def init_origin_point(m, k):
    """Sort raw records by distance to the origin; block means are the centroids."""
    m = as_matrix(m)
    _check_k(k, m.shape[0])
    order = _stable_argsort(np.sqrt(row_sq_norms(m)))
    return as_matrix(np.vstack([m[rows].mean(axis=0) for rows in _blocks_in_order(order, k)]),
                     "centroids")


def init_random_macqueen(m, k, seed):
    """k distinct records drawn uniformly without replacement, in sampled order."""
    m = as_matrix(m)
    _check_k(k, m.shape[0])
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.choice(m.shape[0], size=k, replace=False)
    return as_matrix(m[idx], "centroids")


def init_variance_aldaoud(m, k):
    """Split along the highest-variance attribute; block medians are the centroids.

    Ties in variance go to the lowest attribute index. Medians are taken
    per attribute over each block (even-sized blocks average the two
    middle values).
    """
    m = as_matrix(m)
    _check_k(k, m.shape[0])
    attr = int(np.argmax(compute_stats(m).variance))  # argmax returns the first maximum
    order = _stable_argsort(m[:, attr])
    return as_matrix(np.vstack([np.median(m[rows], axis=0) for rows in _blocks_in_order(order, k)]),
                     "centroids")


@dataclass(frozen=True)
class InitSpec:
    strategy: Strategy
    k: int
    seed: int | None = None
    normalization: Normalization = Normalization.MAX_ABS
    sort_space: SortSpace = SortSpace.NORMALIZED

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "normalization", Normalization.parse(self.normalization))
        object.__setattr__(self, "sort_space", SortSpace(self.sort_space))
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if (self.seed is not None) != (self.strategy is Strategy.RANDOM):
            raise ValueError("a seed is required for the random strategy and only for it")


def initialize(m, spec):
    """Run the strategy named by ``spec`` on ``m``.

    Returns the centroids; for dp they are in normalized space (use
    ``init_dp`` directly to get the normalization parameters as well).
    """
    if spec.strategy is Strategy.DP:
        return init_dp(m, spec.k, spec.normalization, spec.sort_space).centroids
    if spec.strategy is Strategy.ORIGIN:
        return init_origin_point(m, spec.k)
    if spec.strategy is Strategy.RANDOM:
        return init_random_macqueen(m, spec.k, spec.seed)
    return init_variance_aldaoud(m, spec.k)
