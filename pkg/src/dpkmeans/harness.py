"""Experiment grid runner: dataset x initializer x k (x seed) -> SSE table."""

from __future__ import annotations

import enum
import statistics
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import IncomparableCells
from .ingest import Normalization, inverse_transform, load_dataset, normalize
from .initializers import PRNG_NAME, InitSpec, Strategy, init_dp, initialize
from .lloyd import LloydConfig, run_lloyd

SCHEMA_VERSION = 1
DEFAULT_SEEDS = tuple(range(30))


class Space(str, enum.Enum):
    MODEL = "model_space"
    RAW = "raw_space"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return {"model": cls.MODEL, "raw": cls.RAW}.get(value) or cls(value)


def default_space(strategy):
    # DP seeds live in normalized space; the baselines work on raw records
    return Space.MODEL if Strategy(strategy) is Strategy.DP else Space.RAW


@dataclass(frozen=True)
class ExperimentSpec:
    datasets: tuple
    inits: tuple
    ks: tuple
    normalization: Normalization = Normalization.MAX_ABS
    lloyd: LloydConfig = field(default_factory=LloydConfig)
    seeds: tuple = ()
    space: Space | None = None  # None: each initializer's default space
    data_dir: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "inits", tuple(Strategy(s) for s in self.inits))
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "normalization", Normalization.parse(self.normalization))
        if self.space is not None:
            object.__setattr__(self, "space", Space.parse(self.space))
        if not (self.datasets and self.inits and self.ks):
            raise ValueError("datasets, initializers and k values must all be non-empty")
        if bool(self.seeds) != (Strategy.RANDOM in self.inits):
            raise ValueError("seeds must be given exactly when the random initializer is selected")
        if any(k < 2 for k in self.ks):
            raise ValueError("every k must be >= 2")

    def space_for(self, strategy):
        return self.space or default_space(strategy)

    def cells(self):
        """Grid cells in report order."""
        for ds in self.datasets:
            for init in self.inits:
                for k in self.ks:
                    for seed in (self.seeds if init is Strategy.RANDOM else (None,)):
                        yield ds, init, k, seed

    def to_dict(self):
        return {
            "datasets": list(self.datasets),
            "inits": [s.value for s in self.inits],
            "ks": list(self.ks),
            "seeds": list(self.seeds),
            "normalization": self.normalization.value,
            "space": self.space.value if self.space else None,
            "max_iterations": self.lloyd.max_iterations,
            "empty_cluster_policy": self.lloyd.empty_cluster_policy.value,
        }


@dataclass(frozen=True)
class CellResult:
    dataset: str
    init: str
    k: int
    seed: int | None
    space: str
    sse_model_space: float
    sse_raw_space: float
    distance_sum_model_space: float
    distance_sum_raw_space: float
    iterations: int
    converged: str
    empty_cluster_events: int

    def value(self, metric="sse", space=None):
        return getattr(self, f"{metric}_{space or self.space}")


@dataclass(frozen=True)
class FailedCell:
    dataset: str
    init: str
    k: int
    seed: int | None
    error: str


@dataclass
class ExperimentReport:
    spec: dict
    cells: list
    failed: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    # everything run-dependent (clock times) lives here and nowhere else
    run_metadata: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self, include_run_metadata=True):
        out = {
            "schema_version": self.schema_version,
            "environment": self.environment,
            "spec": self.spec,
            "cells": [asdict(c) for c in self.cells],
            "failed_cells": [asdict(f) for f in self.failed],
        }
        if include_run_metadata:
            out["run_metadata"] = self.run_metadata
        return out

    @classmethod
    def from_dict(cls, d):
        return cls(
            spec=d["spec"],
            cells=[CellResult(**c) for c in d["cells"]],
            failed=[FailedCell(**f) for f in d.get("failed_cells", [])],
            environment=d.get("environment", {}),
            run_metadata=d.get("run_metadata", {}),
            schema_version=d.get("schema_version", SCHEMA_VERSION),
        )


def environment_info():
    return {"tool": "dpkmeans", "version": __version__, "prng": PRNG_NAME, "numpy": np.__version__}


def run_cell(raw, init, k, seed, spec):
    """Initialize and cluster one grid cell; returns a CellResult."""
    space = spec.space_for(init)
    normed, params = normalize(raw, spec.normalization)
    if init is Strategy.DP:
        centroids = init_dp(raw, k, spec.normalization).centroids
        if space is Space.RAW:
            centroids = inverse_transform(centroids, params)
    else:
        basis = normed if space is Space.MODEL else raw
        centroids = initialize(basis, InitSpec(init, k, seed=seed))
    if space is Space.MODEL:
        res = run_lloyd(normed, centroids, spec.lloyd, params=params)
    else:
        res = run_lloyd(raw, centroids, spec.lloyd)
    return res, space


def run_experiment(spec, loader=load_dataset):
    """Run every grid cell of ``spec``.

    A cell that raises is recorded in ``report.failed`` and the grid carries
    on. Cells come back in the deterministic order of ``spec.cells()``.
    """
    started = datetime.now(timezone.utc)
    data, load_errors = {}, {}
    for ref in spec.datasets:
        try:
            data[ref] = loader(ref, spec.data_dir)
        except Exception as exc:  # noqa: BLE001 - recorded per cell
            load_errors[ref] = f"{type(exc).__name__}: {exc}"

    cells, failed, timings = [], [], []
    for ref, init, k, seed in spec.cells():
        if ref in load_errors:
            failed.append(FailedCell(ref, init.value, k, seed, load_errors[ref]))
            continue
        name, raw = data[ref]
        t0 = time.perf_counter()
        try:
            res, space = run_cell(raw, init, k, seed, spec)
        except Exception as exc:  # noqa: BLE001 - recorded per cell
            failed.append(FailedCell(name, init.value, k, seed, f"{type(exc).__name__}: {exc}"))
            continue
        timings.append({"dataset": name, "init": init.value, "k": k, "seed": seed,
                        "wall_time_s": time.perf_counter() - t0})
        cells.append(CellResult(
            dataset=name, init=init.value, k=k, seed=seed, space=space.value,
            sse_model_space=res.sse_model_space, sse_raw_space=res.sse_raw_space,
            distance_sum_model_space=res.distance_sum_model_space,
            distance_sum_raw_space=res.distance_sum_raw_space,
            iterations=res.iterations, converged=res.converged.value,
            empty_cluster_events=res.empty_cluster_events,
        ))
    return ExperimentReport(
        spec=spec.to_dict(),
        cells=cells,
        failed=failed,
        environment=environment_info(),
        run_metadata={
            "started_at": started.isoformat(),
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "cell_wall_times": timings,
        },
    )


# --------------------------------------------------------------------------
# Ranking
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RankEntry:
    init: str
    value: float  # best over seeds for random, the single run otherwise
    space: str
    runs: int
    mean: float
    spread: float  # population std over seeds; 0 for single runs
    minimum: float
    maximum: float


@dataclass(frozen=True)
class Ranking:
    dataset: str
    k: int
    metric: str
    entries: tuple  # RankEntry, best first

    @property
    def order(self):
        return [e.init for e in self.entries]


def compare_methods(report, metric="sse", space=None, allow_mixed_spaces=False):
    """Rank initializers per (dataset, k), lowest value first.

    By default each cell is scored in the space Lloyd ran in, and ranking
    cells from different spaces raises IncomparableCells. Pass
    ``space="raw_space"`` to score everything in raw units, or
    ``allow_mixed_spaces=True`` to rank own-space values anyway.
    """
    if space is not None:
        space = Space.parse(space).value
    groups = {}
    for c in report.cells:
        groups.setdefault((c.dataset, c.k), {}).setdefault(c.init, []).append(c)

    rankings = []
    for (dataset, k), by_init in groups.items():
        entries = []
        for init, cells in by_init.items():
            scored_space = space or cells[0].space
            values = [c.value(metric, scored_space) for c in cells]
            entries.append(RankEntry(
                init=init, value=min(values), space=scored_space, runs=len(values),
                mean=statistics.fmean(values), spread=statistics.pstdev(values),
                minimum=min(values), maximum=max(values),
            ))
        spaces = {e.space for e in entries}
        if len(spaces) > 1 and not allow_mixed_spaces:
            detail = ", ".join(f"{e.init}={e.space}" for e in entries)
            raise IncomparableCells(f"{dataset} k={k}: cells scored in different spaces ({detail})")
        entries.sort(key=lambda e: e.value)
        rankings.append(Ranking(dataset, k, metric, tuple(entries)))
    return rankings
