"""Randomized self-check against the brute-force oracle (``dpkmeans verify``)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initializers import init_dp, init_origin_point, init_random_macqueen, init_variance_aldaoud
from .ingest import normalize
from .lloyd import Convergence, assign, run_lloyd
from .oracle import brute_force, naive_assign


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _instances(rng, count, max_n, max_d, ks):
    for _ in range(count):
        k = int(rng.choice(ks))
        n = int(rng.integers(k, max_n + 1))
        d = int(rng.integers(1, max_d + 1))
        yield rng.normal(size=(n, d)) * rng.uniform(0.5, 5.0), k


def _seed_sets(m, k, seed):
    normed, params = normalize(m)
    yield "dp", normed, init_dp(m, k).centroids, params
    yield "origin", m, init_origin_point(m, k), None
    yield "random", m, init_random_macqueen(m, k, seed), None
    yield "variance", m, init_variance_aldaoud(m, k), None


def check_assign_matches_oracle(rng, count=1000):
    bad = 0
    for m, k in _instances(rng, count, 50, 4, [1, 2, 3, 4, 5]):
        cs = rng.normal(size=(k, m.shape[1])) * 2
        if list(assign(m, cs)) != naive_assign(m, cs):
            bad += 1
    return CheckResult("assign == naive_assign", bad == 0, f"{bad}/{count} mismatches")


def check_lloyd_vs_brute_force(rng, count=200):
    bad = equal = 0
    for i, (m, k) in enumerate(_instances(rng, count, 8, 2, [2, 3])):
        opt = brute_force(m, k)
        for name, space_m, init, _ in _seed_sets(m, k, i):
            res = run_lloyd(space_m, init)
            optimum = opt.optimal_sse if space_m is m else brute_force(space_m, k).optimal_sse
            if res.sse_model_space < optimum * (1 - 1e-12) - 1e-12:
                bad += 1
            elif abs(res.sse_model_space - optimum) <= 1e-9 * max(1.0, optimum):
                equal += 1
    return CheckResult("lloyd SSE >= brute-force optimum", bad == 0,
                       f"{bad} violations; optimum reached in {equal}/{4 * count} runs")


def check_monotone_sse(rng, count=500):
    bad = 0
    for i, (m, k) in enumerate(_instances(rng, count, 200, 10, [2, 3, 4, 5, 6])):
        for name, space_m, init, params in _seed_sets(m, k, i):
            res = run_lloyd(space_m, init, params=params)
            trace = res.sse_trace
            bad += sum(1 for a, b in zip(trace, trace[1:]) if b > a)
            if res.converged is Convergence.MEMBERSHIP_STABLE and not np.array_equal(
                assign(space_m, res.centroids), res.assignment
            ):
                bad += 1
    return CheckResult("SSE non-increasing across iterations", bad == 0, f"{bad} violations")


def run_all(seed=0, scale=1.0):
    """Run every check; ``scale`` shrinks or grows the instance counts."""
    rng = np.random.default_rng(seed)
    n = lambda c: max(1, int(c * scale))  # noqa: E731
    return [
        check_assign_matches_oracle(rng, n(1000)),
        check_lloyd_vs_brute_force(rng, n(200)),
        check_monotone_sse(rng, n(500)),
    ]
