"""Exponential-cost benchmark of exhaustive search and the Planck-time feasibility check."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import RejectedInputError
from .ising import random_ising_model
from .solver import brute_force_ground_state

PLANCK_LOG10 = -43.0
SECONDS_PER_YEAR = 365.25 * 86400.0
MIN_FIT_SECONDS = 0.010


@dataclass
class BenchRecord:
    num_spins: int
    wall_time: float
    configurations_enumerated: int
    seed: int


@dataclass
class FeasibilityReport:
    log10_seconds_per_op: float
    planck_log10: float
    verdict: str


def instance_seed_for(instance_seed: int, num_spins: int) -> int:
    """Per-N seed derived only from ``(instance_seed, num_spins)``."""
    return int(np.random.SeedSequence([instance_seed, num_spins]).generate_state(1, np.uint32)[0])


def benchmark_instance(num_spins: int, instance_seed: int):
    return random_ising_model(num_spins, instance_seed_for(instance_seed, num_spins))


def fit_log2_slope(records, min_seconds: float = MIN_FIT_SECONDS):
    """Least-squares slope of log2(wall_time) against N.

    Only the longest contiguous run of records (in N order) whose time is
    at least ``min_seconds`` is used. Returns None when fewer than two
    points qualify.
    """
    recs = sorted(records, key=lambda r: r.num_spins)
    best, cur = [], []
    for r in recs:
        if r.wall_time >= min_seconds and (not cur or r.num_spins == cur[-1].num_spins + 1):
            cur.append(r)
        elif r.wall_time >= min_seconds:
            cur = [r]
        else:
            cur = []
        if len(cur) > len(best):
            best = list(cur)
    if len(best) < 2:
        return None
    n = np.array([r.num_spins for r in best], dtype=float)
    y = np.log2([r.wall_time for r in best])
    slope, _ = np.polyfit(n, y, 1)
    return float(slope)


def scaling_benchmark(n_range, instance_seed: int = 0, repetitions: int = 3, workers: int = 1):
    """Time exhaustive search on random integer models, one record per N.

    Each record keeps the fastest of ``repetitions`` runs. Instances depend
    only on ``(instance_seed, N)``; timings obviously do not repeat.

    Returns:
        ``(records, slope)`` where ``slope`` is None for a degenerate fit.
    """
    if repetitions < 1:
        raise RejectedInputError("repetitions must be at least 1")
    records = []
    for n in sorted(set(int(x) for x in n_range)):
        model = benchmark_instance(n, instance_seed)
        times = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            result = brute_force_ground_state(model, workers=workers)
            times.append(time.perf_counter() - t0)
        records.append(BenchRecord(n, min(times), result.enumerated_count, instance_seed_for(instance_seed, n)))
    return records, fit_log2_slope(records)


def feasibility(log2_ops: float, budget_seconds: float) -> FeasibilityReport:
    """Seconds available per operation for 2**log2_ops operations, in log10.

    Everything stays in the log domain since 2**(10**24) has no float
    representation.
    """
    if log2_ops < 0:
        raise RejectedInputError("log2_ops must be >= 0")
    if not budget_seconds > 0:
        raise RejectedInputError("budget_seconds must be > 0")
    value = math.log10(budget_seconds) - log2_ops * math.log10(2.0)
    verdict = "sub-Planck-infeasible" if value < PLANCK_LOG10 else "feasible"
    return FeasibilityReport(log10_seconds_per_op=value, planck_log10=PLANCK_LOG10, verdict=verdict)
