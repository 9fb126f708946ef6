"""Iterative distillation of N pairs with optional backup pairs.

Each round processes the live pairs two at a time; survivors of a round are
one iteration deeper in the success map.  When the live count is odd one
pair can be stored as a backup and used if everything later fails.  The
expectation of the final fidelity is computed two ways: exactly, by
memoized recursion over (live count, depth, backup depth) with binomial
branch weights, and by seeded Monte Carlo over individual trajectories.

The per-run iteration rules, in dispatch order on the current live count n:

1. Before the first round only: with ``drop_one_when_even`` and n even,
   one pair is discarded.
2. n = 0: the backup pair is the output if one exists, else the run failed
   and the output is ``failure_fidelity``.
3. n = 1: the live pair is the output (it is at least as deep as any backup).
4. n = 2 without a backup: stop; one live pair is the output.  With a
   backup the iteration continues (a failure can still fall back on it).
5. n odd: one pair is set aside as backup at the current depth, replacing
   any older (shallower) backup; with backups disabled it is discarded.
6. n/2 independent steps are performed; the survivors re-enter at rule 2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cache

import numpy as np

from . import _kernels
from .bell_core import BellDiagonalState, iterate_map, success_probability
from .errors import ResourceCapError
from .finite_ensemble import binomial_pmf

#: Largest pair count accepted by the exact expectation.
EXACT_N_CAP = 4096

#: Trials per work unit when Monte Carlo runs on several threads.
_MC_CHUNK = 8192


@dataclass(frozen=True)
class IterationPolicy:
    """Tunable rules of the iteration.

    ``stop_at_two_without_backup`` isolates rule 4 above so the alternative
    reading (keep distilling at two pairs even without a backup) can be
    compared; the default matches the stop rule.
    """

    backup_enabled: bool = True
    drop_one_when_even: bool = False
    failure_fidelity: float = 0.5
    stop_at_two_without_backup: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.failure_fidelity <= 0.5:
            raise ValueError(
                f"failure fidelity must lie in [0, 1/2], got {self.failure_fidelity!r}"
            )


@dataclass(frozen=True)
class TrialStats:
    """Monte Carlo summary over independent trajectories."""

    trials: int
    mean_fidelity: float
    std_error: float
    failure_rate: float


BACKUP = IterationPolicy()
NO_BACKUP = IterationPolicy(backup_enabled=False)
DROP_ONE = IterationPolicy(drop_one_when_even=True)


def depth_cap(n: int) -> int:
    """Upper bound on the number of rounds any trajectory on n pairs takes."""
    return math.ceil(math.log2(max(n, 2))) + 1


def _depth_tables(s0: BellDiagonalState, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Fidelity and step success probability of the success-map iterates,
    indexed by depth 0 .. depth_cap(n) + 1."""
    states = [s0]
    for _ in range(depth_cap(n) + 1):
        states.append(iterate_map(states[-1], 1))
    fid = np.array([s.a for s in states])
    psucc = np.array([success_probability(s) for s in states])
    return fid, psucc


def _effective_n(n: int, policy: IterationPolicy) -> int:
    if n < 1:
        raise ValueError(f"pair count must be >= 1, got {n}")
    if policy.drop_one_when_even and n % 2 == 0:
        return n - 1
    return n


def fully_successful_fidelity(s0: BellDiagonalState, n: int) -> float:
    """Reference curve: fidelity after the rounds of an all-success run,
    i.e. n halving down to a single pair."""
    if n < 1:
        raise ValueError(f"pair count must be >= 1, got {n}")
    k = 0
    while n > 1:
        n //= 2
        k += 1
    return iterate_map(s0, k).a


def run_trajectory(
    n: int,
    s0: BellDiagonalState,
    policy: IterationPolicy,
    rng: np.random.Generator,
) -> float:
    """One random realization of the iteration; returns the output fidelity."""
    n = _effective_n(n, policy)
    fid, psucc = _depth_tables(s0, n)
    out = np.empty(1)
    failed = np.zeros(1, dtype=np.uint8)
    _kernels.simulate(
        rng.random((1, n)),
        n,
        psucc,
        fid,
        policy.backup_enabled,
        policy.stop_at_two_without_backup,
        policy.failure_fidelity,
        out,
        failed,
    )
    return float(out[0])


def expected_fidelity_exact(
    n: int, s0: BellDiagonalState, policy: IterationPolicy
) -> float:
    """Exact expectation of the trajectory fidelity.

    Memoized over (live count, depth, backup depth); coefficients are
    recomputed from the depth tables, never stored per node.
    """
    n = _effective_n(n, policy)
    if n > EXACT_N_CAP:
        raise ResourceCapError(
            f"exact expectation capped at n = {EXACT_N_CAP}; "
            "use expected_fidelity_mc for larger samples"
        )
    fid, psucc = _depth_tables(s0, n)

    @cache
    def value(live: int, depth: int, backup: int | None) -> float:
        if live == 0:
            return float(fid[backup]) if backup is not None else policy.failure_fidelity
        if live == 1:
            return float(fid[depth])
        if live == 2 and backup is None and policy.stop_at_two_without_backup:
            return float(fid[depth])
        if live % 2:
            if policy.backup_enabled:
                backup = depth
            live -= 1
        weights = binomial_pmf(live // 2, float(psucc[depth]))
        return sum(w * value(j, depth + 1, backup) for j, w in enumerate(weights))

    return value(n, 0, None)


def expected_fidelity_mc(
    n: int,
    s0: BellDiagonalState,
    policy: IterationPolicy,
    trials: int,
    seed: int,
    workers: int = 1,
) -> TrialStats:
    """Monte Carlo estimate over ``trials`` independent trajectories.

    Trial t consumes the t-th fixed-width block of a counter-based Philox
    stream keyed by ``seed``, so results are bit-identical for a given
    (seed, trials, n, s0, policy) regardless of worker count or execution
    order; aggregation is exact summation over the trial-ordered results.
    """
    if trials < 1:
        raise ValueError(f"trial count must be >= 1, got {trials}")
    n = _effective_n(n, policy)
    fid, psucc = _depth_tables(s0, n)
    u = np.random.Generator(np.random.Philox(key=seed)).random((trials, n))
    out = np.empty(trials)
    failed = np.zeros(trials, dtype=np.uint8)

    def run_slice(lo: int, hi: int) -> None:
        _kernels.simulate(
            u[lo:hi],
            n,
            psucc,
            fid,
            policy.backup_enabled,
            policy.stop_at_two_without_backup,
            policy.failure_fidelity,
            out[lo:hi],
            failed[lo:hi],
        )

    if workers <= 1 or trials <= _MC_CHUNK:
        run_slice(0, trials)
    else:
        bounds = list(range(0, trials, _MC_CHUNK)) + [trials]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(run_slice, lo, hi)
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            for f in futures:
                f.result()

    mean = math.fsum(out) / trials
    std_error = float(np.std(out, ddof=1)) / math.sqrt(trials) if trials > 1 else 0.0
    return TrialStats(
        trials=trials,
        mean_fidelity=mean,
        std_error=std_error,
        failure_rate=int(failed.sum()) / trials,
    )


def sweep_over_n(
    s0: BellDiagonalState, n_range: range | list[int], policy: IterationPolicy
) -> list[tuple[int, float, float]]:
    """Exact expectation and all-success reference for each pair count."""
    return [
        (n, expected_fidelity_exact(n, s0, policy), fully_successful_fidelity(s0, n))
        for n in n_range
    ]


def sweep_over_fidelity(
    n: int, a_range: list[float], policy: IterationPolicy
) -> list[tuple[float, float, float]]:
    """Exact expectation over Werner inputs, with the ratio to the input fidelity."""
    from .bell_core import werner

    rows = []
    for a0 in a_range:
        f = expected_fidelity_exact(n, werner(a0), policy)
        rows.append((a0, f, f / a0))
    return rows
