"""Brute-force enumeration oracles used only by the tests.

These deliberately avoid the production shortcuts: no binomial weights, no
memoization.  Every per-round success/failure pattern is enumerated as an
explicit bitstring and weighted by its product probability, so agreement
with the dynamic program is a genuine cross-check.
"""

from __future__ import annotations

import itertools

from belldistil.bell_core import BellDiagonalState, iterate_map, success_probability
from belldistil.iterative_scheme import IterationPolicy


def pattern_pmf(n: int, s: BellDiagonalState) -> list[float]:
    """Survivor distribution of one round on n pairs by enumerating all
    2**(n/2) success/failure patterns."""
    assert n >= 2 and n % 2 == 0
    p = success_probability(s)
    pmf = [0.0] * (n // 2 + 1)
    for pattern in itertools.product((0, 1), repeat=n // 2):
        weight = 1.0
        for bit in pattern:
            weight *= p if bit else 1.0 - p
        pmf[sum(pattern)] += weight
    return pmf


def enumerate_expectation(
    n: int, s0: BellDiagonalState, policy: IterationPolicy
) -> tuple[float, int]:
    """Expectation of the iterative scheme's output fidelity, by exhaustive
    enumeration of every per-round outcome pattern.

    Returns (expectation, deepest round index reached by any pattern).
    """
    if n < 1:
        raise ValueError(n)
    if policy.drop_one_when_even and n % 2 == 0:
        n -= 1
    max_depth = 0

    def rec(live: int, depth: int, backup: int | None, prob: float) -> float:
        nonlocal max_depth
        max_depth = max(max_depth, depth)
        if live == 0:
            if backup is not None:
                return prob * iterate_map(s0, backup).a
            return prob * policy.failure_fidelity
        if live == 1:
            return prob * iterate_map(s0, depth).a
        if live == 2 and backup is None and policy.stop_at_two_without_backup:
            return prob * iterate_map(s0, depth).a
        if live % 2:
            if policy.backup_enabled:
                backup = depth
            live -= 1
        p = success_probability(iterate_map(s0, depth))
        total = 0.0
        for pattern in itertools.product((0, 1), repeat=live // 2):
            weight = prob
            for bit in pattern:
                weight *= p if bit else 1.0 - p
            total += rec(sum(pattern), depth + 1, backup, weight)
        return total

    return rec(n, 0, None, 1.0), max_depth
