"""Pure-Python trajectory kernel.

Reference implementation of the per-run iteration loop.  The compiled twin
in ``_trajectory_cy`` implements byte-for-byte identical semantics; both
consume pre-generated uniform variates so that results are independent of
execution order and thread count.  Uniform consumption per trajectory is
bounded by the initial pair count (each round uses floor(n/2) variates and
survivors at most halve).
"""

from __future__ import annotations

import numpy as np

IMPL = "python"


def _one(
    row: np.ndarray,
    n: int,
    psucc: np.ndarray,
    fid: np.ndarray,
    backup_enabled: bool,
    stop_at_two: bool,
    failure_fidelity: float,
) -> tuple[float, bool]:
    """Run one trajectory on ``n`` pairs, consuming uniforms from ``row``."""
    off = 0
    depth = 0
    backup = -1  # iteration depth of the stored backup pair, -1 when absent
    while True:
        if n == 0:
            if backup >= 0:
                return float(fid[backup]), False
            return failure_fidelity, True
        if n == 1:
            return float(fid[depth]), False
        if n == 2 and backup < 0 and stop_at_two:
            return float(fid[depth]), False
        if n % 2:
            if backup_enabled:
                backup = depth  # deeper pair replaces any older backup
            n -= 1
        h = n // 2
        p = psucc[depth]
        n = int(np.count_nonzero(row[off : off + h] < p))
        off += h
        depth += 1


def simulate(
    u: np.ndarray,
    n0: int,
    psucc: np.ndarray,
    fid: np.ndarray,
    backup_enabled: bool,
    stop_at_two: bool,
    failure_fidelity: float,
    out: np.ndarray,
    failed: np.ndarray,
) -> None:
    """Fill ``out``/``failed`` with one trajectory per row of ``u``."""
    for t in range(u.shape[0]):
        value, fail = _one(
            u[t], n0, psucc, fid, backup_enabled, stop_at_two, failure_fidelity
        )
        out[t] = value
        failed[t] = fail
