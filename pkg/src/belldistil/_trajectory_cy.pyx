# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory kernel.

Semantics are identical to ``_trajectory_py.simulate``; see that module for
the reference loop.  The inner loop releases the GIL, so callers may split
the trial axis across threads.
"""

IMPL = "compiled"


cdef inline double _one(const double *row, Py_ssize_t n,
                        const double *psucc, const double *fid,
                        bint backup_enabled, bint stop_at_two,
                        double failure_fidelity,
                        unsigned char *failed) noexcept nogil:
    cdef Py_ssize_t off = 0, depth = 0, backup = -1, h, j, k
    cdef double p
    failed[0] = 0
    while True:
        if n == 0:
            if backup >= 0:
                return fid[backup]
            failed[0] = 1
            return failure_fidelity
        if n == 1:
            return fid[depth]
        if n == 2 and backup < 0 and stop_at_two:
            return fid[depth]
        if n % 2:
            if backup_enabled:
                backup = depth
            n -= 1
        h = n // 2
        p = psucc[depth]
        j = 0
        for k in range(h):
            if row[off + k] < p:
                j += 1
        off += h
        n = j
        depth += 1


def simulate(const double[:, ::1] u, Py_ssize_t n0,
             const double[::1] psucc, const double[::1] fid,
             bint backup_enabled, bint stop_at_two, double failure_fidelity,
             double[::1] out, unsigned char[::1] failed):
    """Fill ``out``/``failed`` with one trajectory per row of ``u``."""
    cdef Py_ssize_t t, trials = u.shape[0]
    with nogil:
        for t in range(trials):
            out[t] = _one(&u[t, 0], n0, &psucc[0], &fid[0],
                          backup_enabled, stop_at_two, failure_fidelity,
                          &failed[t])
