# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pivot loop for the revised primal simplex.

Mirror of ``_kernel_py``: same pricing rules, tie-breaks, tolerances and
refactorization cadence, so both backends agree to solver tolerance.
"""

import numpy as np

cimport numpy as cnp

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITER_LIMIT = 2
STATUS_NUMERICAL = 3

BACKEND_NAME = "c"


def run_phase(A, b, c, basis, Binv, xB, eligible, max_iter, refactor_every, tol, stall_limit):
    """In-place simplex pivots; see the numpy kernel for the contract."""
    cdef double[::1, :] A_v = A
    cdef double[::1] b_v = np.ascontiguousarray(b)
    cdef double[::1] c_v = np.ascontiguousarray(c)
    cdef cnp.int64_t[::1] basis_v = basis
    cdef double[:, ::1] Binv_v = Binv
    cdef double[::1] xB_v = xB
    cdef cnp.uint8_t[::1] elig_v = np.asarray(eligible).view(np.uint8)

    cdef Py_ssize_t m = A_v.shape[0]
    cdef Py_ssize_t n = A_v.shape[1]
    cdef Py_ssize_t i, j, r, enter, leave
    cdef int iters = 0, stall = 0, bland = 0
    cdef int maxit = max_iter, refevery = refactor_every, stall_lim = stall_limit
    cdef double eps = tol
    cdef double dj, best, theta, ratio, tie_cut, piv, s
    cdef cnp.int64_t best_basis

    cdef cnp.uint8_t[::1] in_basis = np.zeros(n, dtype=np.uint8)
    for i in range(m):
        in_basis[basis_v[i]] = 1

    cdef double[::1] y = np.empty(m)
    cdef double[::1] w = np.empty(m)

    while iters < maxit:
        iters += 1

        # y = c_B . Binv
        for j in range(m):
            s = 0.0
            for i in range(m):
                s += c_v[basis_v[i]] * Binv_v[i, j]
            y[j] = s

        # entering column: Dantzig (most negative reduced cost) or Bland
        enter = -1
        best = -eps
        for j in range(n):
            if not elig_v[j] or in_basis[j]:
                continue
            dj = c_v[j]
            for i in range(m):
                dj -= y[i] * A_v[i, j]
            if dj < -eps:
                if bland:
                    enter = j
                    break
                if dj < best:
                    best = dj
                    enter = j
        if enter < 0:
            return STATUS_OPTIMAL, iters

        # w = Binv . A[:, enter]
        for i in range(m):
            s = 0.0
            for j in range(m):
                s += Binv_v[i, j] * A_v[j, enter]
            w[i] = s

        # ratio test, smallest basic index among ties
        theta = -1.0
        for i in range(m):
            if w[i] > eps:
                ratio = (xB_v[i] if xB_v[i] > 0.0 else 0.0) / w[i]
                if theta < 0.0 or ratio < theta:
                    theta = ratio
        if theta < 0.0:
            return STATUS_UNBOUNDED, iters
        tie_cut = theta + 1e-12 * (1.0 + (theta if theta >= 0 else -theta))
        leave = -1
        best_basis = 0
        for i in range(m):
            if w[i] > eps:
                ratio = (xB_v[i] if xB_v[i] > 0.0 else 0.0) / w[i]
                if ratio <= tie_cut:
                    if leave < 0 or basis_v[i] < best_basis:
                        leave = i
                        best_basis = basis_v[i]

        if theta <= 1e-12:
            stall += 1
            if stall >= stall_lim:
                bland = 1
        else:
            stall = 0
            bland = 0

        for i in range(m):
            xB_v[i] -= theta * w[i]
        xB_v[leave] = theta
        for i in range(m):
            if xB_v[i] < 0.0:
                xB_v[i] = 0.0

        in_basis[basis_v[leave]] = 0
        in_basis[enter] = 1
        basis_v[leave] = enter

        piv = w[leave]
        for j in range(m):
            Binv_v[leave, j] /= piv
        for i in range(m):
            if i == leave:
                continue
            s = w[i]
            if s != 0.0:
                for j in range(m):
                    Binv_v[i, j] -= s * Binv_v[leave, j]

        if iters % refevery == 0:
            Bmat = np.asarray(A)[:, np.asarray(basis)]
            try:
                fresh = np.linalg.inv(Bmat)
            except np.linalg.LinAlgError:
                return STATUS_NUMERICAL, iters
            Binv_np = np.asarray(Binv)
            Binv_np[:, :] = fresh
            xb_np = np.asarray(xB)
            xb_np[:] = fresh @ np.asarray(b)
            np.clip(xb_np, 0.0, None, out=xb_np)

    return STATUS_ITER_LIMIT, iters
