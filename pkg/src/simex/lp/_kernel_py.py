"""Pure-numpy pivot loop for the revised primal simplex.

Semantics must stay in lockstep with the compiled kernel in ``_kernel_c.pyx``:
both use Dantzig pricing with first-index tie-breaks, switch to Bland's rule
after a degeneracy stall, pick the leaving row by smallest basic index among
ratio-test ties, and refactorize the basis inverse on a fixed pivot cadence.
Tolerances and tie-breaks match, so the backends agree to solver tolerance
(pivot sequences can differ only on exact floating-point ties).
"""

import numpy as np

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITER_LIMIT = 2
STATUS_NUMERICAL = 3

BACKEND_NAME = "python"


def run_phase(A, b, c, basis, Binv, xB, eligible, max_iter, refactor_every, tol, stall_limit):
    """Run primal simplex pivots in place until optimality of ``c``.

    A           m x n constraint matrix (Fortran order), A z = b, z >= 0
    b           right-hand side, b >= 0
    c           cost vector of length n
    basis       length-m basic index array, updated in place
    Binv        m x m basis inverse, updated in place
    xB          basic solution values, updated in place
    eligible    boolean mask of columns allowed to enter
    stall_limit consecutive degenerate pivots before Bland's rule kicks in

    Returns (status, iterations).
    """
    m, n = A.shape
    in_basis = np.zeros(n, dtype=bool)
    in_basis[basis] = True
    bland = False
    stall = 0
    iters = 0

    while iters < max_iter:
        iters += 1

        y = c[basis] @ Binv
        d = c - y @ A
        candidates = eligible & ~in_basis & (d < -tol)
        if not candidates.any():
            return STATUS_OPTIMAL, iters

        if bland:
            enter = int(np.argmax(candidates))  # first True = smallest index
        else:
            dm = np.where(candidates, d, np.inf)
            enter = int(np.argmin(dm))

        w = Binv @ A[:, enter]
        pos = w > tol
        if not pos.any():
            return STATUS_UNBOUNDED, iters

        ratios = np.where(pos, np.maximum(xB, 0.0) / np.where(pos, w, 1.0), np.inf)
        theta = ratios.min()
        near = ratios <= theta + 1e-12 * (1.0 + abs(theta))
        tied = np.where(near & pos)[0]
        leave = int(tied[np.argmin(basis[tied])])

        if theta <= 1e-12:
            stall += 1
            if stall >= stall_limit:
                bland = True
        else:
            stall = 0
            bland = False

        xB -= theta * w
        xB[leave] = theta
        np.clip(xB, 0.0, None, out=xB)

        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter

        piv = w[leave]
        Binv[leave, :] /= piv
        scale = w.copy()
        scale[leave] = 0.0
        Binv -= np.outer(scale, Binv[leave, :])

        if iters % refactor_every == 0:
            try:
                Binv[:, :] = np.linalg.inv(A[:, basis])
            except np.linalg.LinAlgError:
                return STATUS_NUMERICAL, iters
            xB[:] = Binv @ b
            np.clip(xB, 0.0, None, out=xB)

    return STATUS_ITER_LIMIT, iters
