"""Two-phase dense revised primal simplex for equality-form LPs.

Solves   min c.z   s.t.  A z = b,  z >= 0.

Phase 1 starts from an all-artificial basis and minimizes the sum of the
artificials; phase 2 re-prices with the true costs and forbids artificials
from re-entering. The pivot loop itself lives in a swappable kernel
(compiled or pure numpy, see ``simex.lp``). The basis inverse is rebuilt
from scratch every ``refactor_every`` pivots to keep roundoff in check.
"""

from dataclasses import dataclass

import numpy as np

from . import kernel

_TOL = 1e-9
_PHASE1_TOL = 1e-7


class LpError(Exception):
    """Malformed LP input."""


@dataclass(frozen=True)
class LpResult:
    status: str              # optimal | infeasible | unbounded | iteration-limit | numerical-failure
    x: np.ndarray            # primal solution (length n), zeros unless optimal
    objective: float
    dual: np.ndarray         # row multipliers for the (sign-normalized) system
    iterations: int
    residual: float          # max |A x - b| at the reported solution
    dual_gap: float          # |c.x - y.b| at the reported solution
    backend: str


def solve_lp(A, b, c, max_iter=None, refactor_every=50, stall_limit=20):
    """Solve min c.z s.t. A z = b, z >= 0 and return an LpResult."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or c.ndim != 1:
        raise LpError("A must be a matrix, b and c vectors")
    m, n = A.shape
    if b.shape[0] != m or c.shape[0] != n:
        raise LpError("inconsistent LP dimensions")

    # Sign-normalize so b >= 0, then append artificial columns.
    A = A.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0
    Af = np.asfortranarray(np.hstack([A, np.eye(m)]))
    ntot = n + m
    if max_iter is None:
        max_iter = 50 * (m + ntot) + 1000

    basis = np.arange(n, ntot, dtype=np.int64)
    Binv = np.eye(m)
    xB = b.copy()

    c1 = np.zeros(ntot)
    c1[n:] = 1.0
    eligible = np.ones(ntot, dtype=bool)
    status, it1 = kernel.run_phase(
        Af, b, c1, basis, Binv, xB, eligible, max_iter, refactor_every, _TOL, stall_limit
    )
    backend = kernel.BACKEND_NAME
    if status != kernel.STATUS_OPTIMAL:
        return _failed(_kernel_status(status), n, m, it1, backend)
    phase1_obj = float(xB[basis >= n].sum())
    if phase1_obj > _PHASE1_TOL:
        return _failed("infeasible", n, m, it1, backend)

    _drive_out_artificials(Af, n, basis, Binv, xB)

    c2 = np.zeros(ntot)
    c2[:n] = c
    eligible = np.zeros(ntot, dtype=bool)
    eligible[:n] = True
    status, it2 = kernel.run_phase(
        Af, b, c2, basis, Binv, xB, eligible, max_iter, refactor_every, _TOL, stall_limit
    )
    iters = it1 + it2
    if status != kernel.STATUS_OPTIMAL:
        return _failed(_kernel_status(status), n, m, iters, backend)

    x = np.zeros(ntot)
    x[basis] = xB
    if x[n:].max(initial=0.0) > _PHASE1_TOL:
        # A lingering artificial climbed away from zero: numerical trouble.
        return _failed("numerical-failure", n, m, iters, backend)
    x = x[:n]
    y = c2[basis] @ Binv
    objective = float(c @ x)
    residual = float(np.abs(Af[:, :n] @ x - b).max())
    dual_gap = abs(objective - float(y @ b))
    return LpResult("optimal", x, objective, y, iters, residual, dual_gap, backend)


def _drive_out_artificials(Af, n, basis, Binv, xB):
    """Pivot zero-level artificial variables out of the basis where possible."""
    m = Binv.shape[0]
    for r in range(m):
        if basis[r] < n:
            continue
        row = Binv[r, :] @ Af[:, :n]
        cands = np.where(np.abs(row) > 1e-7)[0]
        cands = [j for j in cands if j not in set(basis.tolist())]
        if not cands:
            continue  # redundant row: artificial stays basic at level zero
        enter = int(cands[0])
        w = Binv @ Af[:, enter]
        piv = w[r]
        Binv[r, :] /= piv
        scale = w.copy()
        scale[r] = 0.0
        Binv -= np.outer(scale, Binv[r, :])
        theta = xB[r] / piv if piv != 0 else 0.0
        xB -= theta * w
        xB[r] = theta
        np.clip(xB, 0.0, None, out=xB)
        basis[r] = enter


def _kernel_status(code):
    return {
        kernel.STATUS_UNBOUNDED: "unbounded",
        kernel.STATUS_ITER_LIMIT: "iteration-limit",
        kernel.STATUS_NUMERICAL: "numerical-failure",
    }.get(code, "numerical-failure")


def _failed(status, n, m, iters, backend):
    return LpResult(status, np.zeros(n), float("nan"), np.zeros(m), iters, float("inf"), float("inf"), backend)
