"""Exact non-signaling simulation distortion for a fixed message budget.

The one-shot distortion is the value of a small linear program:

    eps(M, W) = inf_q max_x sum_y (W(y|x) - M q(y))_+ ,

solved exactly by the in-repo simplex. For n-fold memoryless channels the
same program over q on Y^n collapses, by permutation symmetry, to one over
total masses per output type: the objective for an input sequence depends
only on its type, and for each (input type, conditional-count table) the
whole shell contributes a single positive-part term. Coefficients are
assembled in the log domain (class sizes via log-gamma, channel masses via
summed log-entries), so nothing astronomically large or small is formed
before the final exponentiation; every coefficient lives in [0, 1].

Each solve returns a report whose reference distribution re-certifies the
value by direct evaluation of the defining formula.
"""

import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lp
from ._numeric import floor_exp
from .core import Pmf, SizeCapError, tensor_power
from .types import TypeVector, enumerate_types, log_type_class_size

NONZERO_CAP_ENV = "SIMEX_MAX_LP_NONZEROS"
DEFAULT_NONZERO_CAP = 2_000_000
CERT_TOL = 1e-8


@dataclass(frozen=True)
class SolveReport:
    """Value + optimizer + consistency certificate for one distortion solve."""

    value: float
    status: str                      # optimal | infeasible | numerical-failure
    certificate_gap: float
    M: int
    n: int = 1
    optimal_reference: Optional[Pmf] = None       # one-shot / brute-force reference
    type_masses: Optional[np.ndarray] = None      # reduced solve: mass per output type
    output_types: Optional[tuple] = None
    iterations: int = 0
    backend: str = ""


@dataclass(frozen=True)
class ReducedInstance:
    """Coefficient table of the type-space program for an n-fold channel.

    For input type P and a compatible conditional count table V:
      log_mass   log of the total channel mass of the V-shell (<= 0)
      log_ratio  log |shell| - log |output type class|           (<= 0)
    Constraint row: u >= exp(log_mass) - M exp(log_ratio) Q_T(V).
    """

    n: int
    M: int
    input_types: tuple
    output_types: tuple
    log_mass: tuple        # per input type: float array over its tables
    log_ratio: tuple
    out_index: tuple       # per input type: int array into output_types


def message_size_for_rate(n, rate):
    """Integer message budget floor(e^{n rate}) with an exact floor."""
    return floor_exp(n, rate)


def nonzero_cap():
    raw = os.environ.get(NONZERO_CAP_ENV, "")
    try:
        return int(raw) if raw else DEFAULT_NONZERO_CAP
    except ValueError:
        return DEFAULT_NONZERO_CAP


def oneshot_objective(W, M, q):
    """Direct evaluation of max_x sum_y (W(y|x) - M q(y))_+ at a given q."""
    slack = W.rows - M * np.asarray(q, dtype=float)[None, :]
    return float(np.clip(slack, 0.0, None).sum(axis=1).max())


def eps_ns_oneshot(W, M):
    """Exact minimal distortion for simulating W with message budget M."""
    M = int(M)
    if M < 1:
        raise ValueError("message budget must be >= 1")
    nx, ny = W.nx, W.ny
    nxy = nx * ny
    # columns: q (ny) | s (nxy) | t | w (nxy) | slack (nx)
    ncols = ny + nxy + 1 + nxy + nx
    nrows = nxy + nx + 1
    A = np.zeros((nrows, ncols))
    b = np.zeros(nrows)
    for x in range(nx):
        for y in range(ny):
            r = x * ny + y
            A[r, y] = M
            A[r, ny + r] = 1.0
            A[r, ny + nxy + 1 + r] = -1.0
            b[r] = W.rows[x, y]
    for x in range(nx):
        r = nxy + x
        A[r, ny + x * ny : ny + (x + 1) * ny] = 1.0
        A[r, ny + nxy] = -1.0
        A[r, ny + 2 * nxy + 1 + x] = 1.0
    A[nxy + nx, :ny] = 1.0
    b[nxy + nx] = 1.0
    c = np.zeros(ncols)
    c[ny + nxy] = 1.0

    res = lp.solve_lp(A, b, c)
    if res.status != "optimal":
        failed = "infeasible" if res.status == "infeasible" else "numerical-failure"
        return SolveReport(
            value=math.nan, status=failed, certificate_gap=math.inf,
            M=M, iterations=res.iterations, backend=res.backend,
        )
    q = np.clip(res.x[:ny], 0.0, None)
    q = q / q.sum()
    reeval = oneshot_objective(W, M, q)
    gap = max(abs(res.objective - reeval), res.dual_gap, res.residual)
    status = "optimal" if gap <= CERT_TOL else "numerical-failure"
    return SolveReport(
        value=float(min(1.0, max(0.0, reeval))), status=status, certificate_gap=float(gap),
        M=M, optimal_reference=Pmf(q, labels=W.output_labels),
        iterations=res.iterations, backend=res.backend,
    )


def eps_ns_iid_bruteforce(W, n, M, max_entries=10_000_000):
    """Oracle: materialize the n-fold channel and solve the one-shot program."""
    big = tensor_power(W, n, max_entries=max_entries)
    rep = eps_ns_oneshot(big, M)
    return SolveReport(
        value=rep.value, status=rep.status, certificate_gap=rep.certificate_gap,
        M=rep.M, n=n, optimal_reference=rep.optimal_reference,
        iterations=rep.iterations, backend=rep.backend,
    )


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _row_options(W, x, t_x):
    """Ways to spread t_x uses of input x over the outputs W can reach.

    Yields (log multinomial, log channel mass, full-width count row); counts
    outside the support of W(.|x) are never generated since their shells
    carry zero mass.
    """
    ny = W.ny
    if t_x == 0:
        return [(0.0, 0.0, np.zeros(ny, dtype=np.int64))]
    supp = np.flatnonzero(W.rows[x] > 0.0)
    logw = np.log(W.rows[x, supp])
    base = math.lgamma(t_x + 1)
    out = []
    for combo in _compositions(t_x, supp.size):
        row = np.zeros(ny, dtype=np.int64)
        log_mult = base
        log_mass = 0.0
        for k, cnt in enumerate(combo):
            row[supp[k]] = cnt
            log_mult -= math.lgamma(cnt + 1)
            log_mass += cnt * logw[k]
        out.append((log_mult, log_mass, row))
    return out


def build_reduced_instance(W, n, M, cap=None):
    """Assemble the type-space coefficient table for the n-fold program."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    M = int(M)
    if M < 1:
        raise ValueError("message budget must be >= 1")
    cap = nonzero_cap() if cap is None else cap

    input_types = enumerate_types(W.nx, n)
    row_opts_by_x = {}
    # predicted table size: product of per-row option counts, summed over types
    total_rows = 0
    for tv in input_types:
        size = 1
        for x, t_x in enumerate(tv.counts):
            if t_x == 0:
                continue
            supp = int((W.rows[x] > 0.0).sum())
            size *= math.comb(t_x + supp - 1, t_x)
        total_rows += size
    est_nonzeros = 4 * total_rows + 2 * len(input_types) + total_rows
    if est_nonzeros > cap:
        raise SizeCapError(
            f"reduced program needs ~{est_nonzeros} nonzeros, cap is {cap} "
            f"(override via {NONZERO_CAP_ENV})"
        )

    out_type_index = {}
    output_types = []
    log_mass_all, log_ratio_all, out_idx_all = [], [], []
    log_outclass_cache = {}

    for tv in input_types:
        partial = [(0.0, 0.0, np.zeros(W.ny, dtype=np.int64))]
        for x, t_x in enumerate(tv.counts):
            opts = row_opts_by_x.get((x, t_x))
            if opts is None:
                opts = _row_options(W, x, t_x)
                row_opts_by_x[(x, t_x)] = opts
            if len(opts) == 1 and t_x == 0:
                continue
            partial = [
                (ls + lm, lw + lmass, oc + row)
                for (ls, lw, oc) in partial
                for (lm, lmass, row) in opts
            ]
        masses = np.empty(len(partial))
        ratios = np.empty(len(partial))
        oidx = np.empty(len(partial), dtype=np.int64)
        for k, (log_shell, log_w, out_counts) in enumerate(partial):
            key = tuple(int(v) for v in out_counts)
            idx = out_type_index.get(key)
            if idx is None:
                idx = len(output_types)
                out_type_index[key] = idx
                output_types.append(TypeVector(key))
                log_outclass_cache[idx] = log_type_class_size(output_types[idx])
            masses[k] = log_shell + log_w
            ratios[k] = log_shell - log_outclass_cache[idx]
            oidx[k] = idx
        log_mass_all.append(masses)
        log_ratio_all.append(ratios)
        out_idx_all.append(oidx)

    return ReducedInstance(
        n=n, M=M,
        input_types=tuple(input_types), output_types=tuple(output_types),
        log_mass=tuple(log_mass_all), log_ratio=tuple(log_ratio_all),
        out_index=tuple(out_idx_all),
    )


def reduced_objective(instance, masses):
    """Direct evaluation of the type-space objective at output-type masses."""
    Q = np.asarray(masses, dtype=float)
    worst = 0.0
    for a_log, r_log, oidx in zip(instance.log_mass, instance.log_ratio, instance.out_index):
        vals = np.exp(a_log) - instance.M * np.exp(r_log) * Q[oidx]
        worst = max(worst, float(np.clip(vals, 0.0, None).sum()))
    return worst


def eps_ns_iid(W, n, M, cap=None):
    """Exact distortion for the n-fold channel via the symmetry-reduced program."""
    inst = build_reduced_instance(W, n, M, cap=cap)
    nT = len(inst.output_types)
    nP = len(inst.input_types)
    sizes = [arr.size for arr in inst.log_mass]
    npv = int(sum(sizes))

    # columns: Q (nT) | u (npv) | t | w (npv) | slack (nP)
    ncols = nT + npv + 1 + npv + nP
    nrows = npv + nP + 1
    A = np.zeros((nrows, ncols))
    b = np.zeros(nrows)
    row = 0
    offset = 0
    for p in range(nP):
        a_log, r_log, oidx = inst.log_mass[p], inst.log_ratio[p], inst.out_index[p]
        for k in range(a_log.size):
            A[row, oidx[k]] = inst.M * math.exp(r_log[k])
            A[row, nT + offset + k] = 1.0
            A[row, nT + npv + 1 + offset + k] = -1.0
            b[row] = math.exp(a_log[k])
            row += 1
        offset += a_log.size
    offset = 0
    for p in range(nP):
        r = npv + p
        A[r, nT + offset : nT + offset + sizes[p]] = 1.0
        A[r, nT + npv] = -1.0
        A[r, nT + 2 * npv + 1 + p] = 1.0
        offset += sizes[p]
    A[npv + nP, :nT] = 1.0
    b[npv + nP] = 1.0
    c = np.zeros(ncols)
    c[nT + npv] = 1.0

    res = lp.solve_lp(A, b, c)
    if res.status != "optimal":
        failed = "infeasible" if res.status == "infeasible" else "numerical-failure"
        return SolveReport(
            value=math.nan, status=failed, certificate_gap=math.inf,
            M=inst.M, n=n, iterations=res.iterations, backend=res.backend,
        )
    Q = np.clip(res.x[:nT], 0.0, None)
    Q = Q / Q.sum()
    reeval = reduced_objective(inst, Q)
    gap = max(abs(res.objective - reeval), res.dual_gap, res.residual)
    status = "optimal" if gap <= CERT_TOL else "numerical-failure"
    return SolveReport(
        value=float(min(1.0, max(0.0, reeval))), status=status, certificate_gap=float(gap),
        M=inst.M, n=n, type_masses=Q, output_types=inst.output_types,
        iterations=res.iterations, backend=res.backend,
    )
