"""Renyi divergences and the Renyi channel mutual information.

Divergences cover every order in [0, inf], with the order-0, order-1 (KL)
and order-inf cases as explicit code paths rather than limits of the finite
formula. The channel mutual information

    I_alpha(W) = sup_p inf_q D_alpha(p.W || p x q)

is computed by alternating tilted-output / exponentiated-weight updates
(the order-alpha generalization of Blahut-Arimoto) with multi-start, plus a
golden-section scan for binary inputs; the order-0 and order-inf values are
small linear programs. Every returned value is certified by re-evaluating
the inner infimum (closed form) at the returned input distribution.

All quantities are in nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._numeric import golden_max, logsumexp
from .core import AlphabetMismatchError, Pmf
from . import lp

_NEG_INF = -math.inf


@dataclass(frozen=True)
class RenyiOrder:
    """Order alpha in [0, inf]; 1 and inf select dedicated code paths."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 0.0:
            raise ValueError("Renyi order must be a real in [0, inf]")
        object.__setattr__(self, "value", v)

    @property
    def is_zero(self):
        return self.value == 0.0

    @property
    def is_one(self):
        return self.value == 1.0

    @property
    def is_infinite(self):
        return math.isinf(self.value)


def _order(alpha):
    return alpha.value if isinstance(alpha, RenyiOrder) else RenyiOrder(alpha).value


@dataclass(frozen=True)
class CapacityResult:
    alpha: RenyiOrder
    value: float
    optimal_input: Pmf
    optimal_reference: Pmf
    iterations: int
    residual: float        # final fixed-point movement (or LP residual)
    converged: bool = True


def _log(arr):
    out = np.full(arr.shape, _NEG_INF)
    mask = arr > 0.0
    out[mask] = np.log(arr[mask])
    return out


def renyi_divergence(p, q, alpha):
    """D_alpha(p || q) in nats, for alpha in [0, inf]."""
    if p.labels != q.labels:
        raise AlphabetMismatchError("pmfs live on different alphabets")
    a = _order(alpha)
    pp, qq = p.probs, q.probs
    supp = pp > 0.0

    if a == 0.0:
        mass = qq[supp].sum()
        return math.inf if mass <= 0.0 else float(-math.log(mass))
    if a == 1.0:
        if np.any(supp & (qq <= 0.0)):
            return math.inf
        sel = supp
        return float(np.sum(pp[sel] * (np.log(pp[sel]) - np.log(qq[sel]))))
    if math.isinf(a):
        if np.any(supp & (qq <= 0.0)):
            return math.inf
        return float(np.max(np.log(pp[supp]) - np.log(qq[supp])))

    if a > 1.0 and np.any(supp & (qq <= 0.0)):
        return math.inf
    mask = supp & (qq > 0.0)
    if not mask.any():
        return math.inf
    terms = a * np.log(pp[mask]) + (1.0 - a) * np.log(qq[mask])
    return float(logsumexp(terms) / (a - 1.0))


def kl_divergence(p, q):
    """Kullback-Leibler divergence in nats (order-1 Renyi divergence)."""
    return renyi_divergence(p, q, 1.0)


def _mi_raw(rows, px):
    joint = px[:, None] * rows
    py = px @ rows
    xs, ys = np.nonzero(joint > 0.0)
    return float(np.sum(joint[xs, ys] * (np.log(rows[xs, ys]) - np.log(py[ys]))))


def mutual_information(p, W):
    """I(X;Y) in nats for input pmf ``p`` on channel ``W``."""
    if p.labels != W.input_labels:
        raise AlphabetMismatchError("input pmf does not live on the channel input alphabet")
    return _mi_raw(W.rows, p.probs)


def sibson_reference(p, W, alpha):
    """Inner infimum inf_q D_alpha(p.W || p x q) and its minimizing reference.

    Closed form: the order-alpha tilted output distribution for finite
    positive orders, the output distribution at order 1, a point mass on the
    most-covered output at order 0, and the normalized column maxima over
    the support of ``p`` at order inf.
    """
    if p.labels != W.input_labels:
        raise AlphabetMismatchError("input pmf does not live on the channel input alphabet")
    a = _order(alpha)
    px = p.probs
    supp = px > 0.0
    rows = W.rows

    if a == 1.0:
        value = mutual_information(p, W)
        q = px @ rows
        return value, Pmf(q, labels=W.output_labels)

    if a == 0.0:
        cover = ((rows > 0.0) * px[:, None]).sum(axis=0)
        best = int(np.argmax(cover))
        value = -math.log(cover[best]) if cover[best] > 0.0 else math.inf
        q = np.zeros(W.ny)
        q[best] = 1.0
        return float(value), Pmf(q, labels=W.output_labels)

    if math.isinf(a):
        u = rows[supp].max(axis=0)
        total = u.sum()
        value = float(math.log(total))
        return value, Pmf(u / total, labels=W.output_labels)

    # Finite alpha not in {0, 1}: column-wise tilted aggregation in log domain.
    col_logs = _tilted_col_logs(rows, px, a)
    total = logsumexp(col_logs)
    value = float(a / (a - 1.0) * total)
    q = np.exp(col_logs - total)
    return value, Pmf(q, labels=W.output_labels)


def _tilted_col_logs(rows, px, a):
    """Per-output log of (sum_x p(x) W(y|x)^a)^(1/a); -inf on unreachable columns."""
    supp = px > 0.0
    logp = np.log(px[supp])
    logw = _log(rows[supp])
    terms = logp[:, None] + a * logw
    hi = terms.max(axis=0)
    out = np.full(rows.shape[1], _NEG_INF)
    fin = np.isfinite(hi)
    if fin.any():
        block = terms[:, fin]
        h = hi[fin]
        out[fin] = (h + np.log(np.exp(block - h).sum(axis=0))) / a
    return out


def sibson_inner_inf(p, W, alpha):
    """Value of the inner infimum only; see :func:`sibson_reference`."""
    return sibson_reference(p, W, alpha)[0]


def _sibson_value_raw(rows, px, a):
    """Inner-infimum value on raw arrays for finite a not in {0, 1}."""
    col_logs = _tilted_col_logs(rows, px, a)
    return float(a / (a - 1.0) * logsumexp(col_logs))


def _row_divergences(W, logq, a):
    """D_a(W(.|x) || q) for every input row, finite positive a != 1.

    Orders above 1 blow up on a support leak; orders below 1 only do when the
    row shares no support with q at all.
    """
    with np.errstate(invalid="ignore"):
        raw = a * _log(W.rows) + (1.0 - a) * logq[None, :]
    terms = np.where(W.rows > 0.0, raw, _NEG_INF)
    out = np.empty(W.nx)
    for x in range(W.nx):
        hi = terms[x].max()
        if not np.isfinite(hi):
            out[x] = math.inf
        else:
            out[x] = (hi + math.log(np.exp(terms[x] - hi).sum())) / (a - 1.0)
    return out


def _kl_rows(W, q):
    logq = _log(q)
    with np.errstate(invalid="ignore"):
        contrib = np.where(W.rows > 0.0, W.rows * (_log(W.rows) - logq[None, :]), 0.0)
    return contrib.sum(axis=1)


def _fixed_point(W, a, start, tol, max_iter):
    """Alternating update from one start; returns (p, movement, iterations)."""
    px = start.copy()
    move = math.inf
    for it in range(1, max_iter + 1):
        if a == 1.0:
            q = px @ W.rows
            gains = _kl_rows(W, q)
        else:
            logq = _tilted_col_logs(W.rows, px, a)
            logq = logq - logsumexp(logq)
            gains = a * _row_divergences(W, logq, a)
        gains = np.where(np.isfinite(gains), gains, _NEG_INF)
        lognew = _log(px) + gains
        lognew -= logsumexp(lognew)
        new = np.exp(lognew)
        new /= new.sum()
        move = float(np.abs(new - px).max())
        px = new
        if move < tol:
            return px, move, it
    return px, move, max_iter


def _max_info_lp(W):
    """LP for the zero-distortion threshold: minimal total mass of an envelope
    dominating every channel row. Returns (log value, reference pmf, iters)."""
    colmax = W.rows.max(axis=0)
    ny = W.ny
    # min sum(u) s.t. u(y) - w(y) = colmax(y), u, w >= 0
    A = np.hstack([np.eye(ny), -np.eye(ny)])
    b = colmax.copy()
    c = np.concatenate([np.ones(ny), np.zeros(ny)])
    res = lp.solve_lp(A, b, c)
    if res.status != "optimal":
        raise RuntimeError(f"max-information LP failed: {res.status}")
    u = res.x[:ny]
    total = float(u.sum())
    return math.log(total), Pmf(u / total, labels=W.output_labels), res.iterations


def max_information(W):
    """Threshold information: log of the minimal envelope mass covering all rows.

    The simulation distortion of a channel is exactly zero once the message
    budget reaches exp of this value; it also equals the order-inf channel
    mutual information.
    """
    value, _, _ = _max_info_lp(W)
    return float(value)


def _order0_capacity_lp(W):
    """LP for the order-0 capacity: minimize the worst-case support coverage."""
    B = (W.rows > 0.0).astype(float)
    nx, ny = W.nx, W.ny
    # variables: p (nx), t, slack (ny); rows: coverage per y, then sum(p) = 1
    A = np.zeros((ny + 1, nx + 1 + ny))
    b = np.zeros(ny + 1)
    for y in range(ny):
        A[y, :nx] = B[:, y]
        A[y, nx] = -1.0
        A[y, nx + 1 + y] = 1.0
    A[ny, :nx] = 1.0
    b[ny] = 1.0
    c = np.zeros(nx + 1 + ny)
    c[nx] = 1.0
    res = lp.solve_lp(A, b, c)
    if res.status != "optimal":
        raise RuntimeError(f"order-0 capacity LP failed: {res.status}")
    p = np.clip(res.x[:nx], 0.0, None)
    return Pmf(p / p.sum(), labels=W.input_labels), res.iterations


def renyi_capacity(W, alpha, tol=1e-9, max_iter=2000, n_random_starts=8, seed=20240):
    """Channel mutual information of the given order, with optimizer certificate.

    The returned value is always re-certified: it equals the closed-form inner
    infimum evaluated at ``optimal_input`` (so it is a true lower bound on the
    supremum even if the fixed point stopped early). ``converged`` reports
    whether the best fixed-point run moved less than ``tol`` at its last step.
    """
    a = _order(alpha)
    order = RenyiOrder(a)

    if math.isinf(a):
        value, qref, iters = _max_info_lp(W)
        p = Pmf(np.full(W.nx, 1.0 / W.nx), labels=W.input_labels)
        return CapacityResult(order, float(value), p, qref, iters, 0.0, True)

    if a == 0.0:
        p, iters = _order0_capacity_lp(W)
        value, qref = sibson_reference(p, W, 0.0)
        return CapacityResult(order, float(value), p, qref, iters, 0.0, True)

    nx = W.nx
    rng = np.random.default_rng(seed)
    starts = [np.full(nx, 1.0 / nx)]
    for _ in range(n_random_starts):
        g = rng.gamma(1.0, 1.0, size=nx) + 1e-3
        starts.append(g / g.sum())

    if a == 1.0:
        def value_at(px):
            return _mi_raw(W.rows, px)
    else:
        def value_at(px):
            return _sibson_value_raw(W.rows, px, a)

    # Uniform start gets the full budget; random starts are a coarse sweep of
    # the basins and only the winner is polished to the requested tolerance.
    best_p, best_val = None, _NEG_INF
    best_move, total_iters, best_conv = math.inf, 0, False
    for k, start in enumerate(starts):
        if k == 0:
            px, move, it = _fixed_point(W, a, start, tol, max_iter)
        else:
            px, move, it = _fixed_point(W, a, start, 1e-6, min(300, max_iter))
        total_iters += it
        val = value_at(px)
        if val > best_val:
            best_val, best_p, best_move = val, px, move
            best_conv = move < tol
    if not best_conv:
        px, move, it = _fixed_point(W, a, best_p, tol, max_iter)
        total_iters += it
        val = value_at(px)
        if val >= best_val:
            best_val, best_p, best_move = val, px, move
            best_conv = move < tol

    if nx == 2:
        def profile(t):
            return value_at(np.array([t, 1.0 - t]))

        t_star, g_val = golden_max(profile, 0.0, 1.0)
        if g_val > best_val:
            best_val = g_val
            best_p = np.array([t_star, 1.0 - t_star])
            best_move, best_conv = 0.0, True

    p = Pmf(best_p, labels=W.input_labels)
    value, qref = sibson_reference(p, W, a)
    return CapacityResult(order, float(value), p, qref, total_iters, best_move, best_conv)
