"""Verification suites: theorem-exact inequalities, oracles, regressions.

Each suite returns a list of Check rows (name, margin, passed). Margins are
the slack of the verified inequality (or the negated worst deviation for
equality checks), so a healthy run shows non-negative margins everywhere.
The CLI ``verify`` command formats these rows; the acceptance test module
asserts them.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import core, exponents, nsdist, renyi, srbounds
from . import types as tp
from ._numeric import golden_max
from .renyi import _mi_raw, _sibson_value_raw

DEFAULT_SEED = 1789


@dataclass(frozen=True)
class Check:
    name: str
    margin: float
    passed: bool
    detail: str = ""


def bsc(delta):
    return core.Channel([[1.0 - delta, delta], [delta, 1.0 - delta]])


def identity_channel(d):
    return core.Channel(np.eye(d))


def _random_channel(rng, nx, ny):
    return core.Channel(rng.dirichlet(np.full(ny, 0.8), size=nx))


def _capacity_grid_oracle(W, alpha, step=1e-4):
    """Independent route for binary-input capacity: dense scan of the input
    simplex using the closed-form inner infimum, then local refinement."""
    ts = np.arange(0.0, 1.0 + step / 2, step)
    if alpha == 1.0:
        fun = lambda t: _mi_raw(W.rows, np.array([t, 1.0 - t]))
    else:
        fun = lambda t: _sibson_value_raw(W.rows, np.array([t, 1.0 - t]), alpha)
    vals = np.array([fun(t) for t in ts])
    k = int(np.argmax(vals))
    lo, hi = ts[max(0, k - 1)], ts[min(ts.size - 1, k + 1)]
    _, refined = golden_max(fun, lo, hi)
    return max(refined, float(vals[k]))


# ---------------------------------------------------------------- criterion 1


def oracle_equivalence_suite(seed=DEFAULT_SEED):
    """Symmetry-reduced solver against the brute-force tensor oracle."""
    rng = np.random.default_rng(seed)
    channels = [_random_channel(rng, 2, 2) for _ in range(25)]
    channels += [_random_channel(rng, 2, 3) for _ in range(10)]
    t0 = time.time()
    worst = 0.0
    for W in channels:
        for n in (1, 2, 3):
            for M in (1, 2, 3, 5):
                a = nsdist.eps_ns_iid(W, n, M)
                b = nsdist.eps_ns_iid_bruteforce(W, n, M)
                worst = max(worst, abs(a.value - b.value))
    elapsed = time.time() - t0
    return [
        Check("oracle-equivalence |reduced - bruteforce|", 1e-6 - worst, worst <= 1e-6,
              f"worst gap {worst:.3g} over 420 instances"),
        Check("oracle-equivalence runtime < 60 s", 60.0 - elapsed, elapsed < 60.0,
              f"{elapsed:.1f} s"),
    ]


# ---------------------------------------------------------------- criterion 2


def identity_regression_suite():
    """Closed forms on the noiseless binary channel."""
    id2 = identity_channel(2)
    ln2 = math.log(2.0)
    checks = []

    worst = 0.0
    for n in range(1, 13):
        full = 2**n
        for M in sorted({1, max(1, full // 3), full // 2 or 1, full, full + 5}):
            got = nsdist.eps_ns_iid(id2, n, M).value
            want = max(0.0, 1.0 - M / full)
            worst = max(worst, abs(got - want))
    checks.append(Check("identity eps = (1 - M/2^n)_+", 1e-9 - worst, worst <= 1e-9,
                        f"worst |dev| {worst:.3g}, n <= 12"))

    worst = 0.0
    for n in range(1, 13):
        M = nsdist.message_size_for_rate(n, 0.3)
        eps = nsdist.eps_ns_iid(id2, n, M).value
        lhs = -math.log(1.0 - eps) / n
        rhs = ln2 - math.log(M) / n
        worst = max(worst, abs(lhs - rhs))
    checks.append(Check("identity success exponent at rate 0.3", 1e-9 - worst, worst <= 1e-9,
                        f"worst |dev| {worst:.3g}"))

    sce = exponents.sc_exponent(id2, 0.3)
    dev = abs(sce.value - (ln2 - 0.3))
    checks.append(Check("sc_exponent(id2, 0.3) = ln2 - 0.3", 1e-8 - dev, dev <= 1e-8,
                        f"got {sce.value!r}"))

    ee = exponents.error_exponent(id2, 1.0)
    ok = math.isinf(ee.value) and not ee.finite
    checks.append(Check("error_exponent(id2, 1.0) = +inf flag", 0.0 if ok else -1.0, ok,
                        f"value {ee.value!r}, finite={ee.finite}"))
    return checks


# ---------------------------------------------------------------- criterion 3


def capacity_regression_suite():
    W = bsc(0.1)
    checks = []
    worst_closed, worst_oracle = 0.0, 0.0
    for a in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0):
        got = renyi.renyi_capacity(W, a).value
        if a == 1.0:
            h = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))
        else:
            h = math.log(0.1**a + 0.9**a) / (1.0 - a)
        worst_closed = max(worst_closed, abs(got - (math.log(2.0) - h)))
        worst_oracle = max(worst_oracle, abs(got - _capacity_grid_oracle(W, a)))
    checks.append(Check("BSC capacity = ln2 - H_a(Bern(0.1))", 1e-6 - worst_closed,
                        worst_closed <= 1e-6, f"worst |dev| {worst_closed:.3g}"))
    checks.append(Check("BSC capacity vs simplex-grid oracle", 1e-6 - worst_oracle,
                        worst_oracle <= 1e-6, f"worst |dev| {worst_oracle:.3g}"))
    dev = abs(renyi.max_information(W) - math.log(1.8))
    checks.append(Check("max_information(BSC(0.1)) = ln 1.8", 1e-8 - dev, dev <= 1e-8,
                        f"|dev| {dev:.3g}"))
    return checks


# ------------------------------------------------------------- criteria 4 - 6


def _exp_or_zero(n, bound):
    return 0.0 if bound == -math.inf else math.exp(n * bound)


def ee_sandwich_rows(W, r, ns):
    """Per-blocklength sandwich of the exact distortion by the bound curves."""
    rows = []
    for n in ns:
        M = nsdist.message_size_for_rate(n, r)
        rep = nsdist.eps_ns_iid(W, n, M)
        lo = _exp_or_zero(n, exponents.ee_conv_bound(W, r, n))
        hi = _exp_or_zero(n, exponents.ee_ach_bound(W, r, n))
        rows.append((n, M, rep.value, lo, hi))
    return rows


def sce_sandwich_rows(W, r, ns):
    rows = []
    for n in ns:
        M = nsdist.message_size_for_rate(n, r)
        rep = nsdist.eps_ns_iid(W, n, M)
        lo = _exp_or_zero(n, exponents.sce_ach_bound(W, r, n))
        hi = _exp_or_zero(n, exponents.sce_conv_bound(W, r, n))
        rows.append((n, M, 1.0 - rep.value, lo, hi))
    return rows


def ee_sandwich_suite(W=None, r=0.6, ns=(4, 6, 8, 10, 12, 14)):
    W = bsc(0.1) if W is None else W
    t0 = time.time()
    rows = ee_sandwich_rows(W, r, ns)
    elapsed = time.time() - t0
    checks = []
    for n, M, eps, lo, hi in rows:
        margin = min(eps - lo, hi - eps)
        checks.append(Check(f"ee-sandwich n={n}", margin, lo - 1e-12 <= eps <= hi + 1e-12,
                            f"M={M} eps={eps:.6g} in [{lo:.3g}, {hi:.3g}]"))
    checks.append(Check("ee-sandwich runtime < 300 s", 300.0 - elapsed, elapsed < 300.0,
                        f"{elapsed:.1f} s"))
    return checks


def sce_sandwich_suite(W=None, r=0.2, ns=(6, 8, 10, 12, 14)):
    W = bsc(0.1) if W is None else W
    valid = [n for n in ns if n >= 3 * W.nx]
    checks = [
        Check(f"sce-sandwich n={n} skipped", math.inf, True,
              f"below the validity threshold n >= {3 * W.nx}")
        for n in ns if n < 3 * W.nx
    ]
    for n, M, succ, lo, hi in sce_sandwich_rows(W, r, valid):
        margin = min(succ - lo, hi - succ)
        checks.append(Check(f"sce-sandwich n={n}", margin, lo - 1e-12 <= succ <= hi + 1e-12,
                            f"M={M} 1-eps={succ:.6g} in [{lo:.3g}, {hi:.3g}]"))
    return checks


def ee_trend_suite(W=None, r=0.6, ns=(4, 6, 8, 10, 12, 14)):
    """Measured finite-n exponents stay inside the correction envelope
    assembled from the bound curves themselves."""
    W = bsc(0.1) if W is None else W
    e_limit = exponents.error_exponent(W, r).value
    checks = []
    for n in ns:
        M = nsdist.message_size_for_rate(n, r)
        eps = nsdist.eps_ns_iid(W, n, M).value
        lower = -exponents.ee_ach_bound(W, r, n)   # a_n >= this
        upper = -exponents.ee_conv_bound(W, r, n)  # a_n <= this
        if math.isinf(lower):
            # Budget at or above the zero-distortion threshold: the distortion
            # is exactly zero and the LP output is pure roundoff.
            a_n = math.inf if eps <= 1e-9 else -math.log(eps) / n
        else:
            a_n = math.inf if eps <= 0.0 else -math.log(eps) / n
        if math.isinf(e_limit):
            ok = math.isinf(a_n)
            margin = math.inf if ok else -math.inf
            detail = "distortion exactly zero: exponent and limit both infinite"
        else:
            envelope = max(e_limit - lower, upper - e_limit)
            deviation = abs(a_n - e_limit)
            ok = deviation <= envelope + 1e-12
            margin = envelope - deviation
            detail = f"|a_n - E| = {deviation:.4g}, envelope {envelope:.4g}"
        checks.append(Check(f"ee-trend n={n}", margin, ok, detail))
    return checks


# ---------------------------------------------------------------- criterion 7


def definetti_suite(alphabet_sizes=(2, 3), n_max=6, seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    checks = []
    worst_ratio, worst_eq = 0.0, 0.0
    for k in alphabet_sizes:
        for n in range(1, n_max + 1):
            count = len(tp.enumerate_types(k, n))
            for i in range(count):
                w = np.zeros(count)
                w[i] = 1.0
                holds, ratio = tp.definetti_dominance_check(w, k, n)
                worst_ratio = max(worst_ratio, ratio)
                worst_eq = max(worst_eq, abs(ratio - 1.0))
                if not holds:
                    checks.append(Check(f"definetti extreme point k={k} n={n} i={i}",
                                        1.0 + 1e-12 - ratio, False))
            for _ in range(5):
                w = rng.dirichlet(np.ones(count))
                holds, ratio = tp.definetti_dominance_check(w, k, n)
                worst_ratio = max(worst_ratio, ratio)
                if not holds:
                    checks.append(Check(f"definetti random mixture k={k} n={n}",
                                        1.0 + 1e-12 - ratio, False))
    checks.append(Check("definetti dominance holds (all extreme points + mixtures)",
                        1.0 + 1e-12 - worst_ratio, worst_ratio <= 1.0 + 1e-12,
                        f"max ratio {worst_ratio!r}"))
    checks.append(Check("definetti equality on single-type uniforms",
                        1e-12 - worst_eq, worst_eq <= 1e-12,
                        f"worst |ratio - 1| {worst_eq:.3g}"))
    return checks


# ---------------------------------------------------------------- criterion 8


def _perturb_simplex(rng, probs, xi):
    """A pmf within xi of ``probs`` in sup norm, or None if the draw missed."""
    shift = rng.uniform(-1, 1, probs.size)
    shift -= shift.mean()
    norm = np.abs(shift).max()
    if norm > 0:
        shift *= rng.uniform(0, xi) / norm
    raw = np.clip(probs + shift, 0.0, None)
    out = raw / raw.sum()
    if np.abs(out - probs).max() > xi:
        return None
    return core.Pmf(out)


def continuity_suite(trials=1000, seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)

    kl_viol = 0
    done = 0
    while done < trials:
        size = int(rng.integers(2, 6))
        q = core.Pmf(rng.dirichlet(np.ones(size)) + 1e-6)
        p = core.Pmf(rng.dirichlet(np.ones(size)))
        xi = float(rng.uniform(1e-4, 1.0 / math.e - 1e-9))
        p2 = _perturb_simplex(rng, p.probs, xi)
        if p2 is None:
            continue
        _, _, ok = tp.kl_continuity_check(p, p2, q, xi)
        kl_viol += 0 if ok else 1
        done += 1

    mi1_viol = 0
    done = 0
    while done < trials:
        nx = int(rng.integers(2, 6))
        ny = int(rng.integers(2, 6))
        xi = float(rng.uniform(1e-4, 1.0 / (nx * math.e)))
        p_in = core.Pmf(rng.dirichlet(np.ones(nx)))
        V = _random_channel(rng, nx, ny)
        bump = rng.uniform(-1, 1, size=(nx, ny))
        bump -= bump.mean(axis=1, keepdims=True)
        scale = np.abs(p_in.probs[:, None] * bump).max()
        if scale > 0:
            bump *= rng.uniform(0, xi) / scale * 0.999
        raw = np.clip(V.rows + bump, 1e-12, None)
        V2 = core.Channel(raw / raw.sum(axis=1, keepdims=True))
        if np.abs(p_in.probs[:, None] * (V2.rows - V.rows)).max() > xi:
            continue
        _, _, ok = tp.mi_continuity_check("channel", p_in, V, V2, xi)
        mi1_viol += 0 if ok else 1
        done += 1

    mi2_viol = 0
    done = 0
    while done < trials:
        nx = int(rng.integers(2, 6))
        ny = int(rng.integers(2, 6))
        xi = float(rng.uniform(1e-4, 1.0 / (nx * math.e)))
        p_in = core.Pmf(rng.dirichlet(np.ones(nx)))
        V = _random_channel(rng, nx, ny)
        p3 = _perturb_simplex(rng, p_in.probs, xi)
        if p3 is None:
            continue
        _, _, ok = tp.mi_continuity_check("input", p_in, V, p3, xi)
        mi2_viol += 0 if ok else 1
        done += 1

    return [
        Check("KL continuity bound violations", -float(kl_viol), kl_viol == 0,
              f"{kl_viol} / {trials}"),
        Check("MI continuity (channel part) violations", -float(mi1_viol), mi1_viol == 0,
              f"{mi1_viol} / {trials}"),
        Check("MI continuity (input part) violations", -float(mi2_viol), mi2_viol == 0,
              f"{mi2_viol} / {trials}"),
    ]


# ---------------------------------------------------------------- criterion 9


def types_identity_suite(seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for k in (2, 3):
        for n in range(1, 9):
            sizes = [tp.log_type_class_size(t) for t in tp.enumerate_types(k, n)]
            total = math.log(sum(math.exp(s) for s in sizes))
            worst = max(worst, abs(total - n * math.log(k)))
    checks.append(Check("partition identity sum |T| = k^n (logs)", 1e-9 - worst,
                        worst <= 1e-9, f"worst log dev {worst:.3g}"))

    worst = 0.0
    for _ in range(500):
        k = int(rng.integers(2, 6))
        n = int(rng.integers(1, 60))
        p = core.Pmf(rng.dirichlet(np.ones(k)))
        t = tp.nearest_type(p, n)
        worst = max(worst, float(np.abs(p.probs - t.pmf_array()).max()) - 1.0 / n)
    for p_vec, n in (((1.0, 0.0), 7), ((0.5, 0.5), 3)):
        t = tp.nearest_type(core.Pmf(p_vec), n)
        worst = max(worst, float(np.abs(np.asarray(p_vec) - t.pmf_array()).max()) - 1.0 / n)
    checks.append(Check("nearest-type deviation <= 1/n", -worst, worst <= 1e-12,
                        f"worst excess {worst:.3g}"))

    worst = 0.0
    for _ in range(200):
        nx = int(rng.integers(1, 4))
        ny = int(rng.integers(2, 5))
        n = int(rng.integers(2, 31))
        V = _random_channel(rng, nx, ny)
        t = tp.nearest_type(core.Pmf(rng.dirichlet(np.ones(nx))), n)
        v = tp.nearest_conditional_type(V, t)
        log_size = tp.log_conditional_class_size(v)
        h = tp.conditional_entropy(v)
        upper_slack = n * h - log_size
        lower_slack = log_size - (n * h - nx * ny * math.log(n + 1.0))
        worst = max(worst, -upper_slack, -lower_slack)
    checks.append(Check("conditional class-size sandwich (200 random shells)",
                        1e-9 - worst, worst <= 1e-9, f"worst violation {worst:.3g}"))
    return checks


# --------------------------------------------------------------- criterion 10


def sr_layer_suite():
    checks = []
    s = srbounds.sr_sandwich(0.2, 0.0, 4, 8)
    dev = abs(s.upper - 0.28009033203125)
    checks.append(Check("sr rounding upper bound hand value", 1e-9 - dev, dev <= 1e-9,
                        f"got {s.upper!r}"))
    lo0, hi0 = srbounds.sr_success_sandwich(0.0)
    lo5, hi5 = srbounds.sr_success_sandwich(0.5)
    dev = max(abs(lo0 - (1.0 - 1.0 / math.e)), abs(hi0 - 1.0),
              abs(lo5 - 0.5 * (1.0 - 1.0 / math.e)), abs(hi5 - 0.5))
    checks.append(Check("sr success sandwich hand values", 1e-9 - dev, dev <= 1e-9,
                        f"worst |dev| {dev:.3g}"))
    W = bsc(0.1)
    same = True
    for r in (0.2, 0.45, 0.6):
        pair = srbounds.sr_exponents(W, r)
        same &= pair.ee.value == exponents.error_exponent(W, r).value
        same &= pair.sce.value == exponents.sc_exponent(W, r).value
    checks.append(Check("sr exponents identical to joint-map exponents",
                        0.0 if same else -1.0, same))
    return checks


# ------------------------------------------------------------------- plumbing


SUITES = {
    "oracle": lambda seed: (oracle_equivalence_suite(seed)
                            + identity_regression_suite()
                            + capacity_regression_suite()
                            + sr_layer_suite()),
    "sandwich": lambda seed: (ee_sandwich_suite()
                              + sce_sandwich_suite()
                              + ee_trend_suite()
                              + ee_sandwich_suite(r=0.5, ns=(4, 6, 8, 10))
                              + ee_trend_suite(r=0.5, ns=(4, 6, 8, 10))),
    "types": lambda seed: types_identity_suite(seed),
    "continuity": lambda seed: continuity_suite(seed=seed),
    "definetti": lambda seed: definetti_suite(seed=seed),
}


def run_suite(name, seed=DEFAULT_SEED):
    if name == "all":
        rows = []
        for key in ("oracle", "sandwich", "types", "continuity", "definetti"):
            rows.extend(run_suite(key, seed))
        return rows
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](seed)
