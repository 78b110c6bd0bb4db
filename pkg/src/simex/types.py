"""Method-of-types combinatorics and bound-check utilities.

Empirical distributions with a fixed denominator n, their class sizes (via
log-gamma, so nothing astronomically large is ever materialized), nearest-
type rounding with deterministic tie-breaks, the universal mixture that
dominates every permutation-invariant distribution up to a binomial factor,
and numerical validators for the divergence/mutual-information continuity
bounds used by the finite-blocklength converses.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import AlphabetMismatchError, InvalidDistributionError, Pmf, SizeCapError
from .renyi import kl_divergence, mutual_information

ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class TypeVector:
    """Integer counts over an alphabet; the induced pmf is counts / n."""

    counts: tuple

    def __post_init__(self):
        cts = tuple(int(c) for c in self.counts)
        if not cts or any(c < 0 for c in cts):
            raise InvalidDistributionError("type counts must be non-negative and non-empty")
        object.__setattr__(self, "counts", cts)

    @property
    def n(self):
        return sum(self.counts)

    @property
    def alphabet_size(self):
        return len(self.counts)

    def pmf_array(self):
        return np.asarray(self.counts, dtype=float) / self.n


@dataclass(frozen=True)
class ConditionalType:
    """Joint integer counts over X x Y; rows are per-input-symbol counts."""

    joint_counts: tuple  # tuple of row tuples

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.joint_counts)
        if not rows or any(c < 0 for row in rows for c in row):
            raise InvalidDistributionError("joint counts must be non-negative")
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise InvalidDistributionError("joint count rows must have equal length")
        object.__setattr__(self, "joint_counts", rows)

    @property
    def n(self):
        return sum(sum(row) for row in self.joint_counts)

    def input_type(self):
        return TypeVector(tuple(sum(row) for row in self.joint_counts))

    def output_type(self):
        cols = zip(*self.joint_counts)
        return TypeVector(tuple(sum(col) for col in cols))

    def array(self):
        return np.asarray(self.joint_counts, dtype=np.int64)


def log_binomial(n, k):
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_multiset(alphabet_size, n):
    """log of the number of types with denominator n: C(n + k - 1, n)."""
    return log_binomial(n + alphabet_size - 1, n)


def enumerate_types(alphabet_size, n, cap=ENUMERATION_CAP):
    """All count vectors summing to n, in lexicographic order."""
    if alphabet_size < 1 or n < 1:
        raise ValueError("alphabet size and denominator must be positive")
    log_count = log_multiset(alphabet_size, n)
    if log_count > math.log(cap) + 1e-9:
        raise SizeCapError(f"~e^{log_count:.1f} types exceeds cap {cap}")

    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(TypeVector(prefix + (remaining,)))
            return
        for c in range(remaining + 1):
            rec(prefix + (c,), remaining - c, slots - 1)

    rec((), n, alphabet_size)
    return out


def log_type_class_size(t):
    """log |T_n(t)|: the multinomial coefficient n! / prod(counts!)."""
    return math.lgamma(t.n + 1) - sum(math.lgamma(c + 1) for c in t.counts)


def log_conditional_class_size(v):
    """log of the shell size: one multinomial per input symbol row."""
    total = 0.0
    for row in v.joint_counts:
        trow = sum(row)
        total += math.lgamma(trow + 1) - sum(math.lgamma(c + 1) for c in row)
    return total


def conditional_entropy(v):
    """H(Y|X) in nats of the joint type induced by the counts."""
    n = v.n
    h = 0.0
    for row in v.joint_counts:
        trow = sum(row)
        if trow == 0:
            continue
        for c in row:
            if c > 0:
                h -= (c / n) * math.log(c / trow)
    return h


def _round_preserving_sum(target, total, allowed):
    """Largest-remainder rounding of ``target`` to integers summing to ``total``.

    Ties go to the lowest index. ``allowed`` marks entries that may receive
    mass (used to keep rounded counts inside a prescribed support).
    """
    target = np.asarray(target, dtype=float)
    base = np.floor(target + 1e-9).astype(np.int64)
    base = np.maximum(base, 0)
    rem = target - base
    deficit = int(total - base.sum())
    if deficit > 0:
        order = sorted(range(target.size), key=lambda i: (-rem[i], i))
        order = [i for i in order if allowed[i]]
        for i in order[:deficit]:
            base[i] += 1
    elif deficit < 0:
        order = sorted(range(target.size), key=lambda i: (rem[i], i))
        order = [i for i in order if base[i] >= 1]
        for i in order[: -deficit]:
            base[i] -= 1
    return base


def nearest_type(p, n):
    """Type with denominator n within 1/n of ``p`` in every coordinate.

    Largest-remainder rounding with lowest-index tie-breaks, so the result
    is deterministic.
    """
    if n < 1:
        raise ValueError("denominator must be positive")
    target = p.probs * n
    counts = _round_preserving_sum(target, n, np.ones(p.size, dtype=bool))
    return TypeVector(tuple(int(c) for c in counts))


def nearest_conditional_type(V, t):
    """Joint counts approximating t(x)/n * V(y|x) within 1/n, with row sums t.

    Counts are placed only where t(x) * V(y|x) > 0, so the approximation
    never leaves the support of the target.
    """
    if t.alphabet_size != V.nx:
        raise AlphabetMismatchError("input type does not match the channel input alphabet")
    rows = []
    for x, tx in enumerate(t.counts):
        if tx == 0:
            rows.append((0,) * V.ny)
            continue
        target = tx * V.rows[x]
        allowed = V.rows[x] > 0.0
        counts = _round_preserving_sum(target, tx, allowed)
        rows.append(tuple(int(c) for c in counts))
    return ConditionalType(tuple(rows))


def universal_type_mixture_mass(t):
    """Probability of one sequence of type ``t`` under the universal mixture.

    The mixture weights every type equally and spreads each type's weight
    uniformly over its class, giving mass 1 / (#types * class size) to each
    sequence.
    """
    log_mass = -log_multiset(t.alphabet_size, t.n) - log_type_class_size(t)
    return math.exp(log_mass)


def definetti_dominance_check(weights, alphabet_size, n):
    """Verify the dominance of a type mixture by the universal mixture.

    ``weights`` is a pmf over ``enumerate_types(alphabet_size, n)`` (same
    order) describing the permutation-invariant distribution that puts
    weight w_T uniformly on the class of T. Checks, for every type, the
    per-sequence mass against binom(n+|A|-1, n) times the universal mass;
    returns (holds, max_ratio). The type count is obtained by enumeration
    and the binomial via log-gamma, so the comparison exercises the
    combinatorial identity rather than assuming it.
    """
    types = enumerate_types(alphabet_size, n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(types),):
        raise InvalidDistributionError("weights must align with the enumerated types")
    if w.min(initial=0.0) < 0.0 or abs(w.sum() - 1.0) > 1e-9:
        raise InvalidDistributionError("weights must form a pmf over types")

    log_count = math.log(len(types))
    log_binom = log_multiset(alphabet_size, n)
    max_ratio = 0.0
    for tv, wt in zip(types, w):
        if wt <= 0.0:
            continue
        log_class = log_type_class_size(tv)
        log_p_seq = math.log(wt) - log_class
        log_bound_seq = log_binom - log_count - log_class
        max_ratio = max(max_ratio, math.exp(log_p_seq - log_bound_seq))
    return max_ratio <= 1.0 + 1e-12, max_ratio


def kl_continuity_check(p, p_prime, q, xi):
    """Check the KL continuity bound for an entrywise perturbation of size xi.

    Requires 0 < xi < 1/e, |p - p'|_inf <= xi, and both pmfs absolutely
    continuous w.r.t. q. Returns (lhs, bound, holds) with
    bound = xi |A| log(1/q_min) + |A| xi log(1/xi).
    """
    if not (0.0 < xi < 1.0 / math.e):
        raise ValueError("xi must lie in (0, 1/e)")
    if p.labels != p_prime.labels or p.labels != q.labels:
        raise AlphabetMismatchError("pmfs live on different alphabets")
    if np.abs(p.probs - p_prime.probs).max() > xi + 1e-12:
        raise ValueError("pmfs differ by more than xi")
    for vec in (p, p_prime):
        if np.any((vec.probs > 0.0) & (q.probs <= 0.0)):
            raise ValueError("pmfs must be absolutely continuous w.r.t. q")
    size = p.size
    q_min = float(q.probs[q.probs > 0.0].min())
    lhs = abs(kl_divergence(p, q) - kl_divergence(p_prime, q))
    bound = xi * size * math.log(1.0 / q_min) + size * xi * math.log(1.0 / xi)
    return lhs, bound, lhs <= bound + 1e-12


def mi_continuity_check(part, p, V, perturbed, xi):
    """Check a mutual-information continuity bound.

    part="channel": ``perturbed`` is a channel with
        |p(x) V(y|x) - p(x) V'(y|x)| <= xi everywhere;
        bound = xi |X||Y| (log(1/xi) + log(1/(xi |X|))).
    part="input": ``perturbed`` is an input pmf with |p - p'|_inf <= xi;
        bound = xi |X| log|Y| + xi |X||Y| log(1/(xi |X|)).

    Requires 0 < xi <= 1/(|X| e). Returns (lhs, bound, holds).
    """
    nx, ny = V.nx, V.ny
    if not (0.0 < xi <= 1.0 / (nx * math.e)):
        raise ValueError("xi must lie in (0, 1/(|X| e)]")
    base = mutual_information(p, V)
    if part == "channel":
        gap = np.abs(p.probs[:, None] * (V.rows - perturbed.rows)).max()
        if gap > xi + 1e-12:
            raise ValueError("channel perturbation exceeds xi")
        lhs = abs(base - mutual_information(p, perturbed))
        bound = xi * nx * ny * (math.log(1.0 / xi) + math.log(1.0 / (xi * nx)))
    elif part == "input":
        if np.abs(p.probs - perturbed.probs).max() > xi + 1e-12:
            raise ValueError("input perturbation exceeds xi")
        lhs = abs(base - mutual_information(perturbed, V))
        bound = xi * nx * math.log(ny) + xi * nx * ny * math.log(1.0 / (xi * nx))
    else:
        raise ValueError("part must be 'channel' or 'input'")
    return lhs, bound, lhs <= bound + 1e-12
