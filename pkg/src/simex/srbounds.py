"""Shared-randomness sandwich bounds and exponent passthrough.

A non-signaling strategy for one message budget can be rounded into a
shared-randomness protocol at another budget, paying a residual factor of
(1 - 1/M)^{M'}. That sandwich is all this module evaluates: the exact
shared-randomness distortion itself is a bilinear nonconvex program and is
deliberately out of scope. Because the sandwich pinches in the exponent,
the shared-randomness exponents equal the non-signaling ones and are
returned verbatim.
"""

import math
from dataclasses import dataclass

from .exponents import ExponentResult, error_exponent, sc_exponent


@dataclass(frozen=True)
class SrSandwich:
    lower: float     # distortion with budget M' cannot beat the joint-map optimum
    upper: float     # rounding bound assembled from the budget-M optimum
    M: int
    M_prime: int


@dataclass(frozen=True)
class SrExponents:
    ee: ExponentResult
    sce: ExponentResult
    note: str


def _check_unit(name, v):
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1]")


def residual_factor(M, M_prime):
    """(1 - 1/M)^{M'}, evaluated in the log domain so huge budgets cannot
    underflow through the wrong branch."""
    if M < 1 or M_prime < 1:
        raise ValueError("message budgets must be >= 1")
    if M == 1:
        return 0.0
    return math.exp(M_prime * math.log1p(-1.0 / M))


def sr_sandwich(eps_ns_at_M, eps_ns_at_Mprime, M, M_prime):
    """Two-sided bracket for the shared-randomness distortion at budget M'.

    lower: the non-signaling distortion at M' itself.
    upper: (1 - (1-1/M)^{M'}) * eps_NS(M) + (1-1/M)^{M'}.
    """
    _check_unit("eps_ns_at_M", eps_ns_at_M)
    _check_unit("eps_ns_at_Mprime", eps_ns_at_Mprime)
    res = residual_factor(M, M_prime)
    upper = eps_ns_at_M + res * (1.0 - eps_ns_at_M)
    return SrSandwich(lower=float(eps_ns_at_Mprime), upper=float(upper), M=int(M), M_prime=int(M_prime))


def sr_success_sandwich(eps_ns):
    """Bracket for the shared-randomness success probability at equal budgets.

    Returns ((1 - 1/e) (1 - eps_ns), 1 - eps_ns): rounding at M' = M keeps at
    least a (1 - 1/e) fraction of the non-signaling success.
    """
    _check_unit("eps_ns", eps_ns)
    success = 1.0 - eps_ns
    return (1.0 - 1.0 / math.e) * success, success


def sr_exponents(W, r):
    """Shared-randomness error and strong-converse exponents at rate r.

    Identical to the non-signaling exponents: the rounding residual decays
    doubly exponentially under an arbitrarily small rate shift, so it never
    shows up at exponential scale.
    """
    note = (
        "shared-randomness exponents equal the non-signaling exponents: "
        "rounding keeps a (1-1/e) success fraction at equal budgets, and a "
        "rate shift by any delta > 0 makes the residual doubly exponential"
    )
    return SrExponents(ee=error_exponent(W, r), sce=sc_exponent(W, r), note=note)
