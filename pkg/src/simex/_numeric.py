"""Small numeric helpers shared across modules."""

import math
from decimal import Decimal, localcontext, ROUND_FLOOR

import numpy as np


def logsumexp(values):
    """log(sum(exp(values))) with the max factored out; -inf entries drop out."""
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return -math.inf
    hi = a.max()
    if not np.isfinite(hi):
        return float(hi)
    return float(hi + np.log(np.exp(a - hi).sum()))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(fun, lo, hi, iters=90):
    """Golden-section maximizer of a unimodal function on [lo, hi].

    Returns (argmax, value). 90 iterations shrink the bracket by ~1e-19 of
    the initial width, well past float resolution.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def floor_exp(n, rate):
    """Exact floor(e^(n*rate)) as a Python int.

    The product n * rate is formed exactly (the float rate converts to
    decimal without rounding) and the exponential is evaluated with enough
    working precision to pin every integer digit, so the floor is exact for
    exponents up to several hundred.
    """
    t = float(n) * float(rate)
    if t < 0:
        raise ValueError("rate and n must be non-negative")
    if t > 1000.0:
        raise OverflowError("e^(n r) too large to materialize as an integer")
    with localcontext() as ctx:
        ctx.prec = max(60, int(t / math.log(10.0)) + 40)
        val = (Decimal(int(n)) * Decimal(float(rate))).exp()
        return int(val.to_integral_value(rounding=ROUND_FLOOR))
