"""Error and strong-converse exponents with finite-blocklength bound curves.

The asymptotic exponents are one-dimensional optimizations of the channel
mutual information over the order:

    error exponent            sup_{a >= 0}   a * (r - I_{1+a}(W))
    strong converse exponent  sup_{a in [0,1]} (1-a) * (I_a(W) - r)

Each finite-n bound pairs the same optimization at a floor-corrected rate
with explicit polynomial correction sequences, giving inequalities that are
valid at every blocklength, not just asymptotically. Order-indexed capacity
values are memoized per channel (read-mostly cache, idempotent values), so
sweeps over rates and blocklengths stay cheap.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from ._numeric import floor_exp, golden_max
from .renyi import renyi_capacity

_EE_GRID_LO = 1e-4
_EE_GRID_HI = 64.0
_EE_GRID_POINTS = 80
_SCE_GRID_POINTS = 101
_BOUNDARY_TOL = 1e-12


class ValidityError(ValueError):
    """Blocklength below the validity threshold of a finite-n bound."""


@dataclass(frozen=True)
class ExponentResult:
    value: float            # >= 0, may be +inf
    argmax_alpha: float
    finite: bool
    grid_resolution: float
    notes: tuple = ()


@dataclass(frozen=True)
class CorrectionSequences:
    """Finite-n correction terms attached to the exponent bounds."""

    n: int
    r_n: float
    f_n: float
    g_n: float
    f_tilde_n: float
    g_tilde_n: float
    a_n: float
    b_n: float
    a_tilde_n: float
    b_tilde_n: float
    w_min: float
    nx: int
    ny: int
    ee_valid: bool        # requires n >= 3
    sce_valid: bool       # requires n >= 3 |X|


_cache_lock = threading.Lock()
_capacity_cache = {}


def channel_capacity_cached(W, alpha):
    """Memoized Renyi capacity value for (channel, order)."""
    key = (W.key(), float(alpha))
    with _cache_lock:
        hit = _capacity_cache.get(key)
    if hit is not None:
        return hit
    value = renyi_capacity(W, alpha).value
    with _cache_lock:
        _capacity_cache.setdefault(key, value)
    return value


def _ee_objective(W, rate):
    def phi(a):
        if a <= 0.0:
            return 0.0
        return a * (rate - channel_capacity_cached(W, 1.0 + a))

    return phi


def _sup_on_grid(fun, grid):
    vals = np.array([fun(a) for a in grid])
    k = int(np.argmax(vals))
    lo = grid[max(0, k - 1)]
    hi = grid[min(len(grid) - 1, k + 1)]
    a_star, v_star = golden_max(fun, lo, hi, iters=48)
    if vals[k] > v_star:
        a_star, v_star = grid[k], vals[k]
    return float(v_star), float(a_star), float(hi - lo)


def _ee_sup(W, rate):
    """sup over a >= 0 of a (rate - I_{1+a}); assumes rate <= max-information."""
    grid = np.concatenate([[0.0], np.geomspace(_EE_GRID_LO, _EE_GRID_HI, _EE_GRID_POINTS)])
    value, argmax, res = _sup_on_grid(_ee_objective(W, rate), grid)
    if value <= 0.0:
        return 0.0, 0.0, res
    return value, argmax, res


def _sce_sup(W, rate):
    """sup over a in [0,1] of (1-a) (I_a - rate), endpoints included."""

    def psi(a):
        a = min(max(a, 0.0), 1.0)
        if a >= 1.0:
            return 0.0
        return (1.0 - a) * (channel_capacity_cached(W, a) - rate)

    grid = np.linspace(0.0, 1.0, _SCE_GRID_POINTS)
    value, argmax, res = _sup_on_grid(psi, grid)
    if value <= 0.0:
        return 0.0, 1.0, res
    return value, argmax, res


def error_exponent(W, r):
    """Decay rate of the simulation distortion at rates above capacity.

    Infinite (with ``finite=False``) once the rate exceeds the
    zero-distortion threshold ``max_information(W)``; zero at or below the
    mutual information of the channel.
    """
    if r <= 0.0:
        raise ValueError("rate must be positive")
    imax = channel_capacity_cached(W, math.inf)
    if r > imax + _BOUNDARY_TOL:
        return ExponentResult(math.inf, math.inf, False, 0.0)
    notes = ()
    if abs(r - imax) <= _BOUNDARY_TOL:
        notes = ("rate sits exactly at the zero-distortion threshold; reporting the grid value",)
    value, argmax, res = _ee_sup(W, r)
    return ExponentResult(value, argmax, True, res, notes)


def sc_exponent(W, r):
    """Decay rate of the simulation success probability at rates below capacity."""
    if r <= 0.0:
        raise ValueError("rate must be positive")
    value, argmax, res = _sce_sup(W, r)
    return ExponentResult(value, argmax, True, res)


def rate_with_floor(n, r):
    """(1/n) log floor(e^{n r}): the rate actually available with an integer
    message alphabet. Above n r ~ 600 the floor correction (< e^{-n r}) sits
    far below double resolution, so the rate is returned unchanged."""
    if float(n) * float(r) > 600.0:
        return float(r)
    return math.log(floor_exp(n, r)) / n


def correction_sequences(W, r, n):
    """All finite-n correction terms for the bound curves at blocklength n."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    nx, ny, w = W.nx, W.ny, W.w_min
    xy = nx * ny

    f_n = (xy / n) * math.log(n * (n + 1) / w**2) + 1.0 / n
    log_a = xy * math.log(w**2 / n)
    log_b = ny + (ny - 1) * math.log(n + 1.0) + xy * math.log(n * (n + ny) ** 2)
    g_n = (1.0 + log_b - math.log(math.e - 1.0) - log_a) / n

    log_bt = 3.0 * xy * math.log(n) - 2.0 * xy * math.log(nx) + nx * math.log(ny)
    f_tilde = ((xy + nx - 1) * math.log(n + 1.0) + log_bt) / n
    g_tilde = (log_a + log_bt) / n

    return CorrectionSequences(
        n=n,
        r_n=rate_with_floor(n, r),
        f_n=f_n,
        g_n=g_n,
        f_tilde_n=f_tilde,
        g_tilde_n=g_tilde,
        a_n=math.exp(log_a),
        b_n=math.exp(log_b),
        a_tilde_n=math.exp(log_a),
        b_tilde_n=math.exp(log_bt),
        w_min=w,
        nx=nx,
        ny=ny,
        ee_valid=n >= 3,
        sce_valid=n >= 3 * nx,
    )


def ee_ach_bound(W, r, n):
    """Upper bound on (1/n) log eps at blocklength n; -inf means the
    distortion is exactly zero there."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    r_n = rate_with_floor(n, r)
    imax = channel_capacity_cached(W, math.inf)
    if r_n > imax + _BOUNDARY_TOL:
        return -math.inf
    value, _, _ = _ee_sup(W, r_n)
    return -value


def ee_conv_bound(W, r, n):
    """Lower bound on (1/n) log eps at blocklength n (valid for n >= 3)."""
    if n < 3:
        raise ValidityError("the converse bound requires n >= 3")
    cs = correction_sequences(W, r, n)
    imax = channel_capacity_cached(W, math.inf)
    shifted = r + cs.g_n
    if shifted > imax + _BOUNDARY_TOL:
        return -math.inf
    value, _, _ = _ee_sup(W, shifted)
    return -value - cs.f_n


def sce_conv_bound(W, r, n):
    """Upper bound on (1/n) log(1 - eps); rate-floor free, valid at every n."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    value, _, _ = _sce_sup(W, r)
    return -value


def sce_ach_bound(W, r, n):
    """Lower bound on (1/n) log(1 - eps), valid for n >= 3 |X|.

    The order-indexed penalty is applied inside the optimization, which is
    the weaker (hence safe) placement.
    """
    if n < 3 * W.nx:
        raise ValidityError("the achievability bound requires n >= 3 |X|")
    cs = correction_sequences(W, r, n)

    def obj(a):
        a = min(max(a, 0.0), 1.0)
        inner = 0.0 if a >= 1.0 else (1.0 - a) * (channel_capacity_cached(W, a) - cs.r_n)
        return inner - a * cs.g_tilde_n

    grid = np.linspace(0.0, 1.0, _SCE_GRID_POINTS)
    value, _, _ = _sup_on_grid(obj, grid)
    return -value - cs.f_tilde_n
