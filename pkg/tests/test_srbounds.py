"""Shared-randomness sandwich bounds and exponent passthrough."""

import math

import numpy as np
import pytest

from simex.core import Channel
from simex.exponents import error_exponent, sc_exponent
from simex.nsdist import eps_ns_iid, message_size_for_rate
from simex.srbounds import residual_factor, sr_exponents, sr_sandwich, sr_success_sandwich

LN2 = math.log(2.0)


def bsc(d):
    return Channel([[1 - d, d], [d, 1 - d]])


class TestSrSandwich:
    def test_hand_value(self):
        s = sr_sandwich(0.2, 0.05, 4, 8)
        assert (1 - 1 / 4) ** 8 == pytest.approx(0.1001129150390625, abs=1e-15)
        assert s.upper == pytest.approx(0.2800903, abs=1e-7)
        assert s.upper == pytest.approx(0.28009033203125, abs=1e-9)
        assert s.lower == 0.05

    def test_large_budget_limit(self):
        s = sr_sandwich(0.3, 0.0, 10, 10**6)
        assert s.upper == pytest.approx(0.3, abs=1e-12)

    def test_zero_distortion_pure_residual(self):
        s = sr_sandwich(0.0, 0.0, 4, 8)
        assert s.upper == pytest.approx((0.75) ** 8, abs=1e-15)

    def test_budget_one(self):
        s = sr_sandwich(0.5, 0.5, 1, 3)
        assert s.upper == pytest.approx(0.5, abs=1e-15)

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            sr_sandwich(1.5, 0.0, 2, 2)
        with pytest.raises(ValueError):
            sr_sandwich(0.5, 0.0, 0, 2)

    def test_residual_stable_for_huge_budgets(self):
        # (1 - 1/M)^{M'} for budgets up to 1e9, against exact log evaluation
        for M, Mp in ((10**9, 10**9), (10**6, 10**9), (10**9, 10**4)):
            got = residual_factor(M, Mp)
            want = math.exp(Mp * math.log1p(-1.0 / M))
            assert got == pytest.approx(want, rel=1e-12)
            assert 0.0 <= got <= 1.0

    def test_bracket_on_solved_values(self):
        W = bsc(0.1)
        n, r = 6, 0.2
        M = message_size_for_rate(n, r)
        eps_m = eps_ns_iid(W, n, M).value
        eps_2m = eps_ns_iid(W, n, 2 * M).value
        s = sr_sandwich(eps_m, eps_2m, M, 2 * M)
        assert 0.0 <= s.lower <= s.upper <= 1.0


class TestSuccessSandwich:
    def test_perfect_simulation(self):
        lo, hi = sr_success_sandwich(0.0)
        assert lo == pytest.approx(1.0 - 1.0 / math.e, abs=1e-12)
        assert lo == pytest.approx(0.6321206, abs=1e-7)
        assert hi == 1.0

    def test_total_distortion(self):
        assert sr_success_sandwich(1.0) == (0.0, 0.0)

    def test_halfway(self):
        lo, hi = sr_success_sandwich(0.5)
        assert lo == pytest.approx(0.3160603, abs=1e-7)
        assert hi == 0.5


class TestSrExponents:
    def test_bitwise_passthrough(self):
        W = bsc(0.1)
        for r in (0.2, 0.45, 0.7):
            pair = sr_exponents(W, r)
            ee = error_exponent(W, r)
            sce = sc_exponent(W, r)
            assert pair.ee.value == ee.value
            assert pair.ee.argmax_alpha == ee.argmax_alpha
            assert pair.sce.value == sce.value
            assert pair.note

    def test_identity_sce_closed_form(self):
        pair = sr_exponents(Channel(np.eye(2)), 0.3)
        assert pair.sce.value == pytest.approx(LN2 - 0.3, abs=1e-8)

    def test_bsc_above_capacity_positive(self):
        pair = sr_exponents(bsc(0.1), 0.5)
        assert pair.ee.value > 0.0


class TestRoundingResidualAtExponentialScale:
    def test_residual_never_moves_measured_exponents(self):
        # The additive residual exp(-e^{n delta} + e^{-n r}) is doubly
        # exponentially small; once n delta is moderately large it cannot
        # move a (1/n) log by more than 1e-9. (At very small n delta the
        # residual is order one, so the claim genuinely needs n large.)
        for delta in (0.1, 0.2):
            for n in (60, 120, 240):
                for r in (0.3, 0.6):
                    a_n = math.exp(-n * 0.7)  # a plausible distortion scale
                    residual = math.exp(-math.exp(n * delta) + math.exp(-n * r))
                    shifted = abs(math.log(a_n + residual) - math.log(a_n)) / n
                    assert shifted <= 1e-9
