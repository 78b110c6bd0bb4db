"""Divergences, the Sibson inner infimum, capacity solver, max-information."""

import math

import numpy as np
import pytest

from simex.core import AlphabetMismatchError, Channel, Pmf, tensor_power
from simex.renyi import (
    RenyiOrder,
    kl_divergence,
    max_information,
    mutual_information,
    renyi_capacity,
    renyi_divergence,
    sibson_inner_inf,
    sibson_reference,
)

LN2 = math.log(2.0)


def bsc(d):
    return Channel([[1 - d, d], [d, 1 - d]])


def bern_renyi_entropy(a, d):
    if a == 1.0:
        return -(d * math.log(d) + (1 - d) * math.log(1 - d))
    if math.isinf(a):
        return -math.log(max(d, 1 - d))
    return math.log(d**a + (1 - d) ** a) / (1.0 - a)


class TestRenyiOrder:
    def test_limit_tags(self):
        assert RenyiOrder(1.0).is_one
        assert RenyiOrder(float("inf")).is_infinite
        assert RenyiOrder(0).is_zero

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            RenyiOrder(-0.5)


class TestRenyiDivergence:
    def test_zero_on_equal(self):
        p = Pmf([0.3, 0.7])
        for a in (0.0, 0.5, 1.0, 2.0, float("inf")):
            assert renyi_divergence(p, p, a) == pytest.approx(0.0, abs=1e-12)

    def test_order_two_point_mass(self):
        got = renyi_divergence(Pmf([1.0, 0.0]), Pmf([0.5, 0.5]), 2.0)
        assert got == pytest.approx(LN2, abs=1e-12)

    def test_kl_hand_value(self):
        got = renyi_divergence(Pmf([0.5, 0.5]), Pmf([0.25, 0.75]), 1.0)
        want = 0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0)
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(0.143841, abs=1e-6)
        assert kl_divergence(Pmf([0.5, 0.5]), Pmf([0.25, 0.75])) == got

    def test_support_leak_infinite_above_one(self):
        p = Pmf([0.5, 0.5])
        q = Pmf([1.0, 0.0])
        for a in (1.0, 1.5, 2.0, float("inf")):
            assert renyi_divergence(p, q, a) == math.inf

    def test_support_leak_finite_below_one(self):
        p = Pmf([0.5, 0.5])
        q = Pmf([1.0, 0.0])
        got = renyi_divergence(p, q, 0.5)
        assert math.isfinite(got)
        assert got == pytest.approx(math.log(0.5**0.5) / (0.5 - 1.0), abs=1e-12)

    def test_order_zero_support_mass(self):
        got = renyi_divergence(Pmf([0.5, 0.5, 0.0]), Pmf([0.25, 0.25, 0.5]), 0.0)
        assert got == pytest.approx(-math.log(0.5), abs=1e-12)

    def test_monotone_in_order(self):
        rng = np.random.default_rng(9)
        orders = np.linspace(0.0, 8.0, 20)
        for _ in range(50):
            k = int(rng.integers(2, 5))
            p = Pmf(rng.dirichlet(np.ones(k)))
            q = Pmf(rng.dirichlet(np.ones(k)) + 0.01)
            vals = [renyi_divergence(p, q, a) for a in orders]
            for lo, hi in zip(vals, vals[1:]):
                assert hi >= lo - 1e-10

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatchError):
            renyi_divergence(Pmf([0.5, 0.5]), Pmf([1 / 3] * 3), 1.0)

    def test_non_negative(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            p = Pmf(rng.dirichlet((1.0, 1.0, 1.0)))
            q = Pmf(rng.dirichlet((1.0, 1.0, 1.0)))
            for a in (0.0, 0.3, 1.0, 2.5, float("inf")):
                assert renyi_divergence(p, q, a) >= -1e-12


def _grid_inner_inf(p, W, a, step=1e-3):
    """Independent oracle: dense scan over binary references."""
    best = math.inf
    for s in np.arange(step, 1.0, step):
        q = Pmf([s, 1.0 - s])
        joint_div = renyi_divergence_joint(p, W, q, a)
        best = min(best, joint_div)
    return best


def renyi_divergence_joint(p, W, q, a):
    """D_a(p.W || p x q) evaluated directly on the joint alphabet."""
    joint = (p.probs[:, None] * W.rows).reshape(-1)
    prod = (p.probs[:, None] * q.probs[None, :]).reshape(-1)
    return renyi_divergence(Pmf(joint, strict=False), Pmf(prod, strict=False), a)


class TestSibsonInnerInf:
    def test_identity_uniform_any_order(self):
        W = Channel(np.eye(2))
        p = Pmf([0.5, 0.5])
        for a in (0.0, 0.25, 1.0, 2.0, float("inf")):
            assert sibson_inner_inf(p, W, a) == pytest.approx(LN2, abs=5e-7)

    def test_bsc_order_one(self):
        got = sibson_inner_inf(Pmf([0.5, 0.5]), bsc(0.1), 1.0)
        want = LN2 - bern_renyi_entropy(1.0, 0.1)
        assert got == pytest.approx(want, abs=1e-9)
        assert got == pytest.approx(0.368064, abs=1e-6)

    def test_bsc_order_two(self):
        got = sibson_inner_inf(Pmf([0.5, 0.5]), bsc(0.1), 2.0)
        assert got == pytest.approx(LN2 + math.log(0.82), abs=1e-12)
        assert got == pytest.approx(0.494696, abs=1e-6)

    def test_matches_grid_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            W = Channel(rng.dirichlet((1.0, 1.0), size=2))
            p = Pmf(rng.dirichlet((1.0, 1.0)))
            for a in (0.3, 0.7, 1.0, 1.5, 3.0):
                closed = sibson_inner_inf(p, W, a)
                grid = _grid_inner_inf(p, W, a)
                assert closed <= grid + 1e-9
                assert closed == pytest.approx(grid, abs=5e-5)

    def test_reference_achieves_value(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            W = Channel(rng.dirichlet((0.7, 0.7, 0.7), size=2))
            p = Pmf(rng.dirichlet((1.0, 1.0)))
            for a in (0.5, 1.0, 2.0, float("inf")):
                value, q = sibson_reference(p, W, a)
                direct = renyi_divergence_joint(p, W, q, a)
                assert direct == pytest.approx(value, abs=1e-9)

    def test_order_zero_value(self):
        W = Channel([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
        p = Pmf([0.5, 0.5])
        # middle output reachable from both inputs: coverage 1
        assert sibson_inner_inf(p, W, 0.0) == pytest.approx(0.0, abs=1e-12)


class TestMutualInformation:
    def test_matches_kl_form(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            W = Channel(rng.dirichlet(np.ones(3), size=2))
            p = Pmf(rng.dirichlet(np.ones(2)))
            via_sibson = sibson_inner_inf(p, W, 1.0)
            assert mutual_information(p, W) == pytest.approx(via_sibson, abs=1e-12)


class TestCapacity:
    def test_identity_all_orders(self):
        for d in (2, 3):
            W = Channel(np.eye(d))
            for a in (0.0, 0.5, 1.0, 2.0, float("inf")):
                res = renyi_capacity(W, a)
                assert res.value == pytest.approx(math.log(d), abs=1e-7)

    def test_bsc_closed_form(self):
        W = bsc(0.1)
        for a in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0):
            res = renyi_capacity(W, a)
            want = LN2 - bern_renyi_entropy(a, 0.1)
            assert res.value == pytest.approx(want, abs=1e-9)
            assert res.converged

    def test_certificate_consistency(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            W = Channel(rng.dirichlet(np.ones(3), size=3))
            for a in (0.5, 1.0, 2.0):
                res = renyi_capacity(W, a, tol=1e-9)
                reeval = sibson_inner_inf(res.optimal_input, W, a)
                assert reeval == pytest.approx(res.value, abs=1e-9)

    def test_monotone_in_order(self):
        W = bsc(0.2)
        orders = [0.0, 0.1, 0.3, 0.5, 0.8, 1.0, 1.3, 2.0, 4.0, 16.0, float("inf")]
        vals = [renyi_capacity(W, a).value for a in orders]
        for lo, hi in zip(vals, vals[1:]):
            assert hi >= lo - 1e-8

    def test_additivity_two_copies(self):
        W = bsc(0.1)
        WW = tensor_power(W, 2)
        for a in (0.5, 1.0, 2.0):
            single = renyi_capacity(W, a).value
            double = renyi_capacity(WW, a).value
            assert double == pytest.approx(2.0 * single, abs=1e-6)


class TestMaxInformation:
    def test_identity(self):
        for d in (2, 5):
            assert max_information(Channel(np.eye(d))) == pytest.approx(math.log(d), abs=1e-10)

    def test_bsc(self):
        got = max_information(bsc(0.1))
        assert got == pytest.approx(math.log(1.8), abs=1e-10)
        assert got == pytest.approx(0.587787, abs=1e-6)

    def test_constant_channel(self):
        W = Channel([[0.3, 0.7], [0.3, 0.7]])
        assert max_information(W) == pytest.approx(0.0, abs=1e-12)

    def test_equals_order_inf_capacity(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            W = Channel(rng.dirichlet(np.ones(3), size=2))
            assert max_information(W) == pytest.approx(
                renyi_capacity(W, float("inf")).value, abs=1e-10
            )
