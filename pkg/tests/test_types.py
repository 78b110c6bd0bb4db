"""Type enumeration, class sizes, rounding, dominance, continuity bounds."""

import math

import numpy as np
import pytest

from simex import types as tp
from simex.core import Channel, InvalidDistributionError, Pmf, SizeCapError


class TestEnumeration:
    def test_binary_n3(self):
        got = [t.counts for t in tp.enumerate_types(2, 3)]
        assert got == [(0, 3), (1, 2), (2, 1), (3, 0)]

    def test_single_symbol(self):
        assert [t.counts for t in tp.enumerate_types(1, 9)] == [(9,)]

    def test_ternary_n2(self):
        assert len(tp.enumerate_types(3, 2)) == 6

    def test_count_matches_binomial(self):
        for k in (2, 3, 4):
            for n in (1, 3, 6):
                want = math.comb(n + k - 1, n)
                assert len(tp.enumerate_types(k, n)) == want

    def test_cap(self):
        with pytest.raises(SizeCapError):
            tp.enumerate_types(10, 40, cap=1000)


class TestClassSizes:
    def test_small_multinomials(self):
        assert tp.log_type_class_size(tp.TypeVector((1, 2))) == pytest.approx(math.log(3))
        assert tp.log_type_class_size(tp.TypeVector((7, 0))) == pytest.approx(0.0)
        assert tp.log_type_class_size(tp.TypeVector((2, 2))) == pytest.approx(math.log(6))

    def test_partition_identity(self):
        # total number of sequences = sum of class sizes
        for k in (2, 3):
            for n in range(1, 9):
                logs = [tp.log_type_class_size(t) for t in tp.enumerate_types(k, n)]
                total = math.log(sum(math.exp(v) for v in logs))
                assert total == pytest.approx(n * math.log(k), abs=1e-9)

    def test_conditional_diagonal_is_singleton(self):
        v = tp.ConditionalType(((2, 0), (0, 3)))
        assert tp.log_conditional_class_size(v) == 0.0

    def test_conditional_single_row(self):
        v = tp.ConditionalType(((1, 1), (0, 0)))
        assert tp.log_conditional_class_size(v) == pytest.approx(math.log(2))

    def test_conditional_sandwich_random(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            nx = int(rng.integers(1, 4))
            ny = int(rng.integers(2, 5))
            n = int(rng.integers(2, 31))
            V = Channel(rng.dirichlet(np.ones(ny), size=nx))
            t = tp.nearest_type(Pmf(rng.dirichlet(np.ones(nx))), n)
            v = tp.nearest_conditional_type(V, t)
            log_size = tp.log_conditional_class_size(v)
            h = tp.conditional_entropy(v)
            assert log_size <= n * h + 1e-9
            assert log_size >= n * h - nx * ny * math.log(n + 1.0) - 1e-9


class TestNearestType:
    def test_tie_break_low_index(self):
        t = tp.nearest_type(Pmf([0.5, 0.5]), 3)
        assert t.counts == (2, 1)

    def test_exact_type_is_fixed_point(self):
        t = tp.nearest_type(Pmf([0.25, 0.75]), 4)
        assert t.counts == (1, 3)

    def test_point_mass(self):
        assert tp.nearest_type(Pmf([1.0, 0.0]), 9).counts == (9, 0)

    def test_deviation_bound_random(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            k = int(rng.integers(2, 7))
            n = int(rng.integers(1, 80))
            p = Pmf(rng.dirichlet(np.ones(k)))
            t = tp.nearest_type(p, n)
            assert sum(t.counts) == n
            assert np.abs(p.probs - t.pmf_array()).max() <= 1.0 / n + 1e-12


class TestNearestConditionalType:
    def test_deterministic_channel_exact(self):
        V = Channel([[1.0, 0.0], [0.0, 1.0]])
        t = tp.TypeVector((2, 2))
        v = tp.nearest_conditional_type(V, t)
        assert v.joint_counts == ((2, 0), (0, 2))

    def test_bsc_quarter(self):
        V = Channel([[0.75, 0.25], [0.25, 0.75]])
        t = tp.TypeVector((2, 2))
        v = tp.nearest_conditional_type(V, t)
        target = np.array([[0.375, 0.125], [0.125, 0.375]])
        assert np.abs(v.array() / 4.0 - target).max() <= 0.25 + 1e-12
        assert v.input_type().counts == (2, 2)

    def test_bound_and_support_random(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            nx = int(rng.integers(1, 4))
            ny = int(rng.integers(2, 5))
            n = int(rng.integers(1, 41))
            rows = rng.dirichlet(np.ones(ny), size=nx)
            if rng.random() < 0.3:
                rows[rng.integers(nx), rng.integers(ny)] = 0.0
                rows = rows / rows.sum(axis=1, keepdims=True)
            V = Channel(rows)
            t = tp.nearest_type(Pmf(rng.dirichlet(np.ones(nx))), n)
            v = tp.nearest_conditional_type(V, t)
            j = v.array()
            assert tuple(j.sum(axis=1)) == t.counts
            target = np.asarray(t.counts)[:, None] * V.rows
            assert np.abs(target - j).max() <= 1.0 + 1e-9
            assert np.all(j[V.rows == 0.0] == 0)


class TestUniversalMixture:
    def test_binary_n2_mixed_type(self):
        mass = tp.universal_type_mixture_mass(tp.TypeVector((1, 1)))
        assert mass == pytest.approx(1.0 / 6.0, abs=1e-15)

    def test_pure_type(self):
        mass = tp.universal_type_mixture_mass(tp.TypeVector((5, 0)))
        assert mass == pytest.approx(1.0 / len(tp.enumerate_types(2, 5)), abs=1e-15)

    def test_total_mass_is_one(self):
        for k in (2, 3):
            for n in (1, 2, 4, 6):
                total = sum(
                    math.exp(tp.log_type_class_size(t)) * tp.universal_type_mixture_mass(t)
                    for t in tp.enumerate_types(k, n)
                )
                assert total == pytest.approx(1.0, abs=1e-12)


class TestDefinettiDominance:
    def test_single_class_equality(self):
        types = tp.enumerate_types(2, 4)
        for i in range(len(types)):
            w = np.zeros(len(types))
            w[i] = 1.0
            holds, ratio = tp.definetti_dominance_check(w, 2, 4)
            assert holds
            assert ratio == pytest.approx(1.0, abs=1e-12)

    def test_iid_uniform_strictly_dominated(self):
        types = tp.enumerate_types(2, 3)
        w = np.array([math.exp(tp.log_type_class_size(t)) / 8.0 for t in types])
        holds, ratio = tp.definetti_dominance_check(w, 2, 3)
        assert holds
        assert ratio < 1.0

    def test_random_mixtures_hold(self):
        rng = np.random.default_rng(12)
        for k in (2, 3):
            for n in range(1, 7):
                count = len(tp.enumerate_types(k, n))
                for _ in range(10):
                    w = rng.dirichlet(np.ones(count))
                    holds, ratio = tp.definetti_dominance_check(w, k, n)
                    assert holds
                    assert ratio <= 1.0 + 1e-12

    def test_rejects_non_pmf_weights(self):
        with pytest.raises(InvalidDistributionError):
            tp.definetti_dominance_check(np.array([0.5, 0.2]), 2, 1)


class TestKlContinuity:
    def test_identical_pmfs(self):
        p = Pmf([0.4, 0.6])
        q = Pmf([0.5, 0.5])
        lhs, bound, holds = tp.kl_continuity_check(p, p, q, 0.1)
        assert lhs == 0.0 and holds

    def test_xi_domain(self):
        p = Pmf([0.4, 0.6])
        with pytest.raises(ValueError):
            tp.kl_continuity_check(p, p, p, 0.4)

    def test_requires_absolute_continuity(self):
        p = Pmf([0.5, 0.5])
        q = Pmf([1.0, 0.0])
        with pytest.raises(ValueError):
            tp.kl_continuity_check(p, p, q, 0.1)


class TestMiContinuity:
    def test_identity_instance(self):
        p = Pmf([0.5, 0.5])
        V = Channel([[0.8, 0.2], [0.3, 0.7]])
        lhs, bound, holds = tp.mi_continuity_check("channel", p, V, V, 0.05)
        assert lhs == 0.0 and holds

    def test_hand_bound_value(self):
        p = Pmf([0.5, 0.5])
        V = Channel([[0.8, 0.2], [0.3, 0.7]])
        _, bound, _ = tp.mi_continuity_check("channel", p, V, V, 0.01)
        want = 0.01 * 4 * (math.log(100.0) + math.log(50.0))
        assert bound == pytest.approx(want, abs=1e-12)
        assert bound == pytest.approx(0.3406877276566495, abs=1e-9)

    def test_xi_domain(self):
        p = Pmf([0.5, 0.5])
        V = Channel([[0.8, 0.2], [0.3, 0.7]])
        with pytest.raises(ValueError):
            tp.mi_continuity_check("input", p, V, p, 0.5)

    def test_unknown_part(self):
        p = Pmf([0.5, 0.5])
        V = Channel([[0.8, 0.2], [0.3, 0.7]])
        with pytest.raises(ValueError):
            tp.mi_continuity_check("both", p, V, p, 0.01)
