"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (run with ``pytest -s`` or see the
captured output on failure). Tolerances are pinned here and in
``simex.verify``; nothing is calibrated after the fact. The same checks
back the ``simex verify`` CLI command.
"""

import math
import time

import numpy as np
import pytest

from simex import verify
from simex.core import Channel
from simex.exponents import error_exponent, sc_exponent
from simex.nsdist import eps_ns_iid, eps_ns_iid_bruteforce
from simex.renyi import max_information, renyi_capacity
from simex.srbounds import sr_exponents, sr_sandwich, sr_success_sandwich

LN2 = math.log(2.0)


def _report(num, name, rows):
    ok = all(r.passed for r in rows)
    worst = min((r.margin for r in rows), default=math.inf)
    print(f"[criterion {num:>2}] {'PASS' if ok else 'FAIL'}  {name}  (worst margin {worst:.3g})")
    for r in rows:
        assert r.passed, f"{r.name}: margin={r.margin} {r.detail}"


def test_criterion_01_oracle_equivalence():
    t0 = time.time()
    rows = verify.oracle_equivalence_suite(seed=verify.DEFAULT_SEED)
    _report(1, "reduced solver == brute-force oracle (420 instances, < 60 s)", rows)
    assert time.time() - t0 < 120.0  # suite itself asserts the 60 s budget


def test_criterion_02_identity_closed_forms():
    rows = verify.identity_regression_suite()
    _report(2, "identity-channel closed forms and exponents", rows)


def test_criterion_03_capacity_regression():
    rows = verify.capacity_regression_suite()
    _report(3, "Renyi capacity closed form + grid oracle + max-information", rows)


def test_criterion_04_ee_sandwich():
    rows = verify.ee_sandwich_suite()
    _report(4, "finite-n distortion sandwich at rate 0.6 (n = 4..14)", rows)


def test_criterion_05_sce_sandwich():
    rows = verify.sce_sandwich_suite()
    _report(5, "finite-n success sandwich at rate 0.2 (n = 6..14)", rows)


def test_criterion_06_exponent_trend():
    rows = verify.ee_trend_suite()
    _report(6, "finite-n exponent stays inside the correction envelope", rows)


def test_criterion_07_definetti_dominance():
    rows = verify.definetti_suite()
    _report(7, "type-mixture dominance, exhaustive extreme points", rows)


def test_criterion_08_continuity_suites():
    rows = verify.continuity_suite(trials=1000, seed=verify.DEFAULT_SEED)
    _report(8, "KL/MI continuity bounds, 1000 seeded trials each", rows)


def test_criterion_09_types_identities():
    rows = verify.types_identity_suite()
    _report(9, "method-of-types identities and class-size sandwich", rows)


def test_criterion_10_sr_layer():
    rows = verify.sr_layer_suite()
    _report(10, "shared-randomness sandwich values and exponent equality", rows)


# Supplementary (not numbered criteria): the distortion sandwich in the
# genuinely exponential regime, where capacity < rate < max-information and
# the exact distortion is strictly inside (0, 1).


def test_supplementary_nontrivial_ee_regime():
    W = Channel([[0.9, 0.1], [0.1, 0.9]])
    r = 0.5
    assert renyi_capacity(W, 1.0).value < r < max_information(W)
    rows = verify.ee_sandwich_suite(r=r, ns=(4, 6, 8, 10)) + verify.ee_trend_suite(r=r, ns=(4, 6, 8, 10))
    ok = all(x.passed for x in rows)
    print(f"[supplement ] {'PASS' if ok else 'FAIL'}  nontrivial-rate sandwich at r=0.5")
    for x in rows:
        assert x.passed, f"{x.name}: {x.detail}"
    # and the measured distortions really are interior points
    for n in (4, 6, 8):
        from simex.nsdist import message_size_for_rate

        eps = eps_ns_iid(W, n, message_size_for_rate(n, r)).value
        assert 0.0 < eps < 1.0
