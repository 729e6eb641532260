#!/usr/bin/env python3
"""
验证套件测试（小规模参数）
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import formulas, verifier

SMALL_OPTIONS = {
    "netgen": {"n_max": 3},
    "theorems": {"n_max": 3},
    "symmetrized": {"n_max": 3},
    "pc": {"n_max": 3},
    "oracle": {"n_max": 2},
    "propositions": {"n_max": 3},
    "lemmas": {"n_max": 3},
    "shift-average": {"n_max": 3},
    "balanced": {"n_max": 5, "below_average_from": 24, "below_average_to": 26, "samples": 3},
    "position": {"n": 4, "weight": 2},
    "counterexample": {"n_max": 5, "pc_n_max": 4},
    "audit": {"n_values": [4], "samples": 2},
    "tri": {"n_max": 4, "samples": 8},
    "star": {"n_max": 3},
    "slope": {},
    "mc": {"n": 2, "seeds": 3, "samples": 20000, "min_inside": 3},
}


def small_options(name):
    return dict(SMALL_OPTIONS[name], seed=11)


def test_every_suite_has_small_options():
    assert set(SMALL_OPTIONS) == set(verifier.SUITES)


@pytest.mark.parametrize("name", sorted(SMALL_OPTIONS))
def test_suite_passes(name):
    """每个套件在小规模参数下全部通过"""
    result = verifier.run_suite(name, small_options(name))
    assert result.success, result.mismatch
    assert result.total_checked > 0
    assert "✓" in result.get_summary()


def test_oracle_suite_covers_levels_up_to_2n():
    """积分参照检查覆盖max(j1,0)+max(j2,0)≤2n的全部层"""
    result = verifier.run_suite("oracle", {"n_max": 2, "shifts": 1, "seed": 11})
    assert result.success, result.mismatch
    # n=1：32个系数；n=2：每个a 192个
    assert result.checked["generic-vs-oracle"] == 32 + 2 * 192


def test_netgen_suite_checks_tri_with_both_methods():
    result = verifier.run_suite("netgen", {"n_max": 3, "exhaustive_max": 3, "seed": 11})
    assert result.success, result.mismatch
    # PA、PC各42个(a, σ)组合，TRI共1+2+8个矩阵
    assert result.checked["net-rank"] == 2 * (2 + 8 + 32) + (1 + 2 + 8)
    assert result.checked["net-counting"] == result.checked["net-rank"]


def test_run_all_suites():
    results = verifier.run_suites(["all"], small_options)
    assert [r.suite for r in results] == list(verifier.SUITES)
    assert all(r.success for r in results)


def test_unknown_suite():
    with pytest.raises(KeyError):
        verifier.run_suite("nonexistent")


def test_first_mismatch_stops_suite(monkeypatch):
    """首个不匹配即终止，并记录参数"""
    original = formulas.l2sq_pa
    monkeypatch.setattr(formulas, "l2sq_pa", lambda n, a, s: original(n, a, s) + Fraction(1, 2 ** 20))
    result = verifier.run_suite("theorems", {"n_max": 2})
    assert not result.success
    assert result.mismatch.identity == "theorem-pa-warnock"
    assert result.mismatch.params == "n=1, a=, shift=0"
    assert result.checked == {"theorem-pa-warnock": 1}
    assert "✗" in result.get_summary()
