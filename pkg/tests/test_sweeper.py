#!/usr/bin/env python3
"""
参数遍历与平移搜索测试
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import formulas, sweeper
from models.errors import ParameterError
from models.types import Family


def test_sweep_shifts():
    rows = sweeper.sweep_shifts(3, (1, 0))
    assert [row.shift for row in rows] == ["000", "001", "010", "011", "100", "101", "110", "111"]
    assert all(row.a == "10" for row in rows)
    assert rows[0].ell == 3 and rows[0].L == 1
    assert sweeper.rows_mean(rows) == formulas.l2sq_pa_shift_average(3)


def test_sweep_shifts_symmetrized():
    rows = sweeper.sweep_shifts(4, (0, 1, 1), symmetrized=True)
    assert sweeper.rows_mean(rows) == formulas.l2sq_sym_pa_shift_average(4)


def test_sweep_weights():
    """σ=0时每行只依赖|a|"""
    rows = sweeper.sweep_weights(4)
    assert len(rows) == 8
    for row in rows:
        assert row.shift == "0000"
        assert row.value == formulas.l2sq_pa_unshifted(4, row.a.count("1"))
    pc_rows = sweeper.sweep_weights(4, family=Family.PC)
    assert [r.value for r in pc_rows] == [r.value for r in rows]


def test_sweep_threads_keep_order():
    single = sweeper.sweep_shifts(5, (1, 0, 1, 1), threads=1)
    pooled = sweeper.sweep_shifts(5, (1, 0, 1, 1), threads=4)
    assert single == pooled


def test_sweep_rejects_symmetrized_pc():
    with pytest.raises(ParameterError):
        sweeper.sweep_shifts(3, (1, 1), Family.PC, symmetrized=True)


def test_search_shift_exhaustive():
    a = (1, 0, 1)
    result = sweeper.search_shift(4, a)
    assert result.mode == "exhaustive"
    assert result.evaluated == 16
    assert result.value == min(row.value for row in sweeper.sweep_shifts(4, a))
    assert formulas.l2sq_pa(4, a, tuple(int(ch) for ch in result.shift)) == result.value


def test_search_shift_greedy():
    """超过穷举上限时从平衡平移开始下降"""
    a = (1, 1, 0, 1, 0)
    result = sweeper.search_shift(6, a, exhaustive_max=4)
    assert result.mode == "greedy"
    assert result.value <= formulas.l2sq_pa(6, a, formulas.balanced_shift(6, a))
    assert result.value >= sweeper.search_shift(6, a).value
    assert isinstance(result.value, Fraction)
