#!/usr/bin/env python3
"""
闭式L2值与特殊系数测试
"""

import os
import sys
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import discrepancy, formulas, haar, netgen
from models.errors import ParameterError
from models.types import Family, HaarIndex, NetSpec, ShiftVector
from utils.bits import all_bit_vectors


@st.composite
def weights_and_shift(draw, n_max=7):
    n = draw(st.integers(1, n_max))
    w = tuple(draw(st.lists(st.integers(0, 1), min_size=n - 1, max_size=n - 1)))
    s = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    return n, w, s


def test_known_values():
    """小规模的已知值"""
    assert formulas.l2sq_pa(1, (), (0,)) == Fraction(91, 144)
    assert formulas.l2sq_sym_pa(1, (), (0,)) == Fraction(137, 72)
    assert formulas.l2sq_sym_pa(2, (1,), (0, 0)) == Fraction(473, 288)
    assert formulas.l2sq_pc(2, (1,), (0, 0)) == Fraction(671, 1152)
    assert formulas.l2sq_pa_shift_average(1) == Fraction(155, 288)
    assert formulas.l2sq_sym_pa_shift_average(1) == Fraction(137, 72)


def test_shift_params():
    p = formulas.shift_params(4, (1, 0, 1), (0, 1, 1, 0))
    assert (p.ell, p.L) == (0, 0)
    p = formulas.shift_params(3, (1, 1), (1, 0, 0), Family.PC)
    assert (p.ell, p.L) == (1, 2)
    with pytest.raises(ParameterError):
        formulas.shift_params(3, (1,), (0, 0, 0))
    with pytest.raises(ParameterError):
        formulas.shift_params(2, (1,), (0, 0), Family.TRI)


@given(weights_and_shift(n_max=6))
@settings(max_examples=40, deadline=None)
def test_pa_formula_matches_warnock(params):
    n, a, s = params
    points = netgen.generate(NetSpec.pa(n, a, s))
    assert formulas.l2sq_pa(n, a, s) == discrepancy.warnock_l2_squared(points)


@given(weights_and_shift(n_max=5))
@settings(max_examples=30, deadline=None)
def test_sym_formula_matches_warnock(params):
    n, a, s = params
    points = netgen.generate(NetSpec.pa(n, a, s, symmetrized=True))
    assert formulas.l2sq_sym_pa(n, a, s) == discrepancy.warnock_l2_squared(points)


@given(weights_and_shift(n_max=6))
@settings(max_examples=40, deadline=None)
def test_pc_formula_matches_warnock(params):
    n, c, s = params
    points = netgen.generate(NetSpec.pc(n, c, s))
    assert formulas.l2sq_pc(n, c, s) == discrepancy.warnock_l2_squared(points)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_unshifted_depends_only_on_weight(n):
    """σ=0时只依赖|a|"""
    for a in all_bit_vectors(n - 1):
        zero = (0,) * n
        assert formulas.l2sq_pa(n, a, zero) == formulas.l2sq_pa_unshifted(n, sum(a))
        assert formulas.l2sq_pc(n, a, zero) == formulas.l2sq_pc_unshifted(n, sum(a))
    with pytest.raises(ParameterError):
        formulas.l2sq_pa_unshifted(n, n)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_shift_average_independent_of_weights(n):
    for a in all_bit_vectors(n - 1):
        values = [formulas.l2sq_pa(n, a, s) for s in all_bit_vectors(n)]
        assert sum(values, Fraction(0)) / len(values) == formulas.l2sq_pa_shift_average(n)
        sym = [formulas.l2sq_sym_pa(n, a, s) for s in all_bit_vectors(n)]
        assert sum(sym, Fraction(0)) / len(sym) == formulas.l2sq_sym_pa_shift_average(n)


def test_hammersley_depends_only_on_zero_count():
    n = 4
    for z in range(n + 1):
        expected = formulas.l2sq_hammersley_shifted(n, z)
        for shift in set(permutations((0,) * z + (1,) * (n - z))):
            assert formulas.l2sq_pa(n, (0,) * (n - 1), shift) == expected
    with pytest.raises(ParameterError):
        formulas.l2sq_hammersley_shifted(n, n + 1)


def test_l2_squared_unscaled():
    assert formulas.l2_squared_unscaled(Fraction(91, 144), 2) == Fraction(91, 576)
    with pytest.raises(ParameterError):
        formulas.l2_squared_unscaled(Fraction(1), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pc_coefficient_m10(n):
    """P_c(σ)在j=(-1,0)处的系数及其对称化"""
    index = HaarIndex(-1, 0)
    for c in all_bit_vectors(n - 1):
        for s in all_bit_vectors(n):
            plain = netgen.generate(NetSpec.pc(n, c, s))
            sym = netgen.symmetrize(plain)
            assert haar.haar_coefficient(plain, index) == formulas.mu_m10_pc(n, s, c)
            assert haar.haar_coefficient(sym, index) == formulas.sym_mu_m10_pc(n, s, c)
            assert haar.level_coefficients(sym, -1, 0).weighted_square_sum() == \
                formulas.sym_pc_j_m10_term(n, c, s)


def test_pc_coefficient_defaults_to_all_ones():
    n = 5
    zero = (0,) * n
    assert formulas.mu_m10_pc(n, zero) == formulas.mu_m10_pc(n, zero, (1,) * (n - 1))
    assert formulas.sym_mu_m10_pc(n, zero) == Fraction(n - 2, 2 ** (n + 3))


def test_tri_parameters():
    """上三角网的l_μ与角系数"""
    spec = NetSpec.tri(3, {(1, 2): 1, (2, 3): 1})
    assert formulas.ptri_l_params(spec.tri_entries, 3).l_values == (0, 0, 1)
    assert formulas.ptri_l_params(spec.tri_entries, 2).total == 1
    corner, row = formulas.ptri_corner_coefficients(3, spec.tri_entries)
    points = netgen.generate(spec)
    assert haar.haar_coefficient(points, HaarIndex(-1, -1)) == corner
    assert haar.haar_coefficient(points, HaarIndex(0, -1)) == row
    assert row == Fraction(1, 2 ** 8)

    single = NetSpec.tri(1, {})
    corner, _ = formulas.ptri_corner_coefficients(1, single.tri_entries)
    assert corner == Fraction(3, 8)
    with pytest.raises(ParameterError):
        formulas.ptri_l_params(spec.tri_entries, 4)


def test_balanced_shift():
    """两组内交替取值，σ_n=0"""
    assert formulas.balanced_shift(4, (1, 1, 0)).bits == (0, 1, 0, 0)
    assert formulas.balanced_shift(1, ()).bits == (0,)
    for n in range(1, 9):
        for a in all_bit_vectors(n - 1):
            p = formulas.shift_params(n, a, formulas.balanced_shift(n, a))
            assert p.L in (0, 1)
            assert p.ell - p.L in (1, 2)


def test_balanced_shift_above_average_for_small_n():
    """n≤7时对每个a都高于平移均值，n=8时恰有一半高于"""
    for n in range(1, 9):
        average = formulas.l2sq_pa_shift_average(n)
        above = sum(1 for a in all_bit_vectors(n - 1)
                    if formulas.l2sq_pa(n, a, formulas.balanced_shift(n, a)) > average)
        assert above == (2 ** (n - 1) if n <= 7 else 2 ** (n - 2))


@pytest.mark.parametrize("n", [24, 31, 40])
def test_balanced_shift_below_average_for_large_n(n):
    for a in ((0,) * (n - 1), (1,) * (n - 1), tuple(i % 2 for i in range(n - 1))):
        value = formulas.l2sq_pa(n, a, formulas.balanced_shift(n, a))
        assert value <= formulas.l2sq_pa_shift_average(n)


def test_counterexample_report():
    report = formulas.bilyk_counterexample_report(2)
    assert report.mu_corner == Fraction(11, 64)
    assert report.one_over_N == Fraction(1, 4)
    assert report.l2sq_scaled == formulas.l2sq_pa(2, (1,), (0, 0))
    points = netgen.generate(NetSpec.pa(2, (1,), (0, 0)))
    assert haar.haar_coefficient(points, HaarIndex(-1, -1)) == report.mu_corner
    for n in range(2, 12):
        report = formulas.bilyk_counterexample_report(n)
        assert report.mu_corner <= report.one_over_N
        assert report.l2sq_scaled >= Fraction(n * n, 64)
    with pytest.raises(ParameterError):
        formulas.bilyk_counterexample_report(1)


def test_order_diagnostics():
    diag = formulas.order_diagnostics(4, (1, 1, 1), (0, 0, 0, 0))
    assert (diag.ell, diag.L) == (4, 3)
    assert diag.ratio_ellL == pytest.approx(0.5)
    assert diag.sym_optimal
    pc = formulas.order_diagnostics(4, (1, 1, 1), (0, 0, 0, 0), Family.PC, constant=1.0)
    assert pc.ratio_L == pytest.approx(1.5)
    assert not pc.sym_optimal


def test_symmetrized_excess_slope():
    """对称化超出部分按n线性增长"""
    assert abs(formulas.sym_excess_slope(4, 64) - 1) <= 0.05
