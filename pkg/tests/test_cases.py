#!/usr/bin/env python3
"""
闭式Haar系数与区域和测试
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import cases, formulas, haar, netgen
from models.errors import ParameterError
from models.types import HaarIndex, NetSpec, RegionId, ShiftVector
from utils.bits import all_bit_vectors


def small_parameters(n_max=3):
    for n in range(1, n_max + 1):
        for a in all_bit_vectors(n - 1):
            for s in all_bit_vectors(n):
                yield n, a, s


@pytest.mark.parametrize("n, a, s", list(small_parameters()))
def test_case_coefficients_match_generic(n, a, s):
    """闭式系数与通用公式的绝对值一致"""
    shift = ShiftVector(s)
    plain = netgen.generate(NetSpec.pa(n, a, s))
    sym = netgen.symmetrize(plain)
    for j1 in range(-1, n):
        for j2 in range(-1, n):
            lp = haar.level_coefficients(plain, j1, j2)
            ls = haar.level_coefficients(sym, j1, j2)
            for m1, m2, mu in lp.items():
                index = HaarIndex(j1, j2, m1, m2)
                assert abs(cases.case_coefficient_pa(n, a, shift, index)) == abs(mu)
                assert abs(cases.sym_case_coefficient(n, a, shift, index)) == abs(ls.value(m1, m2))


@pytest.mark.parametrize("n, a, s", list(small_parameters()))
def test_symmetrized_coefficient_is_half_sum(n, a, s):
    """对称化系数等于σ与σ*系数的平均"""
    shift = ShiftVector(s)
    plain = netgen.generate(NetSpec.pa(n, a, s))
    dual = netgen.generate(NetSpec.pa(n, a, shift.complement().bits))
    sym = netgen.symmetrize(plain)
    for j1 in range(-1, n):
        for j2 in range(-1, n):
            lp, ld, ls = (haar.level_coefficients(p, j1, j2) for p in (plain, dual, sym))
            for m1, m2, mu in lp.items():
                assert ls.value(m1, m2) == (mu + ld.value(m1, m2)) / 2


@pytest.mark.parametrize("n, a, s", list(small_parameters()))
def test_region_sums_closed_equal_direct(n, a, s):
    shift = ShiftVector(s)
    for region in RegionId:
        assert cases.region_parseval_sum(n, a, shift, region, "closed") == \
            cases.region_parseval_sum(n, a, shift, region, "direct")
        assert cases.sym_region_parseval_sum(n, a, shift, region, "closed") == \
            cases.sym_region_parseval_sum(n, a, shift, region, "direct")


@pytest.mark.parametrize("n, a, s", [(4, (1, 0, 1), (0, 1, 1, 0)), (5, (0, 1, 1, 0), (1, 0, 0, 1, 1))])
def test_region_sums_add_up_to_l2(n, a, s):
    """十三个区域之和即为Parseval总和"""
    shift = ShiftVector(s)
    plain = sum((cases.region_parseval_sum(n, a, shift, r) for r in RegionId), Fraction(0))
    sym = sum((cases.sym_region_parseval_sum(n, a, shift, r) for r in RegionId), Fraction(0))
    assert plain * 4 ** n == formulas.l2sq_pa(n, a, s)
    assert sym * 4 ** (n + 1) == formulas.l2sq_sym_pa(n, a, s)


@pytest.mark.parametrize("n, a", [(2, (1,)), (3, (0, 1)), (4, (1, 1, 0)), (5, (0, 0, 1, 1)),
                                  (6, (1, 0, 1, 0, 1))])
def test_j12_closed_form_matches_direct(n, a):
    """J12区域和的单一闭式与逐层直接求和一致，且与a、平移无关"""
    for s in [(0,) * n, (1,) + (0,) * (n - 1)]:
        shift = ShiftVector(s)
        assert cases.region_parseval_sum(n, a, shift, RegionId.J12, "closed") == \
            cases.region_parseval_sum(n, a, shift, RegionId.J12, "direct")
    assert cases.region_parseval_sum(n, a, ShiftVector((0,) * n), RegionId.J12, "closed") == \
        cases.region_parseval_sum(n, (0,) * (n - 1), ShiftVector((1,) * n), RegionId.J12, "closed")


def test_j12_closed_form_small_values():
    assert cases.region_parseval_sum(1, (), ShiftVector((0,)), RegionId.J12, "closed") == 0
    assert cases.region_parseval_sum(2, (0,), ShiftVector((0, 0)), RegionId.J12, "closed") == Fraction(3, 4096)


def test_symmetrized_region_sums_n1():
    """n=1对称化区域和"""
    shift = ShiftVector((0,))
    values = {r: cases.sym_region_parseval_sum(1, (), shift, r) for r in RegionId}
    assert values[RegionId.J3] == Fraction(1, 256)
    assert sum(values.values(), Fraction(0)) == Fraction(137, 1152)


def test_printed_sign_flips():
    assert cases.PRINTED_SIGN_FLIPS["plain"] == frozenset({RegionId.J7})
    assert cases.PRINTED_SIGN_FLIPS["symmetrized"] == frozenset({RegionId.J4, RegionId.J7})


def test_region_sum_method_and_parameters():
    shift = ShiftVector((0, 0))
    with pytest.raises(ParameterError):
        cases.region_parseval_sum(2, (0,), shift, RegionId.J1, "guess")
    with pytest.raises(ParameterError):
        cases.case_coefficient_pa(2, (0, 1), shift, HaarIndex(-1, -1))
