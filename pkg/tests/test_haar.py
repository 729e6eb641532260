#!/usr/bin/env python3
"""
Haar系数测试
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import discrepancy, haar, netgen
from models.errors import DomainError, ParameterError
from models.types import DyadicPointSet, HaarIndex, NetSpec, RegionId


def hammersley(n):
    return netgen.generate(NetSpec.pa(n, (0,) * (n - 1), (0,) * n))


@st.composite
def pa_specs(draw, n_max=4, symmetrized=False):
    n = draw(st.integers(1, n_max))
    a = tuple(draw(st.lists(st.integers(0, 1), min_size=n - 1, max_size=n - 1)))
    s = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    return NetSpec.pa(n, a, s, symmetrized=symmetrized)


def test_box_points():
    """开盒内部的点，边界点不计"""
    assert haar.box_points(hammersley(1), HaarIndex(1, 1, 0, 0)) == []
    assert haar.box_points(hammersley(2), HaarIndex(1, 1, 1, 1)) == [(3, 3)]
    assert haar.box_points(hammersley(2), HaarIndex(1, 1, 0, 1)) == []


def test_index_validation():
    """level 0只有一个盒"""
    with pytest.raises(ParameterError):
        HaarIndex(0, 0, 1, 0)
    with pytest.raises(ParameterError):
        HaarIndex(-2, 0)
    assert HaarIndex(3, -1, 7, 0).weight_exponent == 3


def test_generic_coefficients_on_hammersley():
    """n=2 Hammersley上的已知系数"""
    points = hammersley(2)
    assert haar.haar_coefficient(points, HaarIndex(-1, 0)) == Fraction(-1, 64)
    assert haar.haar_coefficient(points, HaarIndex(0, 0)) == Fraction(1, 64)
    assert haar.haar_coefficient(points, HaarIndex(1, 1, 1, 1)) == Fraction(3, 256)
    assert haar.haar_coefficient(points, HaarIndex(1, 1, 0, 0)) == Fraction(-1, 256)


def test_level_square_sum():
    """n=2 Hammersley在(1,1)层：Σμ² = 3·2^-14"""
    level = haar.level_coefficients(hammersley(2), 1, 1)
    assert level.box_count == 4
    assert level.empty_count == 3
    assert level.square_sum() == Fraction(3, 2 ** 14)
    assert level.weighted_square_sum() == Fraction(3, 2 ** 12)


@given(pa_specs(n_max=3))
@settings(max_examples=15, deadline=None)
def test_oracle_agrees_with_generic(spec):
    """积分参照实现与逐点公式一致，包括n层以上"""
    points = netgen.generate(spec)
    for j1 in range(-1, spec.n + 1):
        for j2 in range(-1, spec.n + 1):
            level = haar.level_coefficients(points, j1, j2)
            for m1, m2, mu in level.items():
                index = HaarIndex(j1, j2, m1, m2)
                assert haar.haar_coefficient_oracle(points, index) == mu
                assert haar.haar_coefficient(points, index) == mu


def test_oracle_agrees_up_to_twice_n():
    """n=4时|j|≤2n的全部层"""
    n = 4
    points = netgen.generate(NetSpec.pa(n, (1, 0, 1), (0, 1, 1, 0)))
    checked = 0
    for j1 in range(-1, 2 * n + 1):
        for j2 in range(-1, 2 * n + 1):
            if max(j1, 0) + max(j2, 0) > 2 * n:
                continue
            for m1, m2, mu in haar.level_coefficients(points, j1, j2).items():
                assert haar.haar_coefficient_oracle(points, HaarIndex(j1, j2, m1, m2)) == mu
                checked += 1
    assert checked == 5120


@pytest.mark.parametrize("j, region", [
    ((-1, -1), RegionId.J1), ((-1, 0), RegionId.J2), ((-1, 2), RegionId.J3),
    ((-1, 3), RegionId.J4), ((0, -1), RegionId.J5), ((1, -1), RegionId.J6),
    ((3, -1), RegionId.J7), ((0, 0), RegionId.J8), ((1, 0), RegionId.J9),
    ((0, 2), RegionId.J10), ((1, 1), RegionId.J11), ((2, 2), RegionId.J12),
    ((3, 0), RegionId.J13), ((0, 5), RegionId.J13),
])
def test_classify_region(j, region):
    assert haar.classify_region(j, 3) is region


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_finite_regions_partition_levels(n):
    """有限区域恰好覆盖{-1..n-1}²"""
    seen = []
    for region in RegionId:
        levels = haar.region_levels(region, n)
        if region.is_infinite:
            assert not levels
        seen.extend(levels)
    assert sorted(seen) == [(j1, j2) for j1 in range(-1, n) for j2 in range(-1, n)]


def test_tail_sum():
    assert haar.tail_sum(0) == Fraction(7, 144)
    assert haar.tail_sum(1) == Fraction(31, 2304)
    with pytest.raises(ParameterError):
        haar.tail_sum(-1)


def test_parseval_single_point():
    """n=0时只有(-1,-1)层加尾项"""
    assert haar.parseval_l2_squared(DyadicPointSet(0, ((0, 0),)), 0) == Fraction(11, 18)


@given(pa_specs(n_max=4))
@settings(max_examples=30, deadline=None)
def test_parseval_matches_warnock(spec):
    points = netgen.generate(spec)
    assert haar.parseval_l2_squared(points, spec.n) * points.N ** 2 == \
        discrepancy.warnock_l2_squared(points)


@given(pa_specs(n_max=4, symmetrized=True))
@settings(max_examples=20, deadline=None)
def test_parseval_matches_warnock_symmetrized(spec):
    points = netgen.generate(spec)
    assert haar.parseval_l2_squared(points, spec.n, threads=2) * points.N ** 2 == \
        discrepancy.warnock_l2_squared(points)


def test_parseval_requires_grid():
    """坐标不在2^-n网上"""
    points = DyadicPointSet(3, ((1, 0), (4, 4)))
    with pytest.raises(DomainError):
        haar.parseval_l2_squared(points, 2)
    with pytest.raises(DomainError):
        haar.parseval_l2_squared(DyadicPointSet(2, ()), 2)


@pytest.mark.parametrize("a, s", [((0, 0, 0), (0, 0, 0, 0)), ((1, 0, 1), (0, 1, 1, 0)), ((1, 1, 1), (1, 1, 1, 1))])
def test_coefficient_audit(a, s):
    """系数量级分类审计全部通过"""
    spec = NetSpec.pa(4, a, s)
    report = haar.coefficient_bound_audit(netgen.generate(spec), 4, spec)
    assert report.success, [b for b in report.branches if not b.success]
    names = [b.name for b in report.branches]
    assert "(vii)" in names and "(iii) exceptions" in names
