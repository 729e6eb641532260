"""
Closed-form L2 discrepancy values for shifted and symmetrized digital nets,
special Haar coefficients, shift diagnostics and the balanced shift
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from models.errors import ParameterError
from models.types import (BilykReport, Family, OrderDiagnostics, ShiftParams,
                          ShiftVector, TriParams)

logger = logging.getLogger(__name__)

ShiftLike = Union[ShiftVector, Sequence[int]]


def _as_shift(shift: ShiftLike) -> ShiftVector:
    return shift if isinstance(shift, ShiftVector) else ShiftVector(tuple(shift))


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def shift_params(n: int, weights: Sequence[int], shift: ShiftLike,
                 family: Family = Family.PA) -> ShiftParams:
    """
    计算ℓ与L

    Args:
        n: 网参数
        weights: PA族为(a_1..a_{n-1})，PC族为(c_2..c_n)
        shift: 平移σ
        family: PA或PC
    Returns:
        ShiftParams(ell, L)
    """
    shift = _as_shift(shift)
    if shift.n != n or len(weights) != n - 1:
        raise ParameterError(f"need n-1={n - 1} weights and n={n} shift bits, "
                             f"got {len(weights)} and {shift.n}")
    ell = sum(1 - 2 * b for b in shift.bits)
    if family is Family.PA:
        L = sum(w * (1 - 2 * shift[i]) for i, w in enumerate(weights, start=1))
    elif family is Family.PC:
        L = sum(w * (1 - 2 * shift[i]) for i, w in enumerate(weights, start=2))
    else:
        raise ParameterError(f"shift statistics are defined for pa and pc, not {family.value}")
    return ShiftParams(ell=ell, L=L)


def _tail_terms(n: int) -> Fraction:
    return Fraction(3, 8) - Fraction(1, 9 * 2 ** (2 * n + 3))


def l2sq_pa(n: int, a: Sequence[int], shift: ShiftLike) -> Fraction:
    """(2^n L2(P_a(σ)))²"""
    shift = _as_shift(shift)
    p = shift_params(n, a, shift)
    ell, L = p.ell, p.L
    main = Fraction((ell - L) ** 2 + L ** 2 + 8 * ell - 10 * L, 64) + Fraction(5 * n, 192)
    return main + Fraction(2 * shift[n] * L - ell + 4, 2 ** (n + 4)) + _tail_terms(n)


def _check_weight(n: int, weight: int):
    if not 0 <= weight <= n - 1:
        raise ParameterError(f"weight must lie in [0, {n - 1}], got {weight}")


def l2sq_pa_unshifted(n: int, weight: int) -> Fraction:
    """σ=0时只依赖|a|的值"""
    _check_weight(n, weight)
    main = Fraction((n - weight) ** 2 + weight ** 2 - 10 * weight, 64) + Fraction(29 * n, 192)
    return main - Fraction(n - 4, 2 ** (n + 4)) + _tail_terms(n)


def l2sq_pa_shift_average(n: int) -> Fraction:
    """对全部2^n个平移取平均，与a无关"""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    return Fraction(n, 24) + Fraction(3, 8) + Fraction(1, 2 ** (n + 2)) - Fraction(1, 9 * 2 ** (2 * n + 3))


def l2sq_hammersley_shifted(n: int, z: int) -> Fraction:
    """
    平移Hammersley点集，z为σ中0的个数

    按(2^n L2)²的尺度返回，末项为1/(9·2^{2n+3})
    """
    if not 0 <= z <= n:
        raise ParameterError(f"zero count must lie in [0, {n}], got {z}")
    shift = (0,) * z + (1,) * (n - z)
    return l2sq_pa(n, (0,) * (n - 1), shift)


def l2sq_sym_pa(n: int, a: Sequence[int], shift: ShiftLike) -> Fraction:
    """(2^{n+1} L2(P̃_a(σ)))²"""
    shift = _as_shift(shift)
    p = shift_params(n, a, shift)
    return l2sq_sym_pa_shift_average(n) - (-1) ** shift[n] * Fraction(p.L, 2 ** (n + 2))


def l2sq_sym_pa_shift_average(n: int) -> Fraction:
    """对称化网对全部平移的平均，尺度(2^{n+1} L2)²"""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    return Fraction(n, 24) + Fraction(11, 8) + Fraction(1, 2 ** n) - Fraction(1, 9 * 2 ** (2 * n + 1))


def l2sq_pc(n: int, c: Sequence[int], shift: ShiftLike) -> Fraction:
    """(2^n L2(P_c(σ)))²"""
    shift = _as_shift(shift)
    p = shift_params(n, c, shift, Family.PC)
    ell, L = p.ell, p.L
    main = (Fraction((ell - L) ** 2 + L ** 2 + 8 * ell + 2 * L * (2 * shift[1] - 5), 64)
            + Fraction(5 * n, 192))
    return main - Fraction(ell - 4, 2 ** (n + 4)) + _tail_terms(n)


def l2sq_pc_unshifted(n: int, weight: int) -> Fraction:
    return l2sq_pa_unshifted(n, weight)


def l2_squared_unscaled(value: Fraction, N: int) -> Fraction:
    """(N·L2)² → ‖Δ‖²"""
    if N < 1:
        raise ParameterError(f"point count must be positive, got {N}")
    return Fraction(value) / (N * N)


def _pc_weights(n: int, c: Optional[Sequence[int]]) -> Sequence[int]:
    return (1,) * (n - 1) if c is None else tuple(c)


def mu_m10_pc(n: int, shift: ShiftLike, c: Optional[Sequence[int]] = None) -> Fraction:
    """P_c(σ)在j=(-1,0), m=(0,0)处的系数，c缺省为全1"""
    shift = _as_shift(shift)
    L = shift_params(n, _pc_weights(n, c), shift, Family.PC).L
    sign = 1 - 2 * shift[1]
    return -_pow2(-n - 3) + sign * (L * _pow2(-n - 3) + _pow2(-2 * n - 2))


def sym_mu_m10_pc(n: int, shift: ShiftLike, c: Optional[Sequence[int]] = None) -> Fraction:
    """½(μ^σ + μ^{σ*})"""
    shift = _as_shift(shift)
    L = shift_params(n, _pc_weights(n, c), shift, Family.PC).L
    return _pow2(-n - 3) * ((1 - 2 * shift[1]) * L - 1)


def sym_pc_j_m10_term(n: int, c: Sequence[int], shift: ShiftLike) -> Fraction:
    shift = _as_shift(shift)
    L = shift_params(n, c, shift, Family.PC).L
    return _pow2(-2 * n - 6) * (L * L - 2 * (1 - 2 * shift[1]) * L + 1)


def ptri_l_params(tri_entries: Sequence[Sequence[int]], mu: int) -> TriParams:
    """
    l_μ(k)=1当且仅当a_{k,i}=0对全部i∈{k+1..μ}成立

    Args:
        tri_entries: n×n严格上三角表，tri_entries[i-1][j-1]=a_{i,j}
        mu: 1..n（mu=0返回空行）
    """
    n = len(tri_entries)
    if not 0 <= mu <= n:
        raise ParameterError(f"mu must lie in [0, {n}], got {mu}")
    values = tuple(int(all(tri_entries[k - 1][i - 1] == 0 for i in range(k + 1, mu + 1)))
                   for k in range(1, mu + 1))
    return TriParams(mu=mu, l_values=values)


def ptri_corner_coefficients(n: int, tri_entries: Sequence[Sequence[int]]):
    """(μ_{(-1,-1),(0,0)}, μ_{(0,-1),(0,0)})，σ=0"""
    if len(tri_entries) != n:
        raise ParameterError(f"triangular table must have {n} rows")
    top = ptri_l_params(tri_entries, n).total
    below = ptri_l_params(tri_entries, n - 1).total
    corner = top * _pow2(-n - 3) + _pow2(-n - 1) + _pow2(-2 * n - 2)
    row = (below - top) * _pow2(-n - 3) + _pow2(-2 * n - 2)
    return corner, row


def order_diagnostics(n: int, weights: Sequence[int], shift: ShiftLike,
                      family: Family = Family.PA, constant: float = 1.0) -> OrderDiagnostics:
    p = shift_params(n, weights, shift, family)
    root = math.sqrt(n)
    if family is Family.PA:
        sym_optimal = True
    else:
        sym_optimal = abs(p.L) <= constant * root
    return OrderDiagnostics(ell=p.ell, L=p.L, ratio_ellL=abs(p.ell - p.L) / root,
                            ratio_L=abs(p.L) / root, sym_optimal=sym_optimal)


def balanced_shift(n: int, a: Sequence[int]) -> ShiftVector:
    """在{a_i=1}与{a_i=0}内各自交替取0,1,...，σ_n=0"""
    if len(a) != n - 1:
        raise ParameterError(f"a must have n-1={n - 1} bits, got {len(a)}")
    bits = []
    seen = {0: 0, 1: 0}
    for w in a:
        bits.append(seen[w] % 2)
        seen[w] += 1
    bits.append(0)
    return ShiftVector(tuple(bits))


def bilyk_counterexample_report(n: int) -> BilykReport:
    """a=1^{n-1}, σ=0：角系数≤1/N而L2阶次不是最优"""
    if n < 2:
        raise ParameterError(f"counterexample needs n >= 2, got {n}")
    # ℓ-L = 1
    mu_corner = _pow2(-n - 1) + _pow2(-2 * n - 2) + _pow2(-n - 3)
    value = l2sq_pa_unshifted(n, n - 1)
    report = BilykReport(n=n, mu_corner=mu_corner, one_over_N=_pow2(-n),
                         l2sq_scaled=value, n_sq_ratio=float(value * 64 / (n * n)))
    logger.debug(f"counterexample n={n}: mu={mu_corner}, ratio={report.n_sq_ratio:.4f}")
    return report


def sym_excess_slope(n_lo: int = 4, n_hi: int = 64) -> float:
    """log((2^{n+1}L2)² - 11/8)对log n的最小二乘斜率（a=0, σ=0）"""
    ns = np.arange(n_lo, n_hi + 1)
    excess = [float(l2sq_sym_pa(int(n), (0,) * (int(n) - 1), (0,) * int(n)) - Fraction(11, 8)) for n in ns]
    slope, _ = np.polyfit(np.log(ns), np.log(excess), 1)
    return float(slope)
