"""
Closed-form Haar coefficients and region sums for the shifted nets P_a(σ)
and their symmetrized versions
"""

import logging
from fractions import Fraction
from typing import Sequence, Tuple

from models.errors import ParameterError, UnsupportedError
from models.types import DyadicPointSet, HaarIndex, NetSpec, RegionId, ShiftVector
from core.haar import classify_region, level_coefficients, region_levels, require_resolution
from core.formulas import shift_params
from core.netgen import generate
from utils.bits import digits_msb

logger = logging.getLogger(__name__)

# 以通用公式的符号为准；这些区域的闭式在文献中的印刷符号相反
PRINTED_SIGN_FLIPS = {
    "plain": frozenset({RegionId.J7}),
    "symmetrized": frozenset({RegionId.J4, RegionId.J7}),
}


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def _psi(rho: Fraction) -> Fraction:
    return 1 - abs(1 - 2 * rho)


class _ShiftedNet:
    """P_a(σ)的参数与1起始下标访问"""

    def __init__(self, n: int, a: Sequence[int], shift: ShiftVector):
        if len(a) != n - 1 or shift.n != n:
            raise ParameterError(f"need n-1={n - 1} weights and n={n} shift bits")
        self.n = n
        self.a = tuple(a)
        self.shift = shift
        params = shift_params(n, self.a, shift)
        self.ell = params.ell
        self.L = params.L

    def A(self, k: int) -> int:
        return self.a[k - 1]

    def S(self, k: int) -> int:
        return self.shift[k]

    def complemented(self) -> "_ShiftedNet":
        return _ShiftedNet(self.n, self.a, self.shift.complement())


def _digits(index: HaarIndex) -> Tuple[list, list]:
    """(r, s)：m1、m2的二进制数字，最高位在前，r[0]为占位"""
    r = [0] + digits_msb(index.m1, max(index.j1, 0))
    s = [0] + digits_msb(index.m2, max(index.j2, 0))
    return r, s


def _gated_j12(net: _ShiftedNet, index: HaarIndex, r: list, s: list) -> Fraction:
    """J12：方程组成立时取α·ψ·ψ，否则只剩-β中的α部分为0"""
    n, j1, j2 = net.n, index.j1, index.j2
    for mu in range(n + 1 - j1, j2 + 1):
        if s[mu] ^ (net.A(mu) & r[1]) ^ net.S(mu) != r[n + 1 - mu]:
            return Fraction(0)
    p1 = n - j1
    rho1 = sum((Fraction((s[k] ^ (net.A(k) & r[1]) ^ net.S(k)) << (k - 1), 1 << p1)
                for k in range(1, p1 + 1)), Fraction(0))
    rho2 = Fraction(r[1] ^ net.S(n)) * _pow2(j2 - n)
    for k in range(j2 + 1, n):
        rho2 += (r[n + 1 - k] ^ (net.A(k) & r[1]) ^ net.S(k)) * _pow2(j2 - k)
    return _pow2(-n - j1 - j2 - 2) * _psi(rho1) * _psi(rho2)


def _plain_coefficient(net: _ShiftedNet, index: HaarIndex) -> Fraction:
    n, j1, j2 = net.n, index.j1, index.j2
    A, S = net.A, net.S
    r, s = _digits(index)
    region = classify_region((j1, j2), n)

    if region is RegionId.J1:
        return _pow2(-n - 1) + _pow2(-2 * n - 2) + (net.ell - net.L) * _pow2(-n - 3)
    if region is RegionId.J2:
        digit_sum = sum(((s[k] ^ S(k)) + (s[k] ^ S(k) ^ A(k))) * _pow2(k - n - 1)
                        for k in range(1, j2 + 1))
        return (_pow2(-2 * n - 2) - _pow2(-n - j2 - 3)
                - _pow2(-2 * n - 1) * (S(j2 + 1) ^ (A(j2 + 1) & S(n)))
                + _pow2(-2 * j2 - 3) * digit_sum)
    if region is RegionId.J3:
        flip = S(n) ^ 1
        digit_sum = sum((s[k] ^ (A(k) & flip) ^ S(k)) * _pow2(k - n) for k in range(1, n))
        return _pow2(-2 * n - 1) * (digit_sum - S(n))
    if region is RegionId.J4:
        return _pow2(-2 * j2 - 3)
    if region is RegionId.J5:
        return _pow2(-2 * n - 2) - _pow2(-n - 3) + net.L * _pow2(-n - 3) - S(n) * _pow2(-2 * n - 1)
    if region is RegionId.J6:
        eps = (r[1] ^ S(n)) * _pow2(-n)
        for k in range(2, j1 + 1):
            eps += (r[k] ^ (A(n + 1 - k) & r[1]) ^ S(n + 1 - k)) * _pow2(k - n - 1)
        return (_pow2(-2 * n - 2) - _pow2(-n - j1 - 3) + _pow2(-2 * j1 - 2) * eps
                - _pow2(-2 * n - 1) * ((A(n - j1) & r[1]) ^ S(n - j1)))
    if region is RegionId.J7:
        return _pow2(-2 * j1 - 3)
    if region is RegionId.J8:
        sigma_next = S(j2 + 1)
        sigma_next_a = sigma_next ^ A(j2 + 1)
        digit_sum = sum(A(k) * (2 * (s[k] ^ S(k)) - 1) * _pow2(k - n) for k in range(1, j2 + 1))
        return (_pow2(-2 * j2 - 4) * digit_sum
                + _pow2(-2 * n - 2) * (1 + 2 * sigma_next * (S(n) - 1) + 2 * S(n) * (sigma_next_a - 1)))
    if region is RegionId.J9:
        beta1 = (A(n - j1) & r[1]) ^ S(n - j1)
        beta2 = (A(j2 + 1) & r[1]) ^ S(j2 + 1)
        return _pow2(-2 * n - 2) * (2 * beta1 - 1) * (2 * beta2 - 1)
    if region is RegionId.J10:
        flip = S(n) ^ 1
        u = sum((s[k] ^ (A(k) & flip) ^ S(k)) * _pow2(k - n) for k in range(1, n))
        return _pow2(-2 * n - 2) * (1 - 2 * abs(S(n) - u))
    if region is RegionId.J11:
        gamma = (A(j2 + 1) & r[1]) ^ S(j2 + 1)
        w1, w2 = _j11_weights(net, j2, r, s)
        return _pow2(-2 * n - 2) * (-1) ** gamma * (1 - 2 * w1) * (1 - 2 * w2)
    if region is RegionId.J12:
        return _gated_j12(net, index, r, s) - _pow2(-2 * j1 - 2 * j2 - 4)
    return -_pow2(-2 * j1 - 2 * j2 - 4)


def _j11_weights(net: _ShiftedNet, j2: int, r: list, s: list) -> Tuple[Fraction, Fraction]:
    n, A, S = net.n, net.A, net.S
    w1 = sum(((s[k] ^ (A(k) & r[1]) ^ S(k)) * _pow2(k - 1 - j2) for k in range(1, j2 + 1)), Fraction(0))
    w2 = (r[1] ^ S(n)) * _pow2(j2 + 1 - n)
    for k in range(j2 + 2, n):
        w2 += (r[n + 1 - k] ^ (A(k) & r[1]) ^ S(k)) * _pow2(j2 + 1 - k)
    return w1, w2


def case_coefficient_pa(n: int, a: Sequence[int], shift: ShiftVector, index: HaarIndex) -> Fraction:
    """
    P_a(σ)的闭式Haar系数

    Args:
        n: 网参数
        a: 权重(a_1, ..., a_{n-1})
        shift: 平移σ
        index: Haar索引
    Returns:
        精确系数，符号与通用公式一致
    """
    return _plain_coefficient(_ShiftedNet(n, a, shift), index)


def sym_case_coefficient(n: int, a: Sequence[int], shift: ShiftVector, index: HaarIndex) -> Fraction:
    """对称化网的闭式系数，等于½(μ^σ + μ^{σ*})"""
    net = _ShiftedNet(n, a, shift)
    j1, j2 = index.j1, index.j2
    A, S = net.A, net.S
    r, s = _digits(index)
    region = classify_region((j1, j2), n)

    if region is RegionId.J1:
        return _pow2(-n - 1) + _pow2(-2 * n - 2)
    if region is RegionId.J2:
        return -_pow2(-n - 2 * j2 - 3) - _pow2(-2 * n - 2) * A(j2 + 1) * (2 * (S(j2 + 1) ^ S(n)) - 1)
    if region is RegionId.J3:
        digit_sum = sum(A(k) * (1 - 2 * (s[k] ^ S(k) ^ S(n))) * _pow2(k - n) for k in range(1, n))
        return -_pow2(-3 * n - 1) + _pow2(-2 * n - 2) * digit_sum
    if region is RegionId.J4:
        return _pow2(-2 * j2 - 3)
    if region is RegionId.J5:
        return -_pow2(-n - 3)
    if region is RegionId.J6:
        return -_pow2(-n - 2 * j1 - 3)
    if region is RegionId.J7:
        return _pow2(-2 * j1 - 3)
    if region is RegionId.J8:
        sigma_next = S(j2 + 1)
        return _pow2(-2 * n - 2) * (sigma_next + (sigma_next ^ A(j2 + 1)) - 1) * (2 * S(n) - 1)
    if region is RegionId.J9:
        return _plain_coefficient(net, index)
    if region is RegionId.J10:
        digit_sum = sum((1 - A(k)) * (2 * (s[k] ^ S(k)) - 1) * _pow2(k - n) for k in range(1, n))
        return -(-1) ** S(n) * _pow2(-2 * n - 2) * digit_sum
    if region is RegionId.J11:
        gamma = (A(j2 + 1) & r[1]) ^ S(j2 + 1)
        w1, w2 = _j11_weights(net, j2, r, s)
        return _pow2(-2 * n - 2) * (-1) ** gamma * (
            _pow2(-j1) * (1 - 2 * w1) + _pow2(-j2) * (1 - 2 * w2) - _pow2(1 - j1 - j2))
    if region is RegionId.J12:
        gated = _gated_j12(net, index, r, s) + _gated_j12(net.complemented(), index, r, s)
        return gated / 2 - _pow2(-2 * j1 - 2 * j2 - 4)
    return -_pow2(-2 * j1 - 2 * j2 - 4)


def _weighted_a_sum(net: _ShiftedNet) -> int:
    """Σ_{i<n} a_i 4^i"""
    return sum(net.A(i) * 4 ** i for i in range(1, net.n))


def _nested_a_sum(net: _ShiftedNet) -> Fraction:
    """Σ_{i=0}^{n-2} 4^{-i} Σ_{k=1}^{i} a_k 4^k"""
    return sum((Fraction(sum(net.A(k) * 4 ** k for k in range(1, i + 1)), 4 ** i)
                for i in range(0, net.n - 1)), Fraction(0))


def _closed_region_sum(net: _ShiftedNet, region: RegionId) -> Fraction:
    n = net.n
    four_n = 4 ** n
    sigma_sum = sum(net.S(i) for i in range(1, n))
    if region is RegionId.J1:
        return _plain_coefficient(net, HaarIndex(-1, -1)) ** 2
    if region is RegionId.J2:
        return (Fraction(3 * n * four_n - 9 * (n - 1) * 2 ** (n + 2) + 2 ** (2 * n + 3) - 44, 9)
                * _pow2(-4 * n - 6)
                + _pow2(-3 * n - 3) * (sigma_sum + net.S(n) * net.L)
                - _pow2(-2 * n - 8) * _nested_a_sum(net))
    if region is RegionId.J3:
        return Fraction(four_n - 3 * 2 ** n + 2 + 3 * net.S(n) * 2 ** (n + 1), 3) * _pow2(-4 * n - 4)
    if region in (RegionId.J4, RegionId.J7):
        return Fraction(1, 48 * four_n)
    if region is RegionId.J5:
        return _plain_coefficient(net, HaarIndex(0, -1)) ** 2
    if region is RegionId.J6:
        return (Fraction((3 * n + 11) * four_n - 56, 9) * _pow2(-4 * n - 6)
                - _pow2(-3 * n - 4) * (n - 1 - 2 * sigma_sum - 2 * net.S(n) * net.L))
    if region is RegionId.J8:
        return Fraction(four_n - 4, 3) * _pow2(-4 * n - 6) + _pow2(-2 * n - 8) * _nested_a_sum(net)
    if region is RegionId.J9:
        return Fraction(3 * n * four_n - 7 * four_n + 16, 9) * _pow2(-4 * n - 6)
    if region is RegionId.J10:
        return Fraction(four_n + 8, 3) * _pow2(-4 * n - 6)
    if region is RegionId.J11:
        return Fraction(3 * n * four_n + 7 * four_n + 48 * n - 88, 27) * _pow2(-4 * n - 6)
    if region is RegionId.J12:
        return (Fraction(1, 27) * (_pow2(-4 * n - 4) - _pow2(-2 * n - 4))
                - Fraction(n, 9) * _pow2(-4 * n - 2) + Fraction(5 * n, 9) * _pow2(-2 * n - 6))
    return Fraction(2 ** (2 * n + 1) - 1, 9) * _pow2(-4 * n - 4)


def _closed_sym_region_sum(net: _ShiftedNet, region: RegionId) -> Fraction:
    n = net.n
    four_n = 4 ** n
    base = Fraction(four_n - 4, 3) * _pow2(-4 * n - 6)
    if region is RegionId.J1:
        return (_pow2(-n - 1) + _pow2(-2 * n - 2)) ** 2
    if region is RegionId.J2:
        return (Fraction(four_n - 4, 3) * _pow2(-4 * n - 4)
                - (-1) ** net.S(n) * _pow2(-3 * n - 4) * net.L
                + _pow2(-4 * n - 6) * _weighted_a_sum(net))
    if region is RegionId.J3:
        return _pow2(-4 * n - 6) * _weighted_a_sum(net) + _pow2(-4 * n - 4)
    if region is RegionId.J5:
        return _pow2(-2 * n - 6)
    if region is RegionId.J6:
        return base
    if region in (RegionId.J8, RegionId.J10):
        return base - _pow2(-4 * n - 6) * _weighted_a_sum(net)
    if region is RegionId.J11:
        return Fraction(5 * four_n + 4 - 24 * n, 9) * _pow2(-4 * n - 6)
    if region is RegionId.J12:
        return Fraction(n * (four_n + 8) - 2 * (four_n + 2), 3) * _pow2(-4 * n - 6)
    # J4, J7, J9, J13与未对称化时相同
    return _closed_region_sum(net, region)


def _index_only_tail(points: DyadicPointSet, n: int, region: RegionId) -> Fraction:
    """无限区域：先用通用系数确认首层全为空盒，再按几何级数求和"""
    probe = {RegionId.J4: (-1, n), RegionId.J7: (n, -1), RegionId.J13: (n, n)}[region]
    level = level_coefficients(points, *probe)
    if level.nonempty:
        raise UnsupportedError(f"region {region.name} has nonempty boxes at level {probe}; no analytic tail")
    if region is RegionId.J13:
        return Fraction(2 ** (2 * n + 1) - 1, 9) * _pow2(-4 * n - 4)
    # 2^{j}·2^{j}·(2^{-2j-3})²对j≥n求和
    return Fraction(1, 48 * 4 ** n)


def _direct_region_sum(points: DyadicPointSet, n: int, region: RegionId) -> Fraction:
    require_resolution(points, n)
    logger.debug(f"direct region sum {region.name}: n={n}, N={points.N}")
    if region.is_infinite:
        return _index_only_tail(points, n, region)
    return sum((level_coefficients(points, j1, j2).weighted_square_sum()
                for j1, j2 in region_levels(region, n)), Fraction(0))


def region_parseval_sum(n: int, a: Sequence[int], shift: ShiftVector, region: RegionId,
                        method: str = "closed") -> Fraction:
    """
    区域内Σ_j 2^{|j|} Σ_m μ²

    Args:
        method: closed（闭式）或 direct（由生成点集的通用系数求和）
    """
    net = _ShiftedNet(n, a, shift)
    if method == "closed":
        return _closed_region_sum(net, region)
    if method == "direct":
        return _direct_region_sum(generate(NetSpec.pa(n, a, shift.bits)), n, region)
    raise ParameterError(f"unknown region sum method: {method}")


def sym_region_parseval_sum(n: int, a: Sequence[int], shift: ShiftVector, region: RegionId,
                            method: str = "closed") -> Fraction:
    """对称化网的区域和"""
    net = _ShiftedNet(n, a, shift)
    if method == "closed":
        return _closed_sym_region_sum(net, region)
    if method == "direct":
        return _direct_region_sum(generate(NetSpec.pa(n, a, shift.bits, symmetrized=True)), n, region)
    raise ParameterError(f"unknown region sum method: {method}")
