"""
Haar expansion of the discrepancy function: dyadic box geometry, exact generic
coefficients, a slow integration oracle, level-wise evaluation, region
classification, the analytic tail and Parseval aggregation
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from models.errors import DomainError, ParameterError
from models.types import (AuditBranch, AuditReport, DyadicPointSet, HaarIndex,
                          NetSpec, RegionId)

logger = logging.getLogger(__name__)


def _direction(coord: int, j: int, d: int) -> Optional[Tuple[int, int]]:
    """
    单个坐标在层j上的盒编号与帐篷因子（乘以D后的整数）

    Returns:
        (m, g)；坐标落在盒边界上时返回None
    """
    if j == -1:
        return 0, d - coord
    scaled = coord << j
    if scaled % d == 0:
        return None
    m = scaled // d
    return m, d - abs((2 * m + 1) * d - (coord << (j + 1)))


def _level_constants(j: int) -> Tuple[Fraction, Fraction]:
    """(点项系数, ∫t·h(t)dt)"""
    if j == -1:
        return Fraction(1), Fraction(1, 2)
    return -Fraction(1, 2 ** (j + 1)), -Fraction(1, 2 ** (2 * j + 2))


def box_count(j: int) -> int:
    return 1 if j == -1 else 1 << j


def box_points(points: DyadicPointSet, index: HaarIndex) -> List[Tuple[int, int]]:
    """落在开二进盒内部的点，边界点不计"""
    d = points.denominator
    inside = []
    for x, y in points.points:
        dx = _direction(x, index.j1, d)
        dy = _direction(y, index.j2, d)
        if dx is not None and dy is not None and dx[0] == index.m1 and dy[0] == index.m2:
            inside.append((x, y))
    return inside


def haar_coefficient(points: DyadicPointSet, index: HaarIndex) -> Fraction:
    """
    通用逐点公式计算μ_{j,m}

    Args:
        points: 点集，前因子取1/N
        index: Haar索引
    Returns:
        精确系数
    """
    if points.N == 0:
        raise DomainError("point set is empty")
    d = points.denominator
    c1, l1 = _level_constants(index.j1)
    c2, l2 = _level_constants(index.j2)
    total = 0
    for x, y in points.points:
        dx = _direction(x, index.j1, d)
        dy = _direction(y, index.j2, d)
        if dx is None or dy is None or dx[0] != index.m1 or dy[0] != index.m2:
            continue
        total += dx[1] * dy[1]
    return c1 * c2 * Fraction(total, points.N * d * d) - l1 * l2


def _haar_pieces(j: int, m: int) -> List[Tuple[int, Fraction, Fraction]]:
    if j == -1:
        return [(1, Fraction(0), Fraction(1))]
    width = Fraction(1, 2 ** (j + 1))
    lo = Fraction(m, 2 ** j)
    return [(1, lo, lo + width), (-1, lo + width, lo + 2 * width)]


def _indicator_integral(z: Fraction, pieces) -> Fraction:
    """∫ 1[z<t] h(t) dt"""
    return sum((sign * max(Fraction(0), hi - max(z, lo)) for sign, lo, hi in pieces), Fraction(0))


def _moment_integral(pieces) -> Fraction:
    """∫ t h(t) dt"""
    return sum((sign * (hi * hi - lo * lo) / 2 for sign, lo, hi in pieces), Fraction(0))


def haar_coefficient_oracle(points: DyadicPointSet, index: HaarIndex) -> Fraction:
    """逐段精确积分Δ·h的慢速参照实现"""
    if points.N == 0:
        raise DomainError("point set is empty")
    p1 = _haar_pieces(index.j1, index.m1)
    p2 = _haar_pieces(index.j2, index.m2)
    count_part = sum((_indicator_integral(z1, p1) * _indicator_integral(z2, p2)
                      for z1, z2 in points.as_fractions()), Fraction(0))
    return count_part / points.N - _moment_integral(p1) * _moment_integral(p2)


@dataclass
class LevelCoefficients:
    """一层(j1, j2)的全部系数：非空盒逐个给出，空盒共享同一值"""
    j1: int
    j2: int
    nonempty: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    empty_value: Fraction = Fraction(0)

    @property
    def box_count(self) -> int:
        return box_count(self.j1) * box_count(self.j2)

    @property
    def empty_count(self) -> int:
        return self.box_count - len(self.nonempty)

    def value(self, m1: int, m2: int) -> Fraction:
        return self.nonempty.get((m1, m2), self.empty_value)

    def square_sum(self) -> Fraction:
        return sum((mu * mu for mu in self.nonempty.values()), Fraction(0)) \
            + self.empty_count * self.empty_value ** 2

    def weighted_square_sum(self) -> Fraction:
        """2^{|j|}·Σ_m μ²"""
        return self.square_sum() * 2 ** (max(0, self.j1) + max(0, self.j2))

    def items(self) -> Iterator[Tuple[int, int, Fraction]]:
        for m1 in range(box_count(self.j1)):
            for m2 in range(box_count(self.j2)):
                yield m1, m2, self.value(m1, m2)


def level_coefficients(points: DyadicPointSet, j1: int, j2: int) -> LevelCoefficients:
    """按盒分桶，一次遍历求出一层的全部系数"""
    if points.N == 0:
        raise DomainError("point set is empty")
    if j1 < -1 or j2 < -1:
        raise ParameterError(f"level ({j1},{j2}) below -1")
    d = points.denominator
    c1, l1 = _level_constants(j1)
    c2, l2 = _level_constants(j2)

    buckets: Dict[Tuple[int, int], int] = {}
    for x, y in points.points:
        dx = _direction(x, j1, d)
        dy = _direction(y, j2, d)
        if dx is None or dy is None:
            continue
        key = (dx[0], dy[0])
        buckets[key] = buckets.get(key, 0) + dx[1] * dy[1]

    scale = c1 * c2 / (points.N * d * d)
    constant = l1 * l2
    return LevelCoefficients(
        j1=j1, j2=j2,
        nonempty={key: scale * total - constant for key, total in sorted(buckets.items())},
        empty_value=-constant,
    )


def classify_region(j: Tuple[int, int], n: int) -> RegionId:
    """返回包含j的唯一区域"""
    j1, j2 = j
    if j1 < -1 or j2 < -1 or n < 1:
        raise ParameterError(f"invalid index ({j1},{j2}) for n={n}")
    if j1 == -1:
        if j2 == -1:
            return RegionId.J1
        if j2 <= n - 2:
            return RegionId.J2
        return RegionId.J3 if j2 == n - 1 else RegionId.J4
    if j2 == -1:
        if j1 == 0:
            return RegionId.J5
        return RegionId.J6 if j1 <= n - 1 else RegionId.J7
    if j1 >= n or j2 >= n:
        return RegionId.J13
    if j1 == 0:
        return RegionId.J8 if j2 <= n - 2 else RegionId.J10
    if j1 + j2 <= n - 2:
        return RegionId.J9
    return RegionId.J11 if j1 + j2 == n - 1 else RegionId.J12


def region_levels(region: RegionId, n: int) -> List[Tuple[int, int]]:
    """有限区域内的全部层；无限区域返回空表"""
    if region.is_infinite:
        return []
    levels = range(-1, n)
    return [(j1, j2) for j1 in levels for j2 in levels if classify_region((j1, j2), n) is region]


def tail_sum(n: int) -> Fraction:
    """j1≥n或j2≥n的全部层的Parseval质量"""
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    rows = Fraction(2, 48 * 4 ** n)
    corner = Fraction(2 * 4 ** n - 1, 9 * 2 ** (4 * n + 4))
    return rows + corner


def require_resolution(points: DyadicPointSet, n: int):
    """所有坐标必须是2^-n的整数倍"""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if points.resolution <= n:
        return
    step = 1 << (points.resolution - n)
    for x, y in points.points:
        if x % step or y % step:
            raise DomainError(f"point ({x},{y}) at resolution {points.resolution} is not on the 2^-{n} grid")


def parseval_l2_squared(points: DyadicPointSet, n: int, threads: Optional[int] = None) -> Fraction:
    """
    Parseval求和计算‖Δ‖²

    Args:
        points: 点集，坐标须为2^-n的整数倍
        n: 截断层数
        threads: 按层并行的线程数
    Returns:
        精确值，等于Warnock值除以N²
    """
    if points.N == 0:
        raise DomainError("point set is empty")
    require_resolution(points, n)
    levels = [(j1, j2) for j1 in range(-1, n) for j2 in range(-1, n)]

    def weighted(level):
        return level_coefficients(points, *level).weighted_square_sum()

    workers = max(1, threads or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(weighted, levels))
    else:
        parts = [weighted(level) for level in levels]
    total = sum(parts, Fraction(0)) + tail_sum(n)
    logger.debug(f"parseval: n={n}, N={points.N}, levels={len(levels)}, value={total}")
    return total


def _exact_branch(name: str, points: DyadicPointSet, levels, target) -> AuditBranch:
    branch = AuditBranch(name=name, allowed=0)
    for j1, j2 in levels:
        level = level_coefficients(points, j1, j2)
        want = abs(target(j1, j2))
        branch.checked += level.box_count
        branch.exceptions += sum(1 for mu in level.nonempty.values() if abs(mu) != want)
        if abs(level.empty_value) != want:
            branch.exceptions += level.empty_count
    return branch


def _bound_branch(name: str, points: DyadicPointSet, levels, exponent) -> AuditBranch:
    branch = AuditBranch(name=name, max_scaled=Fraction(0))
    for j1, j2 in levels:
        level = level_coefficients(points, j1, j2)
        values = list(level.nonempty.values())
        if level.empty_count:
            values.append(level.empty_value)
        branch.checked += level.box_count
        scale = 2 ** exponent(j1, j2)
        branch.max_scaled = max([branch.max_scaled] + [abs(mu) * scale for mu in values])
    return branch


def coefficient_bound_audit(points: DyadicPointSet, n: int, spec: NetSpec,
                            extra_levels: int = 2) -> AuditReport:
    """
    系数量级分类审计

    精确分支统计例外个数；≲分支报告max|μ|·2^{n+j}作为经验常数。
    j1=0且j2<n-1的层只按(i)处理。

    Args:
        points: P_a(σ)生成的点集
        n: 网参数
        spec: PA族规格
        extra_levels: 超出n-1后额外检查的层数
    """
    from core.formulas import shift_params

    require_resolution(points, n)
    params = shift_params(n, spec.a, spec.shift, spec.family)
    top = n - 1 + extra_levels
    grid = [(j1, j2) for j1 in range(0, top + 1) for j2 in range(0, top + 1)]
    report = AuditReport(n=n)

    report.branches.append(_bound_branch(
        "(i)", points, [(0, j2) for j2 in range(0, n - 1)], lambda j1, j2: n + j2))
    report.branches.append(_exact_branch(
        "(ii)", points, [(j1, j2) for j1, j2 in grid if j1 >= 1 and j1 + j2 < n - 1],
        lambda j1, j2: Fraction(1, 2 ** (2 * n + 2))))

    upper = [(j1, j2) for j1, j2 in grid if j1 + j2 >= n - 1 and j1 <= n and j2 <= n]
    report.branches.append(_bound_branch("(iii)", points, upper, lambda j1, j2: n + j1 + j2))
    exceptional = AuditBranch(name="(iii) exceptions", allowed=0)
    for j1, j2 in upper:
        level = level_coefficients(points, j1, j2)
        target = Fraction(1, 2 ** (2 * j1 + 2 * j2 + 4))
        count = sum(1 for mu in level.nonempty.values() if abs(mu) != target)
        if abs(level.empty_value) != target:
            count += level.empty_count
        exceptional.checked += 1
        if count > 2 ** n:
            exceptional.exceptions += 1
            exceptional.detail = f"j=({j1},{j2}) has {count} exceptional coefficients"
    report.branches.append(exceptional)

    report.branches.append(_exact_branch(
        "(iv)", points, [(j1, j2) for j1, j2 in grid if j1 >= n or j2 >= n],
        lambda j1, j2: Fraction(1, 2 ** (2 * j1 + 2 * j2 + 4))))
    report.branches.append(_bound_branch(
        "(v)", points, [(-1, j2) for j2 in range(0, n)], lambda j1, j2: n + j2))
    report.branches.append(_exact_branch(
        "(vi)", points, [(-1, j2) for j2 in range(n, top + 1)],
        lambda j1, j2: Fraction(1, 2 ** (2 * j2 + 3))))

    sigma_n = spec.shift[n]
    corner_row = (Fraction(1, 2 ** (2 * n + 2)) - Fraction(1, 2 ** (n + 3))
                  + Fraction(params.L, 2 ** (n + 3)) - Fraction(sigma_n, 2 ** (2 * n + 1)))
    report.branches.append(_exact_branch("(vii)", points, [(0, -1)], lambda j1, j2: corner_row))
    report.branches.append(_bound_branch(
        "(viii)", points, [(j1, -1) for j1 in range(1, n)], lambda j1, j2: n + j1))
    report.branches.append(_exact_branch(
        "(ix)", points, [(j1, -1) for j1 in range(n, top + 1)],
        lambda j1, j2: Fraction(1, 2 ** (2 * j1 + 3))))

    corner = level_coefficients(points, -1, -1).value(0, 0)
    expected = (Fraction(1, 2 ** (n + 1)) + Fraction(1, 2 ** (2 * n + 2))
                + Fraction(params.ell - params.L, 2 ** (n + 3)))
    report.branches.append(AuditBranch(name="corner", checked=1, allowed=0,
                                       exceptions=int(corner != expected)))
    logger.info(f"audit n={n}: {'passed' if report.success else 'failed'}")
    return report
