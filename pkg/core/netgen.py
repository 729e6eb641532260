"""
Digital net construction over GF(2): generator matrices, net-property checks,
shifted point sets and symmetrization
"""

import logging
from typing import Sequence, Tuple

from models.errors import ParameterError
from models.types import BitMatrix, DyadicPointSet, Family, NetSpec, ShiftVector
from utils.gf2 import gf2_matvec, gf2_rank

logger = logging.getLogger(__name__)


def build_generators(spec: NetSpec) -> Tuple[BitMatrix, BitMatrix]:
    """
    构造生成矩阵(C1, C2)

    Args:
        spec: 网规格
    Returns:
        C1为反对角矩阵（CUSTOM族原样返回），C2按族构造
    """
    n = spec.n
    if spec.family is Family.CUSTOM:
        return spec.matrices

    c1 = BitMatrix.anti_diagonal(n)
    rows = [[int(i == c) for c in range(n)] for i in range(n)]
    if spec.family is Family.PA:
        # 最后一列为(a_1, ..., a_{n-1}, 1)
        for i, bit in enumerate(spec.a):
            rows[i][n - 1] = bit
    elif spec.family is Family.PC:
        # 第一列为(1, c_2, ..., c_n)
        for i, bit in enumerate(spec.c, start=1):
            rows[i][0] = bit
    elif spec.family is Family.TRI:
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = spec.tri_entries[i][j]
    return c1, BitMatrix(tuple(tuple(row) for row in rows))


def _check_sizes(c1: BitMatrix, c2: BitMatrix):
    if c1.n != c2.n:
        raise ParameterError(f"generator sizes differ: {c1.n} vs {c2.n}")


def is_0n2_net(c1: BitMatrix, c2: BitMatrix, method: str = "rank") -> bool:
    """
    判断(C1, C2)是否生成(0,n,2)-网

    Args:
        c1, c2: 生成矩阵
        method: rank（行秩判据）或 counting（逐盒计数）
    """
    _check_sizes(c1, c2)
    n = c1.n
    if method == "rank":
        rows1 = [c1.row_mask(i) for i in range(n)]
        rows2 = [c2.row_mask(i) for i in range(n)]
        for d1 in range(n + 1):
            if gf2_rank(rows1[:d1] + rows2[:n - d1], n) != n:
                logger.debug(f"rank deficit at d1={d1}, d2={n - d1}")
                return False
        return True
    if method == "counting":
        points = generate_points(c1, c2, ShiftVector.zeros(n))
        for d1 in range(n + 1):
            d2 = n - d1
            boxes = {(x >> (n - d1), y >> (n - d2)) for x, y in points.points}
            if len(boxes) != 1 << n:
                logger.debug(f"box shape 2^-{d1} x 2^-{d2} has an empty box")
                return False
        return True
    raise ParameterError(f"unknown net check method: {method}")


def generate_points(c1: BitMatrix, c2: BitMatrix, shift: ShiftVector) -> DyadicPointSet:
    """按索引r=0..2^n-1生成点集，平移只作用于第二坐标"""
    _check_sizes(c1, c2)
    n = c1.n
    if shift.n != n:
        raise ParameterError(f"shift length {shift.n} does not match n={n}")
    rows1 = [c1.row_mask(i) for i in range(n)]
    rows2 = [c2.row_mask(i) for i in range(n)]
    points = []
    # 列c对应r的第c位，整数r本身就是输入向量
    for r in range(1 << n):
        y1 = gf2_matvec(rows1, r)
        y2 = gf2_matvec(rows2, r)
        x = sum(bit << (n - 1 - i) for i, bit in enumerate(y1))
        y = sum((bit ^ shift.bits[i]) << (n - 1 - i) for i, bit in enumerate(y2))
        points.append((x, y))
    return DyadicPointSet(n, tuple(points))


def generate_pa_direct(n: int, a: Sequence[int], shift: ShiftVector) -> DyadicPointSet:
    """由数字公式直接生成P_a(σ)"""
    if len(a) != n - 1 or shift.n != n:
        raise ParameterError(f"need n-1={n - 1} weights and n={n} shift bits")
    points = []
    for x in range(1 << n):
        t = [(x >> (k - 1)) & 1 for k in range(1, n + 1)]
        t_n = t[n - 1]
        b = [t[k - 1] ^ (a[k - 1] & t_n) ^ shift[k] for k in range(1, n)]
        b.append(t_n ^ shift[n])
        y = sum(bit << (n - k) for k, bit in enumerate(b, start=1))
        points.append((x, y))
    return DyadicPointSet(n, tuple(points))


def complement_shift(shift: ShiftVector) -> ShiftVector:
    return shift.complement()


def symmetrize(points: DyadicPointSet) -> DyadicPointSet:
    """并上反射副本(X, 2^n-1-Y)，重复点按多重集保留"""
    top = points.denominator - 1
    reflected = tuple((x, top - y) for x, y in points.points)
    return DyadicPointSet(points.resolution, points.points + reflected)


def generate(spec: NetSpec) -> DyadicPointSet:
    """按规格生成点集（含对称化）"""
    c1, c2 = build_generators(spec)
    points = generate_points(c1, c2, spec.shift)
    if spec.symmetrized:
        points = symmetrize(points)
    logger.debug(f"generated {points.N} points for {spec.family.value} n={spec.n}")
    return points
