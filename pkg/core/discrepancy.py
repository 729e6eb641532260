"""
Discrepancy of dyadic point sets: local discrepancy, exact L2 via Warnock's formula,
exact star discrepancy on the critical grid, and a Monte-Carlo L_p estimator
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from models.errors import DomainError, ParameterError, UnsupportedError
from models.types import DyadicPointSet, EvalPoint, MCEstimate

logger = logging.getLogger(__name__)

# 每块样本数固定，保证样本i只依赖于(seed, i)
MC_CHUNK_SIZE = 1 << 14

# 超过该分辨率时int64可能溢出，改用object数组
INT64_SAFE_RESOLUTION = 20


def _require_points(points: DyadicPointSet):
    if points.N == 0:
        raise DomainError("point set is empty")


def _int_array(values, resolution: int) -> np.ndarray:
    dtype = np.int64 if resolution <= INT64_SAFE_RESOLUTION else object
    return np.array(values, dtype=dtype)


def local_discrepancy(points: DyadicPointSet, t: EvalPoint) -> Fraction:
    """Δ(t,P)，计数使用半开盒[0,t1)×[0,t2)"""
    _require_points(points)
    d = points.denominator
    inside = sum(1 for x, y in points.points if Fraction(x, d) < t.t1 and Fraction(y, d) < t.t2)
    return Fraction(inside, points.N) - t.t1 * t.t2


def warnock_l2_squared(points: DyadicPointSet) -> Fraction:
    """
    Warnock公式计算(N·L2)²

    Args:
        points: 非空点集
    Returns:
        精确有理数
    """
    _require_points(points)
    n_pts, d = points.N, points.denominator
    if n_pts > 1 << 16:
        logger.warning(f"Warnock pair sum over {n_pts} points is quadratic and will be slow")

    u = _int_array([d - x for x in points.xs()], points.resolution)
    v = _int_array([d - y for y in points.ys()], points.resolution)

    # Σ(D²-X²)(D²-Y²)，以Python整数累加
    single = sum((d * d - x * x) * (d * d - y * y) for x, y in points.points)

    pair = 0
    for i in range(n_pts):
        pair += int(np.sum(np.minimum(u[i], u) * np.minimum(v[i], v)))

    value = (Fraction(n_pts * n_pts, 9)
             - Fraction(n_pts * single, 2 * d ** 4)
             + Fraction(pair, d * d))
    logger.debug(f"warnock: N={n_pts}, value={value}")
    return value


def star_discrepancy(points: DyadicPointSet) -> Fraction:
    """
    精确星偏差：在临界网上同时检查含边界与不含边界两种极限

    Args:
        points: 非空点集
    Returns:
        sup_t |Δ(t,P)|
    """
    _require_points(points)
    n_pts, d = points.N, points.denominator
    gx = sorted(set(points.xs()) | {d})
    gy = sorted(set(points.ys()) | {d})

    counts = np.zeros((len(gx), len(gy)), dtype=np.int64)
    ix = np.searchsorted(gx, points.xs())
    iy = np.searchsorted(gy, points.ys())
    np.add.at(counts, (ix, iy), 1)

    closed = counts.cumsum(axis=0).cumsum(axis=1)
    opened = np.zeros_like(closed)
    opened[1:, 1:] = closed[:-1, :-1]

    res = points.resolution
    closed = _int_array(closed, res)
    opened = _int_array(opened, res)
    vol = np.outer(_int_array(gx, res), _int_array(gy, res)) * n_pts

    scale = d * d
    over = closed * scale - vol
    under = vol - opened * scale
    best = max(int(over.max()), int(under.max()))
    return Fraction(best, n_pts * scale)


def star_bound(n: int) -> Fraction:
    """2^n·L∞的上界n/3 + 19/3"""
    return Fraction(n, 3) + Fraction(19, 3)


def _mc_chunk(coords: Tuple[np.ndarray, np.ndarray], n_pts: int, p: float,
              seed: int, chunk: int, size: int) -> Tuple[float, float]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    t = rng.random((size, 2))
    xs, ys = coords
    inside = (xs[None, :] < t[:, :1]) & (ys[None, :] < t[:, 1:])
    delta = inside.sum(axis=1) / n_pts - t[:, 0] * t[:, 1]
    f = np.abs(delta) ** p
    return math.fsum(f), math.fsum(f * f)


def lp_discrepancy_mc(points: DyadicPointSet, p: float, samples: int, seed: int,
                      threads: Optional[int] = None) -> MCEstimate:
    """
    蒙特卡洛估计L_p偏差

    Args:
        points: 非空点集
        p: 1 < p < ∞
        samples: 样本数
        seed: 随机种子
        threads: 工作线程数（不影响结果）
    Returns:
        估计值及delta方法标准误差
    """
    _require_points(points)
    if math.isinf(p) or math.isnan(p) or p <= 1:
        raise UnsupportedError(f"Monte-Carlo L_p needs finite p > 1, got {p}")
    if samples < 1:
        raise ParameterError(f"samples must be positive, got {samples}")

    d = float(points.denominator)
    coords = (np.array(points.xs(), dtype=float) / d, np.array(points.ys(), dtype=float) / d)
    chunks = [(c, min(MC_CHUNK_SIZE, samples - c * MC_CHUNK_SIZE))
              for c in range(math.ceil(samples / MC_CHUNK_SIZE))]

    workers = max(1, threads or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(lambda job: _mc_chunk(coords, points.N, p, seed, *job), chunks))

    mean = math.fsum(s for s, _ in partials) / samples
    second = math.fsum(s2 for _, s2 in partials) / samples
    variance = max(second - mean * mean, 0.0) * samples / (samples - 1) if samples > 1 else 0.0

    estimate = mean ** (1.0 / p)
    if mean > 0:
        std_error = (1.0 / p) * mean ** (1.0 / p - 1.0) * math.sqrt(variance / samples)
    else:
        std_error = 0.0
    logger.info(f"lp-mc: p={p}, samples={samples}, estimate={estimate:.6g} ± {std_error:.2g}")
    return MCEstimate(estimate=estimate, std_error=std_error, p=p, samples=samples, seed=seed)
