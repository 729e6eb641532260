"""
Parameter sweeps over shifts and weight vectors, and the shift search
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from models.errors import ParameterError
from models.types import Family, SearchResult, SweepRow
from core import formulas
from utils.bits import all_bit_vectors, format_bits

logger = logging.getLogger(__name__)

EXHAUSTIVE_SEARCH_MAX = 16


def _value_function(family: Family, symmetrized: bool) -> Callable:
    if family is Family.PA:
        return formulas.l2sq_sym_pa if symmetrized else formulas.l2sq_pa
    if family is Family.PC and not symmetrized:
        return formulas.l2sq_pc
    raise ParameterError(f"no closed form for {family.value}{' symmetrized' if symmetrized else ''} nets")


def _row(n: int, weights: Tuple[int, ...], shift: Tuple[int, ...], family: Family,
         value_of: Callable) -> SweepRow:
    p = formulas.shift_params(n, weights, shift, family)
    return SweepRow(n=n, a=format_bits(weights), shift=format_bits(shift),
                    ell=p.ell, L=p.L, value=value_of(n, weights, shift))


def _map(func, items, threads: Optional[int]) -> list:
    workers = max(1, threads or 1)
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def sweep_shifts(n: int, weights: Sequence[int], family: Family = Family.PA,
                 symmetrized: bool = False, threads: Optional[int] = None) -> List[SweepRow]:
    """
    对全部2^n个平移求值

    Args:
        n: 网参数
        weights: a或c
        family: PA或PC
        symmetrized: 是否对称化（仅PA）
        threads: 线程数，行顺序固定
    """
    weights = tuple(weights)
    value_of = _value_function(family, symmetrized)
    rows = _map(lambda s: _row(n, weights, s, family, value_of), list(all_bit_vectors(n)), threads)
    logger.info(f"swept {len(rows)} shifts for n={n}, weights={format_bits(weights)}")
    return rows


def sweep_weights(n: int, shift: Optional[Sequence[int]] = None, family: Family = Family.PA,
                  symmetrized: bool = False, threads: Optional[int] = None) -> List[SweepRow]:
    """对全部2^{n-1}个权重向量求值，平移缺省为0"""
    shift = tuple(shift) if shift is not None else (0,) * n
    value_of = _value_function(family, symmetrized)
    return _map(lambda w: _row(n, w, shift, family, value_of), list(all_bit_vectors(n - 1)), threads)


def rows_mean(rows: List[SweepRow]) -> Fraction:
    return sum((row.value for row in rows), Fraction(0)) / len(rows)


def search_shift(n: int, a: Sequence[int], exhaustive_max: int = EXHAUSTIVE_SEARCH_MAX) -> SearchResult:
    """
    寻找使(2^n L2)²最小的平移

    n≤exhaustive_max时穷举；否则从平衡平移出发做单比特贪心下降。
    """
    a = tuple(a)
    if n <= exhaustive_max:
        best, best_value, evaluated = None, None, 0
        for s in all_bit_vectors(n):
            value = formulas.l2sq_pa(n, a, s)
            evaluated += 1
            if best_value is None or value < best_value:
                best, best_value = s, value
        return SearchResult(n=n, a=format_bits(a), shift=format_bits(best), value=best_value,
                            mode="exhaustive", evaluated=evaluated)

    logger.warning(f"n={n} exceeds {exhaustive_max}; using balanced start with greedy descent")
    current = list(formulas.balanced_shift(n, a).bits)
    current_value = formulas.l2sq_pa(n, a, current)
    evaluated = 1
    while True:
        best_flip, best_value = None, current_value
        for k in range(n):
            current[k] ^= 1
            value = formulas.l2sq_pa(n, a, current)
            current[k] ^= 1
            evaluated += 1
            if value < best_value:
                best_flip, best_value = k, value
        if best_flip is None:
            break
        current[best_flip] ^= 1
        current_value = best_value
    return SearchResult(n=n, a=format_bits(a), shift=format_bits(current), value=current_value,
                        mode="greedy", evaluated=evaluated)
