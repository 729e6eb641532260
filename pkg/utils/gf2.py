"""
GF(2) linear algebra on rows stored as int bitsets
"""

from typing import List


def gf2_rank(rows: List[int], n_cols: int) -> int:
    """高斯消元求GF(2)秩"""
    work = list(rows)
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def gf2_matvec(row_masks: List[int], vector: int) -> List[int]:
    """矩阵乘向量，返回每行的输出位"""
    return [bin(mask & vector).count("1") & 1 for mask in row_masks]


__all__ = ["gf2_rank", "gf2_matvec"]
