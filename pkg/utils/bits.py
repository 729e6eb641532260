"""
Bit-string parsing and digit helpers
"""

from typing import List, Sequence, Tuple

from models.errors import ParameterError


def parse_bits(text: str, expected: int = None, what: str = "bit string") -> Tuple[int, ...]:
    """
    解析'0'/'1'位串，首字符对应下标1

    Args:
        text: 位串，允许空串
        expected: 期望长度（可选）
        what: 错误信息中的名称
    Returns:
        位元组
    """
    text = (text or "").strip()
    if any(ch not in "01" for ch in text):
        raise ParameterError(f"malformed {what}: {text!r}")
    bits = tuple(int(ch) for ch in text)
    if expected is not None and len(bits) != expected:
        raise ParameterError(f"{what} must have {expected} bits, got {len(bits)}")
    return bits


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def digits_msb(m: int, j: int) -> List[int]:
    """m在j位二进制下的数字，最高位在前：返回[r_1, ..., r_j]"""
    return [(m >> (j - k)) & 1 for k in range(1, j + 1)]


def all_bit_vectors(length: int):
    """按字典序枚举长度为length的全部位向量"""
    for value in range(1 << length):
        yield tuple((value >> (length - 1 - k)) & 1 for k in range(length))
