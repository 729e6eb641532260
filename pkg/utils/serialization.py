"""
Serialization of exact rationals, point sets, coefficient tables and result documents
"""

import csv
import io
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from models.errors import ParameterError
from models.types import DyadicPointSet

SCHEMA_VERSION = "1"


def format_fraction(value: Fraction) -> str:
    """有理数统一输出为num/den"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParameterError(f"malformed rational {text!r}: {e}")


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    return value


def to_document(payload: Dict[str, Any]) -> str:
    """
    生成带版本号的JSON文档

    Args:
        payload: 结果字段，Fraction会被转换为字符串
    Returns:
        JSON文本（键顺序保持插入顺序）
    """
    document = {"schema": SCHEMA_VERSION}
    document.update(_to_jsonable(payload))
    return json.dumps(document, ensure_ascii=False, indent=2)


def dump_points(points: DyadicPointSet) -> str:
    lines = [f"res {points.resolution}"]
    lines.extend(f"{x} {y}" for x, y in points.points)
    return "\n".join(lines) + "\n"


def load_points(text: str) -> DyadicPointSet:
    """解析res <n>加每行X Y的点集文本"""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("res "):
        raise ParameterError("point dump must start with 'res <n>'")
    try:
        resolution = int(lines[0].split()[1])
        points = []
        for line in lines[1:]:
            x, y = line.split()
            points.append((int(x), int(y)))
    except ValueError as e:
        raise ParameterError(f"malformed point dump: {e}")
    return DyadicPointSet(resolution, tuple(points))


def dump_coefficients(rows: Iterable[Tuple[int, int, int, int, Fraction]]) -> str:
    return "".join(f"{j1} {j2} {m1} {m2} {format_fraction(mu)}\n" for j1, j2, m1, m2, mu in rows)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_fraction(v) if isinstance(v, Fraction) else v for v in row])
    return buffer.getvalue()
