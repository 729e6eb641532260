"""
Data types for digital nets, Haar indices and verification results
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ParameterError, DomainError

Rational = Fraction


def _check_bits(values: Sequence[int], what: str) -> Tuple[int, ...]:
    bits = tuple(int(v) for v in values)
    for v in bits:
        if v not in (0, 1):
            raise ParameterError(f"{what} must contain only 0/1 entries, got {v}")
    return bits


class Family(Enum):
    """网族"""
    PA = "pa"
    PC = "pc"
    TRI = "tri"
    CUSTOM = "custom"


@dataclass(frozen=True)
class BitMatrix:
    """GF(2)上的n×n矩阵，按行存储"""
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(_check_bits(row, "matrix row") for row in self.rows)
        if not rows:
            raise ParameterError("matrix must have at least one row")
        for row in rows:
            if len(row) != len(rows):
                raise ParameterError(f"matrix must be square, got row of length {len(row)} in {len(rows)} rows")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(tuple(int(i == c) for c in range(n)) for i in range(n)))

    @classmethod
    def anti_diagonal(cls, n: int) -> "BitMatrix":
        return cls(tuple(tuple(int(i + c == n - 1) for c in range(n)) for i in range(n)))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        """由'0'/'1'字符串逐行构造"""
        parsed = []
        for text in rows:
            if any(ch not in "01" for ch in text):
                raise ParameterError(f"malformed matrix row: {text!r}")
            parsed.append(tuple(int(ch) for ch in text))
        return cls(tuple(parsed))

    def to_strings(self) -> List[str]:
        return ["".join(str(v) for v in row) for row in self.rows]

    def row_mask(self, i: int) -> int:
        """第i行的整数位集，第c列对应第c位"""
        mask = 0
        for c, v in enumerate(self.rows[i]):
            if v:
                mask |= 1 << c
        return mask


@dataclass(frozen=True)
class ShiftVector:
    """数字平移向量σ"""
    bits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", _check_bits(self.bits, "shift"))

    @property
    def n(self) -> int:
        return len(self.bits)

    @classmethod
    def zeros(cls, n: int) -> "ShiftVector":
        return cls((0,) * n)

    def complement(self) -> "ShiftVector":
        return ShiftVector(tuple(1 - b for b in self.bits))

    def __getitem__(self, k: int) -> int:
        """1起始下标σ_k"""
        return self.bits[k - 1]


@dataclass(frozen=True)
class NetSpec:
    """网规格：族标签加参数"""
    family: Family
    n: int
    shift: ShiftVector
    symmetrized: bool = False
    a: Optional[Tuple[int, ...]] = None
    c: Optional[Tuple[int, ...]] = None
    tri_entries: Optional[Tuple[Tuple[int, ...], ...]] = None
    matrices: Optional[Tuple[BitMatrix, BitMatrix]] = None

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        if self.shift.n != self.n:
            raise ParameterError(f"shift length {self.shift.n} does not match n={self.n}")

        blocks = {
            Family.PA: self.a,
            Family.PC: self.c,
            Family.TRI: self.tri_entries,
            Family.CUSTOM: self.matrices,
        }
        for family, block in blocks.items():
            if family is self.family and block is None:
                raise ParameterError(f"{family.value} spec requires its parameter block")
            if family is not self.family and block is not None:
                raise ParameterError(f"{family.value} parameters given for a {self.family.value} spec")

        if self.family is Family.PA:
            object.__setattr__(self, "a", _check_bits(self.a, "a"))
            if len(self.a) != self.n - 1:
                raise ParameterError(f"a must have n-1={self.n - 1} bits, got {len(self.a)}")
        elif self.family is Family.PC:
            object.__setattr__(self, "c", _check_bits(self.c, "c"))
            if len(self.c) != self.n - 1:
                raise ParameterError(f"c must have n-1={self.n - 1} bits, got {len(self.c)}")
        elif self.family is Family.TRI:
            rows = tuple(_check_bits(row, "triangular entries") for row in self.tri_entries)
            if len(rows) != self.n or any(len(row) != self.n for row in rows):
                raise ParameterError(f"triangular entries must form an {self.n}x{self.n} table")
            for i in range(self.n):
                for j in range(i + 1):
                    if rows[i][j]:
                        raise ParameterError("triangular entries must be strictly upper triangular")
            object.__setattr__(self, "tri_entries", rows)
        else:
            c1, c2 = self.matrices
            if c1.n != self.n or c2.n != self.n:
                raise ParameterError(f"custom matrices must be {self.n}x{self.n}")

    @classmethod
    def pa(cls, n: int, a: Sequence[int], shift: Optional[Sequence[int]] = None,
           symmetrized: bool = False) -> "NetSpec":
        bits = tuple(shift) if shift is not None else (0,) * n
        return cls(Family.PA, n, ShiftVector(bits), symmetrized, a=tuple(a))

    @classmethod
    def pc(cls, n: int, c: Sequence[int], shift: Optional[Sequence[int]] = None,
           symmetrized: bool = False) -> "NetSpec":
        bits = tuple(shift) if shift is not None else (0,) * n
        return cls(Family.PC, n, ShiftVector(bits), symmetrized, c=tuple(c))

    @classmethod
    def tri(cls, n: int, entries: Dict[Tuple[int, int], int],
            shift: Optional[Sequence[int]] = None, symmetrized: bool = False) -> "NetSpec":
        """entries以1起始的(i, j)为键，i<j"""
        table = [[0] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not 1 <= i < j <= n:
                raise ParameterError(f"triangular entry ({i},{j}) outside 1<=i<j<={n}")
            table[i - 1][j - 1] = v
        bits = tuple(shift) if shift is not None else (0,) * n
        return cls(Family.TRI, n, ShiftVector(bits), symmetrized,
                   tri_entries=tuple(tuple(row) for row in table))

    @classmethod
    def custom(cls, c1: BitMatrix, c2: BitMatrix, shift: Optional[Sequence[int]] = None,
               symmetrized: bool = False) -> "NetSpec":
        bits = tuple(shift) if shift is not None else (0,) * c1.n
        return cls(Family.CUSTOM, c1.n, ShiftVector(bits), symmetrized, matrices=(c1, c2))

    def with_shift(self, shift: ShiftVector) -> "NetSpec":
        return NetSpec(self.family, self.n, shift, self.symmetrized,
                       self.a, self.c, self.tri_entries, self.matrices)

    def weights(self) -> Tuple[int, ...]:
        """PA返回a，PC返回c"""
        if self.family is Family.PA:
            return self.a
        if self.family is Family.PC:
            return self.c
        raise ParameterError(f"{self.family.value} spec has no weight vector")


@dataclass(frozen=True)
class DyadicPointSet:
    """坐标为k/2^res的有限点集，以整数对保存"""
    resolution: int
    points: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.resolution < 0:
            raise DomainError(f"resolution must be nonnegative, got {self.resolution}")
        pts = tuple((int(x), int(y)) for x, y in self.points)
        size = 1 << self.resolution
        for x, y in pts:
            if not (0 <= x < size and 0 <= y < size):
                raise DomainError(f"point ({x},{y}) outside [0,{size})^2")
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def denominator(self) -> int:
        return 1 << self.resolution

    def xs(self) -> List[int]:
        return [x for x, _ in self.points]

    def ys(self) -> List[int]:
        return [y for _, y in self.points]

    def as_fractions(self) -> List[Tuple[Fraction, Fraction]]:
        d = self.denominator
        return [(Fraction(x, d), Fraction(y, d)) for x, y in self.points]

    def multiset(self) -> List[Tuple[int, int]]:
        return sorted(self.points)

    def rescaled(self, resolution: int) -> "DyadicPointSet":
        """提升到更高分辨率"""
        if resolution < self.resolution:
            raise DomainError(f"cannot lower resolution {self.resolution} to {resolution}")
        k = resolution - self.resolution
        return DyadicPointSet(resolution, tuple((x << k, y << k) for x, y in self.points))


@dataclass(frozen=True)
class EvalPoint:
    t1: Fraction
    t2: Fraction

    def __post_init__(self):
        t1, t2 = Fraction(self.t1), Fraction(self.t2)
        if not (0 <= t1 <= 1 and 0 <= t2 <= 1):
            raise ParameterError(f"evaluation point ({t1},{t2}) outside [0,1]^2")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)


@dataclass(frozen=True)
class HaarIndex:
    """Haar系数的索引(j, m)"""
    j1: int
    j2: int
    m1: int = 0
    m2: int = 0

    def __post_init__(self):
        for j, m in ((self.j1, self.m1), (self.j2, self.m2)):
            if j < -1:
                raise ParameterError(f"level {j} below -1")
            upper = 1 if j == -1 else 1 << j
            if not 0 <= m < upper:
                raise ParameterError(f"translation {m} not in D_{j}")

    @property
    def j(self) -> Tuple[int, int]:
        return (self.j1, self.j2)

    @property
    def m(self) -> Tuple[int, int]:
        return (self.m1, self.m2)

    @property
    def weight_exponent(self) -> int:
        """|j| = max(0,j1) + max(0,j2)"""
        return max(0, self.j1) + max(0, self.j2)


class RegionId(Enum):
    """索引平面的十三个区域"""
    J1 = 1
    J2 = 2
    J3 = 3
    J4 = 4
    J5 = 5
    J6 = 6
    J7 = 7
    J8 = 8
    J9 = 9
    J10 = 10
    J11 = 11
    J12 = 12
    J13 = 13

    @property
    def is_infinite(self) -> bool:
        return self in (RegionId.J4, RegionId.J7, RegionId.J13)


@dataclass(frozen=True)
class ShiftParams:
    ell: int
    L: int


@dataclass(frozen=True)
class TriParams:
    """l_μ(1..μ)"""
    mu: int
    l_values: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.l_values)


@dataclass
class MCEstimate:
    """蒙特卡洛L_p估计结果"""
    estimate: float
    std_error: float
    p: float
    samples: int
    seed: int


@dataclass
class OrderDiagnostics:
    ell: int
    L: int
    ratio_ellL: float
    ratio_L: float
    sym_optimal: bool


@dataclass
class BilykReport:
    n: int
    mu_corner: Fraction
    one_over_N: Fraction
    l2sq_scaled: Fraction
    n_sq_ratio: float


@dataclass
class AuditBranch:
    """单个分支的审计结果"""
    name: str
    checked: int = 0
    exceptions: int = 0
    allowed: Optional[int] = None
    max_scaled: Optional[Fraction] = None
    detail: Optional[str] = None

    @property
    def success(self) -> bool:
        if self.allowed is None:
            return self.exceptions == 0
        return self.exceptions <= self.allowed


@dataclass
class AuditReport:
    n: int
    branches: List[AuditBranch] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(b.success for b in self.branches)


@dataclass
class Mismatch:
    """验证失败的恒等式"""
    identity: str
    params: str
    expected: str
    actual: str


@dataclass
class SuiteResult:
    """验证套件结果"""
    suite: str
    checked: Dict[str, int] = field(default_factory=dict)
    mismatch: Optional[Mismatch] = None
    error: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.mismatch is None and self.error is None

    @property
    def total_checked(self) -> int:
        return sum(self.checked.values())

    def count(self, identity: str, k: int = 1):
        self.checked[identity] = self.checked.get(identity, 0) + k

    def get_summary(self) -> str:
        status = "✓ 通过" if self.success else "✗ 失败"
        return f"{self.suite}: {status}，检查 {self.total_checked} 个恒等式"


@dataclass
class SweepRow:
    n: int
    a: str
    shift: str
    ell: int
    L: int
    value: Fraction


@dataclass
class SearchResult:
    n: int
    a: str
    shift: str
    value: Fraction
    mode: str
    evaluated: int


@dataclass
class CommandRequest:
    """命令行请求"""
    subcommand: str
    family: Optional[str] = None
    n: Optional[int] = None
    a: Optional[str] = None
    c: Optional[str] = None
    tri: Optional[str] = None
    matrices: Optional[Tuple[str, str]] = None
    shift: Optional[str] = None
    symmetrized: bool = False
    method: Optional[str] = None
    format: str = "json"
    options: Dict[str, object] = field(default_factory=dict)


@dataclass
class CommandResult:
    """命令执行结果"""
    exit_code: int
    document: str
    error: Optional[str] = None
