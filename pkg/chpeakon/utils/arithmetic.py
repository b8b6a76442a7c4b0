"""
Number fields used by the moment problem.

FLOAT mode runs in an mpmath context of configurable precision and converts
back to machine floats at the end; RATIONAL mode keeps fractions.Fraction
throughout and uses sympy for exact determinants.
"""

import math
import sys
from enum import Enum
from fractions import Fraction
from typing import Any, List, Sequence, Union

import mpmath
import sympy

Scalar = Union[float, Fraction]


class Arithmetic(str, Enum):
    FLOAT = "float"
    RATIONAL = "rational"


class ExtendedField:
    """mpmath 기반 확장 정밀도 필드 (호출마다 독립 컨텍스트)"""

    exact = False
    arithmetic = Arithmetic.FLOAT

    def __init__(self, dps: int = 50):
        self.ctx = mpmath.MPContext()
        self.ctx.dps = dps

    @property
    def dps(self) -> int:
        return self.ctx.dps

    def convert(self, x: Any):
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        return self.ctx.mpf(x)

    def det(self, rows: Sequence[Sequence[Any]]):
        if len(rows) == 0:
            return self.ctx.mpf(1)
        return self.ctx.det(self.ctx.matrix([list(r) for r in rows]))

    def log(self, x):
        return self.ctx.log(x)

    def is_negligible(self, value, scale, tolerance: float) -> bool:
        return abs(value) <= tolerance * abs(scale)

    def to_float(self, x) -> float:
        return float(x)

    def to_machine(self, x):
        """표현 가능하면 float, 아니면 mpf 그대로"""
        value = float(x)
        if value != 0.0 and math.isfinite(value) and abs(value) >= sys.float_info.min:
            return value
        return x


class RationalField:
    """Fraction 기반 정확한 유리수 필드"""

    exact = True
    arithmetic = Arithmetic.RATIONAL

    def convert(self, x: Any) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, float)):
            return Fraction(x)
        return Fraction(str(x))

    def det(self, rows: Sequence[Sequence[Fraction]]) -> Fraction:
        if len(rows) == 0:
            return Fraction(1)
        matrix = sympy.Matrix(
            [[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows]
        )
        value = sympy.Rational(matrix.det(method="bareiss"))
        return Fraction(int(value.p), int(value.q))

    def log(self, x: Fraction) -> float:
        return math.log(x)

    def is_negligible(self, value, scale, tolerance: float) -> bool:
        return value == 0

    def to_float(self, x) -> float:
        return float(x)


Field = Union[ExtendedField, RationalField]


def make_field(arithmetic: Union[str, Arithmetic], dps: int = 50) -> Field:
    if Arithmetic(arithmetic) is Arithmetic.RATIONAL:
        return RationalField()
    return ExtendedField(dps)


def hankel_rows(values: Sequence[Any], size: int, shift: int) -> List[List[Any]]:
    """(s_{i+j+shift})_{i,j<size} 행렬의 행"""
    return [[values[i + j + shift] for j in range(size)] for i in range(size)]
