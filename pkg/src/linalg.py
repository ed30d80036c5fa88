"""
精确线性代数模块
基于sympy的有理数矩阵运算，所有跨模块的标量均为Fraction
"""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import sympy as sp

Number = Union[int, Fraction]
Vector = Tuple[Fraction, ...]


class LinalgError(Exception):
    """线性代数相关异常"""
    pass


def to_fraction(value) -> Fraction:
    """把int、Fraction或sympy有理数转换为Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def to_sympy(rows: Sequence[Sequence[Number]]) -> sp.Matrix:
    """Fraction矩阵 -> sympy矩阵"""
    return sp.Matrix([
        [sp.Rational(to_fraction(x).numerator, to_fraction(x).denominator) for x in row]
        for row in rows
    ])


def from_sympy(matrix: sp.Matrix) -> List[List[Fraction]]:
    """sympy矩阵 -> Fraction矩阵"""
    return [[to_fraction(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def matrix_rank(rows: Sequence[Sequence[Number]]) -> int:
    """精确秩，空矩阵秩为0"""
    if not rows or not rows[0]:
        return 0
    return int(to_sympy(rows).rank())


def nullspace(rows: Sequence[Sequence[Number]], ncols: int) -> List[Vector]:
    """零空间基，每个向量化为本原整数向量"""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    basis = to_sympy(rows).nullspace()
    return [primitive_vector([to_fraction(x) for x in vec]) for vec in basis]


def solve_pivot(rows: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> Optional[Vector]:
    """
    求解 M x = b 的主元解（自由变量取0）

    Returns:
        解向量；方程组不相容时返回None
    """
    ncols = len(rows[0])
    augmented = to_sympy([list(row) + [b] for row, b in zip(rows, rhs)])
    reduced, pivots = augmented.rref()
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        solution[p] = to_fraction(reduced[r, ncols])
    return tuple(solution)


def inverse(rows: Sequence[Sequence[Number]]) -> List[List[Fraction]]:
    """精确逆矩阵"""
    matrix = to_sympy(rows)
    if matrix.det() == 0:
        raise LinalgError("矩阵不可逆")
    return from_sympy(matrix.inv())


def left_inverse(rows: Sequence[Sequence[Number]]) -> List[List[Fraction]]:
    """列满秩矩阵的左逆 (MᵀM)⁻¹Mᵀ"""
    matrix = to_sympy(rows)
    gram = matrix.T * matrix
    if gram.det() == 0:
        raise LinalgError("矩阵列不满秩，无左逆")
    return from_sympy(gram.inv() * matrix.T)


def mat_vec(matrix: Sequence[Sequence[Number]], vector: Sequence[Number]) -> Vector:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, vector)), Fraction(0)) for row in matrix)


def dot(u: Sequence[Number], v: Sequence[Number]) -> Fraction:
    if len(u) != len(v):
        raise LinalgError(f"向量维数不一致: {len(u)} != {len(v)}")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def is_positive_definite(rows: Sequence[Sequence[Number]]) -> bool:
    return bool(to_sympy(rows).is_positive_definite)


def is_positive_semidefinite(rows: Sequence[Sequence[Number]]) -> bool:
    return bool(to_sympy(rows).is_positive_semidefinite)


def denominator_lcm(values: Iterable[Number]) -> int:
    return reduce(lcm, (to_fraction(x).denominator for x in values), 1)


def primitive_vector(values: Sequence[Number]) -> Vector:
    """
    缩放为本原整数向量，首个非零分量为正
    """
    scale = denominator_lcm(values)
    ints = [int(to_fraction(x) * scale) for x in values]
    common = reduce(gcd, (abs(x) for x in ints), 0)
    if common == 0:
        return tuple(Fraction(0) for _ in ints)
    first = next(x for x in ints if x != 0)
    sign = 1 if first > 0 else -1
    return tuple(Fraction(sign * x // common) for x in ints)


def is_integral(values: Iterable[Number]) -> bool:
    return all(to_fraction(x).denominator == 1 for x in values)


# 精确数值的JSON表示：整数原样输出，其余为 "p/q" 字符串

def format_rational(value: Number) -> Union[int, str]:
    value = to_fraction(value)
    if value.denominator == 1:
        return int(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: Union[int, str, Fraction]) -> Fraction:
    if isinstance(value, bool):
        raise LinalgError(f"无法解析为有理数: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise LinalgError(f"无法解析为有理数: {value!r}") from e
    raise LinalgError(f"无法解析为有理数: {value!r}")


def format_vector(values: Iterable[Number]) -> List[Union[int, str]]:
    return [format_rational(x) for x in values]
