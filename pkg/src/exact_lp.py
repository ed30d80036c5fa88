"""
精确线性规划模块
标准型 min cᵀx, Ax = b, x ≥ 0 的两阶段单纯形法（Bland规则，Fraction算术），
返回原始解与对偶解，证书可用纯矩阵运算复核
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .linalg import dot, format_vector

logger = logging.getLogger(__name__)


class LPError(Exception):
    """线性规划相关异常"""
    pass


class UnboundedError(LPError):
    """目标函数无下界"""
    pass


class InfeasibleError(LPError):
    """可行域为空"""
    pass


class LPStatus(Enum):
    """求解状态枚举"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """min cᵀx, Ax = b, x ≥ 0"""
    A: List[List[Fraction]]
    b: List[Fraction]
    c: List[Fraction]

    def __post_init__(self):
        self.A = [[Fraction(x) for x in row] for row in self.A]
        self.b = [Fraction(x) for x in self.b]
        self.c = [Fraction(x) for x in self.c]
        if len(self.A) != len(self.b):
            raise LPError(f"约束行数 {len(self.A)} 与右端项个数 {len(self.b)} 不一致")
        if any(len(row) != len(self.c) for row in self.A):
            raise LPError("约束矩阵列数与目标维数不一致")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_constraints(self) -> int:
        return len(self.b)


@dataclass
class LPSolution:
    """求解结果：原始解、目标值与对偶解 y（对应等式约束）"""
    status: LPStatus
    x: List[Fraction] = field(default_factory=list)
    objective: Optional[Fraction] = None
    dual: List[Fraction] = field(default_factory=list)
    pivots: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "x": format_vector(self.x),
            "objective": None if self.objective is None else format_vector([self.objective])[0],
            "dual": format_vector(self.dual),
        }


class _Tableau:
    """带人工变量的单纯形表；人工变量列始终保存 B⁻¹"""

    def __init__(self, program: LinearProgram):
        self.m = program.n_constraints
        self.n = program.n_vars
        self.signs = [(-1 if bi < 0 else 1) for bi in program.b]
        self.rows = []
        for i in range(self.m):
            s = self.signs[i]
            row = [s * a for a in program.A[i]] + [Fraction(int(k == i)) for k in range(self.m)]
            self.rows.append(row)
        self.rhs = [s * bi for s, bi in zip(self.signs, program.b)]
        self.basis = [self.n + i for i in range(self.m)]
        self.pivots = 0

    def pivot(self, r: int, j: int):
        piv = self.rows[r][j]
        self.rows[r] = [a / piv for a in self.rows[r]]
        self.rhs[r] /= piv
        for k in range(self.m):
            if k != r and self.rows[k][j] != 0:
                f = self.rows[k][j]
                self.rows[k] = [a - f * b for a, b in zip(self.rows[k], self.rows[r])]
                self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        total = self.n + self.m
        return [cost[j] - sum((cost[self.basis[r]] * self.rows[r][j] for r in range(self.m)), Fraction(0))
                for j in range(total)]

    def run(self, cost: Sequence[Fraction], allowed: int) -> LPStatus:
        """Bland规则：最小下标入基，比值相同时最小下标出基"""
        while True:
            reduced = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if reduced[j] < 0), None)
            if entering is None:
                return LPStatus.OPTIMAL
            candidates = [(self.rhs[r] / self.rows[r][entering], self.basis[r], r)
                          for r in range(self.m) if self.rows[r][entering] > 0]
            if not candidates:
                return LPStatus.UNBOUNDED
            _, _, leaving = min(candidates)
            self.pivot(leaving, entering)

    def drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            j = next((j for j in range(self.n) if self.rows[r][j] != 0), None)
            if j is not None:
                self.pivot(r, j)

    def primal(self) -> List[Fraction]:
        x = [Fraction(0)] * self.n
        for r, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.rhs[r]
        return x

    def dual(self, cost: Sequence[Fraction]) -> List[Fraction]:
        """y = c_Bᵀ B⁻¹，再还原行符号"""
        y = []
        for i in range(self.m):
            value = sum((cost[self.basis[r]] * self.rows[r][self.n + i] for r in range(self.m)), Fraction(0))
            y.append(self.signs[i] * value)
        return y


def solve_lp(program: LinearProgram) -> LPSolution:
    """
    两阶段单纯形法

    Returns:
        LPSolution: OPTIMAL 时带原始解与对偶解；INFEASIBLE / UNBOUNDED 只带状态
    """
    tableau = _Tableau(program)
    total = program.n_vars + program.n_constraints
    phase_one = [Fraction(0)] * program.n_vars + [Fraction(1)] * program.n_constraints
    tableau.run(phase_one, total)
    infeasibility = sum((tableau.rhs[r] for r in range(tableau.m) if tableau.basis[r] >= tableau.n),
                        Fraction(0))
    if infeasibility > 0:
        logger.debug(f"第一阶段最优值 {infeasibility} > 0，不可行")
        return LPSolution(LPStatus.INFEASIBLE, pivots=tableau.pivots)
    tableau.drive_out_artificials()

    phase_two = list(program.c) + [Fraction(0)] * program.n_constraints
    status = tableau.run(phase_two, program.n_vars)
    if status is LPStatus.UNBOUNDED:
        return LPSolution(LPStatus.UNBOUNDED, pivots=tableau.pivots)
    x = tableau.primal()
    return LPSolution(
        status=LPStatus.OPTIMAL,
        x=x,
        objective=dot(program.c, x),
        dual=tableau.dual(phase_two),
        pivots=tableau.pivots,
    )


def verify_optimality(program: LinearProgram, solution: LPSolution) -> bool:
    """
    复核：Ax = b，x ≥ 0，c − Aᵀy ≥ 0，cᵀx = bᵀy
    """
    if solution.status is not LPStatus.OPTIMAL:
        return False
    x, y = solution.x, solution.dual
    if any(v < 0 for v in x):
        return False
    if any(dot(row, x) != bi for row, bi in zip(program.A, program.b)):
        return False
    for j in range(program.n_vars):
        if program.c[j] - sum((program.A[i][j] * y[i] for i in range(program.n_constraints)), Fraction(0)) < 0:
            return False
    return dot(program.c, x) == dot(program.b, y)


def minimize(program: LinearProgram) -> LPSolution:
    """求解并把不可行/无界转为异常"""
    solution = solve_lp(program)
    if solution.status is LPStatus.INFEASIBLE:
        raise InfeasibleError("线性规划不可行")
    if solution.status is LPStatus.UNBOUNDED:
        raise UnboundedError("线性规划无界（缺少规范化约束？）")
    return solution
