"""
张量锥模块
生成形变系数为1的不等式组，计算面的等式与维数，检查面上权三元组的限制度数，
对边界数据做 𝒟₁/𝒟₂/𝒟₃ 分类，并在有限型中用精确线性规划证明不等式的不可约性
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .cartan import (
    AlgebraType, Coweight, Realization, RealizationMismatchError, Weight, classify_type,
    fundamental_weights, rho,
)
from .config import config
from .exact_lp import LinearProgram, LPStatus, solve_lp
from .linalg import dot, format_rational, format_vector, matrix_rank
from .schubert import schubert_calculator
from .tensor import gamma_member
from .weyl import ParabolicType, WeylElement, act_on_coweight, weyl_group

logger = logging.getLogger(__name__)


class ConeError(Exception):
    """张量锥相关异常"""
    pass


class NotOnFaceError(ConeError):
    """三元组不满足面的等式"""
    pass


class NotCoefficientOneError(ConeError):
    """三元组的形变系数不为1"""
    pass


class BudgetExhaustedError(ConeError):
    """搜索预算耗尽而秩未达到期望维数"""
    pass


class NotFiniteTypeError(ConeError):
    """不可约性证书只对有限型定义"""
    pass


class FaceVerdict(Enum):
    """面维数判定枚举"""
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class WeightTriple:
    """(λ₁, λ₂, μ)"""
    lambda1: Weight
    lambda2: Weight
    mu: Weight

    def flatten(self) -> Tuple[Fraction, ...]:
        return self.lambda1.coords + self.lambda2.coords + self.mu.coords

    @property
    def is_dominant(self) -> bool:
        return self.lambda1.is_dominant and self.lambda2.is_dominant and self.mu.is_dominant

    @property
    def has_w_invariant_weight(self) -> bool:
        return any(w.is_w_invariant for w in (self.lambda1, self.lambda2, self.mu))

    def scale(self, factor) -> 'WeightTriple':
        return WeightTriple(self.lambda1.scale(factor), self.lambda2.scale(factor), self.mu.scale(factor))

    def to_json(self) -> List[List]:
        return [self.lambda1.to_json(), self.lambda2.to_json(), self.mu.to_json()]

    @classmethod
    def from_flat(cls, R: Realization, values: Sequence[Fraction]) -> 'WeightTriple':
        k = R.dim_h
        return cls(Weight(tuple(values[:k]), R.rank), Weight(tuple(values[k:2 * k]), R.rank),
                   Weight(tuple(values[2 * k:]), R.rank))


@dataclass
class SpaceE:
    """E = {(λ₁,λ₂,μ) : λ₁+λ₂−μ ∈ Span_ℚ(Δ)}"""
    realization: Realization
    basis: List[Tuple[Fraction, ...]]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, t: WeightTriple) -> bool:
        return self.realization.root_coordinates(t.lambda1 + t.lambda2 - t.mu) is not None


@dataclass
class Inequality:
    """极大抛物 P_j 与三元组 (w1, w2, v) 给出的不等式 I^P"""
    parabolic_index: int
    w1: WeylElement
    w2: WeylElement
    v: WeylElement
    coweights: Tuple[Coweight, Coweight, Coweight]
    coefficient: int = 1

    @property
    def key(self) -> Tuple:
        return (self.parabolic_index, self.w1.word, self.w2.word, self.v.word)

    def sort_key(self) -> Tuple:
        return (self.parabolic_index, self.v.length, self.v.word, self.w1.word, self.w2.word)

    def linear_form(self) -> Tuple[Fraction, ...]:
        """(w1x_j, w2x_j, −vx_j) 的拼接"""
        a, b, c = self.coweights
        return a.coords + b.coords + tuple(-x for x in c.coords)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parabolic": self.parabolic_index,
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "v": self.v.to_json(),
            "coefficient": self.coefficient,
        }


@dataclass
class InequalitySystem:
    """枚举结果及完整性元数据"""
    realization: Realization
    max_length: int
    complete: bool
    inequalities: List[Inequality] = field(default_factory=list)

    def __iter__(self):
        return iter(self.inequalities)

    def __len__(self) -> int:
        return len(self.inequalities)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "complete": self.complete,
            "complete_up_to_length": self.max_length,
            "count": len(self.inequalities),
            "inequalities": [i.to_dict() for i in self.inequalities],
        }


@dataclass
class Face:
    """抛物 P 与形变系数为1的三元组给出的面"""
    realization: Realization
    parabolic: ParabolicType
    w1: WeylElement
    w2: WeylElement
    v: WeylElement
    forms: Dict[int, Tuple[Fraction, ...]]

    @property
    def expected_dimension(self) -> int:
        """d = 2·dim h + #Δ(P)"""
        return 2 * self.realization.dim_h + len(self.parabolic.levi)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parabolic": self.parabolic.to_dict(),
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "v": self.v.to_json(),
        }


@dataclass
class BoundaryClass:
    """𝒟 中的一对 (α, i) 及其分类"""
    alpha: int
    index: int
    klass: str
    facts: Dict[str, bool]

    def to_dict(self) -> Dict[str, Any]:
        return {"alpha": self.alpha, "index": self.index, "class": self.klass, "facts": self.facts}


@dataclass
class FaceReport:
    """face_dimension 的结果"""
    d_expected: int
    rank_found: int
    equality_rank: int
    verdict: FaceVerdict
    witnesses: List[WeightTriple] = field(default_factory=list)
    reason: Optional[str] = None
    candidates_checked: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d_expected": self.d_expected,
            "rank_found": self.rank_found,
            "equality_rank": self.equality_rank,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "candidates_checked": self.candidates_checked,
            "witnesses": [t.to_json() for t in self.witnesses],
        }


@dataclass
class IrredundancyCertificate:
    """不可约性（面）证书或冗余性（对偶）证书"""
    inequality: Inequality
    irredundant: bool
    objective: Fraction
    point: Optional[WeightTriple] = None
    multipliers: Dict[int, Fraction] = field(default_factory=dict)
    residual: List[Fraction] = field(default_factory=list)
    verified: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequality": self.inequality.to_dict(),
            "irredundant": self.irredundant,
            "objective": format_rational(self.objective),
            "point": None if self.point is None else self.point.to_json(),
            "multipliers": {str(k): format_rational(v) for k, v in sorted(self.multipliers.items())},
            "residual": format_vector(self.residual),
            "verified": self.verified,
        }


def space_E_basis(R: Realization) -> SpaceE:
    """(e_a, 0, e_a)、(0, e_a, e_a)、(0, 0, α_i)"""
    k = R.dim_h
    zero = (Fraction(0),) * k
    unit = [tuple(Fraction(int(a == b)) for b in range(k)) for a in range(k)]
    basis = [e + zero + e for e in unit] + [zero + e + e for e in unit]
    basis += [zero + zero + alpha.coords for alpha in R.simple_roots]
    return SpaceE(R, basis)


def _forms_for(R: Realization, w1: WeylElement, w2: WeylElement, v: WeylElement,
               j: int) -> Tuple[Coweight, Coweight, Coweight]:
    x = R.coweights[j]
    return (act_on_coweight(w1, x), act_on_coweight(w2, x), act_on_coweight(v, x))


def _flat_form(coweights: Tuple[Coweight, Coweight, Coweight]) -> Tuple[Fraction, ...]:
    a, b, c = coweights
    return a.coords + b.coords + tuple(-x for x in c.coords)


def _check_triple(R: Realization, t: WeightTriple):
    for weight in (t.lambda1, t.lambda2, t.mu):
        R.check_weight(weight)


def _max_quotient_length(R: Realization, P: ParabolicType) -> Optional[int]:
    if classify_type(R.gcm) is not AlgebraType.FINITE:
        return None
    W = weyl_group(R)
    bound = W.longest_element().length
    return max(w.length for w in W.min_coset_reps(P, bound))


def enumerate_inequalities(R: Realization, L_max: int) -> InequalitySystem:
    """
    对每个极大抛物 P 与 (W^P)³ 中 ℓ(v) = ℓ(w1)+ℓ(w2) ≤ L_max 且形变系数恰为1的三元组，
    给出一条不等式；按 (j, ℓ(v), v, w1, w2) 排序并按规范字去重
    """
    if L_max < 0:
        raise ConeError(f"长度界必须 ≥ 0，收到 {L_max}")
    W = weyl_group(R)
    records: Dict[Tuple, Inequality] = {}
    complete = True
    for j in range(R.rank):
        P = ParabolicType.maximal(R.rank, j)
        calc = schubert_calculator(W, P, L_max)
        for entry in calc.deformed_table(L_max):
            if entry.deformed != 1:
                continue
            inequality = Inequality(j, entry.w1, entry.w2, entry.v,
                                    _forms_for(R, entry.w1, entry.w2, entry.v, j))
            records.setdefault(inequality.key, inequality)
        top = _max_quotient_length(R, P)
        if top is None or top > L_max:
            complete = False
    ordered = sorted(records.values(), key=Inequality.sort_key)
    logger.info(f"✅ 不等式枚举完成: {len(ordered)} 条 (ℓ(v) ≤ {L_max}, complete={complete})")
    return InequalitySystem(R, L_max, complete, ordered)


def eval_inequality(I: Inequality, t: WeightTriple) -> Fraction:
    """λ₁(w₁x_j) + λ₂(w₂x_j) − μ(vx_j)"""
    form = I.linear_form()
    values = t.flatten()
    if len(form) != len(values):
        raise RealizationMismatchError(f"三元组维数 {len(values)} 与不等式维数 {len(form)} 不一致")
    return dot(form, values)


def lattice_condition(R: Realization, t: WeightTriple) -> bool:
    """μ − λ₁ − λ₂ ∈ ⊕ℤα_i"""
    _check_triple(R, t)
    coords = R.root_coordinates(t.mu - t.lambda1 - t.lambda2)
    return coords is not None and all(x.denominator == 1 for x in coords)


def build_face(R: Realization, P: ParabolicType, w1: WeylElement, w2: WeylElement,
               v: WeylElement) -> Face:
    """
    Raises:
        NotCoefficientOneError: 形变系数不为1
    """
    W = weyl_group(R)
    bound = max(v.length, config.default_max_length)
    entry = schubert_calculator(W, P, bound).entry(w1, w2, v)
    if entry.deformed != 1:
        raise NotCoefficientOneError(
            f"({w1}, {w2}, {v}) 的形变系数为 {entry.deformed}（cup = {entry.cup}, {entry.reason}）")
    forms = {j: _flat_form(_forms_for(R, w1, w2, v, j)) for j in P.complement}
    return Face(R, P, w1, w2, v, forms)


def face_equalities(F: Face, t: WeightTriple) -> List[Fraction]:
    """每个 α_j ∉ Δ(P) 对应的 I^j(t)"""
    _check_triple(F.realization, t)
    values = t.flatten()
    return [dot(F.forms[j], values) for j in F.parabolic.complement]


def equality_rank_on_E(F: Face) -> int:
    """等式在 E 上限制后的秩"""
    E = space_E_basis(F.realization)
    rows = [[dot(F.forms[j], b) for b in E.basis] for j in F.parabolic.complement]
    return matrix_rank(rows)


def _bounded_compositions(total: int, parts: int, cap: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _bounded_compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def _seed_triples(R: Realization) -> Iterator[WeightTriple]:
    basics = [R.zero_weight()] + fundamental_weights(R) + [rho(R)]
    for a in basics:
        for b in basics:
            yield WeightTriple(a, b, a + b)
    r = rho(R)
    for alpha in R.simple_roots:
        yield WeightTriple(r, r, r + r - alpha)


def _lattice_candidates(R: Realization, height: int) -> Iterator[WeightTriple]:
    """按代价递增：λ 的余根取值 ∈ [0,h]，补坐标 ∈ [−1,1]，β ∈ [0,h]^{l+1}，μ = λ₁+λ₂−Σβα 支配"""
    n, corank = R.rank, R.corank
    comp_choices = [()]
    for _ in range(2 * corank):
        comp_choices = [c + (x,) for c in comp_choices for x in (0, 1, -1)]
    free = 3 * n
    for cost in range(0, free * height + 2 * corank + 1):
        for comp in comp_choices:
            rest = cost - sum(abs(x) for x in comp)
            if rest < 0:
                continue
            for values in _bounded_compositions(rest, free, height):
                lam1 = Weight(tuple(Fraction(x) for x in values[:n] + comp[:corank]), n)
                lam2 = Weight(tuple(Fraction(x) for x in values[n:2 * n] + comp[corank:]), n)
                mu = lam1 + lam2 - R.root_weight(values[2 * n:])
                if mu.is_dominant:
                    yield WeightTriple(lam1, lam2, mu)


def face_dimension(F: Face, height: Optional[int] = None, n_max: Optional[int] = None,
                   depth: Optional[int] = None, max_candidates: Optional[int] = None,
                   strict: bool = False) -> FaceReport:
    """
    在面上搜索可实现的支配整三元组，贪心扩充线性无关集，返回其秩与判定

    PASS：秩 = d；FAIL：秩 > d；INCONCLUSIVE：预算耗尽时秩 < d（strict 时抛出异常）

    面上的点落在 E ∩ {等式} 中，秩不超过 dim E − 等式秩；该上界大于 d 时继续搜索第 d+1 个见证点
    """
    R = F.realization
    height = config.default_height if height is None else height
    n_max = config.default_nmax if n_max is None else n_max
    max_candidates = config.face_candidate_budget if max_candidates is None else max_candidates
    d = F.expected_dimension
    equality_rank = equality_rank_on_E(F)
    ceiling = space_E_basis(R).dimension - equality_rank
    limit = min(ceiling, d + 1)

    witnesses: List[WeightTriple] = []
    seen = set()
    checked = 0

    def candidates() -> Iterator[WeightTriple]:
        yield from _seed_triples(R)
        yield from _lattice_candidates(R, height)

    for t in candidates():
        if len(witnesses) >= limit or checked >= max_candidates:
            break
        key = t.flatten()
        if key in seen:
            continue
        seen.add(key)
        checked += 1
        if not t.is_dominant or any(face_equalities(F, t)):
            continue
        if matrix_rank([w.flatten() for w in witnesses] + [key]) <= len(witnesses):
            continue
        verdict = gamma_member(R, t.lambda1, t.lambda2, t.mu, n_max, depth)
        if verdict.is_member:
            witnesses.append(t)
            logger.debug(f"🔍 见证点 {len(witnesses)}/{limit}: {t.to_json()} (N = {verdict.scale})")

    rank = matrix_rank([w.flatten() for w in witnesses]) if witnesses else 0
    if rank == d:
        report = FaceReport(d, rank, equality_rank, FaceVerdict.PASS, witnesses, None, checked)
    elif rank > d:
        report = FaceReport(d, rank, equality_rank, FaceVerdict.FAIL, witnesses, "rank_exceeds_d", checked)
    else:
        if strict:
            raise BudgetExhaustedError(f"检查 {checked} 个候选后秩为 {rank} < d = {d}")
        report = FaceReport(d, rank, equality_rank, FaceVerdict.INCONCLUSIVE, witnesses,
                            "budget_exhausted", checked)
    logger.info(f"📋 面维数: d = {d}, rank = {rank}, {report.verdict.value}")
    return report


def restcisom_hypothesis_check(F: Face, t: WeightTriple) -> Dict[str, Any]:
    """
    面上三元组的限制度数：α ∈ Δ⁺(w₁) 取 λ₁(α∨)，α ∈ Δ⁺(w₂) 取 λ₂(α∨)，α ∈ Δ⁻(v) 取 μ(α∨)

    Raises:
        NotOnFaceError: t 不在面上
    """
    if any(face_equalities(F, t)):
        raise NotOnFaceError(f"{t.to_json()} 不满足面的等式")
    W = weyl_group(F.realization)
    degrees = []
    for label, roots, weight in (
        ("delta_plus_w1", W.delta_plus(F.w1, F.parabolic), t.lambda1),
        ("delta_plus_w2", W.delta_plus(F.w2, F.parabolic), t.lambda2),
        ("delta_minus_v", W.delta_minus(F.v), t.mu),
    ):
        for i in roots:
            degrees.append({"set": label, "alpha": i, "degree": format_rational(weight.coords[i])})
    nonnegative = all(Fraction(entry["degree"]) >= 0 for entry in degrees)
    return {"triple": t.to_json(), "degrees": degrees, "all_nonnegative": nonnegative}


def classify_boundary(F: Face) -> List[BoundaryClass]:
    """把 𝒟 = Δ⁺(w₁) ⊔ Δ⁺(w₂) ⊔ Δ⁻(v) 划分为 𝒟₁、𝒟₂、𝒟₃"""
    W = weyl_group(F.realization)
    result = []
    for index, w in ((1, F.w1), (2, F.w2)):
        for alpha in W.delta_plus(w, F.parabolic):
            below = W.bruhat_leq(w.left(alpha), F.v)
            result.append(BoundaryClass(alpha, index, "D1" if below else "D2",
                                        {"s_alpha_w_leq_v": below}))
    for alpha in W.delta_minus(F.v):
        reflected = F.v.left(alpha)
        first = W.bruhat_leq(F.w1, reflected)
        second = W.bruhat_leq(F.w2, reflected)
        if first and second:
            klass = "D1"
        elif not first and not second:
            klass = "D3"
        else:
            klass = "D2"
        result.append(BoundaryClass(alpha, 3, klass,
                                    {"w1_leq_s_alpha_v": first, "w2_leq_s_alpha_v": second}))
    return result


def _others(I: Inequality, inequalities: Sequence[Inequality]) -> List[Inequality]:
    """去掉恰好一条与 I 同 key 的项；列表按多重集计，其余副本（同一对象或相等副本）保留"""
    result = list(inequalities)
    for idx, J in enumerate(result):
        if J.key == I.key:
            del result[idx]
            break
    return result


def irredundancy_certificate(I: Inequality, inequalities: Sequence[Inequality],
                             R: Realization) -> IrredundancyCertificate:
    """
    有限型中 I 是否为 {其余不等式} ∩ 支配区域 的面

    变量为三元组的余根取值 y ≥ 0，规范化 Σy = 1；min I·y < 0 给出违反 I 的点，
    否则对偶解给出 I − Σ u_k J_k ≥ 0（u ≥ 0）
    """
    if classify_type(R.gcm) is not AlgebraType.FINITE:
        raise NotFiniteTypeError("不可约性证书只对有限型定义")
    others = _others(I, inequalities)
    size = 3 * R.dim_h
    count = len(others)
    A = []
    for k, J in enumerate(others):
        form = list(J.linear_form())
        slack = [Fraction(-1) if m == k else Fraction(0) for m in range(count)]
        A.append(form + slack)
    A.append([Fraction(1)] * size + [Fraction(0)] * count)
    b = [Fraction(0)] * count + [Fraction(1)]
    c = list(I.linear_form()) + [Fraction(0)] * count
    solution = solve_lp(LinearProgram(A, b, c))
    if solution.status is not LPStatus.OPTIMAL:
        raise ConeError(f"不可约性线性规划求解失败: {solution.status.value}")

    if solution.objective < 0:
        point = WeightTriple.from_flat(R, solution.x[:size])
        cert = IrredundancyCertificate(I, True, solution.objective, point=point)
    else:
        multipliers = {k: solution.dual[k] for k in range(count)}
        cert = IrredundancyCertificate(I, False, solution.objective, multipliers=multipliers)
    cert.residual = _residual(I, others, cert.multipliers) if not cert.irredundant else []
    cert.verified = verify_irredundancy_certificate(cert, inequalities)
    return cert


def _residual(I: Inequality, others: Sequence[Inequality], multipliers: Dict[int, Fraction]) -> List[Fraction]:
    form = list(I.linear_form())
    for k, u in multipliers.items():
        for idx, value in enumerate(others[k].linear_form()):
            form[idx] -= u * value
    return form


def verify_irredundancy_certificate(cert: IrredundancyCertificate,
                                    inequalities: Sequence[Inequality]) -> bool:
    """只用有理矩阵运算复核证书"""
    I = cert.inequality
    others = _others(I, inequalities)
    if cert.irredundant:
        t = cert.point
        if t is None or not t.is_dominant:
            return False
        if sum(t.flatten()) != 1:
            return False
        return eval_inequality(I, t) < 0 and all(eval_inequality(J, t) >= 0 for J in others)
    if any(u < 0 for u in cert.multipliers.values()):
        return False
    return all(x >= 0 for x in _residual(I, others, cert.multipliers))
