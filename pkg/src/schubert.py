"""
Schubert演算模块
通过等变局部化计算 H*(X_P) 的结构常数，x_P-分次量 d_i / d^i，
Levi可移动性判定以及形变积 ⊙₀ 的系数
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cachetools import LRUCache, cached
from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, ring

from .cartan import RealRoot, rho
from .config import config
from .weyl import (
    NotMinimalRepError, NotRealRootError, ParabolicType, WeylElement, WeylGroup,
    act_on_weight,
)

logger = logging.getLogger(__name__)


class SchubertError(Exception):
    """Schubert演算相关异常"""
    pass


class LengthBoundExceededError(SchubertError):
    """元素长度超过局部化表的长度界"""
    pass


class LengthMismatchError(SchubertError):
    """ℓ(v) ≠ ℓ(w1) + ℓ(w2)"""
    pass


class UnsupportedPairError(SchubertError):
    """(w, v) 既不相等也不是降长的 s_β v"""
    pass


class ZeroCupProductError(SchubertError):
    """cup积系数为0时可移动性无定义"""
    pass


class PreconditionViolatedError(SchubertError):
    """freg_profile 的前提条件不满足"""
    pass


# 形变系数表中 movable = False 的原因码
REASON_MOVABLE = "movable"
REASON_ZERO_CUP = "zero_cup"
REASON_NOT_MOVABLE = "d_identity_fails"


@dataclass
class EquivariantExpansion:
    """ε^{w1}·ε^{w2} = Σ_u c_u ε^u 的等变展开"""
    w1: WeylElement
    w2: WeylElement
    parabolic: ParabolicType
    coefficients: Dict[WeylElement, PolyElement] = field(default_factory=dict)

    def coefficient(self, u: WeylElement) -> Optional[PolyElement]:
        return self.coefficients.get(u)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "terms": [{"u": u.to_json(), "coefficient": str(c.as_expr())}
                      for u, c in sorted(self.coefficients.items(), key=lambda kv: kv[0].sort_key())],
        }


@dataclass
class DeformedEntry:
    """形变系数表中的一项"""
    w1: WeylElement
    w2: WeylElement
    v: WeylElement
    cup: int
    movable: bool
    deformed: int
    reason: str
    character_balanced: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "v": self.v.to_json(),
            "cup": self.cup,
            "movable": self.movable,
            "deformed": self.deformed,
            "reason": self.reason,
            "character_balanced": self.character_balanced,
        }


@dataclass
class GradingProfile:
    """i ↦ d_i（或 d^i），i = 0, 1, …, 稳定点"""
    element: Tuple[int, ...]
    kind: str
    grades: Tuple[int, ...]
    values: Tuple[int, ...]

    def at(self, i: int) -> int:
        if i < 0:
            return 0
        return self.values[min(i, len(self.values) - 1)]

    def increment(self, j: int) -> int:
        """d̄_j = d_j − d_{j−1}"""
        return self.at(j) - self.at(j - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"element": list(self.element), "kind": self.kind,
                "grades": list(self.grades), "values": list(self.values)}


@dataclass
class FregReport:
    """反射对 (v, s_β v) 的分次比较"""
    case: int
    v: WeylElement
    w: WeylElement
    beta: RealRoot
    reference: GradingProfile
    reflected: GradingProfile
    inequality_holds: bool
    strict_index: Optional[int]
    k: int
    ledger_lhs: int
    ledger_rhs: int

    @property
    def beta_simple(self) -> bool:
        return self.beta.is_simple

    @property
    def strict_ok(self) -> bool:
        return self.beta_simple or self.strict_index is not None

    @property
    def ledger_ok(self) -> bool:
        return self.ledger_lhs == self.ledger_rhs

    @property
    def ok(self) -> bool:
        return self.inequality_holds and self.strict_ok and self.ledger_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case,
            "v": self.v.to_json(),
            "w": self.w.to_json(),
            "beta": list(self.beta.vector),
            "beta_simple": self.beta_simple,
            "reference": self.reference.to_dict(),
            "reflected": self.reflected.to_dict(),
            "inequality_holds": self.inequality_holds,
            "strict_index": self.strict_index,
            "k": self.k,
            "ledger": [self.ledger_lhs, self.ledger_rhs],
        }


# x_P-分次

def root_grade(vector: Sequence[int], P: ParabolicType) -> int:
    """β(x_P) = Σ_{α_j ∉ Δ(P)} β_j"""
    return sum(vector[j] for j in P.complement)


def inversion_grades(w: WeylElement, P: ParabolicType) -> List[int]:
    """{β(x_P) : β ∈ Φ⁺ ∩ w⁻¹Φ⁻}，即 {−θ(x_P) : θ ∈ Φ⁻, wθ ∈ Φ⁺}"""
    return sorted(root_grade(beta.vector, P) for beta in w.group.inversions(w))


def _count(grades: Sequence[int], i: int) -> int:
    return sum(1 for g in grades if g <= i)


def _require_quotient(P: ParabolicType, *elements: WeylElement):
    for w in elements:
        if not w.group.in_quotient(w, P):
            raise NotMinimalRepError(f"{w} 不在 W^P 中 (Δ(P) = {sorted(P.levi)})")


def _reflection_between(w: WeylElement, v: WeylElement) -> Optional[RealRoot]:
    """若 w = s_β v，返回正实根 β"""
    return w.group.reflection_root(w * v.inverse())


def _shift(w: WeylElement, beta: RealRoot, P: ParabolicType) -> int:
    """(w⁻¹β)(x_P)"""
    return root_grade(w.group.apply_to_root(w.inverse(), beta.vector), P)


def d_lower(i: int, w: WeylElement, v: WeylElement, P: ParabolicType) -> int:
    """
    d_i(ẇ, X_v^P)

    w = v 时为 #{θ ∈ Φ⁻ : vθ ∈ Φ⁺, −θ(x_P) ≤ i}；
    w = s_β v 且 ℓ(w) = ℓ(v) − 1 时再加上 [(w⁻¹β)(x_P) ≤ i]
    """
    _require_quotient(P, v)
    if w == v:
        return _count(inversion_grades(v, P), i)
    beta = _reflection_between(w, v)
    if beta is None or w.length != v.length - 1 or not w.group.in_quotient(w, P):
        raise UnsupportedPairError(f"({w}, {v}) 不是 w = v 或降长的 w = s_β v")
    k = _shift(w, beta, P)
    return _count(inversion_grades(w, P), i) + int(k <= i)


def d_upper(i: int, v: WeylElement, P: ParabolicType) -> int:
    """d^i(v̇, X^v_P)，与 d_i(v̇, X_v^P) 是同一个计数"""
    _require_quotient(P, v)
    return _count(inversion_grades(v, P), i)


def d_upper_shifted(i: int, w: WeylElement, v: WeylElement, P: ParabolicType) -> int:
    """d^i(ẇ, X^v_P)，w = s_β v 且 ℓ(w) = ℓ(v) + 1"""
    _require_quotient(P, v, w)
    beta = _reflection_between(w, v)
    if beta is None or w.length != v.length + 1:
        raise UnsupportedPairError(f"({w}, {v}) 不是升长的 w = s_β v")
    m = -_shift(w, beta, P)
    return _count(inversion_grades(w, P), i) - int(m <= i)


def _profile(element: WeylElement, kind: str, grades: List[int], top: int,
             correction: Optional[Tuple[int, int]] = None) -> GradingProfile:
    values = []
    for i in range(top + 1):
        value = _count(grades, i)
        if correction is not None:
            threshold, sign = correction
            value += sign * int(threshold <= i)
        values.append(value)
    return GradingProfile(element.word, kind, tuple(grades), tuple(values))


def grading_profile(v: WeylElement, P: ParabolicType, top: Optional[int] = None) -> GradingProfile:
    """v̇ 处的 d_i 全向量，直到稳定点"""
    _require_quotient(P, v)
    grades = inversion_grades(v, P)
    if top is None:
        top = max(grades, default=0)
    return _profile(v, "lower", grades, top)


def length_identity(v: WeylElement, P: ParabolicType) -> Tuple[int, int]:
    """
    (ρ − v⁻¹ρ)(x_P) 与 ℓ(v) + Σ_{j≥2} (j−1) d̄_j(v̇) 两侧分别计算
    """
    _require_quotient(P, v)
    R = v.group.realization
    x_P = R.coweights[P.complement[0]]
    for j in P.complement[1:]:
        x_P = x_P + R.coweights[j]
    r = rho(R)
    lhs = x_P.evaluate(r - act_on_weight(v.inverse(), r))
    profile = grading_profile(v, P)
    rhs = v.length + sum((j - 1) * profile.increment(j) for j in range(2, len(profile.values)))
    if lhs.denominator != 1:
        raise SchubertError(f"(ρ − v⁻¹ρ)(x_P) = {lhs} 不是整数")
    return int(lhs), rhs


def _ledger(longer: WeylElement, shorter: WeylElement, beta: RealRoot,
            P: ParabolicType) -> Tuple[int, int, int, GradingProfile, GradingProfile]:
    """
    对 ℓ(shorter) = ℓ(longer) − 1、shorter = s_β longer 的降长对计算
    1 + Σ_{j≥2} (j−1)(d̄_j(v̇) − d̄_j(ẇ; X_v) + [j = k]) 与 ⟨ρ,β∨⟩·k
    """
    k = _shift(shorter, beta, P)
    grades_v = inversion_grades(longer, P)
    grades_w = inversion_grades(shorter, P)
    top = max(grades_v + grades_w + [k, 1])
    profile_v = _profile(longer, "lower", grades_v, top)
    profile_w = _profile(shorter, "lower_shifted", grades_w, top, (k, 1))
    lhs = 1 + sum((j - 1) * (profile_v.increment(j) - profile_w.increment(j) + int(j == k))
                  for j in range(2, top + 1))
    rhs = sum(beta.coroot) * k
    return lhs, rhs, k, profile_v, profile_w


def freg_profile(v: WeylElement, beta, P: ParabolicType) -> FregReport:
    """
    比较 v̇ 与 ẇ（w = s_β v）处的分次向量

    ℓ(w) = ℓ(v) − 1：d_i(ẇ, X_v) ≥ d_i(v̇, X_v)，β 非单根时存在严格的 i_o；
    ℓ(w) = ℓ(v) + 1：d^i(ẇ, X^v) ≤ d^i(v̇, X^v)，β 非单根时存在严格的 i_o。

    Raises:
        PreconditionViolatedError: v 或 s_β v 不在 W^P，或长度差不是 ±1
    """
    W: WeylGroup = v.group
    if not isinstance(beta, RealRoot):
        try:
            beta = W.real_root(beta)
        except NotRealRootError as e:
            raise PreconditionViolatedError(str(e)) from e
    if not beta.positive:
        raise PreconditionViolatedError(f"β = {beta.vector} 不是正根")
    w = W.reflection_of_root(beta) * v
    if not (W.in_quotient(v, P) and W.in_quotient(w, P)):
        raise PreconditionViolatedError(f"v = {v} 或 s_βv = {w} 不在 W^P 中")

    if w.length == v.length - 1:
        lhs, rhs, k, reference, reflected = _ledger(v, w, beta, P)
        pairs = list(zip(reference.values, reflected.values))
        holds = all(b >= a for a, b in pairs)
        strict = next((i for i, (a, b) in enumerate(pairs) if b > a), None)
        case = 1
    elif w.length == v.length + 1:
        lhs, rhs, k, _, _ = _ledger(w, v, beta, P)
        m = -_shift(w, beta, P)
        grades_v = inversion_grades(v, P)
        grades_w = inversion_grades(w, P)
        top = max(grades_v + grades_w + [m, 1])
        reference = GradingProfile(v.word, "upper", tuple(grades_v),
                                   tuple(d_upper(i, v, P) for i in range(top + 1)))
        reflected = GradingProfile(w.word, "upper_shifted", tuple(grades_w),
                                   tuple(d_upper_shifted(i, w, v, P) for i in range(top + 1)))
        pairs = list(zip(reference.values, reflected.values))
        holds = all(b <= a for a, b in pairs)
        strict = next((i for i, (a, b) in enumerate(pairs) if b < a), None)
        case = 2
    else:
        raise PreconditionViolatedError(f"ℓ(s_βv) = {w.length} 与 ℓ(v) = {v.length} 相差不为1")

    return FregReport(case=case, v=v, w=w, beta=beta, reference=reference, reflected=reflected,
                      inequality_holds=holds, strict_index=strict, k=k,
                      ledger_lhs=lhs, ledger_rhs=rhs)


def freg_sweep(W: WeylGroup, P: ParabolicType, L: int) -> List[FregReport]:
    """所有可容许 (v, β)（ℓ(v) ≤ L）上两种情形的报告"""
    reports = []
    for u in W.min_coset_reps(P, L):
        for beta in W.inversions(u.inverse()):
            lower = W.reflection_of_root(beta) * u
            if lower.length != u.length - 1 or not W.in_quotient(lower, P):
                continue
            reports.append(freg_profile(u, beta, P))
            reports.append(freg_profile(lower, beta, P))
    return reports


def character_balanced(w1: WeylElement, w2: WeylElement, v: WeylElement,
                       P: ParabolicType) -> bool:
    """Σ_{inv(v)} β(x_j) = Σ_{inv(w1)} + Σ_{inv(w2)}，对每个 α_j ∉ Δ(P)"""
    def totals(w):
        inv = w.group.inversions(w)
        return [sum(beta.vector[j] for beta in inv) for j in P.complement]
    return all(a == b + c for a, b, c in zip(totals(v), totals(w1), totals(w2)))


def d_identity_holds(w1: WeylElement, w2: WeylElement, v: WeylElement, P: ParabolicType) -> bool:
    """d_i(v̇) = d^i(ẇ1) + d^i(ẇ2) 对 i = 0..稳定点"""
    grades_v = inversion_grades(v, P)
    grades_1 = inversion_grades(w1, P)
    grades_2 = inversion_grades(w2, P)
    top = max(grades_v + grades_1 + grades_2 + [0])
    return all(_count(grades_v, i) == _count(grades_1, i) + _count(grades_2, i)
               for i in range(top + 1))


class SchubertCalculator:
    """
    固定 (W, P, 长度界) 的局部化表与结构常数求解器

    ξ^w(v) 为单根 α_0..α_l 上的整系数多项式（sympy稀疏多项式环）。
    """

    def __init__(self, group: WeylGroup, parabolic: ParabolicType, length_bound: int):
        self.group = group
        self.parabolic = parabolic
        self.length_bound = length_bound
        self.logger = logging.getLogger(__name__)
        if not self.logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(config.log_format))
            self.logger.addHandler(handler)

        names = ",".join(f"a{i}" for i in range(group.rank))
        self.ring, *self.gens = ring(names, ZZ)
        self.reps = group.min_coset_reps(parabolic, length_bound)

        self._lock = threading.Lock()
        self._localizations: Dict[Tuple, PolyElement] = {}
        self._expansions: Dict[Tuple, EquivariantExpansion] = {}
        self._entries: Dict[Tuple, DeformedEntry] = {}

    def root_polynomial(self, vector: Sequence[int]) -> PolyElement:
        return sum((c * g for c, g in zip(vector, self.gens)), self.ring.zero)

    def reflect(self, i: int, poly: PolyElement) -> PolyElement:
        """s_i 作用：α_j ↦ α_j − a_ij α_i"""
        A = self.group.realization.gcm.matrix
        images = [(self.gens[j], self.gens[j] - A[i][j] * self.gens[i]) for j in range(self.group.rank)]
        return poly.compose(images)

    def act(self, w: WeylElement, poly: PolyElement) -> PolyElement:
        for i in reversed(w.word):
            poly = self.reflect(i, poly)
        return poly

    def _check_bound(self, *elements: WeylElement):
        for w in elements:
            if w.length > self.length_bound:
                raise LengthBoundExceededError(
                    f"ℓ({w}) = {w.length} 超过局部化表长度界 {self.length_bound}")

    def billey_localize(self, w: WeylElement, v: WeylElement) -> PolyElement:
        """
        ξ^w(v)：遍历 v 的约化字中等于 w 的约化子字，
        第 j 个字母贡献 r_j = s_{b_1}⋯s_{b_{j−1}}(α_{b_j})
        """
        self._check_bound(w, v)
        key = (w.word, v.word)
        with self._lock:
            cached_value = self._localizations.get(key)
        if cached_value is not None:
            return cached_value

        W = self.group
        states: Dict[Tuple[int, ...], Tuple[WeylElement, PolyElement]] = {w.word: (w, self.ring.one)}
        prefix = W.identity()
        word = v.word
        for position, letter in enumerate(word):
            remaining = len(word) - position
            r = self.root_polynomial(W.apply_to_root(prefix, [int(k == letter) for k in range(W.rank)]))
            updated: Dict[Tuple[int, ...], Tuple[WeylElement, PolyElement]] = {}
            for z, poly in states.values():
                if z.length <= remaining - 1:
                    self._accumulate(updated, z, poly)
                if W.is_left_descent(z, letter):
                    self._accumulate(updated, z.left(letter), poly * r)
            states = updated
            prefix = W.element(word[:position + 1])
        result = states.get((), (None, self.ring.zero))[1]
        with self._lock:
            self._localizations[key] = result
        return result

    @staticmethod
    def _accumulate(states, z: WeylElement, poly: PolyElement):
        if z.word in states:
            states[z.word] = (z, states[z.word][1] + poly)
        else:
            states[z.word] = (z, poly)

    def localize_by_recursion(self, w: WeylElement, v: WeylElement) -> PolyElement:
        """
        独立的nil-Hecke递推：v = s_i v'（ℓ(v) = ℓ(v') + 1）时
        ξ^w(v) = s_i ξ^w(v') + [s_i w < w] α_i · s_i ξ^{s_i w}(v')
        """
        self._check_bound(w, v)
        if v.is_identity:
            return self.ring.one if w.is_identity else self.ring.zero
        i = v.word[0]
        v_short = v.group.element(v.word[1:])
        result = self.reflect(i, self.localize_by_recursion(w, v_short))
        if self.group.is_left_descent(w, i):
            tail = self.reflect(i, self.localize_by_recursion(w.left(i), v_short))
            result += self.gens[i] * tail
        return result

    def expand_product(self, w1: WeylElement, w2: WeylElement) -> EquivariantExpansion:
        """
        由局部化的三角求解得到 ε^{w1}·ε^{w2} 的全部等变系数

        Raises:
            LengthBoundExceededError: ℓ(w1) + ℓ(w2) 超过长度界
            SchubertError: 三角求解中出现非整除
        """
        _require_quotient(self.parabolic, w1, w2)
        total = w1.length + w2.length
        if total > self.length_bound:
            raise LengthBoundExceededError(
                f"ℓ(w1) + ℓ(w2) = {total} 超过长度界 {self.length_bound}")
        key = (w1.word, w2.word)
        with self._lock:
            cached_value = self._expansions.get(key)
        if cached_value is not None:
            return cached_value

        W = self.group
        floor = max(w1.length, w2.length)
        candidates = [u for u in self.reps if floor <= u.length <= total
                      and W.bruhat_leq(w1, u) and W.bruhat_leq(w2, u)]
        coefficients: Dict[WeylElement, PolyElement] = {}
        for u in candidates:
            residual = self.billey_localize(w1, u) * self.billey_localize(w2, u)
            for earlier, c in coefficients.items():
                residual -= c * self.billey_localize(earlier, u)
            if not residual:
                continue
            try:
                coefficients[u] = residual.exquo(self.billey_localize(u, u))
            except ExactQuotientFailed as e:
                raise SchubertError(f"在点 {u} 处三角求解失败: {e}") from e

        expansion = EquivariantExpansion(w1, w2, self.parabolic, coefficients)
        with self._lock:
            self._expansions[key] = expansion
        return expansion

    def gkm_check(self, expansion: EquivariantExpansion) -> List[WeylElement]:
        """返回 Σ c_u ξ^u(x) ≠ ξ^{w1}(x)ξ^{w2}(x) 的局部化点 x（应为空）"""
        failures = []
        for x in self.reps:
            lhs = self.billey_localize(expansion.w1, x) * self.billey_localize(expansion.w2, x)
            rhs = self.ring.zero
            for u, c in expansion.coefficients.items():
                rhs += c * self.billey_localize(u, x)
            if lhs != rhs:
                failures.append(x)
        return failures

    def cup_coefficient(self, w1: WeylElement, w2: WeylElement, v: WeylElement) -> int:
        """n^v_{w1,w2}：等变系数 c_v 的常数项"""
        if v.length != w1.length + w2.length:
            raise LengthMismatchError(
                f"ℓ(v) = {v.length} ≠ ℓ(w1) + ℓ(w2) = {w1.length + w2.length}")
        _require_quotient(self.parabolic, v)
        self._check_bound(v)
        c = self.expand_product(w1, w2).coefficient(v)
        return 0 if c is None else int(c.const())

    def is_levi_movable(self, w1: WeylElement, w2: WeylElement, v: WeylElement) -> bool:
        """
        Raises:
            LengthMismatchError: ℓ(v) ≠ ℓ(w1) + ℓ(w2)
            ZeroCupProductError: cup积系数为0
        """
        cup = self.cup_coefficient(w1, w2, v)
        if cup == 0:
            raise ZeroCupProductError(f"n^{v}_{{{w1},{w2}}} = 0，可移动性无定义")
        return d_identity_holds(w1, w2, v, self.parabolic)

    def entry(self, w1: WeylElement, w2: WeylElement, v: WeylElement) -> DeformedEntry:
        key = (w1.word, w2.word, v.word)
        with self._lock:
            cached_value = self._entries.get(key)
        if cached_value is not None:
            return cached_value
        cup = self.cup_coefficient(w1, w2, v)
        balanced = character_balanced(w1, w2, v, self.parabolic)
        if cup == 0:
            movable, reason = False, REASON_ZERO_CUP
        else:
            movable = d_identity_holds(w1, w2, v, self.parabolic)
            reason = REASON_MOVABLE if movable else REASON_NOT_MOVABLE
        result = DeformedEntry(w1, w2, v, cup, movable, cup if movable else 0, reason, balanced)
        with self._lock:
            self._entries[key] = result
        return result

    def deformed_coefficient(self, w1: WeylElement, w2: WeylElement, v: WeylElement) -> int:
        return self.entry(w1, w2, v).deformed

    def deformed_product(self, w1: WeylElement, w2: WeylElement) -> Dict[WeylElement, int]:
        """ε^{w1} ⊙₀ ε^{w2} 的非零系数"""
        total = w1.length + w2.length
        result = {}
        for v in self.reps.of_length(total):
            d = self.deformed_coefficient(w1, w2, v)
            if d:
                result[v] = d
        return result

    def deformed_table(self, max_length: Optional[int] = None) -> List[DeformedEntry]:
        """所有 ℓ(v) = ℓ(w1) + ℓ(w2) ≤ max_length 的三元组"""
        bound = self.length_bound if max_length is None else min(max_length, self.length_bound)
        entries = []
        for w1 in self.reps:
            for w2 in self.reps:
                total = w1.length + w2.length
                if total > bound:
                    continue
                for v in self.reps.of_length(total):
                    entries.append(self.entry(w1, w2, v))
        self.logger.debug(f"形变系数表: {len(entries)} 项 (ℓ ≤ {bound})")
        return entries


@cached(cache=LRUCache(maxsize=config.schubert_cache_size), lock=threading.Lock())
def schubert_calculator(group: WeylGroup, parabolic: ParabolicType, length_bound: int) -> SchubertCalculator:
    return SchubertCalculator(group, parabolic, length_bound)


def _calculator(P: ParabolicType, *elements: WeylElement) -> SchubertCalculator:
    needed = max(w.length for w in elements)
    return schubert_calculator(elements[0].group, P, max(needed, config.default_max_length))


def billey_localize(w: WeylElement, v: WeylElement, P: Optional[ParabolicType] = None) -> PolyElement:
    P = P or ParabolicType.borel(w.group.rank)
    return _calculator(P, w, v).billey_localize(w, v)


def cup_coefficient(w1: WeylElement, w2: WeylElement, v: WeylElement, P: ParabolicType) -> int:
    return _calculator(P, w1, w2, v).cup_coefficient(w1, w2, v)


def is_levi_movable(w1: WeylElement, w2: WeylElement, v: WeylElement, P: ParabolicType) -> bool:
    return _calculator(P, w1, w2, v).is_levi_movable(w1, w2, v)


def deformed_coefficient(w1: WeylElement, w2: WeylElement, v: WeylElement, P: ParabolicType) -> int:
    if v.length != w1.length + w2.length:
        raise LengthMismatchError(
            f"ℓ(v) = {v.length} ≠ ℓ(w1) + ℓ(w2) = {w1.length + w2.length}")
    return _calculator(P, w1, w2, v).deformed_coefficient(w1, w2, v)
