"""
张量积重数模块
Freudenthal递推计算权重数（有限型与非扭仿射型），Racah–Speiser/Klimyk符号和计算
张量积重数，并据此对张量锥 Γ(g) 做有界成员判定
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from cachetools import LRUCache, cached

from .cartan import (
    AlgebraType, Realization, Weight, classify_type, is_untwisted_affine, null_root,
    real_roots_up_to_height,
)
from .config import config
from .linalg import denominator_lcm
from .weyl import act_on_weight, weyl_group

logger = logging.getLogger(__name__)


class TensorError(Exception):
    """张量积相关异常"""
    pass


class UnsupportedTypeError(TensorError):
    """仅支持有限型与非扭仿射型"""
    pass


class NotDominantError(TensorError):
    """权不是支配（整）权"""
    pass


class DepthTooSmallError(TensorError):
    """深度窗口不足以确定结果"""
    pass


class MembershipStatus(Enum):
    """成员判定状态枚举"""
    MEMBER = "member"
    NOT_UP_TO = "not_up_to"
    LATTICE_OBSTRUCTION = "lattice_obstruction"


@dataclass
class MultiplicityQuery:
    """L(Nμ) 在 L(Nλ₁)⊗L(Nλ₂) 中的重数查询"""
    lambda1: Weight
    lambda2: Weight
    mu: Weight
    scale: int = 1
    depth: Optional[int] = None


@dataclass
class MembershipVerdict:
    """有界成员判定结果"""
    status: MembershipStatus
    n_max: int
    base_scale: int
    scale: Optional[int] = None
    multiplicity: int = 0
    depth_caveat: bool = False
    attempts: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def is_member(self) -> bool:
        return self.status is MembershipStatus.MEMBER

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "scale": self.scale,
            "n_max": self.n_max,
            "base_scale": self.base_scale,
            "multiplicity": self.multiplicity,
            "depth_caveat": self.depth_caveat,
            "attempts": self.attempts,
        }


def imaginary_multiplicity(R: Realization) -> int:
    """非扭仿射型中 nδ 的重数 l"""
    return R.rank - 1


def require_supported(R: Realization) -> AlgebraType:
    kind = classify_type(R.gcm)
    if kind is AlgebraType.FINITE:
        return kind
    if kind is AlgebraType.AFFINE and is_untwisted_affine(R.gcm):
        return kind
    raise UnsupportedTypeError(f"不支持的代数类型: {kind.value}（仅支持有限型与非扭仿射型）")


def _integral_coroot_values(weight: Weight) -> List[int]:
    values = weight.coroot_values
    if any(x.denominator != 1 for x in values):
        raise NotDominantError(f"权 {weight.to_json()} 不是整权")
    if any(x < 0 for x in values):
        raise NotDominantError(f"权 {weight.to_json()} 不是支配权")
    return [int(x) for x in values]


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def positive_roots_with_multiplicity(R: Realization, height: int) -> List[Tuple[Tuple[int, ...], int]]:
    """高度 ≤ height 的正根（实根重数1，仿射型虚根 nδ 重数 l）"""
    if height < 1:
        return []
    roots = [(r.vector, 1) for r in real_roots_up_to_height(R, height).positive()]
    if classify_type(R.gcm) is AlgebraType.AFFINE:
        delta = null_root(R.gcm)
        n = 1
        while n * sum(delta) <= height:
            roots.append((tuple(n * x for x in delta), imaginary_multiplicity(R)))
            n += 1
    return roots


class WeightMultTable:
    """
    L(λ) 的权重数表

    以 k = λ − μ 的单根坐标为键，只存支配权；其余权通过支配共轭查表。
    """

    def __init__(self, realization: Realization, highest: Weight, depth: int):
        self.realization = realization
        self.highest = highest
        self.depth = depth
        self.logger = logging.getLogger(__name__)

        require_supported(realization)
        self._lam = _integral_coroot_values(highest)
        self._A = realization.gcm.matrix
        self._d = realization.gcm.symmetrizer
        self._n = realization.rank
        self._roots = positive_roots_with_multiplicity(realization, depth)
        self._dominant: Dict[Tuple[int, ...], int] = {}
        self._build()

    def _coroot_values(self, k: Sequence[int]) -> List[int]:
        return [self._lam[i] - sum(self._A[i][j] * k[j] for j in range(self._n)) for i in range(self._n)]

    def reduce(self, k: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """支配共轭；若某步出现负分量则不是权，返回None"""
        k = list(k)
        if any(x < 0 for x in k):
            return None
        while True:
            c = self._coroot_values(k)
            i = next((i for i in range(self._n) if c[i] < 0), None)
            if i is None:
                return tuple(k)
            k[i] += c[i]
            if k[i] < 0:
                return None

    def lookup(self, k: Sequence[int]) -> Optional[int]:
        """k 处的重数；超出深度窗口时返回None"""
        reduced = self.reduce(k)
        if reduced is None:
            return 0
        if sum(reduced) > self.depth:
            return None
        return self._dominant.get(reduced, 0)

    def _pair_lambda(self, alpha: Sequence[int]) -> int:
        """(λ|α)"""
        return sum(alpha[i] * self._d[i] * self._lam[i] for i in range(self._n))

    def _pair_roots(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * v[j] * self._d[i] * self._A[i][j]
                   for i in range(self._n) for j in range(self._n) if u[i] and v[j])

    def _freudenthal(self, k: Tuple[int, ...]) -> int:
        if not any(k):
            return 1
        # (λ+ρ|λ+ρ) − (μ+ρ|μ+ρ) = 2(λ+ρ|κ) − (κ|κ)
        coef = 2 * sum(k[i] * self._d[i] * (self._lam[i] + 1) for i in range(self._n)) \
            - self._pair_roots(k, k)
        if coef <= 0:
            return 0
        total = 0
        for alpha, mult in self._roots:
            mu_alpha = self._pair_lambda(alpha) - self._pair_roots(k, alpha)
            alpha_norm = self._pair_roots(alpha, alpha)
            j = 1
            while True:
                shifted = tuple(k[i] - j * alpha[i] for i in range(self._n))
                if any(x < 0 for x in shifted):
                    break
                m = self.lookup(shifted)
                if m:
                    total += mult * (mu_alpha + j * alpha_norm) * m
                j += 1
        value, remainder = divmod(2 * total, coef)
        if remainder:
            raise TensorError(f"Freudenthal递推在 k = {k} 处得到非整数 {2 * total}/{coef}")
        return value

    def _build(self):
        for height in range(self.depth + 1):
            for k in _compositions(height, self._n):
                if any(c < 0 for c in self._coroot_values(k)):
                    continue
                m = self._freudenthal(k)
                if m:
                    self._dominant[k] = m
        self.logger.debug(f"权重数表完成: λ = {self.highest.to_json()}, 深度 {self.depth}, "
                          f"{len(self._dominant)} 个支配权")

    def weight_of(self, k: Sequence[int]) -> Weight:
        return self.highest - self.realization.root_weight(list(k))

    def multiplicity(self, weight: Weight) -> int:
        """
        m_λ(μ)

        Raises:
            DepthTooSmallError: μ 的支配共轭超出深度窗口
        """
        coords = self.realization.root_coordinates(self.highest - weight)
        if coords is None or any(x.denominator != 1 for x in coords):
            return 0
        m = self.lookup([int(x) for x in coords])
        if m is None:
            raise DepthTooSmallError(f"权 {weight.to_json()} 超出深度窗口 {self.depth}")
        return m

    def entries(self) -> Dict[Tuple[int, ...], int]:
        """深度窗口内全部（含非支配）权的重数"""
        result = {}
        for height in range(self.depth + 1):
            for k in _compositions(height, self._n):
                m = self.lookup(k)
                if m:
                    result[k] = m
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "highest": self.highest.to_json(),
            "depth": self.depth,
            "weights": [{"k": list(k), "weight": self.weight_of(k).to_json(), "multiplicity": m}
                        for k, m in sorted(self.entries().items(), key=lambda kv: (sum(kv[0]), kv[0]))],
        }


def full_depth(R: Realization, weight: Weight) -> int:
    """有限型中 λ − w₀λ 的高度"""
    if classify_type(R.gcm) is not AlgebraType.FINITE:
        raise UnsupportedTypeError("只有有限型的不可约模有有限深度")
    w0 = weyl_group(R).longest_element()
    coords = R.root_coordinates(weight - act_on_weight(w0, weight))
    return int(sum(coords))


@cached(cache=LRUCache(maxsize=config.multiplicity_cache_size), lock=threading.Lock())
def weight_multiplicities(R: Realization, weight: Weight, depth: Optional[int] = None) -> WeightMultTable:
    """
    Raises:
        UnsupportedTypeError: 扭仿射或不定型
        NotDominantError: λ 不是支配整权
    """
    require_supported(R)
    R.check_weight(weight)
    _integral_coroot_values(weight)
    if depth is None:
        depth = full_depth(R, weight) if classify_type(R.gcm) is AlgebraType.FINITE \
            else config.default_depth
    return WeightMultTable(R, weight, depth)


def _klimyk(R: Realization, table: WeightMultTable, lam2: Sequence[int], r: Sequence[int]) -> int:
    """
    Σ_w ε(w) m_{λ1}(μ + ρ − w(λ2+ρ))：沿 γ = λ2+ρ 的Weyl轨道做BFS，
    w(γ) = γ − Σ diff_i α_i，只保留 diff ≤ r 的元素
    """
    n = R.rank
    A = R.gcm.matrix
    gamma = [x + 1 for x in lam2]
    zero = (0,) * n
    seen = {zero}
    frontier = [zero]
    level = 0
    total = 0
    while frontier:
        sign = -1 if level % 2 else 1
        next_frontier = []
        for diff in frontier:
            k = [r[i] - diff[i] for i in range(n)]
            m = table.lookup(k)
            if m is None:
                raise DepthTooSmallError(
                    f"需要深度 {sum(table.reduce(k))} 的权重数，但深度窗口为 {table.depth}")
            total += sign * m
            c = [gamma[i] - sum(A[i][j] * diff[j] for j in range(n)) for i in range(n)]
            for i in range(n):
                if c[i] <= 0:
                    continue
                candidate = tuple(diff[j] + (c[i] if j == i else 0) for j in range(n))
                if candidate[i] > r[i] or candidate in seen:
                    continue
                seen.add(candidate)
                next_frontier.append(candidate)
        frontier = next_frontier
        level += 1
    return total


def tensor_multiplicity(R: Realization, query: MultiplicityQuery) -> int:
    """
    dim Hom(L(Nμ), L(Nλ₁)⊗L(Nλ₂))

    Raises:
        UnsupportedTypeError: 不支持的代数类型
        NotDominantError: 输入不是支配整权
        DepthTooSmallError: 深度窗口不足
    """
    require_supported(R)
    N = query.scale
    lam1, lam2, mu = (query.lambda1.scale(N), query.lambda2.scale(N), query.mu.scale(N))
    for weight in (lam1, lam2, mu):
        R.check_weight(weight)
        _integral_coroot_values(weight)
    coords = R.root_coordinates(lam1 + lam2 - mu)
    if coords is None or any(x.denominator != 1 for x in coords):
        return 0
    r = [int(x) for x in coords]
    if any(x < 0 for x in r):
        return 0
    depth = query.depth
    if depth is None:
        depth = full_depth(R, lam1) if classify_type(R.gcm) is AlgebraType.FINITE else sum(r)
    table = weight_multiplicities(R, lam1, depth)
    return _klimyk(R, table, [int(x) for x in lam2.coroot_values], r)


def weyl_dimension(R: Realization, weight: Weight) -> int:
    """Weyl维数公式 Π_{α>0} (λ+ρ|α)/(ρ|α)（有限型）"""
    if classify_type(R.gcm) is not AlgebraType.FINITE:
        raise UnsupportedTypeError("Weyl维数公式只适用于有限型")
    lam = _integral_coroot_values(weight)
    d = R.gcm.symmetrizer
    top = full_depth(R, R.weight([1] * R.rank))
    result = Fraction(1)
    for alpha, _ in positive_roots_with_multiplicity(R, max(top, 1)):
        numerator = sum(alpha[i] * d[i] * (lam[i] + 1) for i in range(R.rank))
        denominator = sum(alpha[i] * d[i] for i in range(R.rank))
        result *= Fraction(numerator, denominator)
    return int(result)


def decompose_tensor_product(R: Realization, lambda1: Weight, lambda2: Weight) -> Dict[Tuple, int]:
    """
    有限型的Racah–Speiser分解：L(λ1)⊗L(λ2) = ⊕ L(μ)^{n_μ}

    Returns:
        以 μ 的余根取值为键的重数字典
    """
    if classify_type(R.gcm) is not AlgebraType.FINITE:
        raise UnsupportedTypeError("完整分解只适用于有限型")
    table = weight_multiplicities(R, lambda1)
    lam1 = _integral_coroot_values(lambda1)
    lam2 = _integral_coroot_values(lambda2)
    A = R.gcm.matrix
    n = R.rank
    result: Dict[Tuple, int] = {}
    for k, m in table.entries().items():
        xi = [lam1[i] - sum(A[i][j] * k[j] for j in range(n)) + lam2[i] + 1 for i in range(n)]
        sign = 1
        while True:
            i = next((i for i in range(n) if xi[i] < 0), None)
            if i is None:
                break
            c = xi[i]
            xi = [xi[j] - c * A[j][i] for j in range(n)]
            sign = -sign
        if any(x == 0 for x in xi):
            continue
        key = tuple(x - 1 for x in xi)
        result[key] = result.get(key, 0) + sign * m
    return {key: value for key, value in sorted(result.items()) if value}


def gamma_member(R: Realization, lambda1: Weight, lambda2: Weight, mu: Weight,
                 n_max: int = None, depth: Optional[int] = None) -> MembershipVerdict:
    """
    有界判定 ∃N ≤ N_max：L(Nμ) ⊂ L(Nλ₁)⊗L(Nλ₂)

    先取清除分母的最小 N0，再依次尝试 N = m·N0（m = 1..N_max）。
    """
    require_supported(R)
    n_max = config.default_nmax if n_max is None else n_max
    for weight in (lambda1, lambda2, mu):
        R.check_weight(weight)
        if not weight.is_dominant:
            raise NotDominantError(f"权 {weight.to_json()} 不是支配权")
    base = denominator_lcm(lambda1.coords + lambda2.coords + mu.coords)
    coords = R.root_coordinates(lambda1 + lambda2 - mu)
    if coords is None:
        return MembershipVerdict(MembershipStatus.LATTICE_OBSTRUCTION, n_max, base)
    if any(x < 0 for x in coords):
        return MembershipVerdict(MembershipStatus.NOT_UP_TO, n_max, base)

    verdict = MembershipVerdict(MembershipStatus.NOT_UP_TO, n_max, base)
    for m in range(1, n_max + 1):
        N = m * base
        if any((x * N).denominator != 1 for x in coords):
            verdict.attempts.append({"scale": N, "result": "lattice"})
            continue
        try:
            value = tensor_multiplicity(R, MultiplicityQuery(lambda1, lambda2, mu, N, depth))
        except DepthTooSmallError as e:
            logger.debug(f"⚠️ N = {N}: {e}")
            verdict.depth_caveat = True
            verdict.attempts.append({"scale": N, "result": "depth"})
            continue
        verdict.attempts.append({"scale": N, "result": value})
        if value >= 1:
            verdict.status = MembershipStatus.MEMBER
            verdict.scale = N
            verdict.multiplicity = value
            return verdict
    return verdict
