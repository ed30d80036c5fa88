"""
Weyl群模块
以规范约化字表示Weyl群元素，提供在 h*、h 与根格上的精确作用、长度、反转集、
Bruhat序、极小陪集代表元 W^P 以及边界集 Δ±(w)
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from cachetools import LRUCache, cached

from .cartan import (
    AlgebraType, Coweight, RealRoot, Realization, RealizationMismatchError, Weight,
    classify_type,
)
from .config import config
from .linalg import primitive_vector

logger = logging.getLogger(__name__)


class WeylError(Exception):
    """Weyl群相关异常"""
    pass


class NotMinimalRepError(WeylError):
    """元素不在 W^P 中"""
    pass


class NotRealRootError(WeylError):
    """向量不是实根"""
    pass


class ParabolicError(WeylError):
    """抛物子群描述非法"""
    pass


@dataclass(frozen=True)
class ParabolicType:
    """标准抛物子群，由Levi单根 Δ(P) 描述"""
    rank: int
    levi: FrozenSet[int]

    @classmethod
    def from_levi(cls, rank: int, levi: Iterable[int]) -> 'ParabolicType':
        levi = frozenset(int(i) for i in levi)
        bad = sorted(i for i in levi if not 0 <= i < rank)
        if bad:
            raise ParabolicError(f"Levi单根下标 {bad} 超出范围 0..{rank - 1}")
        return cls(rank=rank, levi=levi)

    @classmethod
    def borel(cls, rank: int) -> 'ParabolicType':
        return cls(rank=rank, levi=frozenset())

    @classmethod
    def maximal(cls, rank: int, j: int) -> 'ParabolicType':
        """Δ∖Δ(P) = {α_j}"""
        if not 0 <= j < rank:
            raise ParabolicError(f"极大抛物下标 {j} 超出范围 0..{rank - 1}")
        return cls(rank=rank, levi=frozenset(i for i in range(rank) if i != j))

    @classmethod
    def standard(cls, rank: int) -> List['ParabolicType']:
        """全部真标准抛物 Δ(P) ⊊ Δ，Borel在前，按Levi大小再按下标排序"""
        return [cls(rank=rank, levi=frozenset(levi))
                for size in range(rank) for levi in combinations(range(rank), size)]

    @classmethod
    def parse(cls, description: Optional[str], rank: int) -> 'ParabolicType':
        """
        解析 "i,j,..."（Levi单根）或 "maximal:j"；空串/None 表示Borel
        """
        if description is None or description.strip() in ("", "borel", "B"):
            return cls.borel(rank)
        text = description.strip()
        if text.startswith("maximal:"):
            try:
                return cls.maximal(rank, int(text.split(":", 1)[1]))
            except ValueError as e:
                raise ParabolicError(f"无法解析抛物描述: {description!r}") from e
        try:
            indices = [int(x) for x in text.split(",") if x.strip() != ""]
        except ValueError as e:
            raise ParabolicError(f"无法解析抛物描述: {description!r}") from e
        return cls.from_levi(rank, indices)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.rank) if i not in self.levi)

    @property
    def is_maximal(self) -> bool:
        return len(self.complement) == 1

    @property
    def is_borel(self) -> bool:
        return not self.levi

    def to_dict(self) -> Dict[str, Any]:
        return {"levi": sorted(self.levi), "complement": list(self.complement)}


@dataclass(frozen=True, eq=False)
class WeylElement:
    """Weyl群元素：规范（字典序最小）约化字及其作用矩阵"""
    group: 'WeylGroup' = field(repr=False)
    word: Tuple[int, ...]
    root_matrix: np.ndarray = field(repr=False)
    inverse_root_matrix: np.ndarray = field(repr=False)
    weight_matrix: np.ndarray = field(repr=False)
    coweight_matrix: np.ndarray = field(repr=False)
    coroot_matrix: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def key(self) -> bytes:
        return self.weight_matrix.tobytes()

    @property
    def is_identity(self) -> bool:
        return not self.word

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.group.realization == other.group.realization and self.word == other.word

    def __hash__(self) -> int:
        return hash(self.word)

    def __mul__(self, other: 'WeylElement') -> 'WeylElement':
        return self.group.element(self.word + other.word)

    def inverse(self) -> 'WeylElement':
        return self.group.element(tuple(reversed(self.word)))

    def left(self, i: int) -> 'WeylElement':
        """s_i · w"""
        return self.group.element((i,) + self.word)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.length, self.word)

    def to_json(self) -> List[int]:
        return list(self.word)

    def __str__(self) -> str:
        return "e" if not self.word else "".join(f"s{i}" for i in self.word)


@dataclass(frozen=True)
class CosetRepSet:
    """W^P 中长度不超过界的全部元素"""
    parabolic: ParabolicType
    length_bound: int
    reps: Tuple[WeylElement, ...]

    def __iter__(self):
        return iter(self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    def __contains__(self, w: WeylElement) -> bool:
        return w in set(self.reps)

    def of_length(self, length: int) -> List[WeylElement]:
        return [w for w in self.reps if w.length == length]


def _apply(matrix: np.ndarray, vector: Sequence) -> Tuple:
    size = matrix.shape[1]
    return tuple(sum((int(matrix[a, b]) * vector[b] for b in range(size)), 0)
                 for a in range(matrix.shape[0]))


def _is_negative(vector: Sequence[int]) -> bool:
    return any(x < 0 for x in vector)


class WeylGroup:
    """实现上的Weyl群：生成元矩阵、元素规范化与Bruhat备忘表"""

    def __init__(self, realization: Realization):
        self.realization = realization
        self.rank = realization.rank
        self.logger = logging.getLogger(__name__)

        n, dim = realization.rank, realization.dim_h
        A = np.array(realization.gcm.matrix, dtype=np.int64)
        pairing = np.array(realization.pairing, dtype=np.int64)

        self._root_gens, self._weight_gens, self._coweight_gens, self._coroot_gens = [], [], [], []
        for i in range(n):
            s_root = np.eye(n, dtype=np.int64)
            s_root[i, :] -= A[i, :]
            s_coroot = np.eye(n, dtype=np.int64)
            s_coroot[i, :] -= A[:, i]
            s_weight = np.eye(dim, dtype=np.int64)
            s_weight[:, i] -= pairing[:, i]
            s_coweight = np.eye(dim, dtype=np.int64)
            s_coweight[i, :] -= pairing[:, i]
            self._root_gens.append(s_root)
            self._coroot_gens.append(s_coroot)
            self._weight_gens.append(s_weight)
            self._coweight_gens.append(s_coweight)

        self._bruhat_cache: LRUCache = LRUCache(maxsize=config.bruhat_cache_size)
        self._bruhat_lock = threading.Lock()
        self._identity = self._build(())

    def _product(self, gens: List[np.ndarray], word: Sequence[int]) -> np.ndarray:
        size = gens[0].shape[0]
        result = np.eye(size, dtype=np.int64)
        for i in word:
            result = result @ gens[i]
        return result

    def _build(self, word: Tuple[int, ...]) -> WeylElement:
        return WeylElement(
            group=self,
            word=word,
            root_matrix=self._product(self._root_gens, word),
            inverse_root_matrix=self._product(self._root_gens, tuple(reversed(word))),
            weight_matrix=self._product(self._weight_gens, word),
            coweight_matrix=self._product(self._coweight_gens, word),
            coroot_matrix=self._product(self._coroot_gens, word),
        )

    def canonical_word(self, word: Sequence[int]) -> Tuple[int, ...]:
        """
        字典序最小的约化字：反复剥离最小的左下降 i（w⁻¹(α_i) < 0）
        """
        for i in word:
            if not 0 <= i < self.rank:
                raise WeylError(f"单反射下标 {i} 超出范围 0..{self.rank - 1}")
        inverse = self._product(self._root_gens, tuple(reversed(tuple(word))))
        result = []
        while True:
            descent = next((i for i in range(self.rank) if _is_negative(inverse[:, i])), None)
            if descent is None:
                break
            result.append(descent)
            inverse = inverse @ self._root_gens[descent]
        return tuple(result)

    def element(self, word: Sequence[int]) -> WeylElement:
        return self._build(self.canonical_word(word))

    def identity(self) -> WeylElement:
        return self._identity

    def simple(self, i: int) -> WeylElement:
        return self.element((i,))

    # 作用
    def apply_to_root(self, w: WeylElement, vector: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(x) for x in _apply(w.root_matrix, vector))

    def apply_to_coroot(self, w: WeylElement, vector: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(x) for x in _apply(w.coroot_matrix, vector))

    def is_left_descent(self, w: WeylElement, i: int) -> bool:
        """ℓ(s_i w) < ℓ(w) ⇔ w⁻¹(α_i) < 0"""
        return _is_negative(w.inverse_root_matrix[:, i])

    def is_right_descent(self, w: WeylElement, i: int) -> bool:
        """ℓ(w s_i) < ℓ(w) ⇔ w(α_i) < 0"""
        return _is_negative(w.root_matrix[:, i])

    def in_quotient(self, w: WeylElement, P: ParabolicType) -> bool:
        """w ∈ W^P ⇔ w(α_j) > 0 对所有 α_j ∈ Δ(P)"""
        return not any(self.is_right_descent(w, j) for j in P.levi)

    # 实根
    def real_root(self, vector: Sequence[int]) -> RealRoot:
        """
        判定向量是否为实根，并给出 β = u(α_k) 的共轭字与余根

        Raises:
            NotRealRootError: 不是实根
        """
        beta = [int(x) for x in vector]
        if len(beta) != self.rank:
            raise RealizationMismatchError(f"根坐标个数 {len(beta)} 与秩 {self.rank} 不一致")
        sign = 1
        if all(x <= 0 for x in beta):
            sign, beta = -1, [-x for x in beta]
        if _is_negative(beta) or sum(beta) == 0:
            raise NotRealRootError(f"{tuple(vector)} 不是实根")
        word = []
        while sum(beta) > 1:
            step = None
            for i in range(self.rank):
                p = self.realization.coroot_pairing(i, beta)
                if p > 0:
                    step = (i, p)
                    break
            if step is None:
                raise NotRealRootError(f"{tuple(vector)} 不是实根")
            i, p = step
            beta[i] -= p
            if _is_negative(beta) or sum(beta) == 0:
                raise NotRealRootError(f"{tuple(vector)} 不是实根")
            word.append(i)
        index = beta.index(1)
        u = self.element(word)
        coroot = self.apply_to_coroot(u, tuple(int(k == index) for k in range(self.rank)))
        root = RealRoot(tuple(int(x) for x in vector) if sign > 0 else tuple(-int(x) for x in vector),
                        coroot, tuple(word), index)
        return root if sign > 0 else -root

    def reflection_of_root(self, root: Union[RealRoot, Sequence[int]]) -> WeylElement:
        """s_β = u s_i u⁻¹，其中 β = u(α_i)"""
        if not isinstance(root, RealRoot):
            root = self.real_root(root)
        word = tuple(root.word)
        return self.element(word + (root.index,) + tuple(reversed(word)))

    def reflection_root(self, r: WeylElement) -> Optional[RealRoot]:
        """若 r 是反射 s_β，返回正实根 β，否则返回None"""
        if r.length % 2 == 0:
            return None
        diff = r.root_matrix - np.eye(self.rank, dtype=np.int64)
        for col in range(self.rank):
            column = [int(x) for x in diff[:, col]]
            if any(column):
                candidate = tuple(int(x) for x in primitive_vector(column))
                if _is_negative(candidate):
                    candidate = tuple(-x for x in candidate)
                try:
                    root = self.real_root(candidate)
                except NotRealRootError:
                    return None
                return root if self.reflection_of_root(root) == r else None
        return None

    def inversions(self, w: WeylElement) -> List[RealRoot]:
        """Φ⁺ ∩ w⁻¹Φ⁻，按字的位置顺序：β_p = s_{i_k}⋯s_{i_{p+1}}(α_{i_p})"""
        result = []
        for p, index in enumerate(w.word):
            u = tuple(reversed(w.word[p + 1:]))
            u_element = self._build(u)
            e = tuple(int(k == index) for k in range(self.rank))
            result.append(RealRoot(self.apply_to_root(u_element, e),
                                   self.apply_to_coroot(u_element, e), u, index))
        return result

    # Bruhat序
    def bruhat_leq(self, u: WeylElement, w: WeylElement) -> bool:
        """子字判据的递归形式（提升性质），带备忘"""
        if u.length > w.length:
            return False
        if u.length == w.length:
            return u == w
        if u.is_identity:
            return True
        key = (u.word, w.word)
        with self._bruhat_lock:
            if key in self._bruhat_cache:
                return self._bruhat_cache[key]
        s = w.word[0]
        w_short = self.element(w.word[1:])
        if self.is_left_descent(u, s):
            result = self.bruhat_leq(u.left(s), w_short)
        else:
            result = self.bruhat_leq(u, w_short)
        with self._bruhat_lock:
            self._bruhat_cache[key] = result
        return result

    # 枚举
    def min_coset_reps(self, P: ParabolicType, L: int) -> CosetRepSet:
        """按长度的BFS（左乘单反射），按作用去重"""
        if L < 0:
            raise WeylError(f"长度界必须 ≥ 0，收到 {L}")
        if P.rank != self.rank:
            raise ParabolicError(f"抛物子群秩 {P.rank} 与Weyl群秩 {self.rank} 不一致")
        seen = {self._identity.key}
        level = [self._identity]
        reps = [self._identity]
        for _ in range(L):
            next_level = []
            for w in level:
                for i in range(self.rank):
                    if self.is_left_descent(w, i):
                        continue
                    candidate = w.left(i)
                    if candidate.key in seen or not self.in_quotient(candidate, P):
                        continue
                    seen.add(candidate.key)
                    next_level.append(candidate)
            if not next_level:
                break
            next_level.sort(key=WeylElement.sort_key)
            reps.extend(next_level)
            level = next_level
        return CosetRepSet(parabolic=P, length_bound=L, reps=tuple(reps))

    def elements_up_to_length(self, L: int) -> List[WeylElement]:
        return list(self.min_coset_reps(ParabolicType.borel(self.rank), L).reps)

    def longest_element(self) -> WeylElement:
        """有限型的最长元"""
        if classify_type(self.realization.gcm) is not AlgebraType.FINITE:
            raise WeylError("只有有限型Weyl群才有最长元")
        w = self._identity
        while True:
            ascent = next((i for i in range(self.rank) if not self.is_left_descent(w, i)), None)
            if ascent is None:
                return w
            w = w.left(ascent)

    def delta_minus(self, w: WeylElement) -> List[int]:
        """Δ⁻(w) = {α : ℓ(s_α w) = ℓ(w) − 1}"""
        return [i for i in range(self.rank) if self.is_left_descent(w, i)]

    def delta_plus(self, w: WeylElement, P: ParabolicType) -> List[int]:
        """Δ⁺(w) = {α : ℓ(s_α w) = ℓ(w) + 1 且 s_α w ∈ W^P}"""
        if not self.in_quotient(w, P):
            raise NotMinimalRepError(f"{w} 不在 W^P 中 (Δ(P) = {sorted(P.levi)})")
        return [i for i in range(self.rank)
                if not self.is_left_descent(w, i) and self.in_quotient(w.left(i), P)]


@cached(cache=LRUCache(maxsize=config.weyl_cache_size), lock=threading.Lock())
def weyl_group(R: Realization) -> WeylGroup:
    logger.debug(f"构建Weyl群: rank={R.rank}")
    return WeylGroup(R)


def act_on_weight(w: WeylElement, weight: Weight) -> Weight:
    """s_i(λ) = λ − ⟨α_i∨,λ⟩α_i，沿字复合"""
    w.group.realization.check_weight(weight)
    return Weight(tuple(Fraction(x) for x in _apply(w.weight_matrix, weight.coords)), weight.rank)


def act_on_coweight(w: WeylElement, coweight: Coweight) -> Coweight:
    """s_i(x) = x − α_i(x)α_i∨，沿字复合"""
    if len(coweight.coords) != w.group.realization.dim_h:
        raise RealizationMismatchError(
            f"余权维数 {len(coweight.coords)} 与实现 dim h = {w.group.realization.dim_h} 不一致")
    return Coweight(tuple(Fraction(v) for v in _apply(w.coweight_matrix, coweight.coords)))


def inversions(w: WeylElement) -> List[RealRoot]:
    return w.group.inversions(w)


def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    return w.group.bruhat_leq(u, w)


def min_coset_reps(W: WeylGroup, P: ParabolicType, L: int) -> CosetRepSet:
    return W.min_coset_reps(P, L)


def delta_minus(w: WeylElement) -> List[int]:
    return w.group.delta_minus(w)


def delta_plus(w: WeylElement, P: ParabolicType) -> List[int]:
    return w.group.delta_plus(w, P)


def reflection_of_root(W: WeylGroup, root: Union[RealRoot, Sequence[int]]) -> WeylElement:
    return W.reflection_of_root(root)
