"""
广义Cartan矩阵与实现模块
构建可对称化GCM的实现(h, h*, 单根/单余根, 整形式)、实根、ρ、基本权以及对偶余权 x_i
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from cachetools import LRUCache, cached

from .config import config
from .linalg import (
    Vector, dot, format_vector, inverse, is_positive_definite,
    is_positive_semidefinite, left_inverse, mat_vec, matrix_rank, nullspace,
    parse_rational, primitive_vector, solve_pivot,
)

logger = logging.getLogger(__name__)


class CartanError(Exception):
    """Cartan矩阵相关异常"""
    pass


class NotAGCMError(CartanError):
    """矩阵不满足广义Cartan矩阵的条件"""
    pass


class NotSymmetrizableError(CartanError):
    """不存在正的对称化对角阵"""
    pass


class RealizationMismatchError(CartanError):
    """权/余权与实现的维数不一致"""
    pass


class GCMFileError(CartanError):
    """GCM文件读取或解析失败"""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        location = ""
        if path:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
                if column is not None:
                    location += f":{column}"
            location += ": "
        super().__init__(f"{location}{message}")


class AlgebraType(Enum):
    """代数类型枚举"""
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"
    MIXED = "mixed"


@dataclass(frozen=True)
class GCM:
    """广义Cartan矩阵（附对称化因子）"""
    size: int
    matrix: Tuple[Tuple[int, ...], ...]
    symmetrizer: Tuple[int, ...]
    labels: Tuple[str, ...] = ()

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]],
                    labels: Optional[Sequence[str]] = None) -> 'GCM':
        """
        校验并构建GCM

        Args:
            matrix: 整数方阵
            labels: 可选的节点标签

        Raises:
            NotAGCMError: 对角元不为2、符号错误或零模式不对称
            NotSymmetrizableError: 不可对称化
        """
        rows = _validate_gcm(matrix)
        symmetrizer = _solve_symmetrizer(rows)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(rows):
                raise NotAGCMError(f"labels长度 {len(labels)} 与矩阵阶数 {len(rows)} 不一致")
        return cls(size=len(rows), matrix=rows, symmetrizer=symmetrizer, labels=labels or ())

    def entry(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def symmetrized(self) -> List[List[int]]:
        """D·A"""
        return [[self.symmetrizer[i] * self.matrix[i][j] for j in range(self.size)]
                for i in range(self.size)]

    def components(self) -> List[List[int]]:
        """Dynkin图的连通分支"""
        seen = set()
        result = []
        for start in range(self.size):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(self.size):
                    if j not in seen and self.matrix[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            result.append(sorted(comp))
        return result

    @property
    def indecomposable(self) -> bool:
        return len(self.components()) == 1

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"α{i}"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"size": self.size, "matrix": [list(r) for r in self.matrix]}
        if self.labels:
            data["labels"] = list(self.labels)
        return data


def _validate_gcm(matrix: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(matrix, (list, tuple)) or len(matrix) == 0:
        raise NotAGCMError("矩阵必须是非空的方阵")
    n = len(matrix)
    rows = []
    for i, row in enumerate(matrix):
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise NotAGCMError(f"第 {i} 行长度不是 {n}，矩阵不是方阵")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise NotAGCMError(f"a[{i}][{j}] = {x!r} 不是整数")
        rows.append(tuple(int(x) for x in row))
    for i in range(n):
        if rows[i][i] != 2:
            raise NotAGCMError(f"a[{i}][{i}] = {rows[i][i]}，对角元必须为2")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if rows[i][j] > 0:
                raise NotAGCMError(f"a[{i}][{j}] = {rows[i][j]} > 0，非对角元必须非正")
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise NotAGCMError(
                    f"a[{i}][{j}] = {rows[i][j]} 与 a[{j}][{i}] = {rows[j][i]} 的零模式不对称")
    return tuple(rows)


def _solve_symmetrizer(rows: Tuple[Tuple[int, ...], ...]) -> Tuple[int, ...]:
    """沿Dynkin图传播 d_i a_ij = d_j a_ji，每个分支缩放为本原正整数"""
    n = len(rows)
    d: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack, component = [start], [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or rows[i][j] == 0:
                    continue
                value = d[i] * rows[i][j] / rows[j][i]
                if d[j] is None:
                    d[j] = value
                    stack.append(j)
                    component.append(j)
                elif d[j] != value:
                    raise NotSymmetrizableError(
                        f"节点 {i} 与 {j} 之间的对称化条件 d_i a_ij = d_j a_ji 无法满足")
        scaled = primitive_vector([d[i] for i in component])
        for i, value in zip(component, scaled):
            d[i] = value
    for i in range(n):
        for j in range(n):
            if d[i] * rows[i][j] != d[j] * rows[j][i]:
                raise NotSymmetrizableError(f"D·A 在 ({i},{j}) 处不对称")
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class Weight:
    """h* 中的权：坐标为在 h 的基（余根 + 补基）上的取值"""
    coords: Tuple[Fraction, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    @property
    def coroot_values(self) -> Tuple[Fraction, ...]:
        return self.coords[:self.rank]

    @property
    def complementary_values(self) -> Tuple[Fraction, ...]:
        return self.coords[self.rank:]

    @property
    def is_dominant(self) -> bool:
        return all(x >= 0 for x in self.coroot_values)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coords)

    @property
    def is_w_invariant(self) -> bool:
        return all(x == 0 for x in self.coroot_values)

    def _check(self, other: 'Weight'):
        if len(self.coords) != len(other.coords) or self.rank != other.rank:
            raise RealizationMismatchError(
                f"权维数不一致: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: 'Weight') -> 'Weight':
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)), self.rank)

    def __sub__(self, other: 'Weight') -> 'Weight':
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)), self.rank)

    def __neg__(self) -> 'Weight':
        return Weight(tuple(-a for a in self.coords), self.rank)

    def scale(self, factor: Union[int, Fraction]) -> 'Weight':
        return Weight(tuple(a * factor for a in self.coords), self.rank)

    def to_json(self) -> List[Union[int, str]]:
        return format_vector(self.coords)


@dataclass(frozen=True)
class Coweight:
    """h 中的余权：坐标为在 h 的基（余根 + 补基）下的系数"""
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    def evaluate(self, weight: Weight) -> Fraction:
        """λ(x)"""
        if len(weight.coords) != len(self.coords):
            raise RealizationMismatchError(
                f"权与余权维数不一致: {len(weight.coords)} vs {len(self.coords)}")
        return dot(weight.coords, self.coords)

    def __add__(self, other: 'Coweight') -> 'Coweight':
        if len(self.coords) != len(other.coords):
            raise RealizationMismatchError("余权维数不一致")
        return Coweight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: 'Coweight') -> 'Coweight':
        return self + other.scale(-1)

    def scale(self, factor: Union[int, Fraction]) -> 'Coweight':
        return Coweight(tuple(a * factor for a in self.coords))

    def to_json(self) -> List[Union[int, str]]:
        return format_vector(self.coords)


@dataclass(frozen=True)
class RealRoot:
    """实根：单根坐标、余根坐标，以及 β = u(α_index) 的共轭字"""
    vector: Tuple[int, ...]
    coroot: Tuple[int, ...]
    word: Tuple[int, ...]
    index: int

    @property
    def height(self) -> int:
        return sum(self.vector)

    @property
    def positive(self) -> bool:
        return self.height > 0

    @property
    def is_simple(self) -> bool:
        return self.positive and sum(abs(x) for x in self.vector) == 1

    def __neg__(self) -> 'RealRoot':
        # -u(α_i) = u s_i (α_i)
        return RealRoot(tuple(-x for x in self.vector), tuple(-x for x in self.coroot),
                        self.word + (self.index,), self.index)

    def to_dict(self) -> Dict[str, Any]:
        return {"root": list(self.vector), "coroot": list(self.coroot)}


@dataclass(frozen=True)
class RealRootSet:
    """高度有界的实根集（关于取负封闭）"""
    height_bound: int
    roots: Tuple[RealRoot, ...]

    def __iter__(self) -> Iterator[RealRoot]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def positive(self) -> List[RealRoot]:
        return [r for r in self.roots if r.positive]

    def vectors(self) -> set:
        return {r.vector for r in self.roots}

    def get(self, vector: Sequence[int]) -> Optional[RealRoot]:
        key = tuple(int(x) for x in vector)
        for root in self.roots:
            if root.vector == key:
                return root
        return None

    def __contains__(self, vector) -> bool:
        return self.get(vector) is not None


@dataclass(frozen=True)
class Realization:
    """GCM的实现；相等性仅由GCM决定"""
    gcm: GCM
    dim_h: int = field(compare=False)
    pairing: Tuple[Tuple[int, ...], ...] = field(compare=False, repr=False)
    simple_roots: Tuple[Weight, ...] = field(compare=False, repr=False)
    simple_coroots: Tuple[Coweight, ...] = field(compare=False, repr=False)
    complementary_basis: Tuple[Coweight, ...] = field(compare=False, repr=False)
    central_subspace: Tuple[Coweight, ...] = field(compare=False, repr=False)
    coweights: Tuple[Coweight, ...] = field(compare=False, repr=False)
    form: Tuple[Tuple[Fraction, ...], ...] = field(compare=False, repr=False)
    root_solver: Tuple[Tuple[Fraction, ...], ...] = field(compare=False, repr=False)

    @property
    def rank(self) -> int:
        """单根个数 l+1"""
        return self.gcm.size

    @property
    def corank(self) -> int:
        return self.dim_h - self.gcm.size

    def weight(self, coords: Sequence[Union[int, Fraction, str]]) -> Weight:
        values = [parse_rational(x) for x in coords]
        if len(values) == self.rank and self.corank > 0:
            values = values + [Fraction(0)] * self.corank
        if len(values) != self.dim_h:
            raise RealizationMismatchError(
                f"权坐标个数 {len(values)} 与 dim h = {self.dim_h} 不一致")
        return Weight(tuple(values), self.rank)

    def zero_weight(self) -> Weight:
        return Weight((Fraction(0),) * self.dim_h, self.rank)

    def root_weight(self, vector: Sequence[Union[int, Fraction]]) -> Weight:
        """Σ β_j α_j"""
        if len(vector) != self.rank:
            raise RealizationMismatchError(f"根坐标个数 {len(vector)} 与秩 {self.rank} 不一致")
        coords = tuple(
            sum((Fraction(self.pairing[a][j]) * vector[j] for j in range(self.rank)), Fraction(0))
            for a in range(self.dim_h))
        return Weight(coords, self.rank)

    def root_coordinates(self, weight: Weight) -> Optional[Vector]:
        """若 λ ∈ Span_ℚ(Δ)，返回其单根坐标，否则返回None"""
        self.check_weight(weight)
        candidate = mat_vec(self.root_solver, weight.coords)
        if self.root_weight(candidate).coords != weight.coords:
            return None
        return candidate

    def check_weight(self, weight: Weight):
        if len(weight.coords) != self.dim_h or weight.rank != self.rank:
            raise RealizationMismatchError(
                f"权维数 {len(weight.coords)} 与实现 dim h = {self.dim_h} 不一致")

    def inner(self, first: Weight, second: Weight) -> Fraction:
        """由对称化诱导的 h* 上不变双线性型"""
        self.check_weight(first)
        self.check_weight(second)
        return dot(first.coords, mat_vec(self.form, second.coords))

    def root_inner(self, u: Sequence[int], v: Sequence[int]) -> int:
        """单根坐标下的 (u|v) = Σ u_i v_j d_i a_ij"""
        d, a = self.gcm.symmetrizer, self.gcm.matrix
        return sum(u[i] * v[j] * d[i] * a[i][j] for i in range(self.rank) for j in range(self.rank))

    def coroot_pairing(self, i: int, vector: Sequence[int]) -> int:
        """⟨α_i∨, β⟩，β 为单根坐标"""
        return sum(self.gcm.matrix[i][j] * vector[j] for j in range(self.rank))

    def root_pairing(self, i: int, coroot: Sequence[int]) -> int:
        """α_i(β∨)，β∨ 为单余根坐标"""
        return sum(coroot[j] * self.gcm.matrix[j][i] for j in range(self.rank))

    def summary(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "dim_h": self.dim_h,
            "symmetrizer": list(self.gcm.symmetrizer),
            "complementary_values": [list(r) for r in self.pairing[self.rank:]],
            "central_subspace": [c.to_json() for c in self.central_subspace],
        }


@cached(cache=LRUCache(maxsize=config.realization_cache_size), lock=threading.Lock())
def build_realization(A: GCM) -> Realization:
    """
    构建GCM的实现

    h 的基取为单余根 α_i∨ 加补基 d_r，补基满足 α_j(d_r) ∈ {0,1}：
    依次把单位行 e_j 加入配对矩阵直到其秩为 l+1。

    Args:
        A: 已校验的GCM

    Returns:
        Realization: dim h = 2(l+1) − rank(A)
    """
    n = A.size
    pairing: List[List[int]] = [list(row) for row in A.matrix]
    current_rank = matrix_rank(pairing)
    for j in range(n):
        if current_rank == n:
            break
        candidate = [int(k == j) for k in range(n)]
        extended_rank = matrix_rank(pairing + [candidate])
        if extended_rank > current_rank:
            pairing.append(candidate)
            current_rank = extended_rank
    dim_h = len(pairing)
    if dim_h != 2 * n - matrix_rank([list(r) for r in A.matrix]):
        raise CartanError(f"实现维数 {dim_h} 与 2(l+1) − rank(A) 不一致")

    simple_roots = tuple(
        Weight(tuple(Fraction(pairing[a][j]) for a in range(dim_h)), n) for j in range(n))
    unit = lambda a: Coweight(tuple(Fraction(int(b == a)) for b in range(dim_h)))  # noqa: E731
    simple_coroots = tuple(unit(i) for i in range(n))
    complementary = tuple(unit(a) for a in range(n, dim_h))

    # 行 j：α_j(x) = Σ_a pairing[a][j] x_a
    root_rows = [[pairing[a][j] for a in range(dim_h)] for j in range(n)]
    central = tuple(Coweight(v) for v in nullspace(root_rows, dim_h))
    coweights = []
    for i in range(n):
        solution = solve_pivot(root_rows, [int(j == i) for j in range(n)])
        if solution is None:
            raise CartanError(f"对偶余权 x_{i} 无解")
        coweights.append(Coweight(solution))

    d = A.symmetrizer
    gram = [[Fraction(0)] * dim_h for _ in range(dim_h)]
    for i in range(n):
        for j in range(n):
            gram[i][j] = Fraction(A.matrix[i][j], d[j])
        for a in range(n, dim_h):
            gram[i][a] = gram[a][i] = Fraction(pairing[a][i], d[i])
    form = inverse(gram)
    solver = left_inverse(pairing)

    realization = Realization(
        gcm=A,
        dim_h=dim_h,
        pairing=tuple(tuple(r) for r in pairing),
        simple_roots=simple_roots,
        simple_coroots=simple_coroots,
        complementary_basis=complementary,
        central_subspace=central,
        coweights=tuple(coweights),
        form=tuple(tuple(r) for r in form),
        root_solver=tuple(tuple(r) for r in solver),
    )
    logger.debug(f"实现构建完成: rank={n}, dim h={dim_h}")
    return realization


def dual_coweights(R: Realization) -> List[Coweight]:
    """⟨α_j, x_i⟩ = δ_i^j 的规范解（补基上的坐标取主元解）"""
    return list(R.coweights)


def rho(R: Realization) -> Weight:
    return Weight((Fraction(1),) * R.rank + (Fraction(0),) * R.corank, R.rank)


def fundamental_weights(R: Realization) -> List[Weight]:
    return [Weight(tuple(Fraction(int(a == i)) for a in range(R.dim_h)), R.rank)
            for i in range(R.rank)]


def real_roots_up_to_height(R: Realization, H: int) -> RealRootSet:
    """
    单根在单反射下的轨道闭包，保留 |height| ≤ H 的实根

    只沿升高高度的反射扩展：每个非单正实根都可由单根经高度递增的反射链得到。
    """
    if H < 1:
        raise CartanError(f"高度上界必须 ≥ 1，收到 {H}")
    n = R.rank
    positives: Dict[Tuple[int, ...], RealRoot] = {}
    frontier = []
    for i in range(n):
        e = tuple(int(j == i) for j in range(n))
        root = RealRoot(e, e, (), i)
        positives[e] = root
        frontier.append(root)
    while frontier:
        next_frontier = []
        for root in frontier:
            for i in range(n):
                p = R.coroot_pairing(i, root.vector)
                if p >= 0:
                    continue
                vector = list(root.vector)
                vector[i] -= p
                if sum(vector) > H:
                    continue
                key = tuple(vector)
                if key in positives:
                    continue
                coroot = list(root.coroot)
                coroot[i] -= R.root_pairing(i, root.coroot)
                new_root = RealRoot(key, tuple(coroot), (i,) + root.word, root.index)
                positives[key] = new_root
                next_frontier.append(new_root)
        frontier = next_frontier
    ordered = sorted(positives.values(), key=lambda r: (r.height, r.vector))
    negatives = sorted((-r for r in ordered), key=lambda r: (r.height, r.vector))
    return RealRootSet(height_bound=H, roots=tuple(negatives + ordered))


def _classify_component(A: GCM, component: List[int]) -> AlgebraType:
    sym = A.symmetrized()
    block = [[sym[i][j] for j in component] for i in component]
    if is_positive_definite(block):
        return AlgebraType.FINITE
    if is_positive_semidefinite(block) and len(component) - matrix_rank(block) == 1:
        return AlgebraType.AFFINE
    return AlgebraType.INDEFINITE


def classify_type(A: GCM) -> AlgebraType:
    """有限/仿射/不定三分法；可分解情形各分支均为有限型时仍为有限型，否则记为mixed"""
    types = [_classify_component(A, comp) for comp in A.components()]
    if len(types) == 1:
        return types[0]
    if all(t is AlgebraType.FINITE for t in types):
        return AlgebraType.FINITE
    return AlgebraType.MIXED


def null_root(A: GCM) -> Tuple[int, ...]:
    """仿射型的零根 δ（本原正整数向量）"""
    if classify_type(A) is not AlgebraType.AFFINE:
        raise CartanError("只有仿射型才有零根 δ")
    kernel = nullspace([list(r) for r in A.matrix], A.size)
    delta = kernel[0]
    if any(x < 0 for x in delta):
        delta = tuple(-x for x in delta)
    return tuple(int(x) for x in delta)


def is_untwisted_affine(A: GCM) -> bool:
    """
    判断是否为非扭仿射型：存在标记为1的节点 i，使 θ = δ − α_i 是有限部分的长实根
    """
    if classify_type(A) is not AlgebraType.AFFINE:
        return False
    delta = null_root(A)
    R = build_realization(A)
    roots = real_roots_up_to_height(R, max(1, sum(delta)))
    for i, mark in enumerate(delta):
        if mark != 1:
            continue
        theta = tuple(x - int(j == i) for j, x in enumerate(delta))
        if theta not in roots:
            continue
        longest = max(2 * A.symmetrizer[j] for j in range(A.size) if j != i)
        if R.root_inner(theta, theta) == longest:
            return True
    return False


def gcm_from_dict(data: Any, path: Optional[str] = None) -> GCM:
    """从 {"size": n, "matrix": [[...]], "labels": [...]} 构建GCM"""
    if not isinstance(data, dict):
        raise GCMFileError("顶层必须是JSON对象", path)
    if "matrix" not in data:
        raise GCMFileError("缺少字段 'matrix'", path)
    matrix = data["matrix"]
    size = data.get("size", len(matrix) if isinstance(matrix, list) else None)
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        raise GCMFileError(f"字段 'size' 必须是正整数，收到 {size!r}", path)
    if not isinstance(matrix, list) or len(matrix) != size:
        raise GCMFileError(f"字段 'matrix' 必须是 {size} 行的列表", path)
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != size):
        raise GCMFileError(f"字段 'labels' 必须是长度为 {size} 的字符串列表", path)
    return GCM.from_matrix(matrix, labels)


def load_gcm(path: Union[str, Path]) -> GCM:
    """
    读取GCM JSON文件

    Raises:
        GCMFileError: 文件不存在或JSON解析失败（带行列号）
        NotAGCMError: 矩阵不满足GCM条件
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GCMFileError(f"无法读取文件: {e}", str(path)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GCMFileError(f"JSON解析失败: {e.msg}", str(path), e.lineno, e.colno) from e
    A = gcm_from_dict(data, str(path))
    logger.info(f"📋 已加载GCM: {path.name} (size={A.size})")
    if not A.indecomposable:
        logger.warning(f"⚠️ GCM {path.name} 可分解，分支: {A.components()}")
    return A
