"""
自检流程模块
把验收检查组织为可并发执行的套件（asyncio.Semaphore + asyncio.to_thread），
按套件顺序汇总为确定性报告
"""

import asyncio
import logging
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .cartan import Realization, build_realization, load_gcm, rho
from .cone import (
    FaceVerdict, WeightTriple, build_face, enumerate_inequalities, equality_rank_on_E,
    eval_inequality, face_dimension, irredundancy_certificate, lattice_condition,
)
from .config import config
from .reports import compare_golden, face_report, inequalities_report
from .schubert import freg_sweep, length_identity, schubert_calculator
from .tensor import gamma_member
from .weyl import ParabolicType, weyl_group

# 每个套件报告中保留的违例条数
MAX_VIOLATIONS = 10


class SuiteStage(Enum):
    """套件阶段枚举"""
    LOADING = "loading"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class SuiteStatus(Enum):
    """套件状态枚举"""
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class SuiteOutcome:
    """套件函数的返回值"""
    status: SuiteStatus
    checked: int
    violations: List[Any] = field(default_factory=list)
    message: Optional[str] = None


@dataclass
class SuiteResult:
    """单个套件的执行结果"""
    name: str
    stage: SuiteStage = SuiteStage.LOADING
    status: SuiteStatus = SuiteStatus.PENDING
    checked: int = 0
    violations: List[Any] = field(default_factory=list)
    message: Optional[str] = None

    # 时间统计（只写日志，不进入报告）
    start_time: Optional[float] = None
    end_time: Optional[float] = None

    @property
    def total_time(self) -> float:
        if self.end_time and self.start_time:
            return self.end_time - self.start_time
        return 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "stage": self.stage.value,
            "status": self.status.value,
            "checked": self.checked,
            "violations": self.violations[:MAX_VIOLATIONS],
            "violation_count": len(self.violations),
            "message": self.message,
        }


class SelftestPipelineError(Exception):
    """自检流程异常"""
    pass


class SelftestPipeline:
    """自检流程（并发执行各套件）"""

    SUITES = (
        "sl2_cone",
        "a2_cross_validation",
        "freg_sweep",
        "length_identity",
        "gkm_soundness",
        "finite_faces",
        "affine_face_probe",
        "witness_triples",
        "affine_necessity",
        "golden_files",
    )

    def __init__(self,
                 gcm_dir: Optional[Path] = None,
                 golden_dir: Optional[Path] = None,
                 max_concurrent: Optional[int] = None,
                 seed: int = 0,
                 suites: Optional[Sequence[str]] = None,
                 affine_budget: Optional[int] = None):
        """
        初始化自检流程

        Args:
            gcm_dir: 内置GCM目录
            golden_dir: golden输出目录
            max_concurrent: 最大并发套件数
            seed: 抽样随机种子
            suites: 要运行的套件名（默认全部）
            affine_budget: 仿射面探测的候选上限
        """
        self.gcm_dir = Path(gcm_dir) if gcm_dir else config.gcm_dir
        self.golden_dir = Path(golden_dir) if golden_dir else config.golden_dir
        self.max_concurrent = max_concurrent or config.selftest_max_concurrent
        self.seed = seed
        self.affine_budget = affine_budget or config.affine_face_candidate_budget
        selected = list(suites) if suites else list(self.SUITES)
        unknown = [s for s in selected if s not in self.SUITES]
        if unknown:
            raise SelftestPipelineError(f"未知的自检套件: {unknown}")
        self.suites = [s for s in self.SUITES if s in selected]

        # 并发控制信号量
        self.semaphore = asyncio.Semaphore(self.max_concurrent)

        # 设置日志
        self.logger = logging.getLogger(__name__)
        if not self.logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter(config.log_format)
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)
            self.logger.setLevel(logging.INFO)

    def realization(self, name: str) -> Realization:
        return build_realization(load_gcm(self.gcm_dir / f"{name}.json"))

    # 套件

    def _suite_sl2_cone(self) -> SuiteOutcome:
        R = self.realization("a1")
        system = enumerate_inequalities(R, config.default_max_length)
        violations = []
        if len(system) != 3:
            violations.append({"expected_count": 3, "count": len(system)})
        for I in system:
            cert = irredundancy_certificate(I, system.inequalities, R)
            if not (cert.irredundant and cert.verified):
                violations.append(cert.to_dict())
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, len(system), violations)

    def _suite_a2_cross_validation(self) -> SuiteOutcome:
        R = self.realization("a2")
        system = enumerate_inequalities(R, config.default_max_length)
        if not system.complete:
            return SuiteOutcome(SuiteStatus.FAIL, 0, [], "A2 不等式组不完整")
        h = config.selftest_cross_height
        weights = [R.weight([a, b]) for a in range(h + 1) for b in range(h + 1 - a)]
        violations, checked = [], 0
        for lam1 in weights:
            for lam2 in weights:
                for mu in weights:
                    t = WeightTriple(lam1, lam2, mu)
                    if not lattice_condition(R, t):
                        continue
                    checked += 1
                    screen = all(eval_inequality(I, t) >= 0 for I in system)
                    verdict = gamma_member(R, lam1, lam2, mu, config.default_nmax)
                    if screen != verdict.is_member:
                        violations.append({"triple": t.to_json(), "screen": screen,
                                           "gamma": verdict.status.value})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _sweep_algebras(self) -> List[Tuple[str, Realization]]:
        return [(name, self.realization(name)) for name in ("a2", "b2", "g2", "affine_a1")]

    def _suite_freg_sweep(self) -> SuiteOutcome:
        violations, checked = [], 0
        for name, R in self._sweep_algebras():
            W = weyl_group(R)
            for P in ParabolicType.standard(R.rank):
                for report in freg_sweep(W, P, config.selftest_max_length):
                    checked += 1
                    if not report.ok:
                        violations.append({"algebra": name, "levi": sorted(P.levi),
                                           **report.to_dict()})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _suite_length_identity(self) -> SuiteOutcome:
        violations, checked = [], 0
        for name, R in self._sweep_algebras():
            W = weyl_group(R)
            for j in range(R.rank):
                P = ParabolicType.maximal(R.rank, j)
                for v in W.min_coset_reps(P, config.selftest_max_length):
                    checked += 1
                    lhs, rhs = length_identity(v, P)
                    if lhs != rhs:
                        violations.append({"algebra": name, "parabolic": j, "v": v.to_json(),
                                           "lhs": lhs, "rhs": rhs})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _suite_gkm_soundness(self) -> SuiteOutcome:
        bound = config.default_max_length
        violations, checked = [], 0
        for name in ("a2", "b2"):
            W = weyl_group(self.realization(name))
            P = ParabolicType.borel(W.rank)
            calc = schubert_calculator(W, P, bound)
            reps = list(calc.reps)
            products = {}
            for w1 in reps:
                for w2 in reps:
                    if w1.length + w2.length > bound:
                        continue
                    checked += 1
                    failures = calc.gkm_check(calc.expand_product(w1, w2))
                    if failures:
                        violations.append({"algebra": name, "kind": "localization",
                                           "w1": w1.to_json(), "w2": w2.to_json(),
                                           "points": [x.to_json() for x in failures]})
                    products[(w1, w2)] = calc.deformed_product(w1, w2)
            for (w1, w2), value in products.items():
                if value != products[(w2, w1)]:
                    violations.append({"algebra": name, "kind": "commutativity",
                                       "w1": w1.to_json(), "w2": w2.to_json()})
            for a in reps:
                for b in reps:
                    for c in reps:
                        if a.length + b.length + c.length > bound:
                            continue
                        checked += 1
                        left: Dict[Any, int] = {}
                        for u, k in products[(a, b)].items():
                            for z, m in products[(u, c)].items():
                                left[z] = left.get(z, 0) + k * m
                        right: Dict[Any, int] = {}
                        for u, k in products[(b, c)].items():
                            for z, m in products[(a, u)].items():
                                right[z] = right.get(z, 0) + k * m
                        if {z: x for z, x in left.items() if x} != {z: x for z, x in right.items() if x}:
                            violations.append({"algebra": name, "kind": "associativity",
                                               "triple": [a.to_json(), b.to_json(), c.to_json()]})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _suite_finite_faces(self) -> SuiteOutcome:
        violations, checked, starved = [], 0, []
        for name in ("a2", "b2"):
            R = self.realization(name)
            system = enumerate_inequalities(R, config.default_max_length)
            for I in system:
                checked += 1
                P = ParabolicType.maximal(R.rank, I.parabolic_index)
                F = build_face(R, P, I.w1, I.w2, I.v)
                eq_rank = equality_rank_on_E(F)
                report = face_dimension(F, height=config.default_height, n_max=config.default_nmax)
                record = {"algebra": name, **I.to_dict(), "equality_rank": eq_rank,
                          "rank_found": report.rank_found, "verdict": report.verdict.value}
                if eq_rank != 1 or report.verdict is FaceVerdict.FAIL:
                    violations.append(record)
                elif report.verdict is FaceVerdict.INCONCLUSIVE:
                    if name == "a2":
                        violations.append(record)
                    else:
                        starved.append(record)
        message = f"B2 预算内未完成 {len(starved)} 个面" if starved else None
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations, message)

    def _suite_affine_face_probe(self) -> SuiteOutcome:
        R = self.realization("affine_a1")
        system = enumerate_inequalities(R, config.selftest_affine_max_length)
        target = next((I for I in system if I.v.length >= 1), None)
        if target is None:
            return SuiteOutcome(SuiteStatus.FAIL, 0, [], "没有 ℓ(v) ≥ 1 的系数1三元组")
        P = ParabolicType.maximal(R.rank, target.parabolic_index)
        F = build_face(R, P, target.w1, target.w2, target.v)
        report = face_dimension(F, height=config.selftest_affine_height, n_max=config.default_nmax,
                                depth=config.default_depth, max_candidates=self.affine_budget)
        record = {**target.to_dict(), **report.to_dict()}
        if report.verdict is FaceVerdict.PASS:
            return SuiteOutcome(SuiteStatus.PASS, 1, [], f"rank = d = {report.d_expected}")
        if report.verdict is FaceVerdict.INCONCLUSIVE:
            return SuiteOutcome(SuiteStatus.INCONCLUSIVE, 1, [record],
                                f"预算耗尽: rank {report.rank_found} < d = {report.d_expected}")
        return SuiteOutcome(SuiteStatus.FAIL, 1, [record])

    def _suite_witness_triples(self) -> SuiteOutcome:
        rng = random.Random(self.seed)
        violations, checked = [], 0
        for name in ("a2", "affine_a1"):
            R = self.realization(name)
            triples = []
            for _ in range(config.selftest_sample_count):
                lam = R.weight([rng.randint(0, 3) for _ in range(R.rank)])
                mu = R.weight([rng.randint(0, 3) for _ in range(R.rank)])
                triples.append(WeightTriple(lam, mu, lam + mu))
            r = rho(R)
            triples += [WeightTriple(r, r, r + r - alpha) for alpha in R.simple_roots]
            for t in triples:
                checked += 1
                verdict = gamma_member(R, t.lambda1, t.lambda2, t.mu, 1, config.default_depth)
                if not (verdict.is_member and verdict.scale == 1):
                    violations.append({"algebra": name, "triple": t.to_json(), **verdict.to_dict()})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _suite_affine_necessity(self) -> SuiteOutcome:
        R = self.realization("affine_a1")
        system = enumerate_inequalities(R, config.selftest_affine_max_length)
        h = config.selftest_necessity_height
        grid = [(a, b) for a in range(h + 1) for b in range(h + 1)]
        violations, checked = [], 0
        for c1 in grid:
            for c2 in grid:
                lam1, lam2 = R.weight(list(c1)), R.weight(list(c2))
                for beta in grid:
                    mu = lam1 + lam2 - R.root_weight(beta)
                    t = WeightTriple(lam1, lam2, mu)
                    if not mu.is_dominant or t.has_w_invariant_weight:
                        continue
                    verdict = gamma_member(R, lam1, lam2, mu, 1, config.default_depth)
                    if not verdict.is_member:
                        continue
                    checked += 1
                    broken = [I.to_dict() for I in system if eval_inequality(I, t) < 0]
                    if broken:
                        violations.append({"triple": t.to_json(), "violated": broken})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, checked, violations)

    def _suite_golden_files(self) -> SuiteOutcome:
        a1, a2 = self.realization("a1"), self.realization("a2")
        W = weyl_group(a1)
        s, e = W.simple(0), W.identity()
        face, _ = face_report(a1, ParabolicType.borel(1), s, e, s, config.default_height,
                              config.default_nmax, None)
        payloads = {
            "a1_inequalities.json": inequalities_report(a1, config.default_max_length),
            "a2_inequalities.json": inequalities_report(a2, config.default_max_length),
            "a1_face.json": face,
        }
        violations = []
        for filename, payload in payloads.items():
            ok, diff = compare_golden(payload, self.golden_dir / filename)
            if not ok:
                violations.append({"file": filename, "diff": diff})
        status = SuiteStatus.FAIL if violations else SuiteStatus.PASS
        return SuiteOutcome(status, len(payloads), violations)

    # 执行

    def _runner(self, name: str) -> Callable[[], SuiteOutcome]:
        return getattr(self, f"_suite_{name}")

    async def run_suite(self, name: str) -> SuiteResult:
        """带并发控制的单套件执行"""
        async with self.semaphore:
            result = SuiteResult(name=name, start_time=time.time())
            self.logger.info(f"🚀 开始自检套件: {name}")
            result.stage = SuiteStage.RUNNING
            result.status = SuiteStatus.IN_PROGRESS
            try:
                outcome = await asyncio.to_thread(self._runner(name))
                result.status = outcome.status
                result.checked = outcome.checked
                result.violations = outcome.violations
                result.message = outcome.message
                result.stage = SuiteStage.COMPLETED
            except Exception as e:
                result.stage = SuiteStage.FAILED
                result.status = SuiteStatus.FAIL
                result.message = f"{type(e).__name__}: {e}"
                self.logger.error(f"❌ 套件 {name} 异常: {e}")
            result.end_time = time.time()
            icon = {"PASS": "✅", "FAIL": "❌"}.get(result.status.value, "⚠️")
            self.logger.info(f"{icon} {name}: {result.status.value} "
                             f"({result.checked} 项, {result.total_time:.2f}s)")
            return result

    async def run(self) -> List[SuiteResult]:
        """并发执行所选套件，结果按套件顺序返回"""
        self.logger.info(f"🚀 开始自检: {len(self.suites)} 个套件，最大并发数: {self.max_concurrent}")
        tasks = [self.run_suite(name) for name in self.suites]
        return list(await asyncio.gather(*tasks))

    def generate_report(self, results: List[SuiteResult]) -> Dict[str, Any]:
        """
        生成自检报告

        Returns:
            Dict: 报告数据（不含计时，保证确定性）
        """
        counts = {status: sum(1 for r in results if r.status is status)
                  for status in (SuiteStatus.PASS, SuiteStatus.FAIL, SuiteStatus.INCONCLUSIVE)}
        if counts[SuiteStatus.FAIL]:
            overall = SuiteStatus.FAIL
        elif counts[SuiteStatus.INCONCLUSIVE]:
            overall = SuiteStatus.INCONCLUSIVE
        else:
            overall = SuiteStatus.PASS
        return {
            "command": "selftest",
            "seed": self.seed,
            "overall": overall.value,
            "summary": {
                "total": len(results),
                "pass": counts[SuiteStatus.PASS],
                "fail": counts[SuiteStatus.FAIL],
                "inconclusive": counts[SuiteStatus.INCONCLUSIVE],
            },
            "suites": [r.to_dict() for r in results],
        }


async def run_selftest(seed: int = 0, suites: Optional[Sequence[str]] = None,
                       **kwargs) -> Dict[str, Any]:
    """便捷函数：运行自检并返回报告"""
    pipeline = SelftestPipeline(seed=seed, suites=suites, **kwargs)
    results = await pipeline.run()
    return pipeline.generate_report(results)
