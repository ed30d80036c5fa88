"""
报告生成模块
把各计算流程的结果组装为确定性的JSON报告与表格文本，并与golden文件做结构比较
"""

import difflib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .cartan import (
    GCM, AlgebraType, Realization, classify_type, is_untwisted_affine, null_root, rho,
)
from .cone import (
    FaceVerdict, WeightTriple, build_face, classify_boundary, enumerate_inequalities,
    eval_inequality, face_dimension, irredundancy_certificate, lattice_condition,
    restcisom_hypothesis_check,
)
from .linalg import format_rational
from .tensor import gamma_member
from .weyl import ParabolicType, WeylElement

logger = logging.getLogger(__name__)

# 退出码
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


def dump_json(payload: Dict[str, Any]) -> str:
    """确定性的JSON文本"""
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def algebra_report(A: GCM, R: Realization) -> Dict[str, Any]:
    kind = classify_type(A)
    report = {
        "command": "algebra",
        "gcm": A.to_dict(),
        "type": kind.value,
        "rank": R.rank,
        "dim_h": R.dim_h,
        "dim_E": 2 * R.dim_h + R.rank,
        "symmetrizer": list(A.symmetrizer),
        "rho": rho(R).to_json(),
        "coweights": [x.to_json() for x in R.coweights],
        "realization": R.summary(),
        "untwisted_affine": is_untwisted_affine(A),
    }
    if kind is AlgebraType.AFFINE:
        report["null_root"] = list(null_root(A))
    return report


def inequalities_report(R: Realization, max_length: int) -> Dict[str, Any]:
    system = enumerate_inequalities(R, max_length)
    report = {"command": "inequalities", "type": classify_type(R.gcm).value, "max_length": max_length}
    report.update(system.to_dict())
    return report


def member_report(R: Realization, t: WeightTriple, max_length: int, n_max: int,
                  depth: Optional[int]) -> Tuple[Dict[str, Any], int]:
    """
    格条件、不等式筛查与有界成员判定，并报告两种筛查是否一致

    Returns:
        (报告, 退出码)：一致为0；完整不等式组下不一致为1；否则为2
    """
    lattice = lattice_condition(R, t)
    system = enumerate_inequalities(R, max_length)
    violated = []
    for I in system:
        value = eval_inequality(I, t)
        if value < 0:
            violated.append({**I.to_dict(), "value": format_rational(value)})
    screen = lattice and not violated
    verdict = gamma_member(R, t.lambda1, t.lambda2, t.mu, n_max, depth)
    agreement = screen == verdict.is_member
    report = {
        "command": "member",
        "triple": t.to_json(),
        "lattice_condition": lattice,
        "inequalities_checked": len(system),
        "inequalities_complete": system.complete,
        "violated": violated,
        "screen_member": screen,
        "gamma": verdict.to_dict(),
        "agreement": agreement,
    }
    if agreement:
        code = EXIT_PASS
    elif system.complete and not verdict.depth_caveat:
        code = EXIT_FAIL
    else:
        code = EXIT_INCONCLUSIVE
    return report, code


def face_report(R: Realization, P: ParabolicType, w1: WeylElement, w2: WeylElement, v: WeylElement,
                height: int, n_max: int, depth: Optional[int],
                budget: Optional[int] = None) -> Tuple[Dict[str, Any], int]:
    F = build_face(R, P, w1, w2, v)
    boundary = classify_boundary(F)
    result = face_dimension(F, height=height, n_max=n_max, depth=depth, max_candidates=budget)
    report = {"command": "face", "face": F.to_dict()}
    report.update(result.to_dict())
    report["boundary"] = [b.to_dict() for b in boundary]
    report["restriction_degrees"] = [restcisom_hypothesis_check(F, t) for t in result.witnesses]
    code = {FaceVerdict.PASS: EXIT_PASS, FaceVerdict.FAIL: EXIT_FAIL,
            FaceVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[result.verdict]
    return report, code


def irredundant_report(R: Realization, max_length: int) -> Tuple[Dict[str, Any], int]:
    system = enumerate_inequalities(R, max_length)
    certificates = [irredundancy_certificate(I, system.inequalities, R) for I in system]
    report = {
        "command": "irredundant",
        "count": len(certificates),
        "irredundant_count": sum(1 for c in certificates if c.irredundant),
        "all_verified": all(c.verified for c in certificates),
        "certificates": [c.to_dict() for c in certificates],
    }
    return report, EXIT_PASS if report["all_verified"] else EXIT_FAIL


def _words(*words: List[int]) -> str:
    return " | ".join("e" if not w else "".join(f"s{i}" for i in w) for w in words)


def render_table(payload: Dict[str, Any]) -> str:
    """表格形式的人类可读输出"""
    command = payload.get("command")
    lines: List[str] = []
    if command == "algebra":
        lines.append(f"{payload['type']}, dim h = {payload['dim_h']}, dim E = {payload['dim_E']}")
        lines.append(f"ρ = {payload['rho']}")
        for i, x in enumerate(payload["coweights"]):
            lines.append(f"x_{i} = {x}")
    elif command == "inequalities":
        lines.append(f"{'j':>3}  w1 | w2 | v")
        for rec in payload["inequalities"]:
            lines.append(f"{rec['parabolic']:>3}  {_words(rec['w1'], rec['w2'], rec['v'])}")
        status = "complete" if payload["complete"] else f"complete up to ℓ(v) ≤ {payload['complete_up_to_length']}"
        lines.append(f"共 {payload['count']} 条 ({status})")
    elif command == "member":
        lines.append(f"triple = {payload['triple']}")
        lines.append(f"lattice = {payload['lattice_condition']}, violated = {len(payload['violated'])}")
        lines.append(f"gamma = {payload['gamma']['status']} (N = {payload['gamma']['scale']})")
        lines.append(f"agreement = {payload['agreement']}")
    elif command == "face":
        lines.append(f"d = {payload['d_expected']}, rank = {payload['rank_found']}, "
                     f"equality rank on E = {payload['equality_rank']}, {payload['verdict']}")
        for t in payload["witnesses"]:
            lines.append(f"  {t}")
        for b in payload["boundary"]:
            lines.append(f"  (α{b['alpha']}, {b['index']}) → {b['class']}")
    elif command == "irredundant":
        lines.append(f"{payload['irredundant_count']}/{payload['count']} 为面, verified = {payload['all_verified']}")
        for cert in payload["certificates"]:
            rec = cert["inequality"]
            kind = "facet" if cert["irredundant"] else "redundant"
            lines.append(f"{rec['parabolic']:>3}  {_words(rec['w1'], rec['w2'], rec['v'])}  {kind}")
    elif command == "selftest":
        for suite in payload["suites"]:
            lines.append(f"{suite['name']:<24} {suite['status']:<13} {suite.get('message') or ''}")
        lines.append(f"overall = {payload['overall']}")
    else:
        lines.append(dump_json(payload).rstrip())
    return "\n".join(lines) + "\n"


def compare_golden(payload: Dict[str, Any], path: Union[str, Path]) -> Tuple[bool, str]:
    """
    结构比较：解析golden文件后与报告比较；不一致时返回unified diff
    """
    path = Path(path)
    expected_text = path.read_text(encoding="utf-8") if path.exists() else ""
    try:
        expected = json.loads(expected_text)
    except json.JSONDecodeError:
        expected = None
    actual_text = dump_json(payload)
    if expected == json.loads(actual_text):
        return True, ""
    diff = difflib.unified_diff(
        expected_text.splitlines(keepends=True), actual_text.splitlines(keepends=True),
        fromfile=str(path), tofile="actual")
    return False, "".join(diff)
