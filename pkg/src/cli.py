"""
命令行入口模块
加载GCM，运行各计算流程，输出JSON或表格；退出码 0 通过、1 失败、2 不确定、3 用法/解析错误
"""

import argparse
import asyncio
import logging
import re
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

from .cartan import (
    AlgebraType, CartanError, GCMFileError, NotAGCMError, NotSymmetrizableError, Realization,
    RealizationMismatchError, build_realization, classify_type, load_gcm,
)
from .cone import ConeError, WeightTriple
from .config import config
from .exact_lp import LPError
from .linalg import LinalgError
from .reports import (
    EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE, algebra_report, dump_json,
    face_report, inequalities_report, irredundant_report, member_report, render_table,
)
from .schubert import SchubertError
from .selftest_pipeline import SelftestPipeline, SelftestPipelineError
from .settings_manager import RunConfig, RunConfigError, run_config_manager
from .tensor import TensorError
from .weyl import ParabolicError, ParabolicType, WeylError, WeylElement, weyl_group

logger = logging.getLogger(__name__)


class CliUsageError(Exception):
    """命令行用法错误"""
    pass


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误时以退出码3结束"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> CliArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gcm", help="GCM文件路径（JSON）")
    common.add_argument("--levi", help="Δ(P) 的单根下标，如 '0,2' 或 'maximal:1'")
    common.add_argument("--max-length", dest="max_length", type=int, help="不等式枚举的长度界")
    common.add_argument("--depth", type=int, help="仿射型权重数截断深度")
    common.add_argument("--nmax", type=int, help="锥成员判定的最大倍数")
    common.add_argument("--height", type=int, help="面维数搜索的系数高度")
    common.add_argument("--out", help="输出文件路径")
    common.add_argument("--format", choices=["json", "table"], help="输出格式")
    common.add_argument("--seed", type=int, help="抽样随机种子")
    common.add_argument("--config", help="运行配置文件（JSON，字段与参数同名）")
    common.add_argument("--log-level", dest="log_level", default=config.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="日志级别")

    parser = CliArgumentParser(prog="kmcone", description="Kac-Moody 张量锥不等式的精确计算")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)
    sub.add_parser("algebra", parents=[common], help="实现摘要与类型判定")
    sub.add_parser("inequalities", parents=[common], help="枚举形变系数为1的不等式")
    member = sub.add_parser("member", parents=[common], help="三元组的锥成员判定")
    member.add_argument("--triple", required=True,
                        help="'λ1;λ2;μ'，每个权为逗号分隔的有理坐标，如 '1;1;0'")
    face = sub.add_parser("face", parents=[common], help="面的维数与边界分类")
    face.add_argument("--words", required=True, help="'w1|w2|v'，字如 'e'、'0,1' 或 's0s1'")
    sub.add_parser("irredundant", parents=[common], help="有限型不可约性证书")
    selftest = sub.add_parser("selftest", parents=[common], help="运行验收自检")
    selftest.add_argument("--suite", action="append", choices=SelftestPipeline.SUITES,
                          help="只运行指定套件（可重复）")
    return parser


def resolve_run_config(args: argparse.Namespace) -> RunConfig:
    """--config 文件为底，命令行参数覆盖"""
    base = run_config_manager.load(args.config) if args.config else RunConfig()
    updates = {name: getattr(args, name, None)
               for name in ("gcm", "levi", "max_length", "depth", "nmax", "height", "out", "format", "seed")}
    return run_config_manager.update(base, updates)


def parse_word(text: str) -> Tuple[int, ...]:
    body = text.strip()
    if body in ("", "e"):
        return ()
    if body.startswith("s"):
        indices = re.findall(r"s(\d+)", body)
        if "".join(f"s{i}" for i in indices) != body.replace(" ", ""):
            raise CliUsageError(f"无法解析字: {text!r}")
        return tuple(int(i) for i in indices)
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError as e:
        raise CliUsageError(f"无法解析字: {text!r}") from e


def parse_words(text: str, R: Realization) -> Tuple[WeylElement, WeylElement, WeylElement]:
    parts = text.split("|")
    if len(parts) != 3:
        raise CliUsageError(f"--words 需要 'w1|w2|v' 三段，收到 {text!r}")
    W = weyl_group(R)
    words = [parse_word(p) for p in parts]
    bad = [i for w in words for i in w if not 0 <= i < R.rank]
    if bad:
        raise CliUsageError(f"字中的下标 {bad} 超出范围 0..{R.rank - 1}")
    w1, w2, v = (W.element(w) for w in words)
    return w1, w2, v


def parse_triple(text: str, R: Realization) -> WeightTriple:
    parts = text.split(";")
    if len(parts) != 3:
        raise CliUsageError(f"--triple 需要 'λ1;λ2;μ' 三段，收到 {text!r}")
    try:
        weights = [R.weight([x for x in p.split(",") if x.strip() != ""]) for p in parts]
    except (ValueError, ZeroDivisionError, LinalgError) as e:
        raise CliUsageError(f"无法解析权: {e}") from e
    return WeightTriple(*weights)


def _realization(run_config: RunConfig) -> Realization:
    if not run_config.gcm:
        raise CliUsageError("需要 --gcm")
    R = build_realization(load_gcm(run_config.gcm))
    run_config.check_rank(R.rank)
    return R


def run_command(args: argparse.Namespace, run_config: RunConfig) -> Tuple[Dict[str, Any], int]:
    """执行子命令，返回 (报告, 退出码)"""
    if args.command == "selftest":
        pipeline = SelftestPipeline(seed=run_config.seed, suites=args.suite)
        results = asyncio.run(pipeline.run())
        report = pipeline.generate_report(results)
        code = {"PASS": EXIT_PASS, "FAIL": EXIT_FAIL}.get(report["overall"], EXIT_INCONCLUSIVE)
        return report, code

    R = _realization(run_config)
    # 有限型用完整深度
    depth = run_config.depth if classify_type(R.gcm) is not AlgebraType.FINITE else None
    if args.command == "algebra":
        return algebra_report(R.gcm, R), EXIT_PASS
    if args.command == "inequalities":
        return inequalities_report(R, run_config.max_length), EXIT_PASS
    if args.command == "member":
        return member_report(R, parse_triple(args.triple, R), run_config.max_length,
                             run_config.nmax, depth)
    if args.command == "face":
        P = ParabolicType.parse(run_config.levi, R.rank)
        w1, w2, v = parse_words(args.words, R)
        return face_report(R, P, w1, w2, v, run_config.height, run_config.nmax, depth)
    if args.command == "irredundant":
        return irredundant_report(R, run_config.max_length)
    raise CliUsageError(f"未知命令: {args.command}")


def emit(payload: Dict[str, Any], run_config: RunConfig):
    text = dump_json(payload) if run_config.format == "json" else render_table(payload)
    if run_config.out:
        path = Path(run_config.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"✅ 结果已写入: {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


USAGE_ERRORS = (CliUsageError, RunConfigError, GCMFileError, NotAGCMError, NotSymmetrizableError,
                ParabolicError, RealizationMismatchError, SelftestPipelineError)
DOMAIN_ERRORS = (CartanError, WeylError, SchubertError, TensorError, LPError, ConeError, LinalgError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    命令行主函数

    Returns:
        int: 退出码
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level, logging.INFO),
                        format=config.log_format, stream=sys.stderr)
    try:
        run_config = resolve_run_config(args)
        payload, code = run_command(args, run_config)
    except USAGE_ERRORS as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except DOMAIN_ERRORS as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAIL
    emit(payload, run_config)
    return code
