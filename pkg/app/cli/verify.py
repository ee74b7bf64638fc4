"""
验证子命令：verify、schur-verify
"""
import argparse
from itertools import combinations
from typing import List

from app.cli.io import load_payload, parse_points, write_report
from app.cli.options import add_cutoff, add_out, add_scalar, add_seed, add_spec, add_tol
from app.core.exceptions import InputError
from app.models.schemas import RunConfig, SchurSpecPayload, encode_scalar
from app.services.schur_process import SpacePoint
from app.services.verification_service import (
    PF_SCHUR_KERNEL_TOL,
    SCHUR_KERNEL_TOL,
    schur_verify_rows,
    verification_service,
)

REPORT_HEADER = ["suite", "cases", "max_deviation", "tail_bound", "tolerance", "passed"]
SCHUR_HEADER = ["points", "kernel_re", "kernel_im", "oracle_re", "oracle_im", "tail_bound", "deviation", "passed"]

# schur-verify 未给出 --points 时的默认位置
DEFAULT_POSITIONS = range(-2, 3)


def run_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    if cfg.run_all:
        reports = verification_service.run_all(cfg.tol, cfg.seed)
    elif cfg.suites:
        reports = [verification_service.run(name, cfg.tol, cfg.seed) for name in cfg.suites]
    else:
        raise InputError("需要 --suite NAME 或 --all")
    passed = all(r.passed for r in reports)
    payload = {"passed": passed, "reports": [r.model_dump() for r in reports]}
    rows = [
        [r.suite, r.cases, r.max_deviation, r.tail_bound if r.tail_bound is not None else "", r.tolerance, r.passed]
        for r in reports
    ]
    write_report(payload, REPORT_HEADER, rows, cfg.out)
    return 0 if passed else 1


def _default_point_sets(T: int) -> List[List[SpacePoint]]:
    points = [SpacePoint(i, u) for i in range(1, min(T, 2) + 1) for u in DEFAULT_POSITIONS]
    return [[p] for p in points] + [list(pair) for pair in combinations(points, 2)]


def _split(value) -> List[str]:
    z = complex(value)
    return [format(z.real, ".17g"), format(z.imag, ".17g")]


def run_schur_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    """在每个点集上比较核的 det/pf 与截断枚举，逐行给出尾项上界与结论"""
    spec = load_payload(cfg.spec, SchurSpecPayload).to_spec(cfg.scalar)
    point_sets = [parse_points(cfg.points)] if cfg.points else _default_point_sets(spec.T)
    tol = cfg.tol or (PF_SCHUR_KERNEL_TOL if spec.pfaffian_mode else SCHUR_KERNEL_TOL)
    rows = schur_verify_rows(spec, point_sets, cfg.cutoff, tol)
    passed = all(row.passed for row in rows)
    payload = {
        "passed": passed,
        "cutoff": cfg.cutoff,
        "tolerance": tol,
        "rows": [
            {
                **row.model_dump(),
                "kernel_value": encode_scalar(row.kernel_value),
                "oracle_value": encode_scalar(row.oracle_value),
            }
            for row in rows
        ],
    }
    table = [
        [row.points, *_split(row.kernel_value), *_split(row.oracle_value), row.tail_bound, row.deviation, row.passed]
        for row in rows
    ]
    write_report(payload, SCHUR_HEADER, table, cfg.out)
    return 0 if passed else 1


def register(subparsers: argparse._SubParsersAction) -> None:
    verify = subparsers.add_parser("verify", help="运行验证套件")
    group = verify.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--suite",
        action="append",
        dest="suites",
        choices=list(verification_service.suites),
        help="套件名（可重复）",
    )
    group.add_argument("--all", action="store_true", dest="run_all", help="运行全部套件")
    add_tol(verify)
    add_seed(verify)
    add_out(verify)
    verify.set_defaults(handler=run_verify)

    schur = subparsers.add_parser("schur-verify", help="Schur过程核与暴力枚举的对照报告")
    add_spec(schur)
    add_cutoff(schur)
    add_tol(schur)
    add_scalar(schur)
    add_out(schur)
    schur.add_argument("--points", default=None, help="只检查给定点集，例如 \"(1,0),(2,-1)\"")
    schur.set_defaults(handler=run_schur_verify)
