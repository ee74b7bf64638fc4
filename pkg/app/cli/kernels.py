"""
核计算子命令：kernel、pf-kernel、em-kernel、schur-kernel
"""
import argparse
from typing import Any, Hashable, List, Sequence, Tuple

import numpy as np

from app.cli.io import load_payload, parse_points, read_json, scalar_columns, write_report
from app.cli.options import add_out, add_scalar, add_spec, add_tol
from app.models.schemas import (
    EMSpecPayload,
    LEnsemblePayload,
    PfEMSpecPayload,
    RunConfig,
    SchurSpecPayload,
    encode_matrix,
)
from app.services.eynard_mehta import KernelReading, LevelPoint, em_kernel, pf_em_kernel
from app.services.point_process import PfKernel, lensemble_kernel, pf_lensemble_kernel
from app.services.schur_process import SpacePoint, assemble_kernel

KERNEL_HEADER = ["i", "u", "j", "v", "re", "im"]
PF_KERNEL_HEADER = ["i", "u", "j", "v", "block", "re", "im"]
PF_BLOCKS = ("11", "12", "21", "22")


def _coordinates(index: int, label: Hashable) -> Tuple[Any, Any]:
    """CSV 中的 (i, u)：多层点取 (层, 位置)，其余取 (下标, 标签)"""
    if isinstance(label, LevelPoint):
        return label.level, label.point
    if isinstance(label, SpacePoint):
        return label.level, label.u
    return index, label


def kernel_rows(labels: Sequence[Hashable], K: np.ndarray, pfaffian_mode: bool) -> List[List[Any]]:
    rows = []
    for a, x in enumerate(labels):
        for b, y in enumerate(labels):
            head = [*_coordinates(a, x), *_coordinates(b, y)]
            if pfaffian_mode:
                block = K[2 * a : 2 * a + 2, 2 * b : 2 * b + 2]
                for name, value in zip(PF_BLOCKS, block.flatten()):
                    rows.append(head + [name, *scalar_columns(value)])
            else:
                rows.append(head + scalar_columns(K[a, b]))
    return rows


def emit_kernel(kernel: Any, out: str) -> None:
    pfaffian_mode = isinstance(kernel, PfKernel)
    labels = kernel.ground.points
    payload = {
        "ground": [str(x) for x in labels],
        "pfaffian": pfaffian_mode,
        "kernel": encode_matrix(kernel.K),
    }
    header = PF_KERNEL_HEADER if pfaffian_mode else KERNEL_HEADER
    write_report(payload, header, kernel_rows(labels, kernel.K, pfaffian_mode), out)


def run_kernel(cfg: RunConfig, args: argparse.Namespace) -> int:
    ensemble = load_payload(cfg.spec, LEnsemblePayload).to_ensemble(cfg.scalar)
    emit_kernel(lensemble_kernel(ensemble), cfg.out)
    return 0


def run_pf_kernel(cfg: RunConfig, args: argparse.Namespace) -> int:
    ensemble = load_payload(cfg.spec, LEnsemblePayload).to_pf_ensemble(cfg.scalar)
    emit_kernel(pf_lensemble_kernel(ensemble), cfg.out)
    return 0


def run_em_kernel(cfg: RunConfig, args: argparse.Namespace) -> int:
    """带 "epsilon" 键的规格按Pfaffian多层过程处理"""
    raw = read_json(cfg.spec)
    if isinstance(raw, dict) and "epsilon" in raw:
        spec = PfEMSpecPayload.model_validate(raw).to_spec(cfg.scalar)
        kernel: Any = pf_em_kernel(spec)
    else:
        spec = EMSpecPayload.model_validate(raw).to_spec(cfg.scalar)
        kernel = em_kernel(spec, KernelReading(args.reading))
    emit_kernel(kernel, cfg.out)
    return 0


def run_schur_kernel(cfg: RunConfig, args: argparse.Namespace) -> int:
    spec = load_payload(cfg.spec, SchurSpecPayload).to_spec(cfg.scalar)
    points = parse_points(cfg.points)
    K = assemble_kernel(spec, points, cfg.tol)
    payload = {
        "points": [str(p) for p in points],
        "pfaffian": spec.pfaffian_mode,
        "kernel": encode_matrix(K),
    }
    header = PF_KERNEL_HEADER if spec.pfaffian_mode else KERNEL_HEADER
    write_report(payload, header, kernel_rows(points, K, spec.pfaffian_mode), cfg.out)
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    kernel = subparsers.add_parser("kernel", help="(条件) L-系综的关联核")
    pf_kernel = subparsers.add_parser("pf-kernel", help="Pfaffian L-系综的关联核")
    for parser, handler in ((kernel, run_kernel), (pf_kernel, run_pf_kernel)):
        add_spec(parser)
        add_out(parser)
        add_scalar(parser)
        parser.set_defaults(handler=handler)

    em = subparsers.add_parser("em-kernel", help="多层过程的 Eynard-Mehta 核")
    add_spec(em)
    add_out(em)
    add_scalar(em)
    em.add_argument(
        "--reading",
        choices=[r.value for r in KernelReading],
        default=KernelReading.FROM_FIRST.value,
        help="核公式第一项的右因子写法",
    )
    em.set_defaults(handler=run_em_kernel)

    schur = subparsers.add_parser("schur-kernel", help="Schur过程的围道积分核")
    add_spec(schur)
    add_out(schur)
    add_scalar(schur)
    add_tol(schur)
    schur.add_argument("--points", required=True, help='点列表，例如 "(1,0),(2,-1)"')
    schur.set_defaults(handler=run_schur_kernel)
