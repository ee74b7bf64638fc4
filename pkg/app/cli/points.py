"""
张量点子命令：point-action
对张量点依次施加 GL₂ 因子作用与置换；给出见证时同步变换见证并报告射影匹配。
"""
import argparse
from typing import Any, Dict, Optional

from app.cli.io import load_payload, write_report
from app.cli.options import add_out, add_scalar, add_spec
from app.models.schemas import (
    ActionPayload,
    PointActionPayload,
    RunConfig,
    ScalarMode,
    encode_matrix,
    encode_point,
    mask_key,
)
from app.services.abstract_points import (
    KernelWitness,
    TensorPoint,
    act_on_witness,
    four_factor_kernel,
    gl2_act,
    permute,
    permute_witness,
    point_from_kernel,
    projectively_equal,
)


def apply_action(action: ActionPayload, p: TensorPoint, mode: ScalarMode) -> TensorPoint:
    if action.permutation is not None:
        return permute(action.permutation, p)
    return gl2_act(action.factor, action.g.to_array("g", mode), p)


def apply_to_witness(action: ActionPayload, w: KernelWitness, mode: ScalarMode) -> KernelWitness:
    if action.permutation is not None:
        return permute_witness(action.permutation, w)
    return act_on_witness(action.factor, action.g.to_array("g", mode), w)


def encode_witness(w: KernelWitness) -> Dict[str, Any]:
    return {"n": w.n, "m": w.m, "pfaffian": w.pfaffian_mode, "K": encode_matrix(w.K)}


def run_point_action(cfg: RunConfig, args: argparse.Namespace) -> int:
    payload = load_payload(cfg.spec, PointActionPayload)
    witness: Optional[KernelWitness] = (
        payload.witness.to_witness(cfg.scalar) if payload.witness is not None else None
    )
    p = payload.point.to_point(cfg.scalar) if payload.point is not None else point_from_kernel(witness)

    for action in payload.actions:
        p = apply_action(action, p, cfg.scalar)
        if witness is not None:
            witness = apply_to_witness(action, witness, cfg.scalar)

    result: Dict[str, Any] = {"point": encode_point(p)}
    if witness is not None:
        result["witness"] = encode_witness(witness)
        result["projective_match"] = projectively_equal(point_from_kernel(witness), p, cfg.tol)
    if args.four_factor:
        result["four_factor_witness"] = encode_witness(four_factor_kernel(p))

    rows = [[mask_key(mask, p.n), str(c)] for mask, c in enumerate(p.coeffs) if c != 0]
    write_report(result, ["subset", "value"], rows, cfg.out)
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    action = subparsers.add_parser("point-action", help="张量点上的 GL₂ 与置换作用")
    add_spec(action)
    add_scalar(action)
    add_out(action)
    action.add_argument("--tol", default=None, help="射影比较容差（浮点模式）或 exact")
    action.add_argument(
        "--four-factor",
        action="store_true",
        dest="four_factor",
        help="对作用后的四因子点构造显式行列式见证",
    )
    action.set_defaults(handler=run_point_action)
