"""
采样子命令：对 (条件) L-系综做精确枚举采样
"""
import argparse

from app.cli.io import load_payload, write_report
from app.cli.options import add_out, add_scalar, add_seed, add_spec
from app.models.schemas import LEnsemblePayload, RunConfig
from app.services.point_process import enumerate_samples, lensemble_table, pf_lensemble_table


def run_sample(cfg: RunConfig, args: argparse.Namespace) -> int:
    payload = load_payload(cfg.spec, LEnsemblePayload)
    if args.pfaffian:
        table = pf_lensemble_table(payload.to_pf_ensemble(cfg.scalar))
    else:
        table = lensemble_table(payload.to_ensemble(cfg.scalar))
    draws = enumerate_samples(table, cfg.seed, cfg.samples)
    samples = [[str(x) for x in table.ground.labels(c)] for c in draws]
    write_report(
        {"seed": cfg.seed, "samples": samples},
        ["sample", "points"],
        [[k, " ".join(s)] for k, s in enumerate(samples)],
        cfg.out,
    )
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    sample = subparsers.add_parser("sample", help="按概率表精确采样")
    add_spec(sample)
    add_seed(sample)
    add_scalar(sample)
    add_out(sample)
    sample.add_argument("--samples", type=int, default=1, help="采样次数")
    sample.add_argument("--pfaffian", action="store_true", help="规格为Pfaffian L-系综")
    sample.set_defaults(handler=run_sample)
