"""Command-line interface.

Subcommands:
  run           execute an experiment grid from a config file
  inspect-data  print the preprocessing report (balance, correlations, VIFs)
  encode        encode a value or vector and print state probabilities
  elbow         print the explained-variance curve and detected elbow
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .bench import run_grid
from .config import ENV_DATA_PATH, load_config
from .encoders import EncoderConfig, encode_row, iqp_phases, squeeze_vacuum, SqueezeParams
from .exceptions import QembenchError
from .fock import quadrature_variances
from .pipeline import (
    CATEGORICAL_COLUMNS,
    Standardizer,
    elbow_index,
    full_variance_ratios,
    load_churn_csv,
    one_hot,
)


def _data_path(args) -> str | None:
    if getattr(args, "data", None):
        return args.data
    return os.environ.get(ENV_DATA_PATH)


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.data:
        cfg.data_path = args.data
    if args.out:
        cfg.out_dir = args.out
    if args.workers is not None:
        cfg.workers = args.workers
    if args.seed is not None:
        cfg.seeds = [args.seed]
    cfg.validate()
    result = run_grid(cfg)
    from .report import write_report

    paths = write_report(result, cfg.out_dir)
    n_failed = sum(1 for r in result.records if r.error)
    print(f"{len(result.records)} records ({n_failed} failed cells)")
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_inspect_data(args) -> int:
    path = _data_path(args)
    if path is None:
        print("no data path: pass --data or set " + ENV_DATA_PATH, file=sys.stderr)
        return 1
    ds = load_churn_csv(path, blank_total_charges=args.blanks)
    from .report import inspection_report

    print(inspection_report(ds), end="")
    return 0


def _parse_values(args) -> np.ndarray:
    if args.values is not None:
        try:
            return np.array([float(v) for v in args.values.split(",") if v.strip() != ""])
        except ValueError:
            raise QembenchError(f"cannot parse --values {args.values!r}") from None
    if args.value is not None:
        return np.array([args.value])
    raise QembenchError("encode needs --value or --values")


def _cmd_encode(args) -> int:
    x = _parse_values(args)
    kwargs = {}
    if args.fock_dim is not None:
        kwargs["fock_dim"] = args.fock_dim
    if args.probs is not None:
        kwargs["probs_per_mode"] = args.probs
    if args.block is not None:
        kwargs["iqp_block"] = args.block
    cfg = EncoderConfig(method=args.method, **kwargs)

    print(f"method: {cfg.method}")
    if cfg.method == "iqp":
        block = cfg.iqp_block
        padded = np.zeros(-(-len(x) // block) * block)
        padded[: len(x)] = x
        for b in range(len(padded) // block):
            chunk = padded[b * block : (b + 1) * block]
            phases = iqp_phases(chunk, block).phases
            print(f"block {b}: x = ({', '.join(f'{v:g}' for v in chunk)})")
            print("  phases: " + ", ".join(f"{p:.4f}" for p in phases))
        encoded = encode_row(x, cfg)
        width = 2**block
        for b in range(len(encoded) // width):
            probs = encoded[b * width : (b + 1) * width]
            labels = [format(z, f"0{block}b") for z in range(width)]
            print(
                f"  P(basis) block {b}: "
                + ", ".join(f"|{z}> {p:.4f}" for z, p in zip(labels, probs))
            )
        return 0

    if cfg.method == "classical-passthrough":
        print("passthrough: " + ", ".join(f"{v:g}" for v in x))
        return 0

    encoded = encode_row(x, cfg)
    k = cfg.probs_per_mode
    for i, value in enumerate(x):
        probs = encoded[i * k : (i + 1) * k]
        name = "alpha" if cfg.method == "displacement" else "r"
        print(f"{name} = {value:g}")
        print(f"  P(0..{k - 1}) = " + ", ".join(f"{p:.4f}" for p in probs))
        if cfg.method == "squeezing":
            state = squeeze_vacuum(SqueezeParams(r=float(value), clamp=cfg.r_clamp), cfg.fock_dim)
            var_x, var_p = quadrature_variances(state)
            print(f"  Var(x) = {var_x:.6f}   Var(p) = {var_p:.6f}")
    return 0


def _cmd_elbow(args) -> int:
    path = _data_path(args)
    if path is None:
        print("no data path: pass --data or set " + ENV_DATA_PATH, file=sys.stderr)
        return 1
    ds = load_churn_csv(path, blank_total_charges=args.blanks)
    drops = [c for c in args.drop.split(",") if c.strip()] if args.drop else []
    if drops:
        ds = ds.drop_columns(drops)
    encoded = one_hot(ds, [c for c in CATEGORICAL_COLUMNS if c in ds.columns])
    matrix = encoded.matrix()
    standardized = Standardizer().fit(matrix).transform(matrix)
    ratios = full_variance_ratios(standardized)
    elbow = elbow_index(ratios)
    cumulative = np.cumsum(ratios)
    print("component  ratio          cumulative")
    for i, (ratio, cum) in enumerate(zip(ratios, cumulative)):
        marker = "  <- elbow" if i == elbow else ""
        print(f"{i:9d}  {ratio:.6e}   {cum:.9f}{marker}")
    print(f"elbow index: {elbow}")
    if args.out:
        from .report import render_variance_figure, write_variance_csv

        os.makedirs(args.out, exist_ok=True)
        print(f"wrote {write_variance_csv(ratios, args.out)}")
        print(f"wrote {render_variance_figure(ratios, elbow, args.out)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qembench",
        description="Quantum data-encoding benchmark for tabular churn classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment grid from a config file")
    p_run.add_argument("--config", required=True, help="experiment config file")
    p_run.add_argument("--data", help="churn CSV path (overrides config)")
    p_run.add_argument("--out", help="output directory (overrides config)")
    p_run.add_argument("--workers", type=int, help="parallel worker processes")
    p_run.add_argument("--seed", type=int, help="replace the seed axis with one seed")
    p_run.set_defaults(func=_cmd_run)

    p_inspect = sub.add_parser("inspect-data", help="print the preprocessing report")
    p_inspect.add_argument("--data", help=f"churn CSV path (default ${ENV_DATA_PATH})")
    p_inspect.add_argument("--blanks", choices=("drop", "impute"), default="drop")
    p_inspect.set_defaults(func=_cmd_inspect_data)

    p_encode = sub.add_parser("encode", help="encode a value/row and print probabilities")
    p_encode.add_argument(
        "--method", required=True,
        choices=("classical-passthrough", "iqp", "displacement", "squeezing"),
    )
    p_encode.add_argument("--value", type=float, help="single scalar input")
    p_encode.add_argument("--values", help="comma-separated input vector")
    p_encode.add_argument("--fock-dim", type=int, dest="fock_dim")
    p_encode.add_argument("--probs", type=int, help="Fock probabilities per feature")
    p_encode.add_argument("--block", type=int, help="qubits per IQP block")
    p_encode.set_defaults(func=_cmd_encode)

    p_elbow = sub.add_parser("elbow", help="print the explained-variance curve and elbow")
    p_elbow.add_argument("--data", help=f"churn CSV path (default ${ENV_DATA_PATH})")
    p_elbow.add_argument("--blanks", choices=("drop", "impute"), default="drop")
    p_elbow.add_argument(
        "--drop", default="TotalCharges,PhoneService,MonthlyCharges",
        help="comma-separated drop profile (default: the standard one)",
    )
    p_elbow.add_argument("--out", help="also write curve CSV and figure here")
    p_elbow.set_defaults(func=_cmd_elbow)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QembenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
