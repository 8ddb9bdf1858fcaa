"""Command-line experiment runner.

Subcommands:
  fbm        emit a fractional Brownian path CSV
  kernel     one path -> Schwinger-Dyson kernel value (and optional table dump)
  table      pairwise method-agreement experiment -> CSV
  scaling    runtime/memory study along one axis -> CSV
  sigkernel  two paths -> signature kernel value

Every run is deterministic given --seed.  Config files (--config, JSON with
ExperimentSpec fields) seed the settings; explicit flags override them.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from sdkernel.experiments import ExperimentSpec, run_pairwise_table, run_scaling
from sdkernel.noise import FbmConfig, read_path_csv, sample_fbm, write_path_csv
from sdkernel.roughpath import block_increments
from sdkernel.sigkernel import diagonal_derivative, integrate_system
from sdkernel.solver import SchemeConfig, solve_kernel


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=str, default=None, help="output file or directory")


def _fbm_flags(parser):
    parser.add_argument("--hurst", type=float, default=0.5)
    parser.add_argument("--dims", type=int, default=1)
    parser.add_argument("--log2-fine", type=int, default=10, help="M: 2^M fine increments")
    parser.add_argument("--horizon", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdkernel", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fbm", help="emit a fractional Brownian path CSV")
    _fbm_flags(p)
    _add_common(p)

    p = sub.add_parser("kernel", help="Schwinger-Dyson kernel of one path")
    p.add_argument("--input", type=str, default=None, help="path CSV; omit to sample fBM")
    _fbm_flags(p)
    p.add_argument("--log2-coarse", type=int, default=6, help="N: 2^N coarse blocks")
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--zeta", type=int, default=None, help="default: zeta_min(kappa)")
    p.add_argument("--dump-table", type=str, default=None, help="binary table dump path")
    p.add_argument("--full-table", action="store_true", help="print every grid trace value")
    _add_common(p)

    p = sub.add_parser("table", help="pairwise agreement experiment")
    p.add_argument("--config", type=str, default=None, help="JSON ExperimentSpec")
    p.add_argument("--hurst", type=float, nargs="+", default=None)
    p.add_argument("--methods", type=str, nargs="+", default=None)
    p.add_argument("--paths", type=int, default=None)
    p.add_argument("--log2-fine", type=int, default=None)
    p.add_argument("--log2-coarse", type=int, default=None)
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--zeta", type=int, default=None, help="zeta for every SDK method")
    p.add_argument("--matrix-dim", type=int, default=None)
    p.add_argument("--sims", type=int, default=None)
    p.add_argument(
        "--full-table",
        action="store_true",
        help="compare whole kernel tables (max over the grid) instead of K(0, T)",
    )
    _add_common(p)

    p = sub.add_parser("scaling", help="runtime/memory study")
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--axis", type=str, choices=("grid", "block", "dimension"), required=True)
    p.add_argument("--values", type=int, nargs="+", required=True)
    p.add_argument("--hurst", type=float, default=None)
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--zeta", type=int, default=None)
    p.add_argument("--log2-fine", type=int, default=None)
    p.add_argument("--log2-coarse", type=int, default=None)
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--mem-cap", type=int, default=None, help="table memory cap in bytes")
    _add_common(p)

    p = sub.add_parser("sigkernel", help="signature kernel of two paths")
    p.add_argument("--input", type=str, required=True, help="first path CSV")
    p.add_argument("--input-y", type=str, default=None, help="second path CSV (default: first)")
    p.add_argument("--kappa", type=int, default=1, help="first path derivative level")
    p.add_argument("--lam", type=int, default=None, help="second path level (default kappa)")
    p.add_argument("--log2-coarse", type=int, default=3, help="N: 2^N blocks per path")
    p.add_argument("--substeps", type=int, default=16, help="grid steps per block")
    _add_common(p)

    return parser


def _spec_from_args(args) -> ExperimentSpec:
    spec = ExperimentSpec.from_json(args.config) if args.config else ExperimentSpec()
    hurst = getattr(args, "hurst", None)
    overrides = {
        "hursts": tuple(hurst) if isinstance(hurst, (list, tuple)) else None,
        "n_paths": getattr(args, "paths", None),
        "log2_fine": getattr(args, "log2_fine", None),
        "log2_coarse": getattr(args, "log2_coarse", None),
        "dims": getattr(args, "dims", None),
        "matrix_dim": getattr(args, "matrix_dim", None),
        "n_sims": getattr(args, "sims", None),
        "memory_cap_bytes": getattr(args, "mem_cap", None),
        "seed": args.seed,
    }
    if getattr(args, "methods", None):
        overrides["methods"] = tuple(args.methods)
    if getattr(args, "full_table", False):
        overrides["full_table"] = True
    if overrides.get("log2_fine") is not None and overrides.get("log2_coarse") is None:
        overrides["log2_coarse"] = min(spec.log2_coarse, overrides["log2_fine"])
    if getattr(args, "zeta", None) is not None:
        spec0 = spec.override(**overrides)
        zetas = {m: args.zeta for m in spec0.methods if m.startswith("SDK") and m[3:].isdigit()}
        overrides["zetas"] = zetas
    return spec.override(**overrides)


def cmd_fbm(args) -> int:
    cfg = FbmConfig(args.hurst, args.dims, 2**args.log2_fine, args.horizon, args.seed)
    path = sample_fbm(cfg)
    out = args.out or "fbm_path.csv"
    write_path_csv(path, out)
    print(out)
    return 0


def cmd_kernel(args) -> int:
    if args.input:
        path = read_path_csv(args.input)
    else:
        path = sample_fbm(
            FbmConfig(args.hurst, args.dims, 2**args.log2_fine, args.horizon, args.seed)
        )
    zeta = args.zeta if args.zeta is not None else None
    cfg = (
        SchemeConfig(path.dim, args.kappa, zeta)
        if zeta is not None
        else SchemeConfig(path.dim, args.kappa)
    )
    incs = block_increments(path, args.log2_coarse, args.kappa)
    table = solve_kernel(incs, cfg)
    g = 2**args.log2_coarse
    print(format(table.trace(0, g), ".17g"))
    if args.full_table:
        for i in range(g + 1):
            for j in range(i, g + 1):
                print(i, j, format(table.trace(i, j), ".17g"))
    if args.dump_table:
        table.dump(args.dump_table)
    return 0


def cmd_table(args) -> int:
    spec = _spec_from_args(args)
    out = args.out or "pairwise.csv"
    rows = run_pairwise_table(spec, out)
    for row in rows:
        print(
            f"H={row['hurst']}: {row['method_a']} vs {row['method_b']}: "
            f"mae={row['mae']:.3e} std={row['std']:.3e}"
        )
    print(out)
    return 0


def cmd_scaling(args) -> int:
    spec = _spec_from_args(args)
    if args.hurst is not None:
        spec = spec.override(hursts=(args.hurst,))
    out = args.out or f"scaling_{args.axis}.csv"
    zeta = args.zeta
    if zeta is not None:
        spec = spec.override(zetas={f"SDK{args.kappa}": zeta})
    rows = run_scaling(spec, args.axis, args.values, kappa=args.kappa, out_path=out)
    for row in rows:
        print(
            f"{args.axis}={row['value']}: runtime={row['runtime_seconds']:.4f}s "
            f"memory={row['memory_bytes']}B"
        )
    print(out)
    return 0


def cmd_sigkernel(args) -> int:
    path_x = read_path_csv(args.input)
    path_y = read_path_csv(args.input_y) if args.input_y else path_x
    lam = args.lam if args.lam is not None else args.kappa
    bx = block_increments(path_x, args.log2_coarse, args.kappa)
    by = block_increments(path_y, args.log2_coarse, lam)
    state = integrate_system(diagonal_derivative(bx), diagonal_derivative(by), args.substeps)
    print(format(state.value, ".17g"))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    np.seterr(over="raise", invalid="raise")
    handlers = {
        "fbm": cmd_fbm,
        "kernel": cmd_kernel,
        "table": cmd_table,
        "scaling": cmd_scaling,
        "sigkernel": cmd_sigkernel,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
