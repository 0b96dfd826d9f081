"""Command-line front end.

Subcommands: capacity, span, optimize, sweep, verify-protocol, asymptotics.
Structured results go to JSON, plot data to CSV; both embed a metadata
header (command, parameters, seed, version).  Exit codes: 0 success/pass,
1 verification failure, 2 argument error, 3 numerical inconclusiveness.
"""

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, protocol, spanrank
from .capacity import capacity_report, capacity_scaling_table
from .entropyopt import (
    OptimizerConfig,
    load_codebook,
    maximize_entropy,
    save_codebook,
    symbol_sweep,
)
from .exceptions import InconclusiveGap, InvalidModeSplit

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_SEED = 42
OUTDIR_ENV = "LOCAP_OUTDIR"


def _resolve(path):
    if path is None:
        return None
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _metadata(command, args):
    skip = {"func", "command", "json_out", "csv_out", "out"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {"command": command, "params": params, "version": __version__}


def _write_json(path, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(_resolve(path), "w") as fh:
            fh.write(text)


def _write_csv(path, meta, header, rows):
    lines = [f"# {k}: {json.dumps(v)}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(_resolve(path), "w") as fh:
            fh.write(text)


def _csv_cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


# --------------------------------------------------------------------------


def _cmd_capacity(args):
    report = capacity_report(args.n_photons, args.n_modes, args.m_alice)
    payload = {"metadata": _metadata("capacity", args), **report.to_dict()}
    _write_json(args.json_out, payload)
    return EXIT_OK


def _cmd_span(args):
    meta = _metadata("span", args)
    if args.m_alice is None:
        rows = spanrank.span_sweep(args.n_photons, args.n_modes,
                                   seed=args.seed, strict=False)
        _write_csv(args.csv_out, meta,
                   ["N", "M", "M_A", "rank", "bound", "match", "singular_gap"],
                   [(r.n_photons, r.n_modes, r.m_alice, r.rank, r.bound,
                     r.match, r.singular_gap) for r in rows])
        if any(not (r.singular_gap > spanrank.CONFIDENT_GAP) for r in rows):
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    try:
        est = spanrank.estimate_span(args.n_photons, args.n_modes, args.m_alice,
                                     num_samples=args.samples, seed=args.seed)
    except InconclusiveGap as exc:
        est = exc.estimate
        payload = {"metadata": meta, **_span_payload(args, est)}
        _write_json(args.json_out, payload)
        return EXIT_INCONCLUSIVE
    payload = {"metadata": meta, **_span_payload(args, est)}
    _write_json(args.json_out, payload)
    return EXIT_OK


def _span_payload(args, est):
    from .capacity import span_bound
    bound = span_bound(args.n_photons, args.n_modes, args.m_alice)
    return {
        "rank": est.rank,
        "bound": bound,
        "match": est.rank == bound,
        "num_samples": est.num_samples,
        "singular_gap": est.singular_gap,
        "seed": est.seed,
        "initial_state_mode": est.initial_state_mode,
    }


def _optimizer_config(args):
    return OptimizerConfig(
        restarts=args.restarts,
        max_iter=args.max_iter,
        optimize_probabilities=args.probabilities == "simplex",
        threads=args.threads,
    )


def _cmd_optimize(args):
    config = _optimizer_config(args)
    warm = None
    if args.warm_start:
        warm, _ = load_codebook(_resolve(args.warm_start))
    result = maximize_entropy(args.n_photons, args.n_modes, args.m_alice,
                              args.num_symbols, config, seed=args.seed,
                              initial_codebook=warm)
    meta = _metadata("optimize", args)
    off = result.gram - np.diag(np.diag(result.gram))
    payload = {
        "metadata": meta,
        "s_max_bits": result.s_max_bits,
        "log2_num_symbols": math.log2(args.num_symbols),
        "capacity_bits": capacity_report(args.n_photons, args.n_modes,
                                         args.m_alice).capacity_bits,
        "max_gram_off_diagonal": float(np.abs(off).max()),
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "seed": result.seed,
    }
    if args.out:
        save_codebook(_resolve(args.out), result.codebook, metadata=meta)
        payload["codebook_file"] = args.out
    _write_json(args.json_out, payload)
    return EXIT_OK


def _cmd_sweep(args):
    lo, _, hi = args.x_range.partition(":")
    x_values = range(int(lo), int(hi) + 1)
    config = _optimizer_config(args)
    points = symbol_sweep(args.n_photons, args.n_modes, args.m_alice, x_values,
                          config, seed=args.seed,
                          warm_start=not args.cold_start)
    _write_csv(args.csv_out, _metadata("sweep", args),
               ["X", "S_max_bits", "log2X", "capacity_bits", "converged",
                "restarts_used"],
               [(p.num_symbols, p.s_max_bits, p.log2_num_symbols,
                 p.capacity_bits, p.converged, p.restarts_used)
                for p in points])
    return EXIT_OK


def _cmd_verify_protocol(args):
    if args.params:
        params = protocol.load_params(_resolve(args.params))
    else:
        params = protocol.solve_params(seed=args.seed, family=args.family)
    report = protocol.verify_protocol(params, tol=args.tol)

    print(f"constraint residuals (tol {report.constraints.tol:g}):")
    for name, value in report.constraints.residuals.items():
        print(f"  {name:<16} {value:.12f}")
    print("Gram matrix magnitudes |<psi_i|psi_j>|:")
    for row in np.abs(report.gram):
        print("  " + " ".join(f"{v:.12f}" for v in row))
    print(f"max Gram off-diagonal: {report.max_off_diagonal:.12f} (tol {args.tol:g})")
    print(f"entropy of uniform mixture: {report.entropy_bits:.12f} bits")
    print(f"span rank of the eight states: {report.span_rank}")
    print(f"mean photons in Alice's modes: {report.mean_alice_photons:.12f}")
    print("PASS" if report.passed else "FAIL")

    if args.emit_codebook:
        save_codebook(_resolve(args.emit_codebook), protocol.codebook(params),
                      metadata=_metadata("verify-protocol", args))
    if args.json_out:
        _write_json(args.json_out, {
            "metadata": _metadata("verify-protocol", args),
            "passed": report.passed,
            "max_off_diagonal": report.max_off_diagonal,
            "entropy_bits": report.entropy_bits,
            "span_rank": report.span_rank,
            "mean_alice_photons": report.mean_alice_photons,
            "residuals": report.constraints.residuals,
        })
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def _cmd_asymptotics(args):
    ratios = [float(Fraction(tok)) for tok in args.ratios.split(",")]
    n_list = [int(tok) for tok in args.n_list.split(",")]
    rows = capacity_scaling_table(n_list, ratios)
    _write_csv(args.csv_out, _metadata("asymptotics", args),
               ["N", "M", "M_A", "log2_dS", "log2_dH", "dualrail_bits"],
               [(r["n_photons"], r["n_modes"], r["m_alice"], r["log2_span"],
                 r["log2_dim_hilbert"], r["dualrail_bits"]) for r in rows])
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="locap",
        description="Encoding capacity of linear-optical quantum channels")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_system(p, m_alice_required=True):
        p.add_argument("-N", dest="n_photons", type=int, required=True,
                       help="total photon number")
        p.add_argument("-M", dest="n_modes", type=int, required=True,
                       help="total mode count")
        p.add_argument("--ma", dest="m_alice", type=int,
                       required=m_alice_required, default=None,
                       help="modes under Alice's control")

    p = sub.add_parser("capacity", help="analytic span bound and capacity")
    add_system(p)
    p.add_argument("--json", dest="json_out", default=None,
                   help="write the report to this JSON file instead of stdout")
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("span", help="numerical span rank vs the analytic bound")
    add_system(p, m_alice_required=False)
    p.add_argument("--samples", type=int, default=None,
                   help="random encodings to draw (default: twice the bound)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", dest="json_out", default=None)
    p.add_argument("--csv", dest="csv_out", default=None,
                   help="sweep output when --ma is omitted")
    p.set_defaults(func=_cmd_span)

    p = sub.add_parser("optimize", help="maximize the codebook entropy")
    add_system(p)
    p.add_argument("-X", dest="num_symbols", type=int, required=True,
                   help="number of classical symbols")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--probabilities", choices=["uniform", "simplex"],
                   default="uniform")
    p.add_argument("--warm-start", default=None,
                   help="codebook JSON to seed the first restart")
    p.add_argument("--out", default=None, help="write the best codebook here")
    p.add_argument("--json", dest="json_out", default=None)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep", help="entropy maxima over a symbol-count range")
    add_system(p)
    p.add_argument("--x-range", required=True, metavar="LO:HI")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--probabilities", choices=["uniform", "simplex"],
                   default="uniform")
    p.add_argument("--cold-start", action="store_true",
                   help="disable warm-starting from the previous symbol count")
    p.add_argument("--csv", dest="csv_out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify-protocol",
                       help="check the eight-symbol two-photon protocol")
    p.add_argument("--params", default=None,
                   help="JSON parameter file (default: solve the closed form)")
    p.add_argument("--family", choices=[protocol.DEFAULT_FAMILY,
                                        protocol.RANDOM_FAMILY],
                   default=protocol.DEFAULT_FAMILY)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--emit-codebook", default=None,
                   help="write the protocol as a codebook JSON")
    p.add_argument("--json", dest="json_out", default=None)
    p.set_defaults(func=_cmd_verify_protocol)

    p = sub.add_parser("asymptotics",
                       help="capacity scaling table for M = 2N")
    p.add_argument("--ratios", default="1/3,1,3",
                   help="comma-separated Alice/Bob mode ratios (fractions ok)")
    p.add_argument("--n-list", default="2,4,8,16,32,64,128")
    p.add_argument("--csv", dest="csv_out", default=None)
    p.set_defaults(func=_cmd_asymptotics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidModeSplit, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconclusiveGap as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
