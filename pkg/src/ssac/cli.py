"""Command-line front end.

Subcommands: `experiment` sweeps a parameter grid and emits CSV (plus
optional PNG figures), `encode` turns a raw symbol file into a packet
file, `recode` appends one recoded packet, and `decode` recovers the
original symbols.  Exit codes: 0 success, 2 usage or malformed input,
3 recode search failure, 4 insufficient rank at the sink.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from .coding import (
    CodingParams,
    ForcedRowRng,
    InsufficientRankError,
    RecodeError,
    buffer_from_packets,
    recode,
    sink_decode,
    source_encode,
)
from .gf import field_for_order
from .header import AllowedSet, default_allowed_set, sparsify
from .linalg import GfMatrix, GfVector
from .packetfile import (
    PacketFileError,
    pack_symbols,
    read_packets,
    unpack_symbols,
    write_packets,
)
from .sim import EXPERIMENT_KINDS, ExperimentConfig, run_experiment, worker_count

CSV_COLUMNS = {
    "solution-existence": (
        "n", "m", "q", "k", "k_rule", "log_base", "trials",
        "success_prob", "ci", "mean_attempts", "failures", "seed",
    ),
    "full-rank": (
        "n", "m", "q", "overhead", "trials", "full_rank_prob", "ci", "seed",
    ),
    "header-table": (
        "n", "m", "q", "ssac_bits", "rlnc_bits", "ecc_bits",
        "rlnc_over_ssac", "ecc_over_ssac",
    ),
    "line-network": (
        "n", "m", "q", "overhead", "k", "depth", "source_packets", "trials",
        "decode_prob", "ci", "mean_header_bits", "failures", "seed",
    ),
}

_SIX_DIGIT = {
    "success_prob", "ci", "full_rank_prob", "decode_prob",
    "rlnc_over_ssac", "ecc_over_ssac",
}
_TWO_DIGIT = {"mean_attempts", "mean_header_bits"}


def _format_cell(column: str, value) -> str:
    if value is None:
        return ""
    if column in _SIX_DIGIT:
        return f"{value:.6f}"
    if column in _TWO_DIGIT:
        return f"{value:.2f}"
    if column == "log_base":
        return f"{value:g}"
    return str(value)


def write_csv(kind: str, records: list[dict], stream) -> None:
    columns = CSV_COLUMNS[kind]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow(_format_cell(c, rec.get(c)) for c in columns)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _base_list(text: str) -> tuple[float, ...]:
    bases = []
    for tok in text.split(","):
        if tok.strip() == "e":
            bases.append(math.e)
        else:
            try:
                bases.append(float(tok))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad log base {tok!r}")
    return tuple(bases)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssac",
        description="Sparse network coding with a small allowed-coefficient set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    exp = sub.add_parser("experiment", help="run a Monte-Carlo sweep, emit CSV")
    exp.add_argument("kind", choices=EXPERIMENT_KINDS)
    exp.add_argument("--n", type=_int_list, required=True, help="generation sizes")
    exp.add_argument("--m", type=_int_list, default=(2,), help="nonzeros per vector")
    exp.add_argument("--q", type=_int_list, default=(16, 256), help="field orders")
    exp.add_argument("--poly", type=int, help="reducing polynomial (single --q only)")
    exp.add_argument("--Q", type=_int_list, help="allowed coefficients (single --q only)")
    exp.add_argument("--k", type=_int_list, help="explicit buffer sizes")
    exp.add_argument("--k-rule", default="k-opt", help="k-opt or k-opt+<delta>")
    exp.add_argument("--log-base", type=_base_list, default=(2.0,),
                     help="bases for the k-opt rule, e.g. 2,e")
    exp.add_argument("--overhead", type=_int_list, default=(0,))
    exp.add_argument("--trials", type=int, default=1000)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--depth", type=int, default=1, help="recoding hops (line-network)")
    exp.add_argument("--out", help="CSV path (default stdout)")
    exp.add_argument("--plot-dir", help="also render PNG figures into this directory")
    exp.set_defaults(func=cmd_experiment)

    enc = sub.add_parser("encode", help="pack originals into a packet file")
    enc.add_argument("--in", dest="infile", required=True, help="raw symbol file")
    enc.add_argument("--out", required=True, help="packet file to write")
    enc.add_argument("--n", type=int, required=True)
    enc.add_argument("--m", type=int, required=True)
    enc.add_argument("--q", type=int, required=True)
    enc.add_argument("--poly", type=int)
    enc.add_argument("--Q", type=_int_list)
    enc.add_argument("--k", type=int, required=True, help="packets to emit (>= n)")
    enc.add_argument("--seed", type=int, default=0)
    enc.set_defaults(func=cmd_encode)

    rec = sub.add_parser("recode", help="append one recoded packet")
    rec.add_argument("--in", dest="infile", required=True)
    rec.add_argument("--out", required=True)
    rec.add_argument("--k-take", type=int, required=True,
                     help="buffer the first k packets of the file")
    rec.add_argument("--seed", type=int, default=0)
    rec.add_argument("--force-w", help=argparse.SUPPRESS)
    rec.set_defaults(func=cmd_recode)

    dec = sub.add_parser("decode", help="recover originals from a packet file")
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--out", required=True, help="raw symbol file to write")
    dec.set_defaults(func=cmd_decode)
    return parser


def _field_overrides(args) -> tuple[dict, dict]:
    """Per-field polynomial and allowed-set overrides for experiment runs."""
    poly_by_q: dict[int, int] = {}
    allowed_by_q: dict[int, tuple[int, ...]] = {}
    if args.poly is not None or args.Q is not None:
        if len(args.q) != 1:
            raise ValueError("--poly/--Q require a single --q value")
        if args.poly is not None:
            poly_by_q[args.q[0]] = args.poly
        if args.Q is not None:
            allowed_by_q[args.q[0]] = tuple(args.Q)
    return poly_by_q, allowed_by_q


def cmd_experiment(args) -> int:
    poly_by_q, allowed_by_q = _field_overrides(args)
    k_rule = args.k_rule
    k_values: tuple[int, ...] = ()
    if args.k:
        k_rule = "explicit"
        k_values = args.k
    cfg = ExperimentConfig(
        kind=args.kind,
        n_values=args.n,
        m_values=args.m,
        q_values=args.q,
        trials=args.trials,
        seed=args.seed,
        k_rule=k_rule,
        k_values=k_values,
        log_bases=args.log_base,
        overhead_values=args.overhead,
        depth=args.depth,
        poly_by_q=poly_by_q,
        allowed_by_q=allowed_by_q,
    )
    result = run_experiment(cfg, workers=worker_count())
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(result.kind, result.records, fh)
    else:
        write_csv(result.kind, result.records, sys.stdout)
    if args.plot_dir:
        from . import plots

        for path in plots.render(result.kind, result.records, args.plot_dir):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _params_from_args(args) -> CodingParams:
    fld = field_for_order(args.q, args.poly)
    allowed = AllowedSet(fld, args.Q) if args.Q else default_allowed_set(fld)
    return CodingParams(fld, args.n, args.m, allowed)


def cmd_encode(args) -> int:
    params = _params_from_args(args)
    with open(args.infile, "rb") as fh:
        raw = fh.read()
    width = params.field.width
    total = len(raw) * 8 // width
    if total == 0:
        raise ValueError("originals file is empty")
    if total % params.n:
        raise ValueError(
            f"file holds {total} symbols, not a multiple of n={params.n}"
        )
    symbols = unpack_symbols(width, raw, total)
    originals = GfMatrix(params.field, symbols.reshape(params.n, total // params.n))
    rng = np.random.default_rng(args.seed)
    packets = source_encode(params, originals, args.k, rng)
    write_packets(args.out, params, packets)
    return 0


def cmd_recode(args) -> int:
    params, packets = read_packets(args.infile)
    if args.k_take > len(packets):
        raise ValueError(
            f"--k-take {args.k_take} exceeds the {len(packets)} packets available"
        )
    buffer = buffer_from_packets(params, packets[: args.k_take])
    if args.force_w:
        dense = GfVector(params.field, _int_list(args.force_w))
        row = sparsify(dense, params.allowed, params.m)
        if row is None:
            raise ValueError("--force-w is not an admissible sparse vector")
        rng = ForcedRowRng(row)
    else:
        rng = np.random.default_rng(args.seed)
    outcome = recode(buffer, rng)
    write_packets(args.out, params, packets + [outcome.packet])
    return 0


def cmd_decode(args) -> int:
    params, packets = read_packets(args.infile)
    originals = sink_decode(params, packets)
    with open(args.out, "wb") as fh:
        fh.write(pack_symbols(params.field.width, originals.data))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RecodeError as exc:
        print(f"recode failed after {exc.attempts} attempts", file=sys.stderr)
        return 3
    except InsufficientRankError as exc:
        print(f"rank {exc.rank} of {exc.needed} needed to decode", file=sys.stderr)
        return 4
    except (PacketFileError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
