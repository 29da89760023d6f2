"""Command-line surface: ``ttabma aggregate`` and ``ttabma simulate``.

Exit codes: 0 on success, 2 for malformed input or flags, 3 for
degenerate data (a single label class or a diverged fit).
"""

from __future__ import annotations

import argparse
import sys

from .data import load_csv
from .errors import NonFiniteError, SingleClassError, TtabmaError
from .report import (
    PROTOCOLS,
    render_aggregate,
    render_simulation,
    run_aggregate,
    run_simulation,
    to_json,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


def _parse_columns(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated column indices, got {text!r}"
        ) from None


def _add_protocol_flags(
    parser: argparse.ArgumentParser, default_protocol: str = "split"
) -> None:
    parser.add_argument("--mode", choices=("greedy", "full"), default="greedy")
    parser.add_argument("--protocol", choices=PROTOCOLS, default=default_protocol)
    parser.add_argument(
        "--split-fraction",
        type=float,
        default=0.5,
        help="fraction of rows used for calibration under --protocol split",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", metavar="PATH", help="also write the JSON report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttabma",
        description="Model-averaged aggregation of prediction columns",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    agg = sub.add_parser("aggregate", help="aggregate a prediction-table CSV")
    agg.add_argument("--input", required=True, metavar="CSV")
    _add_protocol_flags(agg)

    sim = sub.add_parser("simulate", help="synthetic trials comparing methods")
    sim.add_argument("--trials", type=int, default=100)
    sim.add_argument("--rows", type=int, default=200)
    sim.add_argument("--columns", type=int, default=4)
    sim.add_argument("--signal-noise", type=float, default=0.5)
    sim.add_argument(
        "--adversarial",
        type=_parse_columns,
        default=(),
        metavar="COLS",
        help="comma-separated column indices replaced by uniform noise",
    )
    sim.add_argument("--label-flip-rate", type=float, default=0.0)
    # simulate mirrors the averaging procedure as literally written, so it
    # defaults to the transductive protocol; aggregate defaults to split.
    _add_protocol_flags(sim, default_protocol="transductive")

    return parser


def _emit(report: dict, rendered: str, json_path) -> None:
    sys.stdout.write(rendered)
    if json_path:
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(to_json(report))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "aggregate":
            table = load_csv(args.input)
            report = run_aggregate(
                table,
                mode=args.mode,
                protocol=args.protocol,
                split_fraction=args.split_fraction,
                seed=args.seed,
                source=args.input,
            )
            _emit(report, render_aggregate(report), args.json)
        else:
            report = run_simulation(
                trials=args.trials,
                n_rows=args.rows,
                n_columns=args.columns,
                signal_noise=args.signal_noise,
                adversarial_columns=args.adversarial,
                label_flip_rate=args.label_flip_rate,
                seed=args.seed,
                mode=args.mode,
                protocol=args.protocol,
                split_fraction=args.split_fraction,
            )
            _emit(report, render_simulation(report), args.json)
    except (SingleClassError, NonFiniteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (TtabmaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
