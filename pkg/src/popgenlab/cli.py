"""Command-line front door.

Subcommands: simulate (one trajectory), batch (Monte Carlo studies),
analyze (derived statistics for one tally), serve (HTTP session service +
lab UI) and export (saved session to ledger CSV).

Exit codes: 0 success, 1 usage problems, 2 runtime failures. Stochastic
subcommands print the seed they used on stderr so any run can be
reproduced exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .engine import (
    DETERMINISTIC,
    STOCHASTIC,
    ExperimentKind,
    SimulationParams,
    run_trajectory_from_frequency,
)
from .errors import PopGenError, ValidationError
from .genetics import GenotypeCounts
from .rng import fresh_seed
from .session import (
    GenerationRecord,
    SCHEMA_VERSION,
    SOURCE_MANUAL,
    derive_counts_row,
    export_csv,
    record_payload,
    records_to_csv,
    session_from_document,
    trajectory_csv,
    trajectory_payload,
)
from .stats import fixation_study, lln_study
from .store import SessionStore

KIND_ALIASES = {
    "ideal": ExperimentKind.IDEAL_COUNTING,
    **{k.value: k for k in ExperimentKind},
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _kind(text: str) -> ExperimentKind:
    try:
        return KIND_ALIASES[text]
    except KeyError:
        valid = ", ".join(sorted(KIND_ALIASES))
        raise argparse.ArgumentTypeError(f"unknown kind {text!r} (choose from {valid})") from None


def _fitness(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("fitness must be three comma-separated values wAA,wAa,waa")
    try:
        return tuple(float(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"fitness values must be numbers, got {text!r}") from None


def _counts(text: str) -> GenotypeCounts:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("counts must be three comma-separated integers D,H,R")
    try:
        d, h, r = (int(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"counts must be integers, got {text!r}") from None
    return GenotypeCounts(AA=d, Aa=h, aa=r)


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}") from None


def _write(data: bytes, path: str | None) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else fresh_seed()
    mode = args.mode
    if mode is None:
        mode = DETERMINISTIC if args.kind is ExperimentKind.AUTOMATED else STOCHASTIC
    params = SimulationParams(
        kind=args.kind,
        n=args.n,
        fitness=args.fitness,
        migration_rate=args.m,
        migrant_freq=args.pm,
        generations=args.generations,
        seed=seed,
        mode=mode,
        p0=args.p0,
    )
    print(f"seed: {seed}", file=sys.stderr)
    trajectory = run_trajectory_from_frequency(args.p0, params)
    if args.format == "json":
        data = (json.dumps(trajectory_payload(trajectory), indent=2) + "\n").encode()
    else:
        data = trajectory_csv(trajectory)
    _write(data, args.output)
    return 0


def cmd_batch(args) -> int:
    seed = args.seed if args.seed is not None else fresh_seed()
    print(f"seed: {seed}", file=sys.stderr)
    if args.study == "lln":
        if args.sizes is None:
            raise ValidationError({"sizes": "the lln study needs --sizes"})
        report = lln_study(args.sizes, args.replicates, args.p0, seed)
    else:
        report = fixation_study(args.p0, args.n, args.replicates, args.max_generations, seed)
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "study": report.study,
            "p0": report.p0,
            "seed": report.seed,
            "rows": [dataclasses.asdict(r) for r in report.rows],
        }
        data = (json.dumps(doc, indent=2) + "\n").encode()
    else:
        data = report.to_csv().encode()
    _write(data, args.output)
    return 0


def cmd_analyze(args) -> int:
    counts = args.counts
    derived = derive_counts_row(counts)
    record = GenerationRecord(t=0, source=SOURCE_MANUAL, counts=counts, derived=derived)
    if args.format == "json":
        data = (json.dumps(record_payload(record), indent=2) + "\n").encode()
    elif args.format == "csv":
        data = records_to_csv([record])
    else:
        chi = derived.chi_square
        lines = [
            f"counts: AA={counts.AA} Aa={counts.Aa} aa={counts.aa} (N={counts.n})",
            f"gene counting:      p={derived.counting.p:.12g} q={derived.counting.q:.12g}",
            f"square-root method: p={derived.sqrt.p:.12g} q={derived.sqrt.q:.12g} "
            f"residual={derived.sqrt.residual:.12g}",
            f"genotype frequencies: fAA={derived.genotype.AA:.12g} "
            f"fAa={derived.genotype.Aa:.12g} faa={derived.genotype.aa:.12g}",
            f"HW expected counts: AA={derived.expected.AA:.12g} "
            f"Aa={derived.expected.Aa:.12g} aa={derived.expected.aa:.12g}",
            f"chi-square: statistic={chi.statistic:.12g} df={chi.df} p={chi.p_value:.12g}"
            + (" [low expected counts]" if chi.low_expected_warning else ""),
        ]
        data = ("\n".join(lines) + "\n").encode()
    _write(data, args.output)
    return 0


def cmd_export(args) -> int:
    try:
        doc = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"error: {args.input} is not valid JSON: {exc}", file=sys.stderr)
        return 2
    session = session_from_document(doc)
    _write(export_csv(session), args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    static_dir = args.static_dir
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        candidates = [Path("frontend/dist"), bundled]
        static_dir = next((str(p) for p in candidates if p.is_dir()), None)
    store = SessionStore(args.store_dir) if args.store_dir else SessionStore()
    app = create_app(store=store, static_dir=static_dir)
    try:
        uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"error: could not serve on {args.bind}:{args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="popgenlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one trajectory and write it out")
    sim.add_argument("--kind", type=_kind, required=True)
    sim.add_argument("--n", type=int, default=50, help="population size (default 50)")
    sim.add_argument("--generations", type=int, default=10)
    sim.add_argument("--seed", type=int, default=None, help="64-bit seed (default: random, printed)")
    sim.add_argument("--fitness", type=_fitness, default=(1.0, 1.0, 1.0), metavar="wAA,wAa,waa")
    sim.add_argument("--m", type=float, default=0.0, help="migration rate")
    sim.add_argument("--pm", type=float, default=0.5, help="migrant A frequency")
    sim.add_argument("--p0", type=float, default=0.5, help="starting A frequency")
    sim.add_argument("--mode", choices=(STOCHASTIC, DETERMINISTIC), default=None)
    sim.add_argument("--output", default=None, help="file path (default: stdout)")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.set_defaults(func=cmd_simulate)

    batch = sub.add_parser("batch", help="Monte Carlo studies over many seeds")
    batch.add_argument("--study", choices=("lln", "fixation"), required=True)
    batch.add_argument("--p0", type=float, default=0.5)
    batch.add_argument("--replicates", type=int, default=1000)
    batch.add_argument("--sizes", type=_sizes, default=None, metavar="N1,N2,...", help="lln population sizes")
    batch.add_argument("--n", type=int, default=10, help="fixation population size")
    batch.add_argument("--max-generations", type=int, default=1000)
    batch.add_argument("--seed", type=int, default=None)
    batch.add_argument("--output", default=None)
    batch.add_argument("--format", choices=("csv", "json"), default="csv")
    batch.set_defaults(func=cmd_batch)

    ana = sub.add_parser("analyze", help="derived statistics for one genotype tally")
    ana.add_argument("--counts", type=_counts, required=True, metavar="D,H,R")
    ana.add_argument("--output", default=None)
    ana.add_argument("--format", choices=("text", "json", "csv"), default="text")
    ana.set_defaults(func=cmd_analyze)

    srv = sub.add_parser("serve", help="run the HTTP session service and lab UI")
    srv.add_argument("--bind", default=os.environ.get("POPGENLAB_BIND", "127.0.0.1"))
    srv.add_argument("--port", type=int, default=int(os.environ.get("POPGENLAB_PORT", "8000")))
    srv.add_argument("--store-dir", default=None, help="persist sessions to this directory")
    srv.add_argument("--static-dir", default=None, help="lab UI bundle (default: frontend/dist)")
    srv.set_defaults(func=cmd_serve)

    exp = sub.add_parser("export", help="saved session document to ledger CSV")
    exp.add_argument("--input", required=True, help="session JSON document")
    exp.add_argument("--output", default=None)
    exp.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PopGenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
