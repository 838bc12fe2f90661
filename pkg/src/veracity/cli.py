"""Command line interface.

Exit codes: 0 success (warnings included), 1 usage error, 2 input parse
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from pathlib import Path

from veracity import __version__
from veracity.errors import InsufficientDataError, InvariantError, ParseError
from veracity.experiment import experiment, simulate
from veracity.ground_truth import DEFAULT_LIKE_THRESHOLD
from veracity.outcomes import parse_modes
from veracity.report import classify_records, dumps_canonical, evaluate, fmt_float, record_line
from veracity.synthesis import CasePreset, GeneratorParams, preset

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3
SEED_ENV = "VERACITY_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number pair: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="veracity", description="Signal-detection scoring of explanation Veracity.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--modes", default="restrictive,permissive,balanced",
                        help="comma list of Veracity combiners (default: all)")
    common.add_argument("--threshold", type=int, default=DEFAULT_LIKE_THRESHOLD,
                        help="minimum rating counted as liking an item's features (default 3)")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    inputs = _Parser(add_help=False)
    inputs.add_argument("--items", type=Path, required=True, help="items.tsv (item_id, feature_id)")
    inputs.add_argument("--ratings", type=Path, required=True, help="ratings.tsv (user_id, item_id, rating)")
    inputs.add_argument("--explanations", type=Path, required=True, help="explanations.jsonl")

    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, help=f"PRNG seed (fallback: ${SEED_ENV}, then 0)")

    sub.add_parser("evaluate", parents=[common, inputs], help="score an explanation log")
    sub.add_parser("classify", parents=[common, inputs], help="per-record outcome stream")

    sim = sub.add_parser("simulate", parents=[common, seeded], help="score a synthetic dataset")
    sim.add_argument("--preset", choices=[c.value for c in CasePreset], default=CasePreset.CASE4.value)
    sim.add_argument("--records", type=int, default=30)
    sim.add_argument("--fidelity-accuracy", type=_pair, metavar="Q1,Q0",
                     help="override P(claim has | has), P(claim has | lacks)")
    sim.add_argument("--attunement-accuracy", type=_pair, metavar="Q1,Q0",
                     help="override P(claim likes | liked), P(claim likes | disliked)")
    sim.add_argument("--prevalence", type=_pair, metavar="PF,PA",
                     help="override signal prevalence for fidelity and attunement")
    sim.add_argument("--save-dataset", type=Path, metavar="DIR",
                     help="write items.tsv, ratings.tsv and explanations.jsonl to DIR")

    exp = sub.add_parser("experiment", parents=[common, seeded], help="four-case replicated experiment")
    exp.add_argument("--replicates", type=int, default=30)
    exp.add_argument("--records", type=int, default=1000)
    return parser


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} is not an integer: {env!r}") from None


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise ParseError(str(path), None, f"cannot read file ({exc.strerror})") from None


def _emit(text: str, out: Path | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _run(args) -> None:
    try:
        modes = parse_modes(args.modes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not (1 <= args.threshold <= 5):
        raise UsageError("--threshold must lie in [1, 5]")

    if args.command in ("evaluate", "classify"):
        items, ratings, expl = _read(args.items), _read(args.ratings), _read(args.explanations)
        if args.command == "evaluate":
            report = evaluate(items, ratings, expl, modes, args.threshold)
            _emit(report.to_csv() if args.format == "csv" else dumps_canonical(report.to_dict()), args.out)
        else:
            _emit(_classify_text(items, ratings, expl, modes, args.threshold, args.format), args.out)
        return

    seed = resolve_seed(args.seed)
    if args.records < 1:
        raise UsageError("--records must be positive")
    if args.command == "simulate":
        params = _sim_params(args, seed)
        report, data = simulate(params, modes, args.threshold)
        if args.save_dataset is not None:
            args.save_dataset.mkdir(parents=True, exist_ok=True)
            (args.save_dataset / "items.tsv").write_text(data.items_tsv(), encoding="utf-8")
            (args.save_dataset / "ratings.tsv").write_text(data.ratings_tsv(), encoding="utf-8")
            (args.save_dataset / "explanations.jsonl").write_text(data.explanations_jsonl(), encoding="utf-8")
        _emit(report.to_csv() if args.format == "csv" else dumps_canonical(report.to_dict()), args.out)
        return

    if args.replicates < 2:
        raise UsageError("insufficient pairs: --replicates must be at least 2 for the paired t-test")
    result = experiment(args.replicates, args.records, seed, modes, args.threshold)
    if result.t_test is not None:
        t = result.t_test
        print(f"paired t-test (permissive - restrictive A'): t({t.degrees_of_freedom}) = {t.t_statistic:.4f}, "
              f"p = {t.p_value_two_sided:.4g}, mean difference = {t.mean_difference:.6f}", file=sys.stderr)
    _emit(result.to_csv() if args.format == "csv" else dumps_canonical(result.to_dict()), args.out)


def _sim_params(args, seed: int) -> GeneratorParams:
    base = preset(CasePreset(args.preset), args.records, seed)
    try:
        return GeneratorParams(
            n_records=args.records,
            fidelity_accuracy=args.fidelity_accuracy or base.fidelity_accuracy,
            attunement_accuracy=args.attunement_accuracy or base.attunement_accuracy,
            signal_prevalence=args.prevalence or base.signal_prevalence,
            seed=seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _classify_text(items, ratings, expl, modes, threshold, fmt) -> str:
    classified, _ = classify_records(items, ratings, expl, modes, threshold)
    if fmt == "json":
        return "".join(dumps_canonical(record_line(i, c), indent=None) + "\n" for i, c in enumerate(classified))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["index", "user", "item", "feature", "fidelity", "attunement", "excluded"]
    for m in modes:
        header += [f"{m.value}_{k}" for k in ("hit", "miss", "false_alarm", "correct_rejection")]
    writer.writerow(header)
    for i, c in enumerate(classified):
        line = record_line(i, c)
        row = [i, line["user"], line["item"], line["feature"], line["fidelity"],
               line["attunement"] or "excluded", str(line["excluded"]).lower()]
        for m in modes:
            mass = line["veracity"].get(m.value)
            row += ["n/a"] * 4 if mass is None else [
                fmt_float(mass[k]) for k in ("hit", "miss", "false_alarm", "correct_rejection")]
        writer.writerow(row)
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        _run(args)
    except (UsageError, InsufficientDataError, ValueError) as exc:
        print(f"veracity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"veracity: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"veracity: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
