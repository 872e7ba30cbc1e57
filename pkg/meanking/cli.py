"""Command-line front end.

    python main.py verify   --dim 5 --suite all
    python main.py geometry --dim 3 --out incidence.csv
    python main.py mkp      --dim 5 --king-basis 3 --exhaustive
    python main.py track    --dim 5 --line 1,2 --king-basis 3 --seed 7 --trials 1000
    python main.py channel  --dim 5 --line 0,0 --rounds 100 --seed 11

Reports go to stdout (or --out), logs to stderr. Exit codes: 0 success,
1 verification or inference failure, 2 usage error.
"""

import argparse
import contextlib
import csv
import json
import logging
import sys
from typing import IO, Any, Dict, Iterator, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from meanking.checks import SUITE_ALL, SUITE_NAMES, SweepController, run_suites
from meanking.config import get_settings
from meanking.errors import InvalidLabelError, MeanKingError
from meanking.finitefield import PrimeDim, is_valid_dim
from meanking.geometry import INCIDENCE_HEADER, Line, audit_dapg, incidence_rows, make_line
from meanking.mub import BasisLabel, all_basis_labels, parse_basis_label
from meanking.protocol import (
    Exhaustive,
    Mode,
    Sampled,
    Transcript,
    random_message,
    run_channel,
    run_mkp,
    run_tracking,
    summarize_channel,
    summarize_mkp,
    summarize_tracking,
)
from meanking.records import basis_token, transcript_record

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"

TRANSCRIPT_HEADER = [
    "dim", "variant", "prepared", "king_basis", "king_outcome", "control", "inference", "probability",
]

OutputFormat = Literal["json", "csv", "text"]


class RunConfig(BaseModel):
    """Validated command-line arguments."""

    model_config = ConfigDict(frozen=True)

    command: Literal["verify", "geometry", "mkp", "track", "channel"]
    dim: int = 3
    tolerance: float = Field(default=1e-10, gt=0)
    seed: Optional[int] = None
    output_format: Optional[OutputFormat] = None
    out: Optional[str] = None
    progress: bool = False
    # command-specific
    suite: str = SUITE_ALL
    audit_out: Optional[str] = None
    king_basis: Optional[str] = None
    line: Optional[str] = None
    exhaustive: bool = False
    trials: int = Field(default=1, ge=1)
    message: Optional[str] = None
    rounds: Optional[int] = Field(default=None, ge=1)

    @field_validator("dim")
    @classmethod
    def _odd_prime(cls, value: int) -> int:
        if not is_valid_dim(value):
            raise ValueError(f"dimension {value} is not an odd prime (confined to d=p != 2)")
        return value

    @field_validator("suite")
    @classmethod
    def _known_suite(cls, value: str) -> str:
        if value not in SUITE_NAMES + [SUITE_ALL]:
            raise ValueError(f"unknown suite {value!r}")
        return value

    @property
    def prime(self) -> PrimeDim:
        return PrimeDim(self.dim)

    def format_or(self, default: OutputFormat) -> OutputFormat:
        return self.output_format or default

    def mode(self) -> Mode:
        if self.exhaustive or self.seed is None:
            return Exhaustive()
        return Sampled(seed=self.seed, trials=self.trials)


# ============================================================================
# PARSER
# ============================================================================


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=3, help="Odd prime qudit dimension.")
    p.add_argument("--tol", type=float, default=None, help="Numerical tolerance (default MEANKING_TOL or 1e-10).")
    p.add_argument("--seed", type=int, default=None, help="Seed for sampled runs.")
    p.add_argument("--format", dest="output_format", choices=["json", "csv", "text"], default=None)
    p.add_argument("--out", default=None, help="Write the report here instead of stdout.")
    p.add_argument("--verbosity", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)
    p.add_argument("--progress", action="store_true", help="Show a progress bar on stderr.")


def _add_protocol(p: argparse.ArgumentParser) -> None:
    p.add_argument("--king-basis", default=None, help="'dd0' or 0..d-1; every basis when omitted.")
    p.add_argument("--exhaustive", action="store_true", help="Enumerate every branch (default without --seed).")
    p.add_argument("--trials", type=int, default=1, help="Sampled rounds per King basis.")


def create_cli_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanking",
        description="Mean King and Tracking-the-King simulations over prime-dimension qudits.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run verification suites.")
    _add_common(verify)
    verify.add_argument("--suite", default=SUITE_ALL, help=f"One of {', '.join(SUITE_NAMES)} or {SUITE_ALL}.")

    geometry = sub.add_parser("geometry", help="Dump the line/point incidence table.")
    _add_common(geometry)
    geometry.add_argument("--audit-out", default=None, help="Also write the audit report as JSON here.")

    mkp = sub.add_parser("mkp", help="Mean King retrodiction.")
    _add_common(mkp)
    _add_protocol(mkp)

    track = sub.add_parser("track", help="Track the King's basis from a line state.")
    _add_common(track)
    _add_protocol(track)
    track.add_argument("--line", required=True, help="Prepared line as 'mddot,m0'.")

    channel = sub.add_parser("channel", help="Send a basis message over chained tracking rounds.")
    _add_common(channel)
    channel.add_argument("--line", default="0,0", help="Initial line as 'mddot,m0'.")
    group = channel.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", default=None, help="Comma-separated basis labels, e.g. dd0,3,1.")
    group.add_argument("--rounds", type=int, default=None, help="Length of a random message.")
    return parser


def parse_line(text: str, dim: PrimeDim) -> Line:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise InvalidLabelError(f"line must be 'mddot,m0', got {text!r}")
    try:
        m_ddot, m0 = (int(p) for p in parts)
    except ValueError:
        raise InvalidLabelError(f"line must be two integers, got {text!r}")
    if not (0 <= m_ddot < dim.d and 0 <= m0 < dim.d):
        raise InvalidLabelError(f"line {text!r} out of range for d={dim.d}")
    return make_line(dim, m_ddot, m0)


def _king_bases(config: RunConfig) -> List[BasisLabel]:
    if config.king_basis is None:
        return all_basis_labels(config.prime)
    return [parse_basis_label(config.king_basis, config.prime)]


# ============================================================================
# OUTPUT
# ============================================================================


@contextlib.contextmanager
def _output(config: RunConfig) -> Iterator[IO[str]]:
    if config.out is None:
        yield sys.stdout
        return
    with open(config.out, "w", encoding="utf-8", newline="") as f:
        yield f


def _transcript_row(t: Transcript) -> List[Any]:
    r = transcript_record(t)
    prepared = r.prepared if isinstance(r.prepared, str) else f"{r.prepared.mddot},{r.prepared.m0}"
    inference = r.inference.kind if r.inference.value is None else f"{r.inference.kind}:{r.inference.value}"
    return [
        r.dim, r.variant, prepared, r.king_basis, r.king_outcome,
        f"{r.control.mddot_prime},{r.control.m0_dprime}", inference,
        "" if r.probability is None else r.probability,
    ]


def _write_transcripts(
    stream: IO[str], fmt: OutputFormat, transcripts: Sequence[Transcript], summary: Dict[str, Any]
) -> None:
    if fmt == "json":
        for t in transcripts:
            stream.write(transcript_record(t).to_json() + "\n")
        stream.write(json.dumps({"summary": summary}) + "\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(TRANSCRIPT_HEADER)
        writer.writerows(_transcript_row(t) for t in transcripts)
    else:
        for t in transcripts:
            row = dict(zip(TRANSCRIPT_HEADER, _transcript_row(t)))
            stream.write(
                f"b={row['king_basis']} m={row['king_outcome']} control=[{row['control']}] "
                f"-> {row['inference']}"
                + (f" p={row['probability']}" if row["probability"] != "" else "")
                + "\n"
            )
        stream.write("summary: " + " ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    logger.info("summary: %s", summary)


# ============================================================================
# COMMANDS
# ============================================================================


def cmd_verify(config: RunConfig, controller: SweepController) -> int:
    names = [config.suite]
    results = run_suites(names, [config.dim], config.tolerance, controller)
    fmt = config.format_or("json")
    records = [r for res in results if res["ok"] for r in res["result"]["records"]]
    errors = [f"{res['suite']}: {res['error']}" for res in results if not res["ok"]]
    passed = not errors and all(r["passed"] for r in records)
    summary = {"dim": config.dim, "suite": config.suite, "checks": len(records),
               "failed": sum(1 for r in records if not r["passed"]), "passed": passed}
    with _output(config) as stream:
        if fmt == "json":
            for r in records:
                stream.write(json.dumps(r) + "\n")
            for e in errors:
                stream.write(json.dumps({"error": e}) + "\n")
            stream.write(json.dumps({"summary": summary}) + "\n")
        elif fmt == "csv":
            writer = csv.DictWriter(stream, fieldnames=["suite", "name", "dim", "expected", "observed", "passed"],
                                    lineterminator="\n")
            writer.writeheader()
            writer.writerows(records)
        else:
            for r in records:
                status = "PASS" if r["passed"] else "FAIL"
                stream.write(f"{status} {r['suite']}/{r['name']} d={r['dim']} "
                             f"expected={r['expected']} observed={r['observed']}\n")
            for e in errors:
                stream.write(f"ERROR {e}\n")
            stream.write(f"{'PASS' if passed else 'FAIL'} {summary['checks']} checks, {summary['failed']} failed\n")
    for e in errors:
        logger.error("❌ %s", e)
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_geometry(config: RunConfig, controller: SweepController) -> int:
    report = audit_dapg(config.prime)
    fmt = config.format_or("csv")
    with _output(config) as stream:
        if fmt == "json":
            for row in incidence_rows(config.prime):
                stream.write(json.dumps(dict(zip(INCIDENCE_HEADER, row))) + "\n")
            stream.write(json.dumps({"audit": json.loads(report.to_json())}) + "\n")
        else:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(INCIDENCE_HEADER)
            writer.writerows(incidence_rows(config.prime))
            if fmt == "text":
                stream.write("\n")
                for r in report.records:
                    stream.write(f"{'PASS' if r.passed else 'FAIL'} {r.name} expected={r.expected} observed={r.observed}\n")
    if config.audit_out:
        with open(config.audit_out, "w", encoding="utf-8") as f:
            f.write(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAILURE


def _sweep(config: RunConfig, controller: SweepController, run) -> List[Transcript]:
    """Run one protocol per King basis, in basis order."""
    bases = _king_bases(config)
    mode = config.mode()

    def job(item):
        k, b = item
        if isinstance(mode, Sampled):
            # disjoint round counters per basis
            return run(b, Sampled(mode.seed, mode.trials, offset=k * mode.trials))
        return run(b, mode)

    batches = controller.map(job, list(enumerate(bases)), desc=config.command)
    return [t for batch in batches for t in batch]


def cmd_mkp(config: RunConfig, controller: SweepController) -> int:
    transcripts = _sweep(config, controller, lambda b, mode: run_mkp(config.prime, b, mode, config.tolerance))
    summary = summarize_mkp(transcripts)
    with _output(config) as stream:
        _write_transcripts(stream, config.format_or("json"), transcripts, summary)
    return EXIT_OK if summary["accuracy"] == 1.0 else EXIT_FAILURE


def cmd_track(config: RunConfig, controller: SweepController) -> int:
    line = parse_line(config.line, config.prime)
    transcripts = _sweep(
        config, controller, lambda b, mode: run_tracking(config.prime, line, b, mode, config.tolerance)
    )
    summary = summarize_tracking(transcripts)
    with _output(config) as stream:
        _write_transcripts(stream, config.format_or("json"), transcripts, summary)
    decoded_any = any(t.correct is not None for t in transcripts)
    return EXIT_OK if not decoded_any or summary["decode_accuracy"] == 1.0 else EXIT_FAILURE


def cmd_channel(config: RunConfig, controller: SweepController) -> int:
    dim = config.prime
    line = parse_line(config.line, dim)
    seed = 0 if config.seed is None else config.seed
    if config.message is not None:
        message = [parse_basis_label(token, dim) for token in config.message.split(",") if token.strip()]
    else:
        message = random_message(dim, config.rounds, seed)
    result = run_channel(dim, message, line, seed, config.tolerance)
    summary = summarize_channel(message, result)
    summary["message"] = [basis_token(b) for b in message] if len(message) <= 64 else len(message)
    with _output(config) as stream:
        _write_transcripts(stream, config.format_or("json"), result.transcripts, summary)
    delivered = summary["rounds"] - summary["erasures"]
    return EXIT_OK if delivered == 0 or summary["decode_accuracy"] == 1.0 else EXIT_FAILURE


_COMMANDS = {
    "verify": cmd_verify,
    "geometry": cmd_geometry,
    "mkp": cmd_mkp,
    "track": cmd_track,
    "channel": cmd_channel,
}


# ============================================================================
# ENTRYPOINT
# ============================================================================


def _configure_logging(level: Optional[str]) -> None:
    level = level or get_settings().log_level
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None and k not in ("tol", "verbosity")}
    values["tolerance"] = args.tol if args.tol is not None else get_settings().tolerance
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_cli_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbosity)

    try:
        config = build_config(args)
    except ValidationError as e:
        parser.error("; ".join(err["msg"] for err in e.errors()))

    settings = get_settings()
    try:
        with SweepController(threads=settings.threads, progress=config.progress) as controller:
            return _COMMANDS[config.command](config, controller)
    except InvalidLabelError as e:
        parser.error(str(e))
    except OSError as e:
        logger.critical("❌ I/O error: %s", e)
        return EXIT_FAILURE
    except MeanKingError as e:
        logger.critical("❌ %s", e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
