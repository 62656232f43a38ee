"""Command line: ``nonef {xi,replay,cremona,dim,verify}``.

Exit codes: 0 verified, 1 inconclusive or mismatch, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import secrets
import sys
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Sequence

import flint

from . import __version__
from .cremona import CremonaError, reduce_chain
from .lattice import LatticeError, format_class, parse_class, xi_class
from .oracle import EMPTY, EXACT, InterpolationProblem, ProblemError, certify, verify_certificate
from .oracle.certify import CERT_FORMAT
from .replay import (
    REPORT_FORMAT,
    check_theorem_bc,
    expected_xi_dimension,
    lemma_report,
    replay_from_parameters,
    replay_induction,
    replay_m2,
)

log = logging.getLogger("nonef")

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
SEED_ENV = "NONEF_SEED"


@dataclass
class RunConfig:
    seed: int
    primes: int = 3
    out: str | None = None
    verbosity: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        seed = args.seed
        if seed is None:
            env = os.environ.get(SEED_ENV)
            seed = int(env) if env else secrets.randbits(63)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return cls(seed=seed, primes=args.primes, out=args.out, verbosity=0 if args.quiet else 1)


def _emit(text: str, config: RunConfig) -> None:
    if config.out is None:
        sys.stdout.write(text)
        return
    target = Path(config.out)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _say(config: RunConfig, message: str) -> None:
    if config.verbosity:
        print(message, file=sys.stderr)


def _certificate_text(cert, config: RunConfig, extra: dict[str, Any] | None = None) -> str:
    data = cert.to_dict()
    data["config"] = asdict(config)
    if extra:
        data.update(extra)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def cmd_xi(args: argparse.Namespace, config: RunConfig) -> int:
    cls = xi_class(args.d, args.m, args.k)
    expected = expected_xi_dimension(args.d, args.m, args.k)
    cert = certify(InterpolationProblem.from_class(cls), config.seed, config.primes)
    _emit(_certificate_text(cert, config, {"class": format_class(cls, compact=True), "expected_dim": expected}), config)
    dims = ", ".join(f"rank {r.rank}/{r.monomials} @p={r.prime}" for r in cert.runs)
    _say(config, f"{format_class(cls, compact=True)}: {cert.verdict} ({dims}), seed {config.seed}")
    if cert.verdict == EMPTY and expected == -1:
        return EXIT_OK
    if cert.verdict == EXACT and cert.dim == expected:
        return EXIT_OK
    return EXIT_FAIL


def cmd_replay(args: argparse.Namespace, config: RunConfig) -> int:
    if args.mode == "m2":
        report = replay_m2(args.d, args.k, lemma_oracle=args.lemma, seed=config.seed)
    elif args.mode == "induction":
        report = replay_induction(args.d, args.m, args.k, seed=config.seed, primes=config.primes)
    elif args.mode == "lemma":
        report = lemma_report(args.n, args.t, seed=config.seed)
    else:
        report = check_theorem_bc(args.d, args.k, seed=config.seed, primes=config.primes)
    _emit(report.to_text(asdict(config)), config)
    _say(config, f"replay {args.mode}: {report.conclusion}")
    return EXIT_OK if report.verified else EXIT_FAIL


def cmd_cremona(args: argparse.Namespace, config: RunConfig) -> int:
    cls = parse_class(args.cls)
    terminal, steps = reduce_chain(cls, args.strategy)
    print(format_class(terminal.stripped()))
    sys.stdout.write(steps.to_text())
    return EXIT_OK


def cmd_dim(args: argparse.Namespace, config: RunConfig) -> int:
    if args.cls is not None:
        problem = InterpolationProblem.from_class(parse_class(args.cls))
    elif args.file is not None:
        problem = InterpolationProblem.from_dict(json.loads(Path(args.file).read_text(encoding="utf-8")))
    else:
        raise ProblemError("give a problem file or --class")
    cert = certify(problem, config.seed, config.primes, witness=args.witness)
    _emit(_certificate_text(cert, config), config)
    _say(config, f"{cert.verdict}: dim in [{cert.dim_lower}, {cert.dim_upper}]")
    return EXIT_OK if cert.verdict in (EMPTY, EXACT) else EXIT_FAIL


def _load_artifact(path: str) -> tuple[str, Any]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        lines = text.splitlines()
        header = json.loads(lines[0])
        if header.get("format") != REPORT_FORMAT:
            raise ValueError("unknown artifact format") from None
        return "report", (header, text)
    if data.get("format") != CERT_FORMAT:
        raise ValueError("unknown artifact format")
    return "certificate", data


def compare_records(recorded: list[str], fresh: list[str]) -> tuple[bool, str]:
    """Line-by-line comparison of report records after the header."""
    for lineno, (old, new) in enumerate(zip(recorded, fresh), 2):
        if old != new:
            return False, f"line {lineno} differs:\n  recorded   {old}\n  recomputed {new}"
    if len(recorded) != len(fresh):
        return False, f"{len(recorded)} records recorded, {len(fresh)} recomputed"
    return True, ""


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        kind, payload = _load_artifact(args.path)
    except (OSError, ValueError, IndexError) as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if kind == "certificate":
        ok, why = verify_certificate(payload)
    else:
        header, text = payload
        recorded = text.splitlines()[1:]
        fresh = replay_from_parameters(header["mode"], header["parameters"]).to_text().splitlines()[1:]
        ok, why = compare_records(recorded, fresh)
    if ok:
        _say(config, f"{args.path}: reproduced")
        return EXIT_OK
    print(f"{args.path}: mismatch: {why}", file=sys.stderr)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"64-bit seed (default ${SEED_ENV} or OS entropy)")
    common.add_argument("--primes", type=int, default=3, help="independent primes per oracle call")
    common.add_argument("--out", default=None, help="write the artifact here instead of stdout")
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--threads", type=int, default=1, help="FLINT worker threads; never affects results")

    parser = argparse.ArgumentParser(prog="nonef", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xi", parents=[common], help="certify k*xi_{d,m}")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("replay", parents=[common], help="replay the proof bookkeeping")
    p.add_argument("mode", choices=["m2", "induction", "lemma", "bc"])
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--lemma", action="store_true", help="m2: run the lemma through the oracle where small")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("cremona", parents=[common], help="reduce a class by quadratic transformations")
    p.add_argument("cls", metavar="CLASS", help='e.g. "10;6,3^6"')
    p.add_argument("--strategy", choices=["greedy", "fixed"], default="greedy")
    p.set_defaults(func=cmd_cremona)

    p = sub.add_parser("dim", parents=[common], help="dimension certificate for an interpolation problem")
    p.add_argument("file", nargs="?", help="JSON problem file")
    p.add_argument("--class", dest="cls", help="general fat points of a class instead of a file")
    p.add_argument("--witness", default=None, help="doubled-conic or curve-power:<curve>:<t>")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("verify", parents=[common], help="re-run a certificate or report")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)
    return parser


def _check_required(args: argparse.Namespace) -> None:
    if args.command != "replay":
        return
    need = {"m2": ("d",), "induction": ("d", "m"), "lemma": ("n", "t"), "bc": ("d",)}[args.mode]
    missing = [f"--{name}" for name in need if getattr(args, name) is None]
    if missing:
        raise ValueError(f"replay {args.mode} needs {', '.join(missing)}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        _check_required(args)
        config = RunConfig.from_args(args)
        flint.ctx.threads = max(1, args.threads)
        return args.func(args, config)
    except (LatticeError, CremonaError, ProblemError, ValueError, KeyError, OverflowError) as exc:
        print(f"nonef: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
