"""Command-line entry point: ``fanopic <verify|report|cohomology|stabilizer|smooth>``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .cones import symmetry_group
from .geometry import MultiHomogeneousVariety, MultiProjectiveSpace, smoothness_certificate
from .glattice import GLattice, first_cohomology
from .matgroup import PRETTY, generate_closure, identify_structure, enumerate_subgroups, permutation_matrices
from .polyring import ChartTimeout, is_prime
from .registry import (
    DEFAULT_PRIMES,
    ParseError,
    ValidationError,
    VerificationReport,
    VerifyConfig,
    find_record,
    load_registry,
    render_table,
    verify_all,
)
from .registry.render import KINDS
from .registry.verify import (
    _build_context,
    check_group_structure,
    check_invariance,
    check_picard_action,
    check_smoothness,
    primes_for_field,
)

DEFAULT_OUT = "fanopic-reports.json"
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Command:
    subcommand: str
    families: list[str] = field(default_factory=list)
    all: bool = False
    primes: tuple[int, ...] = DEFAULT_PRIMES
    timeout_secs: float | None = 30.0
    jobs: int = 1
    kind: str = "summary"
    out: str = DEFAULT_OUT
    adhoc: str | None = None
    seed: int = 0
    random_modules: int = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not ps:
        raise argparse.ArgumentTypeError("at least one prime is required")
    bad = [p for p in ps if not is_prime(p)]
    if bad:
        raise argparse.ArgumentTypeError(f"{bad[0]} is not prime")
    return ps


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fanopic", description="Exact checks of Picard-lattice automorphism data for Fano threefolds.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, families=True):
        if families:
            sp.add_argument("--family", action="append", default=[], help="family id such as 2.32 (repeatable)")
            sp.add_argument("--all", action="store_true", help="every family in the registry")
        sp.add_argument("--primes", type=_prime_list, default=DEFAULT_PRIMES,
                        help="comma-separated primes for modular checks (default 10007,10009,10037)")
        sp.add_argument("--timeout-secs", type=float, default=30.0, help="Groebner budget per computation")
        sp.add_argument("--out", default=DEFAULT_OUT, help=f"report JSON path (default {DEFAULT_OUT})")

    v = sub.add_parser("verify", help="run every applicable check and write the report JSON")
    common(v)
    v.add_argument("--jobs", type=_positive_int, default=1, help="concurrent family verifications")

    r = sub.add_parser("report", help="render a table from a report JSON")
    r.add_argument("--kind", choices=KINDS, default="summary")
    r.add_argument("--out", default=DEFAULT_OUT, help="report JSON to read")

    c = sub.add_parser("cohomology", help="H1 of the realized group and all its subgroups")
    common(c)
    c.add_argument("--random", dest="random_modules", type=int, default=0,
                   help="also test this many random permutation modules")
    c.add_argument("--seed", type=int, default=0, help="seed for --random")

    s = sub.add_parser("stabilizer", help="symmetry group of the nef cone fixing -K")
    common(s)

    m = sub.add_parser("smooth", help="smoothness certificates for registry varieties or an ad hoc file")
    common(m)
    m.add_argument("--adhoc", help="file with 'factor <vars>' lines followed by one equation per line")
    return p


def parse_args(argv: Sequence[str]) -> Command:
    ns = build_parser().parse_args(list(argv))
    cmd = Command(ns.subcommand)
    for name in ("all", "primes", "timeout_secs", "jobs", "kind", "out", "adhoc", "seed", "random_modules"):
        if hasattr(ns, name):
            setattr(cmd, name, getattr(ns, name))
    cmd.families = list(getattr(ns, "family", []) or [])
    if cmd.timeout_secs is not None and cmd.timeout_secs <= 0:
        cmd.timeout_secs = None
    needs_target = cmd.subcommand in ("verify", "cohomology", "stabilizer") or (
        cmd.subcommand == "smooth" and not cmd.adhoc)
    if needs_target and not (cmd.families or cmd.all):
        if not (cmd.subcommand == "cohomology" and cmd.random_modules):
            raise UsageError("choose --family <id> or --all")
    if cmd.families and cmd.all:
        raise UsageError("--family and --all are exclusive")
    return cmd


def _config(cmd: Command) -> VerifyConfig:
    return VerifyConfig(primes=cmd.primes, budget=cmd.timeout_secs, jobs=cmd.jobs)


def _select(cmd: Command):
    records = load_registry()
    if cmd.all:
        return records
    return [find_record(records, f) for f in cmd.families]


def _write_json(path: str, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def _cmd_verify(cmd: Command) -> int:
    reports = verify_all(_select(cmd), _config(cmd))
    _write_json(cmd.out, [r.to_json() for r in reports])
    sys.stdout.write(render_table(reports, "summary"))
    for r in reports:
        for name, c in r.checks.items():
            if c.verdict == "FAIL":
                print(f"{r.family} {name}: {'; '.join(c.details)}", file=sys.stderr)
    if any(r.operational_error for r in reports):
        return EXIT_ERROR
    return EXIT_FAIL if any(r.overall == "FAIL" for r in reports) else EXIT_OK


def _cmd_report(cmd: Command) -> int:
    try:
        data = json.loads(Path(cmd.out).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read reports from {cmd.out}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    reports = [VerificationReport.from_json(d) for d in data]
    sys.stdout.write(render_table(reports, cmd.kind))
    return EXIT_FAIL if any(r.overall == "FAIL" for r in reports) else EXIT_OK


def _realized_group(rec, cmd: Command):
    ctx = _build_context(rec, _config(cmd))
    if rec.centers:
        check_invariance(ctx)
    check_picard_action(ctx)
    check_group_structure(ctx)
    return ctx.group


def random_permutation_module(rng: random.Random, max_order: int = 24, max_rank: int = 5):
    """Closure of one or two random permutation matrices of degree at most ``max_rank``."""
    while True:
        n = rng.randint(1, max_rank)
        perms = []
        for _ in range(rng.randint(1, 2)):
            p = list(range(n))
            rng.shuffle(p)
            perms.append(p)
        G = generate_closure(permutation_matrices(perms), rank=n)
        if G.order <= max_order:
            return G


def _cmd_cohomology(cmd: Command) -> int:
    failed = False
    for rec in _select(cmd) if (cmd.families or cmd.all) else []:
        G = _realized_group(rec, cmd)
        if G is None:
            print(f"{rec.id}: no realized group")
            continue
        subs = enumerate_subgroups(G)
        bad = [H for H in subs if first_cohomology(GLattice(H))]
        print(f"{rec.id}: {len(subs)} subgroups, H1 {'nonzero for ' + str(len(bad)) if bad else 'trivial for all'}")
        failed |= bool(bad)
    if cmd.random_modules:
        rng = random.Random(cmd.seed)
        bad = 0
        for _ in range(cmd.random_modules):
            G = random_permutation_module(rng)
            bad += bool(first_cohomology(GLattice(G)))
        print(f"random permutation modules: {cmd.random_modules - bad}/{cmd.random_modules} with H1 = 0")
        failed |= bool(bad)
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_stabilizer(cmd: Command) -> int:
    failed = False
    for rec in _select(cmd):
        if rec.nef is None:
            print(f"{rec.id}: no nef data")
            continue
        S = symmetry_group(rec.nef["rays"], rec.nef["anticanonical"])
        tag = identify_structure(S)
        line = f"{rec.id}: order {S.order}, {PRETTY.get(tag.name, tag.name)}"
        if rec.has_realized_group:
            G = _realized_group(rec, cmd)
            inside = G is not None and all(m in S for m in G.elements)
            line += ", realized group contained" if inside else ", realized group NOT contained"
            failed |= not inside
        print(line)
    return EXIT_FAIL if failed else EXIT_OK


def read_adhoc(path: str) -> MultiHomogeneousVariety:
    factors, eqs = [], []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("factor "):
            factors.append(tuple(line.split()[1:]))
        else:
            eqs.append(line)
    if not factors or not eqs:
        raise ParseError(path, "need at least one 'factor' line and one equation")
    return MultiHomogeneousVariety.from_strings(MultiProjectiveSpace(tuple(factors)), eqs, name=Path(path).name)


def _certify(V, label: str, cmd: Command) -> bool:
    primes = primes_for_field(V.field, cmd.primes)
    cert = smoothness_certificate(V, primes, label, cmd.timeout_secs)
    print(f"{label}: {cert.verdict}" + (f" ({cert.note})" if cert.note else ""))
    return cert.certified


def _cmd_smooth(cmd: Command) -> int:
    ok = True
    if cmd.adhoc:
        ok &= _certify(read_adhoc(cmd.adhoc), cmd.adhoc, cmd)
    if cmd.families or cmd.all:
        for rec in _select(cmd):
            res = check_smoothness(_build_context(rec, _config(cmd)))
            print(f"{rec.id}: {res.verdict}; " + "; ".join(res.details))
            ok &= res.verdict != "FAIL"
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "verify": _cmd_verify,
    "report": _cmd_report,
    "cohomology": _cmd_cohomology,
    "stabilizer": _cmd_stabilizer,
    "smooth": _cmd_smooth,
}


def execute(cmd: Command) -> int:
    try:
        return COMMANDS[cmd.subcommand](cmd)
    except KeyError as exc:
        print(f"unknown family {exc.args[0]}", file=sys.stderr)
    except (ParseError, ValidationError, OSError, ChartTimeout) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
