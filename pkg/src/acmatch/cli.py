"""Command-line interface: ``acmatch match | match-many | net | bench | gen-linalg``.

Exit status is 0 on success, 1 when ``--expect-match`` is given and nothing
matched, and 2 on input errors.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
from typing import List, Optional, Sequence

from .bench import run_bench
from .discrimination import ADN, MLDN, ManyToOneMatcher
from .dot import to_dot
from .exceptions import AcmatchError, ProblemSyntaxError
from .linalg import linalg_problem
from .one_to_one import match_root
from .parsing import ProblemFile, dump_problem, parse_problem, parse_term
from .patterns import rename_variables_canonical
from .terms import Term
from .vsdn import VSDN

__all__ = ["main", "build_parser"]


class InputError(Exception):
    pass


def _sizes(text: str) -> List[int]:
    """``10,20,30`` or ``10:200:10`` (stop inclusive), or a mix of both."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                bits = [int(b) for b in part.split(":")]
                start, stop = bits[0], bits[1]
                step = bits[2] if len(bits) > 2 else 1
                if step <= 0:
                    raise ValueError
                out.extend(range(start, stop + 1, step))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acmatch", description="Associative-commutative pattern matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="match one pattern against a subject")
    p.add_argument("problem", help="problem file")
    p.add_argument("--pattern", required=True, help="pattern id")
    p.add_argument("--subject", required=True, help="subject term, or the id of a subject in the file")
    p.add_argument("--expect-match", action="store_true", help="exit with status 1 when nothing matches")

    p = sub.add_parser("match-many", help="match all patterns of a file at once")
    p.add_argument("problem")
    p.add_argument("--subject", required=True, help="subject term, or the id of a subject in the file")
    p.add_argument("--expect-match", action="store_true", help="exit with status 1 when nothing matches")

    p = sub.add_parser("net", help="build a discrimination net and export it as DOT")
    p.add_argument("problem")
    p.add_argument("--kind", choices=("vsdn", "adn", "mldn"), default="mldn")
    p.add_argument("--dot", help="output path (standard output when omitted)")

    p = sub.add_parser("bench", help="time one-to-one against many-to-one matching")
    p.add_argument("problem", help="problem file with patterns and subjects")
    p.add_argument("--sizes", type=_sizes, help="pattern subset sizes, e.g. 10,50 or 10:190:10")
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write the report here instead of standard output")

    p = sub.add_parser("gen-linalg", help="write the linear algebra benchmark problem")
    p.add_argument("--count", type=int, default=100, help="number of subjects")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", type=float, default=5.0, help="mean operand count")
    p.add_argument("--sigma", type=float, default=5 / 3, help="operand count deviation")
    p.add_argument("--out", help="output path (standard output when omitted)")
    return parser


def _load(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_problem(text)
    except ProblemSyntaxError as exc:
        raise InputError(f"{path}:{exc}") from None


def _subject(problem: ProblemFile, text: str) -> Term:
    if text in problem.subjects:
        return problem.subjects[text]
    try:
        term = parse_term(text, problem.table)
    except ProblemSyntaxError as exc:
        raise InputError(f"subject: {exc}") from None
    if not term.is_ground:
        raise InputError("subject: subjects must be ground")
    return term


def _write(text: str, path: Optional[str], out) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _cmd_match(args, out) -> int:
    problem = _load(args.problem)
    if args.pattern not in problem.patterns:
        raise InputError(f"unknown pattern {args.pattern!r}")
    subject = _subject(problem, args.subject)
    found = 0
    for sigma in match_root(subject, problem.patterns[args.pattern]):
        print(sigma, file=out)
        found += 1
    return 1 if args.expect_match and not found else 0


def _cmd_match_many(args, out) -> int:
    problem = _load(args.problem)
    subject = _subject(problem, args.subject)
    matcher = ManyToOneMatcher(problem.patterns.values()).freeze()
    rank = {pid: i for i, pid in enumerate(problem.patterns)}
    found = sorted(matcher.match(subject), key=lambda m: rank[m[0]])
    for pid, sigma in found:
        print(f"{pid} {sigma}", file=out)
    return 1 if args.expect_match and not found else 0


def _cmd_net(args, out) -> int:
    problem = _load(args.problem)
    patterns = list(problem.patterns.values())
    if args.kind == "vsdn":
        net = VSDN()
        for p in patterns:
            net.add(p)
        net.freeze()
        text = to_dot(net, "vsdn")
    else:
        net = ADN() if args.kind == "adn" else MLDN()
        for i, p in enumerate(patterns):
            renamed, _ = rename_variables_canonical(p)
            net.add_term(renamed.term, p.id if p.id is not None else i, renamed.local_guards)
        net.freeze()
        text = to_dot(net, args.kind)
    if args.dot:
        _write(text, args.dot, out)
        print(f"states {net.state_count} transitions {net.transition_count}", file=out)
    else:
        out.write(text)
    return 0


def _cmd_bench(args, out) -> int:
    problem = _load(args.problem)
    if not problem.patterns or not problem.subjects:
        raise InputError("bench needs a problem with patterns and subjects")
    if args.repetitions < 1:
        raise InputError("--repetitions must be positive")
    report = run_bench(problem, args.sizes, args.repetitions, args.seed)
    _write(report.to_csv(), args.csv, out)
    return 0


def _cmd_gen_linalg(args, out) -> int:
    if args.count < 1:
        raise InputError("--count must be positive")
    problem = linalg_problem(args.count, args.seed, (args.mu, args.sigma))
    _write(dump_problem(problem), args.out, out)
    return 0


_COMMANDS = {
    "match": _cmd_match,
    "match-many": _cmd_match_many,
    "net": _cmd_net,
    "bench": _cmd_bench,
    "gen-linalg": _cmd_gen_linalg,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args, out)
    except (InputError, AcmatchError, ValueError) as exc:
        print(f"acmatch: error: {exc}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
