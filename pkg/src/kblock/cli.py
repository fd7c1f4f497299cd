"""Command-line front end: ``kblock <subcommand> ...``.

Artifacts (automata, DOT files, reports) are written to the paths given on
the command line, or to stdout when no output path is given.  The run
summary goes to stdout as a human-readable line followed by one JSON
object; when stdout already carries the artifact the summary moves to
stderr so the artifact stays parseable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .automaton import AutomatonError, BlockAutomaton, accepts, from_text, is_deterministic, to_text
from .bwtest import bw_test
from .compaction import Step, compact_automaton
from .dfa import as_minimal_dfa, minimal_dfa_of
from .dot import emit_dot
from .regex import RegexSyntaxError, glushkov, parse
from .transition import decide_k_block, iter_candidates, k_transition_automaton, search_k

log = logging.getLogger("kblock")

DECISION_COMMANDS = {"decide", "bw-test"}


@dataclass
class RunReport:
    command: str
    result: str
    elapsed_s: float = 0.0
    output: str | None = None
    k: int | None = None
    candidates: int | None = None
    warnings: list[str] = field(default_factory=list)

    def summary(self) -> str:
        parts = [f"{self.command}: {self.result}"]
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.candidates is not None:
            parts.append(f"candidates={self.candidates}")
        if self.output:
            parts.append(f"output={self.output}")
        parts.append(f"time={self.elapsed_s:.3f}s")
        return " ".join(parts)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


class CliError(Exception):
    pass


# -- input / output -----------------------------------------------------------------


def load_language(args) -> BlockAutomaton:
    """Glushkov automaton of ``--expr`` or the automaton stored in the input file."""
    if args.expr is not None:
        return glushkov(parse(args.expr))
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return from_text(text)
    except AutomatonError as exc:
        raise CliError(f"{path}: {exc}") from exc


def render(a: BlockAutomaton, dot: bool) -> str:
    return emit_dot(a) if dot else to_text(a)


def write_artifact(text: str, path: str | None) -> bool:
    """Write to ``path`` or stdout; True if stdout was used."""
    if path is None:
        sys.stdout.write(text)
        return True
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    return False


def _positive(value: str) -> int:
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


# -- subcommands --------------------------------------------------------------------


def cmd_glushkov(args, report: RunReport) -> tuple[int, bool]:
    if args.expr is None:
        raise CliError("glushkov needs --expr")
    a = glushkov(parse(args.expr))
    report.result = "deterministic" if is_deterministic(a) else "nondeterministic"
    report.output = args.output
    return 0, write_artifact(render(a, args.dot), args.output)


def cmd_min_dfa(args, report: RunReport) -> tuple[int, bool]:
    m = minimal_dfa_of(load_language(args))
    report.result = f"{len(m.states)} states"
    report.output = args.output
    return 0, write_artifact(render(m, args.dot), args.output)


def cmd_bw_test(args, report: RunReport) -> tuple[int, bool]:
    # files are tested as given; an expression stands for its language
    a = load_language(args)
    ok, trace = bw_test(minimal_dfa_of(a) if args.expr is not None else a)
    report.result = "PASS" if ok else "FAIL"
    if args.trace:
        print(trace.render())
    return (0 if ok else 1), False


def cmd_ktrans(args, report: RunReport) -> tuple[int, bool]:
    t = k_transition_automaton(as_minimal_dfa(load_language(args)), args.k)
    report.k = args.k
    report.result = f"{len(t.transitions)} transitions"
    report.output = args.output
    return 0, write_artifact(render(t, args.dot), args.output)


def cmd_enumerate(args, report: RunReport) -> tuple[int, bool]:
    m = as_minimal_dfa(load_language(args))
    ext = "dot" if args.dot else "aut"
    count = 0
    chunks = []
    for count, cand in enumerate(iter_candidates(m, args.k), 1):
        text = render(cand, args.dot)
        if args.output:
            out = Path(args.output)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"candidate_{count:04d}.{ext}").write_text(text)
        else:
            chunks.append(f"# candidate {count}\n{text}")
        if args.max is not None and count >= args.max:
            report.warnings.append(f"stopped after {args.max} candidates")
            break
    report.k = args.k
    report.candidates = count
    report.result = f"{count} candidates"
    report.output = args.output
    if args.output:
        return 0, False
    return 0, write_artifact("\n".join(chunks), None)


def cmd_decide(args, report: RunReport) -> tuple[int, bool]:
    v = decide_k_block(load_language(args), args.k)
    report.k = args.k
    report.candidates = v.candidates_examined
    report.result = "YES" if v.answer else "NO"
    if args.trace and v.trace is not None:
        print(v.trace.render())
    if args.witness and v.witness is not None:
        write_artifact(render(v.witness, args.dot), args.witness)
        report.output = args.witness
    return (0 if v.answer else 1), False


def cmd_search_k(args, report: RunReport) -> tuple[int, bool]:
    results = search_k(load_language(args), args.max, all_k=args.all)
    for k, v in results:
        print(f"k={k}: {'YES' if v.answer else 'NO'} ({v.candidates_examined} candidates examined)")
    yes = [k for k, v in results if v.answer]
    report.result = f"YES at k={yes[0]}" if yes else f"NO up to k={args.max}"
    report.k = yes[0] if yes else None
    report.candidates = sum(v.candidates_examined for _, v in results)
    if args.report:
        from .report import write_search_report

        table, figure = write_search_report(results, args.report, title=args.expr or Path(args.input).name)
        report.output = str(figure)
        print(f"wrote {table} and {figure}")
    return (0 if yes else 1), False


def cmd_compact(args, report: RunReport) -> tuple[int, bool]:
    a = load_language(args)
    steps: list[Step] = []
    c = compact_automaton(a, steps)
    if args.steps:
        out = Path(args.steps)
        out.mkdir(parents=True, exist_ok=True)
        ext = "dot" if args.dot else "aut"
        for i, st in enumerate(steps, 1):
            (out / f"{i:02d}_{st.label}_d{st.depth}.{ext}").write_text(render(st.automaton, args.dot))
    report.result = f"{len(c.states)} states"
    report.output = args.output
    return 0, write_artifact(render(c, args.dot), args.output)


def cmd_accepts(args, report: RunReport) -> tuple[int, bool]:
    a = load_language(args)
    words = args.word if args.word is not None else [line.rstrip("\n") for line in sys.stdin]
    hits = 0
    for w in words:
        ok = accepts(a, w)
        hits += ok
        print(f"{'accept' if ok else 'reject'}\t{w}")
    report.result = f"{hits}/{len(words)} accepted"
    return 0, False


# -- parser ------------------------------------------------------------------------


def _input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", help="automaton file")
    src.add_argument("--expr", help="inline block regular expression")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kblock", description="Decide k-block determinism of regular languages.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("glushkov", help="Glushkov block automaton of an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_glushkov, input=None)

    p = sub.add_parser("min-dfa", help="canonical minimal DFA")
    _input(p)
    p.add_argument("-o", "--output")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_min_dfa)

    p = sub.add_parser("bw-test", help="run the BW-test on a block automaton")
    _input(p)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_bw_test)

    p = sub.add_parser("ktrans", help="k-transition automaton of the minimal DFA")
    _input(p)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_ktrans)

    p = sub.add_parser("enumerate", help="compact deterministic k-block candidates")
    _input(p)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("-o", "--output", help="directory for numbered candidate files")
    p.add_argument("--max", type=_positive, help="stop after this many candidates")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("decide", help="is the language k-block deterministic?")
    _input(p)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--witness", help="write the witness automaton here")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("search-k", help="decide for k = 1..max")
    _input(p)
    p.add_argument("--max", type=_positive, required=True)
    p.add_argument("--all", action="store_true", help="keep going after the first yes")
    p.add_argument("--report", metavar="DIR", help="write search_k.csv and search_k.png here")
    p.set_defaults(func=cmd_search_k)

    p = sub.add_parser("compact", help="compact a deterministic automaton passing the BW-test")
    _input(p)
    p.add_argument("-o", "--output")
    p.add_argument("--steps", metavar="DIR", help="dump every intermediate automaton here")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_compact)

    p = sub.add_parser("accepts", help="membership of words (from -w or stdin)")
    _input(p)
    p.add_argument("-w", "--word", action="append")
    p.set_defaults(func=cmd_accepts)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    report = RunReport(args.command, "")
    start = time.perf_counter()
    try:
        code, used_stdout = args.func(args, report)
    except (CliError, AutomatonError, RegexSyntaxError, ValueError, OSError) as exc:
        print(f"kblock {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report.elapsed_s = round(time.perf_counter() - start, 6)
    stream = sys.stderr if used_stdout else sys.stdout
    print(report.summary(), file=stream)
    print(report.to_json(), file=stream)
    return code


def main() -> None:
    sys.exit(run())
