"""``tagforge`` command line: validate grammars, parse tagged sentences,
and cross-check the chart parser against the brute-force oracle.

Exit codes: 0 success, 1 no parse or oracle mismatch, 2 unreadable input
or malformed file, 3 invalid grammar, 4 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from .chart import DEFAULT_MAX_DERIVATIONS, enumerate_derivations, parse_forest
from .composition import replay_derivation
from .dependencies import mine_dependencies
from .errors import BudgetExceeded, GrammarSyntaxError, TokenFormatError, ValidationError
from .formats import (BUNDLED, bundled_grammar_text, parse_grammar_document, read_grammar,
                      read_sentences, render_deps, render_derivation, render_derived, render_dot,
                      sentence_text)
from .grammar import validate_grammar
from .oracle import HARD_CAP, OracleBudget, check_equivalence, enumerate_language, oracle_parse

OK, NO_PARSE, INPUT_ERROR, GRAMMAR_ERROR, BUDGET_ERROR = 0, 1, 2, 3, 4
FORMATS = ("derivation", "derived", "paper", "deps", "argstruct", "dot")


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _grammar_text(source: str) -> str:
    """A grammar path, or the name of a bundled grammar ("count", "count.tag")."""
    if os.path.exists(source):
        try:
            with open(source, encoding="utf-8") as fh:
                return fh.read()
        except (OSError, UnicodeDecodeError) as e:
            raise _Fail(INPUT_ERROR, f"{source}: {e}")
    name = os.path.basename(source).removesuffix(".tag")
    if name in BUNDLED and os.path.dirname(source) == "":
        return bundled_grammar_text(name)
    raise _Fail(INPUT_ERROR, f"{source}: no such grammar file")


def _load(source: str):
    text = _grammar_text(source)
    try:
        return read_grammar(text)
    except GrammarSyntaxError as e:
        raise _Fail(INPUT_ERROR, f"{source}:{e}")
    except ValidationError as e:
        raise _Fail(GRAMMAR_ERROR, "\n".join(f"{source}:{line}" for line in str(e).splitlines()))


def _sentences(path, stdin):
    if path is None:
        text = stdin.read()
        where = "<stdin>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as e:
            raise _Fail(INPUT_ERROR, f"{path}: {e}")
        where = path
    try:
        return read_sentences(text)
    except TokenFormatError as e:
        raise _Fail(INPUT_ERROR, f"{where}:{e}")


def cmd_validate(args, out, err, stdin) -> int:
    text = _grammar_text(args.grammar)
    try:
        doc = parse_grammar_document(text)
    except GrammarSyntaxError as e:
        err.write(f"{args.grammar}:{e}\n")
        return INPUT_ERROR
    diags = validate_grammar(doc.grammar)
    for d in diags:
        loc = doc.location_of(d)
        prefix = f"{loc[0]}:{loc[1]}: " if loc else ""
        out.write(f"{args.grammar}:{prefix}{d}\n")
    return GRAMMAR_ERROR if diags else OK


def _render(g, d, fmt) -> str:
    if fmt == "derivation":
        return render_derivation(d, "canonical")
    if fmt == "paper":
        return render_derivation(d, "paper")
    if fmt == "derived":
        return render_derived(replay_derivation(g, d)) + "\n"
    if fmt == "deps":
        return render_deps(mine_dependencies(g, d), "triples")
    if fmt == "argstruct":
        return render_deps(mine_dependencies(g, d), "argstruct")
    return render_dot(d)


def cmd_parse(args, out, err, stdin) -> int:
    g = _load(args.grammar)
    if args.format in ("deps", "argstruct") and not g.lexicalized:
        raise _Fail(GRAMMAR_ERROR, f"{args.grammar}: dependency output needs every tree to have an anchor")
    status = OK
    for sentence in _sentences(args.file, stdin):
        forest = parse_forest(g, sentence)
        total = forest.count()
        if not total:
            err.write(f"no parse: {sentence_text(sentence)}\n")
            status = max(status, NO_PARSE)
            continue
        ds = enumerate_derivations(forest, args.max_derivations)
        if len(ds) < total:
            err.write(f"showing {len(ds)} of {total} parses: {sentence_text(sentence)}\n")
        for k, d in enumerate(ds, 1):
            out.write(f"== parse {k}/{total} ==\n")
            out.write(_render(g, d, args.format))
    return status


def cmd_oracle(args, out, err, stdin) -> int:
    g = _load(args.grammar)
    budget = OracleBudget(args.max_ops, args.max_len, args.hard_cap)
    corpus = None
    if args.file is not None or not stdin.isatty():
        corpus = _sentences(args.file, stdin) or None
    try:
        if args.check_parser:
            report = check_equivalence(g, corpus, budget)
            for m in report.mismatches:
                out.write(f"mismatch: {m.describe()}\n")
                if m.derivation is not None:
                    out.write(render_derivation(m.derivation))
            verdict = "pass" if report.passed else f"{len(report.mismatches)} mismatches"
            err.write(f"checked {report.sentences} sentences, {report.derivations} oracle derivations: {verdict}\n")
            return OK if report.passed else NO_PARSE
        if corpus is None:
            for words in sorted({s for s, _ in enumerate_language(g, budget)}, key=lambda s: (len(s), s)):
                out.write(" ".join(words) + "\n")
            return OK
        for sentence in corpus:
            ds = oracle_parse(g, sentence, budget)
            if not ds:
                err.write(f"no derivation within budget: {sentence_text(sentence)}\n")
            for k, d in enumerate(ds, 1):
                out.write(f"== oracle {k}/{len(ds)} ==\n")
                out.write(render_derivation(d))
        return OK
    except BudgetExceeded as e:
        err.write(f"budget exceeded: {e}\n")
        return BUDGET_ERROR


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tagforge", description="Tree adjoining grammar toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a grammar file")
    v.add_argument("grammar")
    v.set_defaults(run=cmd_validate)

    ps = sub.add_parser("parse", help="parse tagged sentences")
    ps.add_argument("--grammar", required=True)
    ps.add_argument("--format", choices=FORMATS, default="derivation")
    ps.add_argument("--max-derivations", type=_positive, default=DEFAULT_MAX_DERIVATIONS)
    ps.add_argument("file", nargs="?")
    ps.set_defaults(run=cmd_parse)

    o = sub.add_parser("oracle", help="brute-force enumeration and parser cross-check")
    o.add_argument("--grammar", required=True)
    o.add_argument("--max-ops", type=_non_negative, required=True)
    o.add_argument("--max-len", type=_positive, default=32)
    o.add_argument("--hard-cap", type=_positive, default=HARD_CAP)
    o.add_argument("--check-parser", action="store_true")
    o.add_argument("file", nargs="?")
    o.set_defaults(run=cmd_oracle)
    return p


def main(argv=None, stdout=None, stderr=None, stdin=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse reports usage errors itself
        return OK if e.code == 0 else INPUT_ERROR
    try:
        return args.run(args, out, err, stdin)
    except _Fail as e:
        err.write(f"{e}\n")
        return e.code


def entry() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8", newline="\n")
    if hasattr(sys.stdin, "reconfigure"):
        sys.stdin.reconfigure(encoding="utf-8")
    sys.exit(main())
