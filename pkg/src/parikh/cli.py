"""Command-line front end.

Exit status: 0 success / relation holds, 1 check failed, 2 usage or parse
error, 3 extraction limit exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .automaton import build_parikh_automaton, default_k, is_cnf, size_upper_bound, state_count, vectors_up_to
from .grammar import Grammar, GrammarSyntaxError, degree, parse_grammar, trim_grammar
from .nfa import export_dot, to_letter_nfa, truncated_parikh_image
from .oracle import check_automaton, check_indexed_equivalence, check_equivalence
from .semilinear import ExtractionLimits, LimitExceeded, nfa_parikh, slset_truncate, to_bound_report

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
DEFAULT_BOUND = 8
MAX_ENUMERATED_STATES = 200_000


@dataclass(frozen=True)
class CliConfig:
    command: str
    grammar: str
    k: int | None = None
    bound: int = DEFAULT_BOUND
    format: str = "json"
    limits: ExtractionLimits = ExtractionLimits()
    cleanup: bool = False
    indexed: bool = False
    letter: bool = False

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("--bound must be non-negative")
        if self.k is not None and self.k < 1:
            raise ValueError("--k must be at least 1")


class _UsageError(Exception):
    pass


def load_grammar(cfg: CliConfig) -> Grammar:
    try:
        with open(cfg.grammar, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {cfg.grammar}: {exc.strerror}") from exc
    try:
        g = parse_grammar(text)
    except GrammarSyntaxError as exc:
        raise _UsageError(f"{cfg.grammar}: {exc}") from exc
    return trim_grammar(g) if cfg.cleanup else g


def cmd_build(cfg: CliConfig, out) -> int:
    g = load_grammar(cfg)
    m = build_parikh_automaton(g, cfg.k or default_k(g))
    if cfg.letter:
        m = to_letter_nfa(m)
    out.write(export_dot(m) if cfg.format == "dot" else m.to_json() + "\n")
    return EXIT_OK


def cmd_check(cfg: CliConfig, out) -> int:
    g = load_grammar(cfg)
    if cfg.indexed:
        report = check_indexed_equivalence(g, cfg.k or default_k(g), cfg.bound)
    elif cfg.k is not None:
        report = check_automaton(g, cfg.k, cfg.bound)
    else:
        report = check_equivalence(g, cfg.bound)
    out.write(report.to_json() + "\n")
    return EXIT_OK if report.holds else EXIT_FAILED


def cmd_semilinear(cfg: CliConfig, out) -> int:
    g = load_grammar(cfg)
    k = cfg.k or default_k(g)
    m = build_parikh_automaton(g, k)
    sl = nfa_parikh(m, cfg.limits)
    lhs = slset_truncate(sl, cfg.bound)
    rhs = truncated_parikh_image(m, cfg.bound)
    doc = {
        "terminals": list(g.terminals),
        "k": k,
        **json.loads(sl.to_json()),
        "cross_check": {
            "bound": cfg.bound,
            "equal": lhs == rhs,
            "witnesses": [list(v) for v in sorted(lhs ^ rhs)],
        },
    }
    out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if lhs == rhs else EXIT_FAILED


def stats(g: Grammar) -> dict:
    n = g.n
    d_raw = degree(g) if g.productions else None
    d = max(d_raw or 0, 0)
    k = default_k(g)
    formula = state_count(n, k)
    enumerated = len(vectors_up_to(n, k)) if formula <= MAX_ENUMERATED_STATES else None
    report = to_bound_report(g)
    return {
        "n": n,
        "t": g.t,
        "p": report.p,
        "degree": d_raw,
        "k": k,
        "states": enumerated,
        "states_formula": formula,
        "size_bound": size_upper_bound(n, d) if d >= 1 else None,
        "cnf": is_cnf(g),
        "cnf_bound": 2 ** (2 * n + 1) if d <= 1 else None,
        "to_bound": report.as_dict(),
    }


def cmd_stats(cfg: CliConfig, out) -> int:
    info = stats(load_grammar(cfg))
    if cfg.format == "json":
        out.write(json.dumps(info, indent=2) + "\n")
        return EXIT_OK
    to = info.pop("to_bound")
    for key, value in info.items():
        out.write(f"{key}: {'n/a' if value is None else value}\n")
    out.write(f"s: {to['s']}\n")
    out.write(f"ell: {to['ell']}\n")
    if to["degenerate"]:
        out.write("warning: no terminal occurs in any production (p = 0)\n")
    out.write(f"linear sets: O({to['linear_set_count_bound']})\n")
    out.write(f"max offset entry: O({to['max_offset_entry_bound']})\n")
    out.write(f"max period entry: <= {to['max_period_entry_bound']}\n")
    out.write(f"({to['note']})\n")
    return EXIT_OK


COMMANDS = {"build": cmd_build, "check": cmd_check, "semilinear": cmd_semilinear, "stats": cmd_stats}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parikh", description="Parikh-equivalent automata for context-free grammars.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("grammar", help="grammar file")
        p.add_argument("--cleanup", action="store_true", help="drop unproductive and unreachable variables first")

    p = sub.add_parser("build", help="build the k-Parikh automaton")
    common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--letter", action="store_true", help="normalize to one letter per edge")

    p = sub.add_parser("check", help="compare the grammar's and the automaton's Parikh images")
    common(p)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--k", type=int, help="automaton size instead of n*d+1")
    p.add_argument("--indexed", action="store_true", help="compare index-k derivations with the k-automaton")

    p = sub.add_parser("semilinear", help="extract the semilinear Parikh image")
    common(p)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--k", type=int)
    p.add_argument("--max-states", type=int)
    p.add_argument("--max-transitions", type=int)

    p = sub.add_parser("stats", help="sizes and bounds")
    common(p)
    p.add_argument("--format", choices=["json", "text"], default="text")
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    limits = ExtractionLimits.from_env()
    if getattr(args, "max_states", None) is not None or getattr(args, "max_transitions", None) is not None:
        limits = ExtractionLimits(
            args.max_states if args.max_states is not None else limits.max_states,
            args.max_transitions if args.max_transitions is not None else limits.max_transitions,
            limits.max_star_components,
        )
    return CliConfig(
        command=args.command,
        grammar=args.grammar,
        k=getattr(args, "k", None),
        bound=getattr(args, "bound", DEFAULT_BOUND),
        format=getattr(args, "format", "json"),
        limits=limits,
        cleanup=args.cleanup,
        indexed=getattr(args, "indexed", False),
        letter=getattr(args, "letter", False),
    )


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[cfg.command](cfg, out)
    except _UsageError as exc:
        print(f"parikh: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"parikh: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
