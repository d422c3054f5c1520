"""Context-free grammars, sentential forms and derivations.

A grammar keeps its variables and terminals in fixed, ordered tuples; every
vector produced by this package (``parikh_v``, ``parikh_t``, automaton states)
is indexed by that order.

Text format, one rule per line::

    # comment
    start: S
    S -> a S b |
    T -> b T ; U -> c

Any identifier that occurs on a left-hand side is a variable, every other
identifier is a terminal. An empty alternative is the empty word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Symbol",
    "Production",
    "Grammar",
    "Derivation",
    "GrammarSyntaxError",
    "StepError",
    "parse_grammar",
    "format_grammar",
    "degree",
    "parikh_v",
    "parikh_t",
    "project",
    "apply_step",
    "step_transition",
    "derivation_index",
    "trim_grammar",
]

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


class GrammarSyntaxError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class StepError(ValueError):
    """A production cannot be applied at the requested position."""


class Symbol(NamedTuple):
    is_var: bool
    id: int

    @classmethod
    def var(cls, i: int) -> Symbol:
        return cls(True, i)

    @classmethod
    def term(cls, i: int) -> Symbol:
        return cls(False, i)


Form = tuple  # tuple[Symbol, ...]


@dataclass(frozen=True)
class Production:
    lhs: int
    rhs: tuple[Symbol, ...] = ()

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(s.id for s in self.rhs if s.is_var)

    @property
    def terminals(self) -> tuple[int, ...]:
        return tuple(s.id for s in self.rhs if not s.is_var)


@dataclass(frozen=True)
class Grammar:
    variables: tuple[str, ...]
    terminals: tuple[str, ...]
    productions: tuple[Production, ...]
    axiom: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "productions", tuple(self.productions))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if len(set(self.terminals)) != len(self.terminals):
            raise ValueError("duplicate terminal names")
        if set(self.variables) & set(self.terminals):
            raise ValueError("variable and terminal names overlap")
        if not 0 <= self.axiom < len(self.variables):
            raise ValueError(f"axiom {self.axiom} out of range")
        for p in self.productions:
            if not 0 <= p.lhs < len(self.variables):
                raise ValueError(f"production lhs {p.lhs} out of range")
            for s in p.rhs:
                self._check_symbol(s)

    def _check_symbol(self, s: Symbol) -> None:
        limit = len(self.variables) if s.is_var else len(self.terminals)
        if not 0 <= s.id < limit:
            raise ValueError(f"symbol {s} out of range")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def t(self) -> int:
        return len(self.terminals)

    def productions_of(self, var: int) -> tuple[Production, ...]:
        return tuple(p for p in self.productions if p.lhs == var)

    def name(self, s: Symbol) -> str:
        return self.variables[s.id] if s.is_var else self.terminals[s.id]

    def symbol(self, name: str) -> Symbol:
        if name in self.variables:
            return Symbol.var(self.variables.index(name))
        if name in self.terminals:
            return Symbol.term(self.terminals.index(name))
        raise KeyError(name)

    def form(self, text: str | Sequence[str]) -> Form:
        """Sentential form from whitespace-separated symbol names."""
        names = text.split() if isinstance(text, str) else text
        return tuple(self.symbol(x) for x in names)

    def production(self, lhs: str, rhs: str = "") -> Production:
        """Look up a declared production by its names, e.g. ``("A2", "c A1")``."""
        p = Production(self.variables.index(lhs), self.form(rhs))
        if p not in self.productions:
            raise KeyError(f"{lhs} -> {rhs}")
        return p

    def word(self, ids: Iterable[int]) -> str:
        """Render a terminal word given as terminal ids.

        Names are concatenated when every terminal name is a single character.
        """
        sep = "" if all(len(x) == 1 for x in self.terminals) else " "
        return sep.join(self.terminals[i] for i in ids)

    def render(self, form: Iterable[Symbol]) -> str:
        names = [self.name(s) for s in form]
        if all(len(x) == 1 for x in self.variables + self.terminals):
            return "".join(names)
        return " ".join(names)

    def format_production(self, p: Production) -> str:
        rhs = " ".join(self.name(s) for s in p.rhs)
        return f"{self.variables[p.lhs]} -> {rhs}".rstrip()

    def __str__(self) -> str:
        return format_grammar(self)


@dataclass(frozen=True)
class Derivation:
    """A sequence of steps ``forms[0] => forms[1] => ...`` starting at the axiom.

    ``steps[i]`` is the ``(position, production)`` pair turning ``forms[i]``
    into ``forms[i + 1]``.
    """

    grammar: Grammar = field(compare=False, repr=False)
    forms: tuple[Form, ...]
    steps: tuple[tuple[int, Production], ...] = ()

    def __post_init__(self):
        g = self.grammar
        if not self.forms or self.forms[0] != (Symbol.var(g.axiom),):
            raise ValueError("derivation must start at the axiom")
        if len(self.forms) != len(self.steps) + 1:
            raise ValueError("need exactly one step between consecutive forms")
        for i, (pos, p) in enumerate(self.steps):
            if apply_step(self.forms[i], pos, p) != self.forms[i + 1]:
                raise ValueError(f"step {i} does not connect its forms")

    @classmethod
    def from_steps(cls, g: Grammar, steps: Iterable[tuple[int, Production]]) -> Derivation:
        steps = tuple(steps)
        forms = [(Symbol.var(g.axiom),)]
        for pos, p in steps:
            forms.append(apply_step(forms[-1], pos, p))
        return cls(g, tuple(forms), steps)

    @classmethod
    def leftmost(cls, g: Grammar, productions: Iterable[Production]) -> Derivation:
        """Apply each production to the leftmost variable occurrence."""
        steps = []
        form: Form = (Symbol.var(g.axiom),)
        for p in productions:
            pos = next(i for i, s in enumerate(form) if s.is_var)
            steps.append((pos, p))
            form = apply_step(form, pos, p)
        return cls.from_steps(g, steps)

    @property
    def result(self) -> Form:
        return self.forms[-1]

    def extend(self, position: int, p: Production) -> Derivation:
        nxt = apply_step(self.forms[-1], position, p)
        return Derivation(self.grammar, self.forms + (nxt,), self.steps + ((position, p),))

    def __str__(self) -> str:
        return " => ".join(self.grammar.render(f) or "ε" for f in self.forms)


# --- text format -----------------------------------------------------------


def parse_grammar(text: str) -> Grammar:
    """Parse the rule-per-line grammar format.

    Productions are grouped by left-hand side, in order of first appearance,
    keeping the input order of alternatives. Terminals are numbered by first
    appearance in that grouped order, so ``format_grammar`` round-trips.
    """
    rules: list[tuple[int, str, list[list[str]]]] = []
    start: str | None = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for chunk in stripped.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "->" not in chunk:
                if chunk.startswith("start:"):
                    if start is not None:
                        raise GrammarSyntaxError("duplicate start directive", lineno)
                    start = chunk[len("start:"):].strip()
                    if not _IDENT.match(start):
                        raise GrammarSyntaxError(f"bad start symbol {start!r}", lineno)
                    continue
                raise GrammarSyntaxError(f"expected 'LHS -> ...', got {chunk!r}", lineno)
            lhs, _, body = chunk.partition("->")
            lhs = lhs.strip()
            if not _IDENT.match(lhs):
                raise GrammarSyntaxError(f"bad left-hand side {lhs!r}", lineno)
            alts = [alt.split() for alt in body.split("|")]
            for alt in alts:
                for tok in alt:
                    if not _IDENT.match(tok):
                        raise GrammarSyntaxError(f"bad symbol {tok!r}", lineno)
            rules.append((lineno, lhs, alts))

    if not rules and start is None:
        raise GrammarSyntaxError("no rules")

    variables: list[str] = []
    for _, lhs, _ in rules:
        if lhs not in variables:
            variables.append(lhs)
    if start is not None and start not in variables:
        variables.append(start)
    var_index = {v: i for i, v in enumerate(variables)}

    grouped: dict[str, list[list[str]]] = {v: [] for v in variables}
    for _, lhs, alts in rules:
        grouped[lhs].extend(alts)

    terminals: list[str] = []
    productions = []
    for v in variables:
        for alt in grouped[v]:
            rhs = []
            for tok in alt:
                if tok in var_index:
                    rhs.append(Symbol.var(var_index[tok]))
                else:
                    if tok not in terminals:
                        terminals.append(tok)
                    rhs.append(Symbol.term(terminals.index(tok)))
            productions.append(Production(var_index[v], tuple(rhs)))

    axiom = var_index[start] if start is not None else 0
    return Grammar(tuple(variables), tuple(terminals), tuple(productions), axiom)


def format_grammar(g: Grammar) -> str:
    lines = []
    if g.axiom != 0 or not g.productions_of(g.axiom):
        lines.append(f"start: {g.variables[g.axiom]}")
    for v, name in enumerate(g.variables):
        alts = [" ".join(g.name(s) for s in p.rhs) for p in g.productions_of(v)]
        if alts:
            lines.append(f"{name} -> " + " | ".join(alts))
    return "\n".join(lines) + "\n"


# --- projections and steps -------------------------------------------------


def degree(g: Grammar) -> int:
    """One less than the largest number of variables on a right-hand side."""
    if not g.productions:
        raise ValueError("degree is undefined for a grammar without productions")
    return max(len(p.variables) for p in g.productions) - 1


def parikh_v(g: Grammar, alpha: Iterable[Symbol]) -> tuple[int, ...]:
    counts = [0] * g.n
    for s in alpha:
        if s.is_var:
            counts[s.id] += 1
    return tuple(counts)


def parikh_t(g: Grammar, alpha: Iterable[Symbol]) -> tuple[int, ...]:
    counts = [0] * g.t
    for s in alpha:
        if not s.is_var:
            counts[s.id] += 1
    return tuple(counts)


def project(alpha: Iterable[Symbol], side: str) -> Form:
    """Subsequence of ``alpha`` keeping only variables (``"V"``) or terminals (``"T"``)."""
    if side not in ("V", "T"):
        raise ValueError(f"side must be 'V' or 'T', not {side!r}")
    keep = side == "V"
    return tuple(s for s in alpha if s.is_var == keep)


def apply_step(alpha: Sequence[Symbol], position: int, p: Production) -> Form:
    alpha = tuple(alpha)
    if not 0 <= position < len(alpha):
        raise StepError(f"position {position} out of range for a form of length {len(alpha)}")
    if alpha[position] != Symbol.var(p.lhs):
        raise StepError(f"symbol at {position} is {alpha[position]}, not variable {p.lhs}")
    return alpha[:position] + p.rhs + alpha[position + 1:]


def step_transition(g: Grammar, alpha: Sequence[Symbol], position: int, p: Production):
    """The automaton transition ``(Π_V(α), γ/T, Π_V(β))`` of a single step."""
    beta = apply_step(alpha, position, p)
    return parikh_v(g, alpha), p.terminals, parikh_v(g, beta)


def derivation_index(d: Derivation) -> int:
    return max(sum(1 for s in f if s.is_var) for f in d.forms)


# --- optional cleanup ------------------------------------------------------


def trim_grammar(g: Grammar) -> Grammar:
    """Drop unproductive and unreachable variables (the axiom is always kept).

    Terminals that no longer occur are dropped too; ids are renumbered but the
    relative order of the survivors is kept.
    """
    productive: set[int] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in productive and all(v in productive for v in p.variables):
                productive.add(p.lhs)
                changed = True
    prods = [p for p in g.productions if p.lhs in productive and set(p.variables) <= productive]

    reachable = {g.axiom}
    stack = [g.axiom]
    while stack:
        v = stack.pop()
        for p in prods:
            if p.lhs == v:
                for w in p.variables:
                    if w not in reachable:
                        reachable.add(w)
                        stack.append(w)
    prods = [p for p in prods if p.lhs in reachable]

    keep_v = [v for v in range(g.n) if v in reachable]
    keep_t = sorted({i for p in prods for i in p.terminals})
    vmap = {v: i for i, v in enumerate(keep_v)}
    tmap = {v: i for i, v in enumerate(keep_t)}

    def remap(s: Symbol) -> Symbol:
        return Symbol(s.is_var, vmap[s.id] if s.is_var else tmap[s.id])

    return Grammar(
        tuple(g.variables[v] for v in keep_v),
        tuple(g.terminals[i] for i in keep_t),
        tuple(Production(vmap[p.lhs], tuple(map(remap, p.rhs))) for p in prods),
        vmap[g.axiom],
    )
