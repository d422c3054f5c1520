"""The k-Parikh automaton of a grammar.

States are variable-count vectors whose entries sum to at most ``k``.  Each
production ``A -> γ`` moves any state holding at least one ``A`` to the state
with that ``A`` replaced by the variables of ``γ``, reading the terminals of
``γ`` as a single word.  Accepting from ``Π_V(S)`` into the zero vector means
a run visited nothing but sentential forms with at most ``k`` variables.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterator

from .grammar import Grammar, Production, Symbol, degree, parikh_v

__all__ = [
    "WordNFA",
    "vectors_up_to",
    "build_parikh_automaton",
    "state_count",
    "default_k",
    "gn_family",
    "is_cnf",
    "size_upper_bound",
    "label_string",
    "parse_label",
]

Vector = tuple  # tuple[int, ...]
Transition = tuple  # (Vector, tuple[int, ...], Vector)


@dataclass(frozen=True)
class WordNFA:
    """NFA whose edges are labelled with terminal words (tuples of terminal ids).

    ``terminals`` and ``variables`` carry names for display and export only.
    """

    states: frozenset
    transitions: frozenset
    initial: Vector
    finals: frozenset
    terminals: tuple[str, ...] = ()
    variables: tuple[str, ...] = ()
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial} is not a state")
        if not self.finals <= self.states:
            raise ValueError("final states must be states")
        for src, label, tgt in self.transitions:
            if src not in self.states or tgt not in self.states:
                raise ValueError(f"transition {(src, label, tgt)} leaves the state set")
            for a in label:
                if not 0 <= a < len(self.terminals):
                    raise ValueError(f"label {label} uses an unknown terminal")

    @property
    def num_terminals(self) -> int:
        return len(self.terminals)

    def edges(self) -> Iterator[tuple[Vector, tuple[int, ...], Vector]]:
        return iter(self.transitions)

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=lambda e: (e[0], label_string(self.terminals, e[1]), e[2]))

    def to_json(self) -> str:
        doc = {
            "variables": list(self.variables),
            "terminals": list(self.terminals),
            "k": self.k,
            "states": [list(q) for q in sorted(self.states)],
            "initial": list(self.initial),
            "finals": [list(q) for q in sorted(self.finals)],
            "transitions": [
                [list(s), label_string(self.terminals, w), list(t)]
                for s, w, t in self.sorted_transitions()
            ],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> WordNFA:
        doc = json.loads(text)
        terminals = tuple(doc["terminals"])
        return cls(
            states=frozenset(tuple(q) for q in doc["states"]),
            transitions=frozenset(
                (tuple(s), parse_label(terminals, w), tuple(t)) for s, w, t in doc["transitions"]
            ),
            initial=tuple(doc["initial"]),
            finals=frozenset(tuple(q) for q in doc["finals"]),
            terminals=terminals,
            variables=tuple(doc.get("variables", ())),
            k=doc.get("k"),
        )


def label_string(terminals: tuple[str, ...], word: tuple[int, ...]) -> str:
    """Concatenate terminal names; space-separated if any name is longer than one character."""
    sep = "" if all(len(x) == 1 for x in terminals) else " "
    return sep.join(terminals[a] for a in word)


def parse_label(terminals: tuple[str, ...], text: str) -> tuple[int, ...]:
    names = list(text) if all(len(x) == 1 for x in terminals) else text.split()
    return tuple(terminals.index(x) for x in names)


def vectors_up_to(n: int, k: int) -> list[Vector]:
    """All vectors in N^n with entry sum at most k, in lexicographic order."""
    if n == 0:
        return [()]
    return [v for v in cartesian(range(k + 1), repeat=n) if sum(v) <= k]


def build_parikh_automaton(g: Grammar, k: int) -> WordNFA:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    n = g.n
    states = vectors_up_to(n, k)
    delta = set()
    # Π_V of the source alone decides the step's transition, so iterating
    # (production, state) pairs enumerates every step-induced transition.
    for p in g.productions:
        gain = parikh_v(g, p.rhs)
        label = p.terminals
        for q in states:
            if q[p.lhs] < 1:
                continue
            target = tuple(x + y - (i == p.lhs) for i, (x, y) in enumerate(zip(q, gain)))
            if sum(target) <= k:
                delta.add((q, label, target))
    initial = tuple(int(i == g.axiom) for i in range(n))
    return WordNFA(
        states=frozenset(states),
        transitions=frozenset(delta),
        initial=initial,
        finals=frozenset([(0,) * n]),
        terminals=g.terminals,
        variables=g.variables,
        k=k,
    )


def state_count(n: int, k: int) -> int:
    return math.comb(n + k, n)


def default_k(g: Grammar) -> int:
    """``n*d + 1`` with the degree clamped at zero."""
    d = max(degree(g), 0) if g.productions else 0
    return g.n * d + 1


def gn_family(n: int) -> Grammar:
    """``A_k -> A_{k-1} A_{k-1}`` for ``2 <= k <= n``, ``A_1 -> a``, axiom ``A_n``.

    Its language is the single word ``a^(2^(n-1))``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    prods = [Production(0, (Symbol.term(0),))]
    prods += [Production(i, (Symbol.var(i - 1), Symbol.var(i - 1))) for i in range(1, n)]
    return Grammar(tuple(f"A{i}" for i in range(1, n + 1)), ("a",), tuple(prods), n - 1)


def is_cnf(g: Grammar) -> bool:
    """Every production is ``A -> B C`` or ``A -> a``."""
    for p in g.productions:
        if len(p.rhs) == 2 and all(s.is_var for s in p.rhs):
            continue
        if len(p.rhs) == 1 and not p.rhs[0].is_var:
            continue
        return False
    return True


def _ceil_times_exp(c: int, n: int) -> int:
    """Exact ``ceil(c * e**n)`` from the exponential series and a tail bound."""
    if c == 0:
        return 0
    partial = Fraction(0)
    term = Fraction(1)
    j = 0
    while True:
        partial += term
        j += 1
        term = term * n / j  # next term n**j / j!
        if j + 1 > n:
            # remaining tail <= term / (1 - n/(j+1))
            tail = term / (1 - Fraction(n, j + 1))
            lo, hi = math.ceil(c * partial), math.ceil(c * (partial + tail))
            if lo == hi:
                return lo


def size_upper_bound(n: int, d: int) -> int:
    """``2 * (d+1)**n * e**n`` rounded up; bounds the state count of the ``(n*d+1)``-automaton for ``d >= 1``."""
    return _ceil_times_exp(2 * (d + 1) ** n, n)
