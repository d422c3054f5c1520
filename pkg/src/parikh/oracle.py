"""Brute-force Parikh images of grammars and the cross-checks built on them.

Each comparison pits two unrelated algorithms against each other:

* ``grammar_parikh`` -- a per-variable fixpoint over Parikh vectors;
* ``indexed_grammar_parikh`` -- explicit enumeration of sentential forms;
* ``truncated_parikh_image`` -- reachability in an automaton.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .automaton import build_parikh_automaton, default_k
from .grammar import Grammar, parikh_t
from .nfa import truncated_parikh_image

__all__ = [
    "ParikhSnapshot",
    "CheckReport",
    "grammar_parikh",
    "indexed_grammar_parikh",
    "automaton_parikh",
    "check_equivalence",
    "check_automaton",
    "check_indexed_equivalence",
    "check_collapse",
    "compare",
]

Vector = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class ParikhSnapshot:
    vectors: frozenset
    bound: int
    source: str

    def __post_init__(self):
        object.__setattr__(self, "vectors", frozenset(self.vectors))
        if any(sum(v) > self.bound for v in self.vectors):
            raise ValueError("snapshot holds a vector above its bound")

    def sorted(self) -> list[Vector]:
        return sorted(self.vectors)


@dataclass(frozen=True)
class CheckReport:
    """Result of comparing two snapshots.

    ``relation`` is ``"equal"`` or ``"subset"`` (left inside right); the
    witnesses are the vectors breaking it.  ``equal`` always reports plain
    set equality.
    """

    left: ParikhSnapshot
    right: ParikhSnapshot
    relation: str = "equal"
    witnesses: tuple[Vector, ...] = field(init=False)

    def __post_init__(self):
        if self.relation == "equal":
            bad = self.left.vectors ^ self.right.vectors
        elif self.relation == "subset":
            bad = self.left.vectors - self.right.vectors
        else:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "witnesses", tuple(sorted(bad)))

    @property
    def equal(self) -> bool:
        return self.left.vectors == self.right.vectors

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def as_dict(self) -> dict:
        return {
            "relation": self.relation,
            "holds": self.holds,
            "equal": self.equal,
            "bound": max(self.left.bound, self.right.bound),
            "left": {"source": self.left.source, "vectors": [list(v) for v in self.left.sorted()]},
            "right": {"source": self.right.source, "vectors": [list(v) for v in self.right.sorted()]},
            "witnesses": [list(v) for v in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def compare(left: ParikhSnapshot, right: ParikhSnapshot, relation: str = "equal") -> CheckReport:
    return CheckReport(left, right, relation)


def grammar_parikh(g: Grammar, bound: int) -> ParikhSnapshot:
    """Parikh vectors (sum ≤ bound) of the words derivable from the axiom.

    A yield's Parikh vector is the sum of the terminal parts of the
    productions in its parse tree, so per-variable vector sets can be grown
    to a fixpoint without ever building words.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    sets: list[set] = [set() for _ in range(g.n)]
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            base = parikh_t(g, p.rhs)
            if sum(base) > bound:
                continue
            choices = [sets[v] for v in p.variables]
            if any(not c for c in choices):
                continue
            partial = {base}
            for c in choices:
                partial = {
                    s for s in (tuple(x + y for x, y in zip(u, w)) for u in partial for w in c) if sum(s) <= bound
                }
            new = partial - sets[p.lhs]
            if new:
                sets[p.lhs] |= new
                changed = True
    return ParikhSnapshot(frozenset(sets[g.axiom]), bound, "grammar")


def indexed_grammar_parikh(g: Grammar, k: int, bound: int) -> ParikhSnapshot:
    """Truncated Parikh image of the words having a derivation of index ``k``.

    Explores sentential forms with at most ``k`` variables and at most
    ``bound`` terminals.  Pruning is exact: every form of an index-``k``
    derivation has at most ``k`` variables, and terminal counts never shrink
    along a derivation, so a form over either cap has no in-bound completion.
    Terminal positions never influence later steps, so a form is kept as its
    ordered variable sequence plus the Parikh vector of its terminals.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    rules: dict[int, list] = {}
    for p in g.productions:
        rules.setdefault(p.lhs, []).append((p.variables, parikh_t(g, p.rhs)))
    start = ((g.axiom,), (0,) * g.t)
    seen = {start}
    work = deque([start])
    found = set()
    while work:
        variables, terms = work.popleft()
        if not variables:
            found.add(terms)
            continue
        used = sum(terms)
        for i, v in enumerate(variables):
            for rhs_vars, rhs_terms in rules.get(v, ()):
                if len(variables) - 1 + len(rhs_vars) > k or used + sum(rhs_terms) > bound:
                    continue
                nxt = (
                    variables[:i] + rhs_vars + variables[i + 1:],
                    tuple(x + y for x, y in zip(terms, rhs_terms)),
                )
                if nxt not in seen:
                    seen.add(nxt)
                    work.append(nxt)
    return ParikhSnapshot(frozenset(found), bound, f"indexed-grammar({k})")


def automaton_parikh(g: Grammar, k: int, bound: int) -> ParikhSnapshot:
    m = build_parikh_automaton(g, k)
    return ParikhSnapshot(truncated_parikh_image(m, bound), bound, f"automaton({k})")


def check_equivalence(g: Grammar, bound: int) -> CheckReport:
    """Grammar against its ``(n*d+1)``-Parikh automaton."""
    return check_automaton(g, default_k(g), bound)


def check_automaton(g: Grammar, k: int, bound: int) -> CheckReport:
    return compare(grammar_parikh(g, bound), automaton_parikh(g, k, bound))


def check_indexed_equivalence(g: Grammar, k: int, bound: int) -> CheckReport:
    return compare(indexed_grammar_parikh(g, k, bound), automaton_parikh(g, k, bound))


def check_collapse(g: Grammar, bound: int) -> CheckReport:
    """Every grammar vector already has an index-``(n*d+1)`` derivation."""
    return compare(grammar_parikh(g, bound), indexed_grammar_parikh(g, default_k(g), bound), "subset")

