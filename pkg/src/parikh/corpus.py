"""Named test grammars and seeded random grammar / parse-tree generators."""
from __future__ import annotations

import random

from .automaton import gn_family
from .grammar import Grammar, Production, Symbol, parse_grammar
from .parsetree import ParseTree

__all__ = ["SAMPLE", "ANBN", "EPSILON", "CORPUS_TEXT", "corpus", "random_grammar", "random_tree", "min_tree_sizes"]

SAMPLE = """\
A1 -> A1 A2 | a
A2 -> b A2 a A2 | c A1
"""

ANBN = "S -> a S b | \n"

EPSILON = "S -> \n"

CORPUS_TEXT = {
    "sample": SAMPLE,
    "anbn": ANBN,
    "epsilon": EPSILON,
    "dyck": "S -> S S | a S b | \n",
    "regular": "S -> a S | b T\nT -> b T | \n",
    "palindromes": "S -> a S a | b S b | a | b | \n",
    "cnf": "S -> A B | a\nA -> B S | b\nB -> A A | a\n",
    "unit_cycle": "S -> A | a S\nA -> S | b | \n",
    "ternary": "S -> S S S | a b\n",
}


def corpus() -> dict[str, Grammar]:
    out = {name: parse_grammar(text) for name, text in CORPUS_TEXT.items()}
    for n in (2, 3, 4):
        out[f"g{n}"] = gn_family(n)
    return out


def random_grammar(
    rng: random.Random,
    max_vars: int = 3,
    max_productions: int = 6,
    max_rhs: int = 3,
    terminals: tuple[str, ...] = ("a", "b"),
) -> Grammar:
    """A random grammar without duplicate productions.

    Every variable owns at least one production and the axiom owns the first.
    """
    n = rng.randint(1, min(max_vars, max_productions))
    count = rng.randint(n, max_productions)
    prods: list[Production] = []
    for i in range(count):
        lhs = i if i < n else rng.randrange(n)
        rhs = []
        for _ in range(rng.randint(0, max_rhs)):
            if rng.random() < 0.5:
                rhs.append(Symbol.var(rng.randrange(n)))
            else:
                rhs.append(Symbol.term(rng.randrange(len(terminals))))
        p = Production(lhs, tuple(rhs))
        if p not in prods:
            prods.append(p)
    prods.sort(key=lambda p: p.lhs)
    return Grammar(tuple(f"A{i + 1}" for i in range(n)), terminals, tuple(prods), 0)


def min_tree_sizes(g: Grammar) -> dict[int, int]:
    """Smallest node count of a complete parse tree per productive variable."""
    best: dict[int, int] = {}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if all(v in best for v in p.variables):
                size = 1 + sum(best[s.id] if s.is_var else 1 for s in p.rhs) + (not p.rhs)
                if size < best.get(p.lhs, size + 1):
                    best[p.lhs] = size
                    changed = True
    return best


def random_tree(g: Grammar, rng: random.Random, root: int | None = None, budget: int = 30) -> ParseTree | None:
    """Top-down random expansion.

    Productions are picked uniformly among the productive ones until
    ``budget`` nodes exist; from then on each variable takes the production
    with the cheapest completion, so generation always terminates.  Returns
    ``None`` when the root variable derives no terminal word.
    """
    root = g.axiom if root is None else root
    sizes = min_tree_sizes(g)
    if root not in sizes:
        return None
    options = {
        v: [p for p in g.productions if p.lhs == v and all(w in sizes for w in p.variables)] for v in sizes
    }

    def cost(p: Production) -> int:
        return sum(sizes[s.id] if s.is_var else 1 for s in p.rhs)

    made = 0

    def grow(var: int) -> ParseTree:
        nonlocal made
        made += 1
        if made < budget:
            p = rng.choice(options[var])
        else:
            p = min(options[var], key=cost)
        if not p.rhs:
            made += 1
            return ParseTree(Symbol.var(var), (ParseTree(None),), p)
        children = []
        for s in p.rhs:
            if s.is_var:
                children.append(grow(s.id))
            else:
                made += 1
                children.append(ParseTree(s))
        return ParseTree(Symbol.var(var), tuple(children), p)

    return grow(root)
