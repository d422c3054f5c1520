import random

import pytest

from parikh.corpus import corpus, random_grammar, random_tree
from parikh.grammar import Derivation, Symbol, degree, derivation_index, parse_grammar
from parikh.parsetree import (
    IncompleteTreeError,
    ParseTree,
    compact,
    count_variables,
    derivation_to_tree,
    dimension,
    expand,
    from_sexpr,
    height,
    is_compact,
    leaf,
    node_count,
    omega_equivalent,
    to_sexpr,
    tree_to_indexed_derivation,
    yield_of,
)


@pytest.fixture
def aca_tree(sample):
    a = leaf(Symbol.term(0))
    A1a = expand(sample.production("A1", "a"), [a])
    A2 = expand(sample.production("A2", "c A1"), [leaf(Symbol.term(2)), A1a])
    return expand(sample.production("A1", "A1 A2"), [A1a, A2])


def test_aca_tree_measures(sample, aca_tree):
    assert sample.word(yield_of(aca_tree)) == "aca"
    assert dimension(aca_tree) == 1
    assert height(aca_tree) == 3
    assert count_variables(aca_tree) == 2
    assert node_count(aca_tree) == 7
    assert is_compact(aca_tree)


def test_single_leaf_trees(sample, eps_grammar):
    t = expand(sample.production("A1", "a"))
    assert (dimension(t), height(t), count_variables(t)) == (0, 1, 1)
    e = expand(eps_grammar.productions[0])
    assert e.children == (ParseTree(None),)
    assert yield_of(e) == ()
    assert (dimension(e), height(e)) == (0, 1)


def test_node_validation(sample):
    with pytest.raises(ValueError):
        ParseTree(Symbol.var(1), (leaf(Symbol.term(0)),), sample.production("A1", "a"))
    with pytest.raises(ValueError):
        ParseTree(Symbol.var(0), (leaf(Symbol.term(1)),), sample.production("A1", "a"))
    with pytest.raises(ValueError):
        ParseTree(Symbol.term(0), (leaf(None),))


def full_binary(g, var):
    """Complete binary tree of a ``gn_family``-style grammar rooted at ``var``."""
    if var == 0:
        return expand(g.productions_of(0)[0])
    p = g.productions_of(var)[0]
    return expand(p, [full_binary(g, var - 1), full_binary(g, var - 1)])


def test_g3_full_tree(grammar_corpus):
    g3 = grammar_corpus["g3"]
    t = full_binary(g3, g3.axiom)
    assert dimension(t) == 2 and count_variables(t) == 3
    assert g3.word(yield_of(t)) == "aaaa"
    assert compact(t) == t


def test_dimension_rules(anbn):
    # a chain has dimension 0 whatever its height
    rec, stop = anbn.productions
    t = expand(stop)
    for _ in range(5):
        t = expand(rec, [leaf(Symbol.term(0)), t, leaf(Symbol.term(1))])
    assert dimension(t) == 0 and height(t) == 6


def test_incomplete_tree_is_rejected(sample):
    hole = ParseTree(Symbol.var(1))
    t = expand(sample.production("A1", "A1 A2"), [expand(sample.production("A1", "a")), hole])
    with pytest.raises(IncompleteTreeError):
        yield_of(t)
    with pytest.raises(IncompleteTreeError):
        compact(hole)
    with pytest.raises(IncompleteTreeError):
        tree_to_indexed_derivation(sample, t)


def test_non_compact_tree_gets_compacted():
    g = parse_grammar("S -> S S | A\nA -> a A | a")

    def chain(depth):
        node = expand(g.production("A", "a"))
        for _ in range(depth):
            node = expand(g.production("A", "a A"), [leaf(Symbol.term(0)), node])
        return expand(g.production("S", "A"), [node])

    level1 = expand(g.production("S", "S S"), [chain(2), chain(0)])
    level2 = expand(g.production("S", "S S"), [level1, level1])
    t = expand(g.production("S", "S S"), [level2, level2])
    assert dimension(t) == 3 > count_variables(t) == 2
    c = compact(t)
    assert is_compact(c)
    assert omega_equivalent(g, t, c)


def test_omega_equivalence():
    g = parse_grammar("S -> a S b | b S a | ")
    a, b = leaf(Symbol.term(0)), leaf(Symbol.term(1))
    eps = expand(g.production("S", ""))
    ab = expand(g.production("S", "a S b"), [a, eps, b])
    ba = expand(g.production("S", "b S a"), [b, eps, a])
    assert omega_equivalent(g, ab, ba)
    assert not omega_equivalent(g, ab, eps)
    nested = expand(g.production("S", "a S b"), [a, ba, b])
    assert not omega_equivalent(g, nested, ab)


BRANCHING = [
    parse_grammar(text)
    for text in (
        "S -> S S | a",
        "S -> S S | A\nA -> a A | b",
        "S -> A B | a\nA -> B S | b\nB -> A A | a",
        "S -> S S S | a b",
        "S -> S S | a S b | ",
    )
]


def random_pairs(seed, count):
    """Trees over random grammars, the corpus and a few highly branching grammars."""
    rng = random.Random(seed)
    named = list(corpus().values())
    produced = 0
    while produced < count:
        roll = rng.random()
        if roll < 0.4:
            g, budget = rng.choice(BRANCHING), rng.randint(10, 150)
        else:
            g = rng.choice(named) if roll < 0.6 else random_grammar(rng)
            budget = rng.randint(5, 40)
        t = random_tree(g, rng, budget=budget)
        if t is not None:
            produced += 1
            yield g, t


def test_compact_on_random_trees():
    reshaped = 0
    for g, t in random_pairs(21, 500):
        reshaped += not is_compact(t)
        c = compact(t)
        assert is_compact(c)
        assert omega_equivalent(g, t, c)
        assert c.label == t.label
        if is_compact(t):
            assert c == t
    assert reshaped >= 20


def test_indexed_derivation_of_aca(sample, aca_tree):
    dv = tree_to_indexed_derivation(sample, aca_tree)
    assert sample.word(s.id for s in dv.result) == "aca"
    assert derivation_index(dv) <= dimension(aca_tree) * degree(sample) + 1 == 2
    assert derivation_to_tree(dv) == aca_tree


def test_indexed_derivation_bound_on_random_trees():
    for g, t in random_pairs(33, 300):
        dv = tree_to_indexed_derivation(g, t)
        assert tuple(s.id for s in dv.result) == yield_of(t)
        assert derivation_index(dv) <= dimension(t) * max(degree(g), 0) + 1
        assert derivation_to_tree(dv) == t


def test_non_axiom_root(sample):
    t = expand(sample.production("A2", "c A1"), [leaf(Symbol.term(2)), expand(sample.production("A1", "a"))])
    dv = tree_to_indexed_derivation(sample, t)
    assert dv.forms[0] == (Symbol.var(1),)
    assert derivation_to_tree(dv) == t


def test_derivation_to_tree_requires_terminal_word(sample):
    dv = Derivation.from_steps(sample, [(0, sample.production("A1", "A1 A2"))])
    with pytest.raises(ValueError):
        derivation_to_tree(dv)


def test_sexpr(sample, aca_tree, eps_grammar):
    text = to_sexpr(sample, aca_tree)
    assert text == '(A1 (A1 "a") (A2 "c" (A1 "a")))'
    assert from_sexpr(sample, text) == aca_tree
    e = expand(eps_grammar.productions[0])
    assert to_sexpr(eps_grammar, e) == "(S ())"
    assert from_sexpr(eps_grammar, "(S ())") == e
    with pytest.raises(ValueError):
        from_sexpr(sample, '(A1 "b")')


def test_sexpr_round_trip_random():
    for g, t in random_pairs(4, 200):
        assert from_sexpr(g, to_sexpr(g, t)) == t
