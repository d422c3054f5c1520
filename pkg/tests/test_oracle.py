import json
import random
from collections import deque
from dataclasses import replace

import pytest

from parikh.corpus import random_grammar, random_tree
from parikh.grammar import Symbol, parikh_t, parse_grammar
from parikh.oracle import (
    CheckReport,
    ParikhSnapshot,
    automaton_parikh,
    check_automaton,
    check_collapse,
    check_indexed_equivalence,
    check_equivalence,
    compare,
    grammar_parikh,
    indexed_grammar_parikh,
)
from parikh.parsetree import yield_of


def words_of_epsilon_free(g, bound):
    """All derivable words of length <= bound, for grammars without ε-rules.

    Forms never shrink along a derivation here, so capping their length is exact.
    """
    start = (Symbol.var(g.axiom),)
    seen, work, words = {start}, deque([start]), set()
    while work:
        form = work.popleft()
        if all(not s.is_var for s in form):
            words.add(form)
            continue
        i = next(i for i, s in enumerate(form) if s.is_var)
        for p in g.productions_of(form[i].id):
            nxt = form[:i] + p.rhs + form[i + 1:]
            if len(nxt) <= bound and nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
    return words


def epsilon_free_grammars(seed, count):
    rng = random.Random(seed)
    made = 0
    while made < count:
        g = random_grammar(rng)
        if all(p.rhs for p in g.productions):
            made += 1
            yield g


def test_sample_small_vectors(sample):
    snap = grammar_parikh(sample, 3)
    assert (1, 0, 0) in snap.vectors
    assert (2, 0, 1) in snap.vectors
    assert (0, 1, 0) not in snap.vectors
    assert snap.source == "grammar" and snap.bound == 3


def test_epsilon_and_anbn(eps_grammar, anbn):
    assert grammar_parikh(eps_grammar, 4).vectors == {()}
    assert grammar_parikh(anbn, 6).vectors == {(0, 0), (1, 1), (2, 2), (3, 3)}
    assert grammar_parikh(anbn, 7).vectors == grammar_parikh(anbn, 6).vectors


def test_grammar_parikh_against_word_enumeration():
    for g in epsilon_free_grammars(2, 80):
        expected = {parikh_t(g, w) for w in words_of_epsilon_free(g, 6)}
        assert grammar_parikh(g, 6).vectors == expected


def test_grammar_parikh_with_epsilon_against_trees():
    rng = random.Random(6)
    for _ in range(200):
        g = random_grammar(rng)
        t = random_tree(g, rng, budget=rng.randint(3, 25))
        if t is None:
            continue
        w = yield_of(t)
        vec = parikh_t(g, map(Symbol.term, w))
        assert vec in grammar_parikh(g, len(w)).vectors


def test_grammar_parikh_monotone_and_order_invariant():
    rng = random.Random(4)
    for _ in range(40):
        g = random_grammar(rng)
        small, big = grammar_parikh(g, 4).vectors, grammar_parikh(g, 6).vectors
        assert small == {v for v in big if sum(v) <= 4}
        shuffled = list(g.productions)
        rng.shuffle(shuffled)
        assert grammar_parikh(replace(g, productions=tuple(shuffled)), 6).vectors == big


def test_indexed_image(sample, anbn):
    assert indexed_grammar_parikh(anbn, 1, 6).vectors == grammar_parikh(anbn, 6).vectors
    # index 1 forbids every tree that needs two live variables
    one = indexed_grammar_parikh(sample, 1, 6).vectors
    assert one == {(1, 0, 0)}
    with pytest.raises(ValueError):
        indexed_grammar_parikh(sample, 0, 3)


def test_indexed_image_monotone_in_k():
    rng = random.Random(12)
    for _ in range(40):
        g = random_grammar(rng)
        images = [indexed_grammar_parikh(g, k, 5).vectors for k in (1, 2, 3, 4)]
        assert all(a <= b for a, b in zip(images, images[1:]))
        assert images[-1] <= grammar_parikh(g, 5).vectors


def test_indexed_image_against_word_enumeration():
    # with no ε-rules and k large enough every form is allowed
    for g in epsilon_free_grammars(5, 40):
        expected = {parikh_t(g, w) for w in words_of_epsilon_free(g, 5)}
        assert indexed_grammar_parikh(g, 5, 5).vectors == expected


def test_checks_on_sample(sample):
    assert check_equivalence(sample, 8).holds
    assert check_collapse(sample, 8).holds
    for k in (1, 2, 3):
        assert check_indexed_equivalence(sample, k, 6).holds
    under = check_automaton(sample, 1, 6)
    assert not under.holds
    assert under.witnesses and all(w in under.left.vectors for w in under.witnesses)


def test_snapshot_validation():
    with pytest.raises(ValueError):
        ParikhSnapshot(frozenset([(3, 0)]), 2, "x")
    with pytest.raises(ValueError):
        grammar_parikh(parse_grammar("S -> a"), -1)


def test_report_json():
    left = ParikhSnapshot(frozenset([(2, 0), (0, 0), (1, 1)]), 2, "l")
    right = ParikhSnapshot(frozenset([(0, 0), (0, 2)]), 2, "r")
    rep = compare(left, right)
    doc = json.loads(rep.to_json())
    assert doc["witnesses"] == [[0, 2], [1, 1], [2, 0]]
    assert doc["left"]["vectors"] == [[0, 0], [1, 1], [2, 0]]
    assert doc["holds"] is False and doc["equal"] is False
    sub = CheckReport(ParikhSnapshot(frozenset([(0, 0)]), 2, "l"), right, "subset")
    assert sub.holds and not sub.equal
    with pytest.raises(ValueError):
        compare(left, right, "superset")


def test_automaton_snapshot_source(sample):
    snap = automaton_parikh(sample, 2, 3)
    assert snap.source == "automaton(2)"
    assert snap.vectors <= grammar_parikh(sample, 3).vectors


def test_sample_image_against_word_enumeration(sample):
    words = words_of_epsilon_free(sample, 10)
    assert sample.word(s.id for s in min(words, key=len)) == "a"
    assert grammar_parikh(sample, 10).vectors == {parikh_t(sample, w) for w in words}
