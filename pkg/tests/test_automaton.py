import itertools
import json
import math
import random

import pytest

from parikh.automaton import (
    WordNFA,
    build_parikh_automaton,
    default_k,
    gn_family,
    is_cnf,
    size_upper_bound,
    state_count,
    vectors_up_to,
)
from parikh.corpus import random_grammar
from parikh.grammar import Symbol, parse_grammar, step_transition
from parikh.nfa import truncated_parikh_image


def brute_force_delta(g, k):
    """Transitions induced by every step between concrete sentential forms.

    Terminals in a form do not influence the transition, so forms made of
    variables only (at most ``k`` of them) cover every source state.
    """
    delta = set()
    for length in range(1, k + 1):
        for alpha in itertools.product(range(g.n), repeat=length):
            form = tuple(Symbol.var(v) for v in alpha)
            for pos in range(length):
                for p in g.productions_of(alpha[pos]):
                    src, word, tgt = step_transition(g, form, pos, p)
                    if sum(tgt) <= k:
                        delta.add((src, word, tgt))
    return delta


def test_sample_automaton(sample):
    m = build_parikh_automaton(sample, 3)
    assert len(m.states) == 10
    assert m.initial == (1, 0)
    assert m.finals == {(0, 0)}
    ba = (sample.terminals.index("b"), sample.terminals.index("a"))
    assert ((0, 2), ba, (0, 3)) in m.transitions
    assert ((1, 0), (0,), (0, 0)) in m.transitions
    assert ((1, 0), (), (1, 1)) in m.transitions


def test_epsilon_grammar_automaton(eps_grammar):
    m = build_parikh_automaton(eps_grammar, 1)
    assert m.states == {(0,), (1,)}
    assert m.transitions == {((1,), (), (0,))}


def test_rejects_k_below_one(sample):
    with pytest.raises(ValueError):
        build_parikh_automaton(sample, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_matches_step_enumeration(sample, k):
    assert build_parikh_automaton(sample, k).transitions == brute_force_delta(sample, k)


def test_matches_step_enumeration_random():
    rng = random.Random(11)
    for _ in range(40):
        g = random_grammar(rng)
        for k in (1, 2, 3):
            assert build_parikh_automaton(g, k).transitions == brute_force_delta(g, k)


def test_transition_soundness_and_monotonicity():
    rng = random.Random(5)
    for _ in range(30):
        g = random_grammar(rng)
        for k in (1, 2, 3):
            m = build_parikh_automaton(g, k)
            assert len(m.states) == state_count(g.n, k)
            for src, word, tgt in m.transitions:
                assert sum(src) <= k and sum(tgt) <= k
                assert any(
                    src[p.lhs] >= 1
                    and word == p.terminals
                    and tgt == tuple(
                        x - (i == p.lhs) + sum(1 for v in p.variables if v == i) for i, x in enumerate(src)
                    )
                    for p in g.productions
                )
            bigger = build_parikh_automaton(g, k + 1)
            assert m.transitions <= bigger.transitions


def test_state_count_by_enumeration():
    for n in range(0, 6):
        for k in range(0, 6):
            brute = sum(1 for v in itertools.product(range(k + 1), repeat=n) if sum(v) <= k)
            assert state_count(n, k) == brute == len(vectors_up_to(n, k))
    assert state_count(2, 3) == 10
    assert state_count(1, 0) == 1


def test_state_count_is_exact_for_large_arguments():
    assert state_count(60, 60) == math.comb(120, 60)


def test_default_k(sample):
    assert default_k(sample) == 3
    assert default_k(parse_grammar("S -> a S | b")) == 1
    assert default_k(parse_grammar("S -> a b")) == 1
    assert default_k(gn_family(3)) == 4


def test_gn_family():
    g1 = gn_family(1)
    assert g1.productions == (g1.production("A1", "a"),)
    g3 = gn_family(3)
    assert g3.axiom == 2 and is_cnf(g3)
    m = build_parikh_automaton(g3, 4)
    assert truncated_parikh_image(m, 8) == {(4,)}


def test_g4_shortest_accepted_word():
    m = build_parikh_automaton(gn_family(4), 5)
    assert truncated_parikh_image(m, 7) == frozenset()
    assert truncated_parikh_image(m, 8) == {(8,)}


def test_is_cnf():
    assert is_cnf(parse_grammar("S -> A B | a\nA -> a\nB -> b"))
    assert not is_cnf(parse_grammar("S -> a S b | "))


def test_size_upper_bound_is_ceiling_and_dominates():
    for n in range(1, 7):
        for d in range(1, 4):
            bound = size_upper_bound(n, d)
            assert bound - 1 < 2 * (d + 1) ** n * math.e ** n <= bound
            assert state_count(n, n * d + 1) <= bound


def test_json_round_trip(sample):
    m = build_parikh_automaton(sample, 3)
    text = m.to_json()
    doc = json.loads(text)
    assert doc["k"] == 3 and doc["variables"] == ["A1", "A2"]
    assert doc["states"] == sorted(doc["states"])
    assert [[0, 2], "ba", [0, 3]] in doc["transitions"]
    again = WordNFA.from_json(text)
    assert again == m
    assert again.to_json() == text


def test_json_labels_with_long_terminal_names():
    g = parse_grammar("S -> foo S bar | ")
    m = build_parikh_automaton(g, 1)
    doc = json.loads(m.to_json())
    assert [[1], "foo bar", [1]] in doc["transitions"]
    assert WordNFA.from_json(m.to_json()) == m
