"""Letter normalization, truncated Parikh images and export of automata."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Union

from .automaton import WordNFA, label_string, parse_label

__all__ = [
    "Intermediate",
    "LetterNFA",
    "to_letter_nfa",
    "trim",
    "parikh_reachability",
    "truncated_parikh_image",
    "accepted_words",
    "export_dot",
    "state_name",
]


@dataclass(frozen=True, order=True)
class Intermediate:
    """A fresh state created while splitting a word-labelled transition.

    ``source`` is the split transition and ``offset`` the number of letters
    of its label already read on arrival.
    """

    id: int
    source: tuple = field(compare=False)
    offset: int = field(compare=False, default=1)

    def __str__(self) -> str:
        return f"i{self.id}"


def state_name(q) -> str:
    if isinstance(q, Intermediate):
        return str(q)
    return "(" + ",".join(map(str, q)) + ")"


def _state_key(q):
    return (1, q.id) if isinstance(q, Intermediate) else (0, q)


@dataclass(frozen=True)
class LetterNFA:
    """NFA with one terminal per edge and no ε-edges."""

    states: frozenset
    transitions: frozenset  # (source, terminal id, target)
    initial: object
    finals: frozenset
    terminals: tuple[str, ...] = ()
    variables: tuple[str, ...] = ()
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if self.initial not in self.states or not self.finals <= self.states:
            raise ValueError("initial and final states must be states")
        for src, a, tgt in self.transitions:
            if src not in self.states or tgt not in self.states:
                raise ValueError(f"transition {(src, a, tgt)} leaves the state set")
            if not 0 <= a < len(self.terminals):
                raise ValueError(f"unknown terminal {a}")

    @property
    def num_terminals(self) -> int:
        return len(self.terminals)

    @property
    def intermediates(self) -> list[Intermediate]:
        return sorted(q for q in self.states if isinstance(q, Intermediate))

    def edges(self) -> Iterator[tuple[object, tuple[int, ...], object]]:
        for src, a, tgt in self.transitions:
            yield src, (a,), tgt

    def sorted_transitions(self) -> list:
        return sorted(self.transitions, key=lambda e: (_state_key(e[0]), self.terminals[e[1]], _state_key(e[2])))

    def to_json(self) -> str:
        def enc(q):
            return str(q) if isinstance(q, Intermediate) else list(q)

        doc = {
            "variables": list(self.variables),
            "terminals": list(self.terminals),
            "k": self.k,
            "states": [list(q) for q in sorted(q for q in self.states if not isinstance(q, Intermediate))],
            "intermediates": [
                {
                    "id": str(q),
                    "source": [list(q.source[0]), label_string(self.terminals, q.source[1]), list(q.source[2])],
                    "offset": q.offset,
                }
                for q in self.intermediates
            ],
            "initial": enc(self.initial),
            "finals": [enc(q) for q in sorted(self.finals, key=_state_key)],
            "transitions": [[enc(s), self.terminals[a], enc(t)] for s, a, t in self.sorted_transitions()],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> LetterNFA:
        doc = json.loads(text)
        terminals = tuple(doc["terminals"])
        inter = {}
        for item in doc.get("intermediates", []):
            s, w, t = item["source"]
            q = Intermediate(int(item["id"][1:]), (tuple(s), parse_label(terminals, w), tuple(t)), item["offset"])
            inter[item["id"]] = q

        def dec(x):
            return inter[x] if isinstance(x, str) else tuple(x)

        states = {tuple(q) for q in doc["states"]} | set(inter.values())
        return cls(
            states=frozenset(states),
            transitions=frozenset((dec(s), terminals.index(a), dec(t)) for s, a, t in doc["transitions"]),
            initial=dec(doc["initial"]),
            finals=frozenset(dec(q) for q in doc["finals"]),
            terminals=terminals,
            variables=tuple(doc.get("variables", ())),
            k=doc.get("k"),
        )


Automaton = Union[WordNFA, LetterNFA]


def to_letter_nfa(m: WordNFA) -> LetterNFA:
    """Remove ε-edges by closure, then split long labels through fresh states.

    Closing first keeps every intermediate state on exactly one incoming and
    one outgoing edge.  The accepted language is preserved exactly.
    """
    eps: dict = {}
    word_out: dict = {}
    for src, word, tgt in m.transitions:
        if word:
            word_out.setdefault(src, set()).add((word, tgt))
        else:
            eps.setdefault(src, set()).add(tgt)

    def closure(q) -> set:
        seen = {q}
        stack = [q]
        while stack:
            for r in eps.get(stack.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    closed: set = set()
    finals = set()
    for q in m.states:
        reach = closure(q)
        if reach & m.finals:
            finals.add(q)
        for r in reach:
            closed.update((q, word, tgt) for word, tgt in word_out.get(r, ()))

    states = set(m.states)
    transitions = set()
    next_id = 0
    for src, word, tgt in sorted(closed, key=lambda e: (e[0], e[1], e[2])):
        prev = src
        for j, a in enumerate(word):
            if j == len(word) - 1:
                nxt = tgt
            else:
                nxt = Intermediate(next_id, (src, word, tgt), j + 1)
                next_id += 1
                states.add(nxt)
            transitions.add((prev, a, nxt))
            prev = nxt
    return LetterNFA(
        states=frozenset(states),
        transitions=frozenset(transitions),
        initial=m.initial,
        finals=frozenset(finals),
        terminals=m.terminals,
        variables=m.variables,
        k=m.k,
    )


def trim(m: Automaton) -> Automaton:
    """Restrict to states that are reachable and can reach a final state.

    The initial state is always kept.
    """
    fwd: dict = {}
    bwd: dict = {}
    for s, _, t in m.edges():
        fwd.setdefault(s, set()).add(t)
        bwd.setdefault(t, set()).add(s)

    def reach(starts, graph):
        seen = set(starts)
        stack = list(starts)
        while stack:
            for r in graph.get(stack.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    useful = reach([m.initial], fwd) & reach(m.finals, bwd)
    useful.add(m.initial)
    kw = dict(
        states=frozenset(useful),
        transitions=frozenset(e for e in m.transitions if e[0] in useful and e[2] in useful),
        initial=m.initial,
        finals=frozenset(m.finals & useful),
        terminals=m.terminals,
        variables=m.variables,
        k=m.k,
    )
    return type(m)(**kw)


def parikh_reachability(m: Automaton, bound: int) -> set:
    """Reachable ``(state, Parikh vector)`` pairs with vector sum at most ``bound``."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    out: dict = {}
    for s, word, t in m.edges():
        inc = [0] * m.num_terminals
        for a in word:
            inc[a] += 1
        out.setdefault(s, []).append((tuple(inc), len(word), t))

    start = (m.initial, (0,) * m.num_terminals)
    seen = {start}
    work = deque([start])
    while work:
        q, v = work.popleft()
        total = sum(v)
        for inc, length, t in out.get(q, ()):
            if total + length > bound:
                continue
            pair = (t, tuple(x + y for x, y in zip(v, inc)))
            if pair not in seen:
                seen.add(pair)
                work.append(pair)
    return seen


def truncated_parikh_image(m: Automaton, bound: int) -> frozenset:
    """Parikh vectors of accepted words having at most ``bound`` letters."""
    return frozenset(v for q, v in parikh_reachability(m, bound) if q in m.finals)


def accepted_words(m: Automaton, max_len: int) -> frozenset:
    """All accepted words (as terminal-id tuples) of length at most ``max_len``."""
    start = (m.initial, ())
    seen = {start}
    work = deque([start])
    out: dict = {}
    for s, word, t in m.edges():
        out.setdefault(s, []).append((word, t))
    while work:
        q, w = work.popleft()
        for word, t in out.get(q, ()):
            nw = w + tuple(word)
            if len(nw) <= max_len and (t, nw) not in seen:
                seen.add((t, nw))
                work.append((t, nw))
    return frozenset(w for q, w in seen if q in m.finals)


def _quote(s: str) -> str:
    return '"' + s.replace('"', r"\"") + '"'


def export_dot(m: Automaton) -> str:
    lines = ["digraph {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in sorted(m.states, key=_state_key):
        shape = "doublecircle" if q in m.finals else "circle"
        lines.append(f"  {_quote(state_name(q))} [shape={shape}];")
    lines.append(f"  __start -> {_quote(state_name(m.initial))};")
    for s, word, t in sorted(
        m.edges(), key=lambda e: (_state_key(e[0]), label_string(m.terminals, e[1]), _state_key(e[2]))
    ):
        label = label_string(m.terminals, word) or "eps"
        lines.append(f"  {_quote(state_name(s))} -> {_quote(state_name(t))} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
