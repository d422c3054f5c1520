"""Semilinear sets and the Parikh image of finite automata.

The Parikh image of an automaton is extracted by classic state elimination
into a regular expression, followed by a structural computation of the
regular expression's Parikh image.  Equality of semilinear sets is only ever
decided up to a bound on the vector sum (see :func:`slset_truncate`).
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .automaton import WordNFA, default_k
from .grammar import Grammar, degree
from .nfa import Intermediate, LetterNFA, to_letter_nfa, trim

__all__ = [
    "LinearSet",
    "SemilinearSet",
    "LimitExceeded",
    "Regex",
    "EMPTY",
    "EPS",
    "Letter",
    "Union",
    "Concat",
    "Star",
    "union",
    "concat",
    "star",
    "regex_str",
    "regex_words",
    "eliminate_to_regex",
    "regex_parikh",
    "normalize",
    "slset_member",
    "slset_truncate",
    "nfa_parikh",
    "ExtractionLimits",
    "ToBoundReport",
    "to_bound_report",
    "max_period_entry",
]

Vector = tuple  # tuple[int, ...]


class LimitExceeded(RuntimeError):
    def __init__(self, limit: str, value: int, maximum: int):
        self.limit = limit
        self.value = value
        self.maximum = maximum
        super().__init__(f"extraction limit {limit} exceeded: {value} > {maximum}")


@dataclass(frozen=True, order=True)
class LinearSet:
    """``{offset + sum(λ_i * periods[i]) | λ_i >= 0}``."""

    offset: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(self.offset))
        periods = tuple(sorted(set(map(tuple, self.periods))))
        if any(not any(p) for p in periods):
            raise ValueError("zero period")
        if any(len(p) != len(self.offset) for p in periods):
            raise ValueError("period dimension does not match offset")
        if any(x < 0 for x in self.offset) or any(x < 0 for p in periods for x in p):
            raise ValueError("negative entry")
        object.__setattr__(self, "periods", periods)

    @classmethod
    def of(cls, offset, periods=()) -> LinearSet:
        """Like the constructor but silently drops zero periods."""
        return cls(offset, tuple(p for p in periods if any(p)))


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for c in self.components:
            if len(c.offset) != self.dim:
                raise ValueError(f"component {c} does not have dimension {self.dim}")

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def to_json(self) -> str:
        comps = sorted(self.components)
        return json.dumps(
            {"components": [{"offset": list(c.offset), "periods": [list(p) for p in c.periods]} for c in comps]}
        )

    @classmethod
    def from_json(cls, text: str, dim: int | None = None) -> SemilinearSet:
        doc = json.loads(text)
        comps = tuple(LinearSet(tuple(c["offset"]), tuple(map(tuple, c["periods"]))) for c in doc["components"])
        if dim is None:
            if not comps:
                raise ValueError("dimension of an empty set must be given")
            dim = len(comps[0].offset)
        return cls(dim, comps)


# --- regular expressions ---------------------------------------------------
# Identity equality on purpose: expressions produced by elimination share
# subterms heavily and structural hashing would walk them over and over.


class Regex:
    __slots__ = ()


class _Empty(Regex):
    __slots__ = ()


class _Eps(Regex):
    __slots__ = ()


EMPTY = _Empty()
EPS = _Eps()


@dataclass(frozen=True, eq=False)
class Letter(Regex):
    a: int


@dataclass(frozen=True, eq=False)
class Union(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True, eq=False)
class Concat(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True, eq=False)
class Star(Regex):
    inner: Regex


def union(*rs: Regex) -> Regex:
    parts: list[Regex] = []
    for r in rs:
        if r is EMPTY or r is None:
            continue
        for x in r.parts if isinstance(r, Union) else (r,):
            if not any(x is y for y in parts):
                parts.append(x)
    if not parts:
        return EMPTY
    return parts[0] if len(parts) == 1 else Union(tuple(parts))


def concat(*rs: Regex) -> Regex:
    parts: list[Regex] = []
    for r in rs:
        if r is EMPTY:
            return EMPTY
        if r is EPS:
            continue
        parts.extend(r.parts if isinstance(r, Concat) else (r,))
    if not parts:
        return EPS
    return parts[0] if len(parts) == 1 else Concat(tuple(parts))


def star(r: Regex) -> Regex:
    if r is EMPTY or r is EPS:
        return EPS
    if isinstance(r, Star):
        return r
    return Star(r)


def regex_str(r: Regex, terminals: tuple[str, ...] | None = None) -> str:
    if r is EMPTY:
        return "∅"
    if r is EPS:
        return "ε"
    if isinstance(r, Letter):
        return terminals[r.a] if terminals else f"#{r.a}"
    if isinstance(r, Union):
        return "(" + "|".join(regex_str(x, terminals) for x in r.parts) + ")"
    if isinstance(r, Concat):
        return "".join(regex_str(x, terminals) for x in r.parts)
    return "(" + regex_str(r.inner, terminals) + ")*"


def regex_words(r: Regex, max_len: int) -> frozenset:
    """Words of ``r`` with at most ``max_len`` letters (enumeration oracle)."""
    memo: dict = {}

    def words(x: Regex) -> frozenset:
        if id(x) in memo:
            return memo[id(x)]
        if x is EMPTY:
            out = frozenset()
        elif x is EPS:
            out = frozenset([()])
        elif isinstance(x, Letter):
            out = frozenset([(x.a,)]) if max_len >= 1 else frozenset()
        elif isinstance(x, Union):
            out = frozenset().union(*(words(y) for y in x.parts))
        elif isinstance(x, Concat):
            acc = {()}
            for y in x.parts:
                ws = words(y)
                acc = {u + v for u in acc for v in ws if len(u) + len(v) <= max_len}
            out = frozenset(acc)
        else:
            base = words(x.inner)
            acc = {()}
            frontier = {()}
            while frontier:
                frontier = {u + v for u in frontier for v in base if v and len(u) + len(v) <= max_len} - acc
                acc |= frontier
            out = frozenset(acc)
        memo[id(x)] = out
        return out

    return words(r)


def eliminate_to_regex(m: LetterNFA) -> Regex:
    """Regular expression for exactly ``L(m)``, by state elimination.

    Intermediate states go first, then original states by descending number
    of incident edges (ties broken by state order).
    """
    start, final = object(), object()
    out: dict = {}
    inn: dict = {}

    def add(p, q, r):
        cur = out.setdefault(p, {}).get(q)
        new = union(cur, r) if cur is not None else r
        out[p][q] = new
        inn.setdefault(q, {})[p] = new

    add(start, m.initial, EPS)
    for f in m.finals:
        add(f, final, EPS)
    for s, a, t in m.sorted_transitions():
        add(s, t, Letter(a))

    deg = {q: 0 for q in m.states}
    for s, _, t in m.transitions:
        deg[s] += 1
        deg[t] += 1
    inters = sorted(q for q in m.states if isinstance(q, Intermediate))
    originals = sorted((q for q in m.states if not isinstance(q, Intermediate)), key=lambda q: (-deg[q], q))

    for x in inters + originals:
        succ = out.pop(x, {})
        pred = inn.pop(x, {})
        loop = succ.pop(x, None)
        pred.pop(x, None)
        middle = star(loop) if loop is not None else EPS
        for p in pred:
            del out[p][x]
        for q in succ:
            del inn[q][x]
        for p, rin in pred.items():
            for q, rout in succ.items():
                add(p, q, concat(rin, middle, rout))

    return out.get(start, {}).get(final, EMPTY)


# --- Parikh images of regular expressions ----------------------------------


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def _unit(dim: int, a: int) -> Vector:
    return tuple(int(i == a) for i in range(dim))


def regex_parikh(r: Regex, dim: int, max_star_components: int = 14) -> SemilinearSet:
    """Parikh image of ``r`` over ``dim`` letters, computed bottom-up.

    Sums of linear sets add offsets and unite periods.  The star of
    ``L(b_1, P_1) ∪ ... ∪ L(b_m, P_m)`` is ``{0}`` together with, for every
    nonempty subset ``I``, the linear set with offset ``sum(b_i, i in I)``
    and periods ``∪ (P_i ∪ {b_i}), i in I``.
    """
    memo: dict = {}
    zero = (0,) * dim

    def go(x: Regex) -> tuple[LinearSet, ...]:
        if id(x) in memo:
            return memo[id(x)]
        if x is EMPTY:
            res: tuple[LinearSet, ...] = ()
        elif x is EPS:
            res = (LinearSet(zero),)
        elif isinstance(x, Letter):
            res = (LinearSet(_unit(dim, x.a)),)
        elif isinstance(x, Union):
            res = _normalize([c for y in x.parts for c in go(y)])
        elif isinstance(x, Concat):
            acc: tuple[LinearSet, ...] = (LinearSet(zero),)
            for y in x.parts:
                acc = _normalize(
                    [LinearSet(_add(a.offset, b.offset), a.periods + b.periods) for a in acc for b in go(y)]
                )
            res = acc
        else:
            base = go(x.inner)
            if len(base) > max_star_components:
                raise LimitExceeded("max_star_components", len(base), max_star_components)
            comps = [LinearSet(zero)]
            for size in range(1, len(base) + 1):
                for group in combinations(base, size):
                    offset = zero
                    periods: list[Vector] = []
                    for c in group:
                        offset = _add(offset, c.offset)
                        periods.extend(c.periods)
                        periods.append(c.offset)
                    comps.append(LinearSet.of(offset, periods))
            res = _normalize(comps)
        memo[id(x)] = res
        return res

    return SemilinearSet(dim, go(r))


# --- membership, truncation, normalization ---------------------------------


def _solve(residual: Vector, periods: tuple[Vector, ...]) -> bool:
    """Is ``residual`` a natural combination of ``periods``?"""

    @lru_cache(maxsize=None)
    def rec(r: Vector, i: int) -> bool:
        if not any(r):
            return True
        if i == len(periods):
            return False
        p = periods[i]
        top = min(rc // pc for rc, pc in zip(r, p) if pc > 0)
        for lam in range(top, -1, -1):
            if rec(tuple(rc - lam * pc for rc, pc in zip(r, p)), i + 1):
                return True
        return False

    return rec(tuple(residual), 0)


def _in_linear(c: LinearSet, v: Vector) -> bool:
    r = tuple(x - y for x, y in zip(v, c.offset))
    if any(x < 0 for x in r):
        return False
    return _solve(r, c.periods)


def slset_member(s: SemilinearSet, v) -> bool:
    v = tuple(v)
    return any(_in_linear(c, v) for c in s.components)


def slset_truncate(s: SemilinearSet, bound: int) -> frozenset:
    """Members whose entries sum to at most ``bound``."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    found: set = set()
    for c in s.components:
        if sum(c.offset) > bound:
            continue
        seen = {c.offset}
        stack = [c.offset]
        while stack:
            v = stack.pop()
            for p in c.periods:
                w = _add(v, p)
                if sum(w) <= bound and w not in seen:
                    seen.add(w)
                    stack.append(w)
        found |= seen
    return frozenset(found)


def _reduce_periods(c: LinearSet) -> LinearSet:
    periods = list(c.periods)
    # Larger periods first: they are the likeliest to be sums of the others.
    for p in sorted(c.periods, key=lambda p: (-sum(p), p)):
        rest = tuple(q for q in periods if q != p)
        if _solve(p, rest):
            periods = list(rest)
    return LinearSet(c.offset, tuple(periods))


def _contained(a: LinearSet, b: LinearSet) -> bool:
    """Sufficient test for ``a ⊆ b``: offset and all periods of ``a`` land in ``b``."""
    return _in_linear(b, a.offset) and all(_solve(p, b.periods) for p in a.periods)


def _merge_pair(a: LinearSet, b: LinearSet) -> LinearSet | None:
    """``L(o, Q) ∪ L(o + p, P)`` equals ``L(o, P)`` when ``p ∈ P`` and ``P - {p} ⊆ Q ⊆ P``."""
    for lo, hi in ((a, b), (b, a)):
        step = tuple(y - x for x, y in zip(lo.offset, hi.offset))
        if step not in hi.periods:
            continue
        q, p = set(lo.periods), set(hi.periods)
        if p - {step} <= q <= p:
            return LinearSet(lo.offset, hi.periods)
    return None


def _merge(comps: list[LinearSet]) -> list[LinearSet]:
    merged = True
    while merged:
        merged = False
        for i, j in combinations(range(len(comps)), 2):
            joined = _merge_pair(comps[i], comps[j])
            if joined is not None:
                comps = [c for k, c in enumerate(comps) if k not in (i, j)] + [joined]
                merged = True
                break
    return comps


def _normalize(comps) -> tuple[LinearSet, ...]:
    comps = sorted(set(_merge(sorted({_reduce_periods(c) for c in comps}))))
    kept: list[bool] = [True] * len(comps)
    for i, c in enumerate(comps):
        for j, other in enumerate(comps):
            if i != j and kept[j] and _contained(c, other):
                kept[i] = False
                break
    return tuple(c for c, k in zip(comps, kept) if k)


def normalize(s: SemilinearSet) -> SemilinearSet:
    """Dedupe, drop redundant periods and drop subsumed components (not canonical)."""
    return SemilinearSet(s.dim, _normalize(s.components))


def max_period_entry(s: SemilinearSet) -> int:
    return max((x for c in s.components for p in c.periods for x in p), default=0)


# --- automata --------------------------------------------------------------


@dataclass(frozen=True)
class ExtractionLimits:
    """Guards against the exponential cost of elimination and starring.

    Limits apply to the trimmed letter automaton.  Defaults can be overridden
    with ``PARIKH_MAX_STATES``, ``PARIKH_MAX_TRANSITIONS`` and
    ``PARIKH_MAX_STAR_COMPONENTS``.
    """

    max_states: int = 12
    max_transitions: int = 80
    max_star_components: int = 14

    @classmethod
    def from_env(cls, environ=None) -> ExtractionLimits:
        env = os.environ if environ is None else environ
        base = cls()
        return cls(
            int(env.get("PARIKH_MAX_STATES", base.max_states)),
            int(env.get("PARIKH_MAX_TRANSITIONS", base.max_transitions)),
            int(env.get("PARIKH_MAX_STAR_COMPONENTS", base.max_star_components)),
        )


def nfa_parikh(m: WordNFA, limits: ExtractionLimits | None = None) -> SemilinearSet:
    limits = limits or ExtractionLimits()
    letter = trim(to_letter_nfa(trim(m)))
    originals = sum(1 for q in letter.states if not isinstance(q, Intermediate))
    if originals > limits.max_states:
        raise LimitExceeded("max_states", originals, limits.max_states)
    if len(letter.transitions) > limits.max_transitions:
        raise LimitExceeded("max_transitions", len(letter.transitions), limits.max_transitions)
    regex = eliminate_to_regex(letter)
    return regex_parikh(regex, m.num_terminals, limits.max_star_components)


# --- size bounds -----------------------------------------------------------


@dataclass(frozen=True)
class ToBoundReport:
    """Size bounds for the semilinear representation of a grammar's Parikh image.

    ``s`` is the state count of the letter automaton obtained from the
    ``(n*d+1)``-Parikh automaton and ``ell`` the alphabet size.  The three
    ``*_bound`` values are asymptotic expressions evaluated with constant 1.
    """

    n: int
    d: int
    t: int
    p: int
    k: int
    s: int
    ell: int
    linear_set_count_bound: int
    max_offset_entry_bound: int
    max_period_entry_bound: int
    max_periods: int
    degenerate: bool = False
    note: str = field(default="asymptotic bounds shown up to the O(.) constant")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def to_bound_report(g: Grammar) -> ToBoundReport:
    n, t = g.n, g.t
    d = max(degree(g), 0) if g.productions else 0
    p = sum(len(prod.terminals) for prod in g.productions)
    s = math.comb(n + n * d + 1, n) * p
    ell = t
    return ToBoundReport(
        n=n,
        d=d,
        t=t,
        p=p,
        k=default_k(g),
        s=s,
        ell=ell,
        linear_set_count_bound=s ** (ell * ell + 3 * ell + 3) * ell ** (4 * ell + 6),
        max_offset_entry_bound=s ** (3 * ell + 3) * ell ** (4 * ell + 6),
        max_period_entry_bound=s,
        max_periods=ell,
        degenerate=p == 0,
    )
