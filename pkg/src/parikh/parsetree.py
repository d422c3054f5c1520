"""Parse trees: yield, height, dimension, compaction and index-bounded derivations.

Trees are immutable.  Subtrees are addressed by paths, tuples of child
indices from the root; the surgery in :func:`compact` builds new trees by
replacing the subtree at a path.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterator

from .grammar import Derivation, Grammar, Production, Symbol, parikh_t

__all__ = [
    "ParseTree",
    "IncompleteTreeError",
    "leaf",
    "expand",
    "yield_of",
    "height",
    "dimension",
    "node_count",
    "variables_of",
    "count_variables",
    "is_compact",
    "compact",
    "omega_equivalent",
    "subtree",
    "replace_at",
    "tree_to_indexed_derivation",
    "derivation_to_tree",
    "to_sexpr",
    "from_sexpr",
]

Path = tuple  # tuple[int, ...]


class IncompleteTreeError(ValueError):
    pass


@dataclass(frozen=True)
class ParseTree:
    """A node of a parse tree.

    Internal nodes carry a variable label and the production applied there;
    their children spell the production's right-hand side, an empty
    right-hand side being a single ε leaf.  Leaves carry a terminal label or
    ``None`` for ε.  A variable-labelled node without a production is a hole
    and makes the tree incomplete.
    """

    label: Symbol | None
    children: tuple[ParseTree, ...] = ()
    production: Production | None = None

    def __post_init__(self):
        p = self.production
        if p is None:
            if self.children:
                raise ValueError("only expanded variable nodes have children")
            return
        if self.label != Symbol.var(p.lhs):
            raise ValueError(f"node {self.label} does not match production lhs {p.lhs}")
        expected = p.rhs if p.rhs else (None,)
        if tuple(c.label for c in self.children) != expected:
            raise ValueError("children do not spell the production's right-hand side")

    @property
    def is_internal(self) -> bool:
        return self.label is not None and self.label.is_var

    @property
    def proper_children(self) -> list[tuple[int, ParseTree]]:
        return [(i, c) for i, c in enumerate(self.children) if c.is_internal]

    def walk(self, path: Path = ()) -> Iterator[tuple[Path, ParseTree]]:
        """Pre-order traversal yielding ``(path, node)``."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))


def leaf(label: Symbol | None) -> ParseTree:
    return ParseTree(label)


def expand(p: Production, children: list[ParseTree] | None = None) -> ParseTree:
    """Node for ``p``; missing children default to terminal leaves / holes."""
    if children is None:
        children = [ParseTree(s) for s in p.rhs]
    if not p.rhs:
        children = [ParseTree(None)]
    return ParseTree(Symbol.var(p.lhs), tuple(children), p)


def _is_hole(t: ParseTree) -> bool:
    return t.is_internal and t.production is None


def yield_of(t: ParseTree) -> tuple[int, ...]:
    """Terminal ids read left to right at the leaves."""
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if _is_hole(node):
            raise IncompleteTreeError("tree has an unexpanded variable leaf")
        if node.label is not None and not node.label.is_var:
            out.append(node.label.id)
        stack.extend(reversed(node.children))
    return tuple(out)


def height(t: ParseTree) -> int:
    if not t.children:
        return 0
    return 1 + max(height(c) for c in t.children)


def dimension(t: ParseTree) -> int:
    dims = sorted((dimension(c) for _, c in t.proper_children), reverse=True)
    if not dims:
        return 0
    if len(dims) == 1 or dims[0] > dims[1]:
        return dims[0]
    return dims[0] + 1


def node_count(t: ParseTree) -> int:
    return sum(1 for _ in t.walk())


def variables_of(t: ParseTree) -> frozenset[int]:
    return frozenset(node.label.id for _, node in t.walk() if node.is_internal)


def count_variables(t: ParseTree) -> int:
    return len(variables_of(t))


def is_compact(t: ParseTree) -> bool:
    return dimension(t) <= count_variables(t)


def omega_equivalent(g: Grammar, t1: ParseTree, t2: ParseTree) -> bool:
    """Same node count, same variables, Parikh-equal yields."""
    return (
        node_count(t1) == node_count(t2)
        and variables_of(t1) == variables_of(t2)
        and parikh_t(g, map(Symbol.term, yield_of(t1))) == parikh_t(g, map(Symbol.term, yield_of(t2)))
    )


def subtree(t: ParseTree, path: Path) -> ParseTree:
    for i in path:
        t = t.children[i]
    return t


def replace_at(t: ParseTree, path: Path, new: ParseTree) -> ParseTree:
    if not path:
        return new
    i, rest = path[0], path[1:]
    children = list(t.children)
    children[i] = replace_at(children[i], rest, new)
    return ParseTree(t.label, tuple(children), t.production)


# --- compaction ------------------------------------------------------------


def _repeated_pair(t: ParseTree) -> tuple[Path, Path]:
    """Outer and inner path of the first repeated variable on a root-to-leaf path.

    Leftmost depth-first: the first node whose label already occurs among its
    ancestors decides the path; the ancestor is its first earlier occurrence.
    """
    stack = [((), t, {})]
    while stack:
        path, node, seen = stack.pop()
        if not node.is_internal:
            continue
        v = node.label.id
        if v in seen:
            return seen[v], path
        seen = {**seen, v: path}
        for i in reversed(range(len(node.children))):
            stack.append((path + (i,), node.children[i], seen))
    raise AssertionError("no root-to-leaf path repeats a variable")


def _shallowest(t: ParseTree, var: int) -> Path:
    queue = deque([((), t)])
    while queue:
        path, node = queue.popleft()
        if node.is_internal and node.label.id == var:
            return path
        for i, c in enumerate(node.children):
            queue.append((path + (i,), c))
    raise AssertionError(f"variable {var} does not occur")


def compact(t: ParseTree) -> ParseTree:
    """An Ω-equivalent tree whose dimension is at most its number of variables.

    Loops: compact every proper child, then move a pumpable segment out of a
    child of maximal dimension into the child with the most variables,
    until the whole tree is compact.
    """
    if _is_hole(t):
        raise IncompleteTreeError("cannot compact an incomplete tree")
    while not is_compact(t):
        children = list(t.children)
        proper = [i for i, c in enumerate(children) if c.is_internal]
        for i in proper:
            children[i] = compact(children[i])
        t = ParseTree(t.label, tuple(children), t.production)
        if is_compact(t):
            break

        ks = {i: count_variables(children[i]) for i in proper}
        ds = {i: dimension(children[i]) for i in proper}
        x = min(i for i in proper if ks[i] == max(ks.values()))
        y = min(i for i in proper if i != x and ds[i] == max(ds.values()))
        tx, ty = children[x], children[y]
        assert dimension(t) == ds[y] + 1 == ks[y] + 1 == ks[x] + 1 == count_variables(t) + 1

        outer, inner = _repeated_pair(ty)
        var = subtree(ty, outer).label.id
        px = _shallowest(tx, var)
        inner_rel = inner[len(outer):]
        # t_x := t_x^a . (t_y^b . t_x^b);  t_y := t_y^a . t_y^c
        pumped = replace_at(subtree(ty, outer), inner_rel, subtree(tx, px))
        children[x] = replace_at(tx, px, pumped)
        children[y] = replace_at(ty, outer, subtree(ty, inner))
        t = ParseTree(t.label, tuple(children), t.production)
    return t


# --- derivations -----------------------------------------------------------


def tree_to_indexed_derivation(g: Grammar, t: ParseTree) -> Derivation:
    """A derivation of ``yield_of(t)`` with index at most ``dimension(t)*d + 1``.

    The root production is applied first; the proper children are then
    derived one after another, right to left, except that the leftmost child
    of maximal dimension is saved for last.
    """
    if not t.is_internal:
        raise ValueError("tree must be rooted at a variable")
    yield_of(t)  # completeness check
    if t.label.id != g.axiom:
        g = replace(g, axiom=t.label.id)
    steps: list[tuple[int, Production]] = []

    def derive(node: ParseTree, offset: int) -> int:
        """Append steps for ``node`` sitting at ``offset``; return its yield length."""
        steps.append((offset, node.production))
        if node.production.rhs == ():
            return 0
        lengths = [1] * len(node.children)
        proper = node.proper_children
        if proper:
            dmax = max(dimension(c) for _, c in proper)
            last = next(i for i, c in proper if dimension(c) == dmax)
            order = [i for i, _ in reversed(proper) if i != last] + [last]
            for i in order:
                pos = offset + sum(lengths[:i])
                lengths[i] = derive(node.children[i], pos)
        return sum(lengths)

    derive(t, 0)
    return Derivation.from_steps(g, steps)


class _Builder:
    __slots__ = ("symbol", "production", "children")

    def __init__(self, symbol):
        self.symbol = symbol
        self.production = None
        self.children = None

    def freeze(self) -> ParseTree:
        if self.production is None:
            return ParseTree(self.symbol)
        return ParseTree(self.symbol, tuple(c.freeze() for c in self.children), self.production)


def derivation_to_tree(dv: Derivation) -> ParseTree:
    if any(s.is_var for s in dv.result):
        raise ValueError("derivation does not end in a terminal word")
    root = _Builder(dv.forms[0][0])
    slots: list[_Builder] = [root]
    for pos, p in dv.steps:
        node = slots[pos]
        node.production = p
        node.children = [_Builder(s) for s in p.rhs] or [_Builder(None)]
        slots[pos:pos + 1] = node.children if p.rhs else []
    return root.freeze()


# --- s-expressions ---------------------------------------------------------

_TOKEN = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([A-Za-z0-9_]+))')


def to_sexpr(g: Grammar, t: ParseTree) -> str:
    """Render as ``(A1 (A1 "a") (A2 "c" (A1 "a")))``; ε is ``()``."""
    if t.label is None:
        return "()"
    if not t.label.is_var:
        return f'"{g.terminals[t.label.id]}"'
    name = g.variables[t.label.id]
    if t.production is None:
        return name
    return "(" + " ".join([name] + [to_sexpr(g, c) for c in t.children]) + ")"


def from_sexpr(g: Grammar, text: str) -> ParseTree:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad tree syntax at {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.groups())
        pos = m.end()
    tokens.reverse()

    def parse() -> ParseTree:
        lp, rp, term, name = tokens.pop()
        if term is not None:
            return ParseTree(Symbol.term(g.terminals.index(term)))
        if name is not None:
            return ParseTree(Symbol.var(g.variables.index(name)))
        if rp is not None:
            raise ValueError("unexpected ')'")
        if tokens[-1][1] is not None:
            tokens.pop()
            return ParseTree(None)
        _, _, _, name = tokens.pop()
        if name is None:
            raise ValueError("expected a variable name after '('")
        var = g.variables.index(name)
        children = []
        while tokens[-1][1] is None:
            children.append(parse())
        tokens.pop()
        rhs = tuple(c.label for c in children if c.label is not None)
        p = Production(var, rhs)
        if p not in g.productions:
            raise ValueError(f"no production {g.format_production(p)}")
        return ParseTree(Symbol.var(var), tuple(children), p)

    tree = parse()
    if tokens:
        raise ValueError("trailing input after tree")
    return tree
