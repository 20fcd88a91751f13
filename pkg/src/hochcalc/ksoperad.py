"""Operations on Hochschild (co)chains encoded by marked planar trees and
cylinder forests.

Nodes are tuples:

* ``("a",)``  argument leaf of the output cochain (trees only)
* ``("c",)``  leaf carrying a component of the input chain (forests only)
* ``("1",)``  unmarked terminal vertex: the unit of A
* ``("u", children)``  unmarked vertex: ordered product (identity for one child)
* ``("s", id, children)``  slot for cochain ``id`` with arity ``len(children)``

A tree is its root's unique child.  A forest is the list of trees hanging
from roots 0..m_r on the bottom circle plus the integer ``offset``: the
chain leaves, read tree by tree in planar order, carry the top labels
offset, offset+1, ... modulo m_a+1.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .algebra import AlgebraSpec
from .errors import BoundError, ConsistencyError, InputError, ParseError
from .exactlin import axpy
from .hochschild import (
    Chain,
    RawCochain,
    _sign,
    connes_B,
    contract_I,
    cup,
    gerstenhaber_bracket,
    lie_derive_L,
)

ONE = Fraction(1)
ARG = ("a",)
LEAF = ("c",)
UNIT = ("1",)
Node = tuple

# ------------------------------------------------------------ node helpers


def _children(node: Node) -> tuple:
    if node[0] == "u":
        return node[1]
    if node[0] == "s":
        return node[2]
    return ()


def _walk(node: Node) -> Iterator[Node]:
    yield node
    for ch in _children(node):
        yield from _walk(ch)


def _count(node: Node, kind: str) -> int:
    return sum(1 for x in _walk(node) if x[0] == kind)


def _edges(node: Node) -> int:
    return sum(1 for _ in _walk(node))  # one edge above every vertex


def _slots(node: Node) -> dict[int, int]:
    return {x[1]: len(x[2]) for x in _walk(node) if x[0] == "s"}


def _normalize(node: Node) -> Node:
    kind = node[0]
    if kind == "s":
        return ("s", node[1], tuple(_normalize(c) for c in node[2]))
    if kind != "u":
        return node
    kept: list = []
    for c in (_normalize(c) for c in node[1]):
        if c == UNIT:
            continue  # edge between two unmarked vertices
        if c[0] == "u":
            kept.extend(c[1])
        else:
            kept.append(c)
    if not kept:
        return UNIT
    if len(kept) == 1:
        return kept[0]  # unmarked vertex of valency 2
    return ("u", tuple(kept))


def _substitute(node: Node, kind: str, replace: Iterator[Node]) -> Node:
    """Replace the leaves of ``kind`` in planar order by successive items."""
    if node[0] == kind:
        return next(replace)
    if node[0] == "u":
        return ("u", tuple(_substitute(c, kind, replace) for c in node[1]))
    if node[0] == "s":
        return ("s", node[1], tuple(_substitute(c, kind, replace) for c in node[2]))
    return node


def _renumber(node: Node, f) -> Node:
    if node[0] == "u":
        return ("u", tuple(_renumber(c, f) for c in node[1]))
    if node[0] == "s":
        return ("s", f(node[1]), tuple(_renumber(c, f) for c in node[2]))
    return node


def _replace_slot(node: Node, slot: int, inner: Node) -> Node:
    """Graft ``inner`` at the slot, its argument leaves taking the slot's subtrees."""
    if node[0] == "s" and node[1] == slot:
        kids = tuple(_replace_slot(c, slot, inner) for c in node[2])
        return _substitute(inner, "a", iter(kids))
    if node[0] == "u":
        return ("u", tuple(_replace_slot(c, slot, inner) for c in node[1]))
    if node[0] == "s":
        return ("s", node[1], tuple(_replace_slot(c, slot, inner) for c in node[2]))
    return node


def _default_names(k: int) -> tuple[str, ...]:
    base = "PQRSTUVW"
    return tuple(base[i] if i < len(base) else f"P{i}" for i in range(k))


# ------------------------------------------------------------ cells


@dataclass(frozen=True)
class MarkedTree:
    """Operation producing a cochain from ``len(names)`` cochains."""

    root: Node
    names: tuple[str, ...] = ()

    def __post_init__(self):
        ids = [x[1] for x in _walk(self.root) if x[0] == "s"]
        if sorted(ids) != list(range(len(ids))):
            raise InputError(f"slot ids {ids} must be 0..k-1, each once")
        if any(x[0] == "c" for x in _walk(self.root)):
            raise InputError("trees have argument leaves, not chain leaves")
        if not self.names:
            object.__setattr__(self, "names", _default_names(len(ids)))
        elif len(self.names) != len(ids):
            raise InputError("one name per slot")

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def arity(self) -> int:
        return _count(self.root, "a")

    def slot_arities(self) -> list[int]:
        s = _slots(self.root)
        return [s[i] for i in range(self.k)]

    @property
    def edges(self) -> int:
        return _edges(self.root)

    def __str__(self) -> str:
        return format_cell(self)


@dataclass(frozen=True)
class CylinderForest:
    """Operation producing a chain from ``len(names)`` cochains and one chain."""

    trees: tuple[Node, ...]
    offset: int = 0
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.trees:
            raise InputError("a forest needs at least one root")
        ids = [x[1] for t in self.trees for x in _walk(t) if x[0] == "s"]
        if sorted(ids) != list(range(len(ids))):
            raise InputError(f"slot ids {ids} must be 0..k-1, each once")
        if any(x[0] == "a" for t in self.trees for x in _walk(t)):
            raise InputError("forests have chain leaves, not argument leaves")
        n_leaves = sum(_count(t, "c") for t in self.trees)
        if n_leaves == 0:
            raise InputError("the input chain must enter: at least one chain leaf")
        if not 0 <= self.offset < n_leaves:
            raise InputError(f"offset {self.offset} outside 0..{n_leaves - 1}")
        if not self.names:
            object.__setattr__(self, "names", _default_names(len(ids)))
        elif len(self.names) != len(ids):
            raise InputError("one name per slot")

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def m_r(self) -> int:
        return len(self.trees) - 1

    @property
    def m_a(self) -> int:
        return sum(_count(t, "c") for t in self.trees) - 1

    def slot_arities(self) -> list[int]:
        s: dict = {}
        for t in self.trees:
            s.update(_slots(t))
        return [s[i] for i in range(self.k)]

    def leaf_labels(self) -> list[int]:
        size = self.m_a + 1
        return [(self.offset + i) % size for i in range(size)]

    @property
    def marked(self) -> int:
        return (self.m_r + 1) + (self.m_a + 1) + self.k

    @property
    def edges(self) -> int:
        return sum(_edges(t) for t in self.trees)

    def __str__(self) -> str:
        return format_cell(self)


Cell = MarkedTree | CylinderForest


def normalize(cell: Cell) -> Cell:
    """Canonical representative: contract unmarked-unmarked edges and drop
    unmarked vertices of valency 2.  Forests keep root 0 as the reference
    point, so the cyclic data is just the offset."""
    if isinstance(cell, MarkedTree):
        return MarkedTree(_normalize(cell.root), cell.names)
    return CylinderForest(tuple(_normalize(t) for t in cell.trees), cell.offset, cell.names)


def is_normal(cell: Cell) -> bool:
    return normalize(cell) == cell


def compose(outer: Cell, inner: Cell, slot: int | None = None) -> Cell:
    """Operadic composition, normalized.

    With ``slot`` given, ``inner`` must be a tree whose arity equals that
    slot's arity; it is grafted in place of the slot and its slots take the
    ids slot..slot+k_inner-1.  With ``slot=None`` both are forests and
    ``inner`` is stacked below ``outer``: outer's top marks meet inner's
    roots, and outer's slots come first.
    """
    if slot is not None:
        if not isinstance(inner, MarkedTree):
            raise InputError("only a tree can be grafted into a cochain slot")
        if not 0 <= slot < outer.k:
            raise InputError(f"no slot {slot}")
        if outer.slot_arities()[slot] != inner.arity:
            raise InputError(
                f"slot {slot} takes a {outer.slot_arities()[slot]}-cochain, tree has arity {inner.arity}"
            )
        ki = inner.k
        inner_root = _renumber(inner.root, lambda i: i + slot)
        # park the target slot at id -1 while the others make room
        move = lambda i: -1 if i == slot else (i if i < slot else i + ki - 1)  # noqa: E731
        names = outer.names[:slot] + inner.names + outer.names[slot + 1 :]
        if isinstance(outer, MarkedTree):
            return normalize(MarkedTree(_replace_slot(_renumber(outer.root, move), -1, inner_root), names))
        trees = tuple(_replace_slot(_renumber(t, move), -1, inner_root) for t in outer.trees)
        return normalize(CylinderForest(trees, outer.offset, names))
    if not (isinstance(outer, CylinderForest) and isinstance(inner, CylinderForest)):
        raise InputError("stacking needs two forests")
    if outer.m_a != inner.m_r:
        raise InputError(f"outer has {outer.m_a + 1} top marks, inner has {inner.m_r + 1} roots")
    ko = outer.k
    inner_trees = [_renumber(t, lambda i: i + ko) for t in inner.trees]
    replacements = iter([inner_trees[j] for j in outer.leaf_labels()])
    trees = tuple(_substitute(t, "c", replacements) for t in outer.trees)
    # the first chain leaf of the result tells the new offset
    inner_labels = inner.leaf_labels()
    pos_of_leaf: list[int] = []
    order = iter(outer.leaf_labels())
    for t in outer.trees:
        for _ in range(_count(t, "c")):
            j = next(order)
            before = sum(_count(inner.trees[i], "c") for i in range(j))
            pos_of_leaf.extend(inner_labels[before + x] for x in range(_count(inner.trees[j], "c")))
    size = inner.m_a + 1
    new_offset = pos_of_leaf[0]
    if pos_of_leaf != [(new_offset + i) % size for i in range(size)]:
        raise ConsistencyError("stacked forest lost its cyclic order")
    return normalize(CylinderForest(trees, new_offset, outer.names + inner.names))


# ------------------------------------------------------------ degree and degeneracy


def degree(cell: Cell) -> int:
    """Trees: r - q; forests: m_a - m_r - q, with q the total slot arity."""
    if not is_normal(cell):
        raise InputError("degree is defined on normalized cells")
    q = sum(cell.slot_arities())
    if isinstance(cell, MarkedTree):
        return cell.arity - q
    return cell.m_a - cell.m_r - q


def _has_input(node: Node, leaf: str) -> bool:
    return any(x[0] in (leaf, "s") for x in _walk(node))


def _unit_into_slot(node: Node, leaf: str) -> bool:
    """A maximal cochain-free subtree under a slot that carries no input leaf."""
    for x in _walk(node):
        if x[0] == "s" and any(not _has_input(c, leaf) for c in x[2]):
            return True
    return False


def degeneracy(cell: Cell) -> str | None:
    """Name of the first degeneracy pattern found, or None."""
    if not is_normal(cell):
        raise InputError("degeneracy is defined on normalized cells")
    if isinstance(cell, MarkedTree):
        for x in _walk(cell.root):
            if x[0] == "s" and UNIT in x[2]:
                return "unit-into-slot"
        return "empty-subtree-into-slot" if _unit_into_slot(cell.root, "a") else None
    for t in cell.trees:
        for x in _walk(t):
            if x[0] == "s" and UNIT in x[2]:
                return "unit-into-slot"
        if _unit_into_slot(t, "c"):
            return "empty-subtree-into-slot"
    for j, t in enumerate(cell.trees):
        if j and not _has_input(t, "c"):
            return "unit-at-root"
    return None


def is_degenerate(cell: Cell) -> bool:
    return degeneracy(cell) is not None


# ------------------------------------------------------------ evaluation


def _value(node: Node, alg: AlgebraSpec, cochains: Sequence, leaves: Iterator[Mapping]) -> dict:
    kind = node[0]
    if kind in ("a", "c"):
        return dict(next(leaves))
    if kind == "1":
        return dict(alg.unit)
    if kind == "u":
        vals = [_value(c, alg, cochains, leaves) for c in node[1]]
        out = vals[0] if vals else dict(alg.unit)
        for v in vals[1:]:
            out = alg.mul(out, v)
        return out
    args = [_value(c, alg, cochains, leaves) for c in node[2]]
    return cochains[node[1]].evaluate(args)


def _check_inputs(cell: Cell, cochains: Sequence) -> None:
    if len(cochains) != cell.k:
        raise InputError(f"cell has {cell.k} slots, got {len(cochains)} cochains")
    for i, (need, p) in enumerate(zip(cell.slot_arities(), cochains)):
        if p.arity != need:
            raise InputError(f"slot {i} takes a {need}-cochain, got arity {p.arity}")


def evaluate_raw(cell: Cell, alg: AlgebraSpec, cochains: Sequence, chain: Mapping | None = None):
    """Unnormalized action.

    Trees give a RawCochain on the full basis.  Forests take a raw chain
    ``{basis tuple: coeff}`` of length m_a and return one of length m_r.
    Units are kept, so composition is compatible on the nose.
    """
    _check_inputs(cell, cochains)
    if isinstance(cell, MarkedTree):
        root = cell.root

        def fn(t):
            return _value(root, alg, cochains, iter({i: ONE} for i in t))

        return RawCochain(alg, cell.arity, fn, str(cell))
    if chain is None:
        raise InputError("a forest needs an input chain")
    labels = cell.leaf_labels()
    out: dict = {}
    for t, x in chain.items():
        if len(t) != cell.m_a + 1:
            raise InputError(f"forest takes chains of length {cell.m_a}, got {len(t) - 1}")
        leaves = iter([{t[j]: ONE} for j in labels])
        comps = [_value(tree, alg, cochains, leaves) for tree in cell.trees]
        for idx in itertools.product(*(c.items() for c in comps)):
            c = x
            for _, y in idx:
                c *= y
            axpy(out, tuple(k for k, _ in idx), c)
    return out


def evaluate(cell: Cell, cochains: Sequence, chain: Chain | None = None, alg: AlgebraSpec | None = None):
    """Action on normalized complexes: a Cochain for trees, a Chain for forests."""
    if alg is None:
        src = chain if chain is not None else (cochains[0] if cochains else None)
        if src is None:
            raise InputError("pass the algebra when there are no inputs to infer it from")
        alg = src.algebra
    if isinstance(cell, MarkedTree):
        return evaluate_raw(cell, alg, cochains).restrict()
    if chain is None:
        raise InputError("a forest needs an input chain")
    if chain.length != cell.m_a:
        raise InputError(f"forest takes chains of length {cell.m_a}, got {chain.length}")
    return Chain(alg, cell.m_r, evaluate_raw(cell, alg, cochains, chain.terms))


# ------------------------------------------------------------ symbolic evaluation


def _sym(node: Node, names: Sequence[str], leaves: Iterator[str]) -> tuple:
    """Value as a word in the free monoid on atoms; the unit is the empty word."""
    kind = node[0]
    if kind in ("a", "c"):
        return (next(leaves),)
    if kind == "1":
        return ()
    if kind == "u":
        return tuple(x for c in node[1] for x in _sym(c, names, leaves))
    args = tuple(_sym(c, names, leaves) for c in node[2])
    return ((names[node[1]], args),)


def render_word(word: tuple) -> str:
    if not word:
        return "1"
    parts = []
    for atom in word:
        if isinstance(atom, str):
            parts.append(atom)
        else:
            name, args = atom
            parts.append(name if not args else f"{name}({','.join(render_word(a) for a in args)})")
    return " ".join(parts)


def symbolic(cell: Cell) -> str:
    """Evaluation on symbolic inputs: arguments a1..ar (trees) or chain
    components a0..am (forests), cochains named by the cell's slot names."""
    if isinstance(cell, MarkedTree):
        leaves = iter(f"a{i + 1}" for i in range(cell.arity))
        return render_word(_sym(cell.root, cell.names, leaves))
    leaves = iter(f"a{j}" for j in cell.leaf_labels())
    return "(" + ", ".join(render_word(_sym(t, cell.names, leaves)) for t in cell.trees) + ")"


def same_expression(a: str, b: str) -> bool:
    """Equality of rendered expressions up to whitespace."""
    return re.sub(r"\s+", "", a) == re.sub(r"\s+", "", b)


# ------------------------------------------------------------ literal syntax

_TOKEN = re.compile(r"\s*(?:([A-Z][A-Za-z0-9_]*)|(u|a|c|1)|([(),|\[\]@])|(\d+))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.slot_names: list[str] = []

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect: str | None = None) -> str:
        t = self.peek()
        if t is None or (expect is not None and t != expect):
            raise ParseError(f"expected {expect or 'a token'}, got {t!r}")
        self.i += 1
        return t

    def node(self) -> Node:
        t = self.take()
        if t == "a":
            return ARG
        if t == "c":
            return LEAF
        if t == "1":
            return UNIT
        if t == "u":
            return ("u", self.args())
        if t[0].isupper():
            if t in self.slot_names:
                raise ParseError(f"slot {t} used twice")
            self.slot_names.append(t)
            kids = self.args() if self.peek() == "(" else ()
            return ("s", t, kids)
        raise ParseError(f"unexpected token {t!r}")

    def args(self) -> tuple:
        self.take("(")
        out = []
        if self.peek() == ")":
            self.take(")")
            return ()
        while True:
            out.append(self.node())
            t = self.take()
            if t == ")":
                return tuple(out)
            if t != ",":
                raise ParseError(f"expected ',' or ')', got {t!r}")


def _resolve(node: Node, ids: dict) -> Node:
    if node[0] == "s":
        return ("s", ids[node[1]], tuple(_resolve(c, ids) for c in node[2]))
    if node[0] == "u":
        return ("u", tuple(_resolve(c, ids) for c in node[1]))
    return node


def parse_cell(text: str) -> Cell:
    """``u(Q(a,a,1),P)`` is a tree; ``[u(P,c) | Q(c,1,c) | 1 | c]@3`` a forest.

    Slot ids follow the alphabetical order of the slot names.
    """
    p = _Parser(text)
    if p.peek() == "[":
        p.take("[")
        trees = [p.node()]
        while p.peek() == "|":
            p.take("|")
            trees.append(p.node())
        p.take("]")
        offset = 0
        if p.peek() == "@":
            p.take("@")
            offset = int(p.take())
        if p.peek() is not None:
            raise ParseError(f"trailing input {p.toks[p.i:]}")
        names = tuple(sorted(p.slot_names))
        ids = {n: i for i, n in enumerate(names)}
        return CylinderForest(tuple(_resolve(t, ids) for t in trees), offset, names)
    root = p.node()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.toks[p.i:]}")
    names = tuple(sorted(p.slot_names))
    ids = {n: i for i, n in enumerate(names)}
    return MarkedTree(_resolve(root, ids), names)


def _fmt(node: Node, names: Sequence[str]) -> str:
    kind = node[0]
    if kind in ("a", "c", "1"):
        return kind
    if kind == "u":
        return "u(" + ",".join(_fmt(c, names) for c in node[1]) + ")"
    name = names[node[1]]
    return name if not node[2] else name + "(" + ",".join(_fmt(c, names) for c in node[2]) + ")"


def format_cell(cell: Cell) -> str:
    if isinstance(cell, MarkedTree):
        return _fmt(cell.root, cell.names)
    body = " | ".join(_fmt(t, cell.names) for t in cell.trees)
    return f"[{body}]@{cell.offset}"


def render_diagram(cell: Cell) -> str:
    """Indented outline, one vertex per line, roots at the top."""
    lines: list[str] = []
    labels = iter(cell.leaf_labels()) if isinstance(cell, CylinderForest) else None
    args = itertools.count(1)

    def walk(node: Node, depth: int) -> None:
        pad = "  " * depth
        kind = node[0]
        if kind == "a":
            lines.append(f"{pad}o a{next(args)}")
        elif kind == "c":
            lines.append(f"{pad}o top {next(labels)}")
        elif kind == "1":
            lines.append(f"{pad}* unit")
        elif kind == "u":
            lines.append(f"{pad}* {'identity' if len(node[1]) == 1 else 'product'}")
            for c in node[1]:
                walk(c, depth + 1)
        else:
            lines.append(f"{pad}o {cell.names[node[1]]} (arity {len(node[2])})")
            for c in node[2]:
                walk(c, depth + 1)

    if isinstance(cell, MarkedTree):
        lines.append("root")
        walk(cell.root, 1)
    else:
        for j, t in enumerate(cell.trees):
            lines.append(f"root {j}")
            walk(t, 1)
        lines.append(f"top marks start at {cell.offset}")
    return "\n".join(lines)


# ------------------------------------------------------------ enumeration


@lru_cache(maxsize=None)
def _gen(budget: int, slots: frozenset, ctx: str, leaf: str) -> tuple:
    """Normalized subtrees using exactly ``slots``, with at most ``budget``
    edges below their top vertex.  ``ctx`` is the parent's type: an
    unmarked parent forbids unmarked children (and hence units)."""
    out: list = []
    if not slots:
        out.append((0, (leaf,)))
        if ctx != "unmarked":
            out.append((0, UNIT))
    for s in sorted(slots):
        for e, kids in _seq(budget, slots - {s}, "slot", leaf, 0):
            out.append((e, ("s", s, kids)))
    if ctx != "unmarked":
        for e, kids in _seq(budget, slots, "unmarked", leaf, 2):
            out.append((e, ("u", kids)))
    return tuple(out)


@lru_cache(maxsize=None)
def _seq(budget: int, slots: frozenset, ctx: str, leaf: str, min_len: int) -> tuple:
    """Ordered child lists (edges counted including the edges to the children)."""
    out: list = []
    if not slots and min_len <= 0:
        out.append((0, ()))
    if budget <= 0:
        return tuple(out)
    items = sorted(slots)
    for r in range(len(items) + 1):
        for first in itertools.combinations(items, r):
            fs = frozenset(first)
            for e1, child in _gen(budget - 1, fs, ctx, leaf):
                for e2, rest in _seq(budget - 1 - e1, slots - fs, ctx, leaf, max(min_len - 1, 0)):
                    out.append((1 + e1 + e2, (child,) + rest))
    return tuple(out)


def enumerate_trees(k: int, max_edges: int) -> Iterator[MarkedTree]:
    """All normalized trees with k slots and at most ``max_edges`` edges (root edge included)."""
    for _, node in _gen(max_edges - 1, frozenset(range(k)), "root", "a"):
        yield MarkedTree(node)


def enumerate_forests(k: int, max_marked: int, max_edges: int | None = None) -> Iterator[CylinderForest]:
    """All normalized forests with k lateral slots and at most ``max_marked``
    marked vertices (roots, top marks and slots).

    The default edge cap is the most a nondegenerate cell can use: every
    unmarked internal vertex has at least two marked children and only root
    0 may carry a unit, so edges <= N + N // 2 + 1 with N = max_marked - 1.
    Degenerate cells are listed only up to that cap.
    """
    if max_edges is None:
        n = max_marked - 1
        max_edges = n + n // 2 + 1
    slots = frozenset(range(k))
    for n_roots in range(1, max_marked - k):
        max_leaves = max_marked - k - n_roots
        yield from _forests(n_roots, slots, max_leaves, max_edges, max_marked)


def _forests(n_roots, slots, max_leaves, max_edges, max_marked) -> Iterator[CylinderForest]:
    def rec(j: int, remaining: frozenset, edges_left: int, leaves: int, acc: tuple):
        if j == n_roots:
            if not remaining and leaves >= 1:
                yield acc
            return
        items = sorted(remaining)
        for r in range(len(items) + 1):
            for pick in itertools.combinations(items, r):
                ps = frozenset(pick)
                for e, node in _gen(edges_left - 1, ps, "root", "c"):
                    nl = leaves + _count(node, "c")
                    if nl > max_leaves:
                        continue
                    yield from rec(j + 1, remaining - ps, edges_left - 1 - e, nl, acc + (node,))

    for trees in rec(0, slots, max_edges, 0, ()):
        n_leaves = sum(_count(t, "c") for t in trees)
        for off in range(n_leaves):
            yield CylinderForest(trees, off)


@dataclass
class BoundsReport:
    kind: str
    k: int
    size_bound: int
    bound: int
    total: int = 0
    nondegenerate: int = 0
    min_degree: int | None = None
    witness: str | None = None
    violations: list = field(default_factory=list)
    patterns: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "slots": self.k,
            "size_bound": self.size_bound,
            "degree_bound": self.bound,
            "cells": self.total,
            "nondegenerate": self.nondegenerate,
            "degeneracy_patterns": dict(sorted(self.patterns.items())),
            "min_degree": self.min_degree,
            "witness": self.witness,
            "violations": self.violations,
            "ok": self.ok,
        }


TREE_EDGE_LIMIT = 9
FOREST_MARKED_LIMIT = 7


def enumerate_check(kind: str, k: int, size_bound: int) -> BoundsReport:
    """Check the low-degree bound on every nondegenerate normalized cell.

    Trees (``size_bound`` = edges) must have degree >= 1 - k, forests
    (``size_bound`` = marked vertices) degree >= -1 - k.  Every violating
    cell is reported rather than skipped.
    """
    if k > 3 or k < 0:
        raise BoundError("enumeration supports 0 <= k <= 3", {"k": k})
    if kind == "tree":
        if k < 1:
            raise InputError("the tree bound starts at one slot; the unit tree has degree 0")
        if size_bound > TREE_EDGE_LIMIT:
            raise BoundError(f"tree size above {TREE_EDGE_LIMIT} edges", {"size_bound": size_bound})
        cells: Iterator = enumerate_trees(k, size_bound)
        bound = 1 - k
    elif kind == "forest":
        if size_bound > FOREST_MARKED_LIMIT:
            raise BoundError(f"forest size above {FOREST_MARKED_LIMIT} marked vertices", {"size_bound": size_bound})
        cells = enumerate_forests(k, size_bound)
        bound = -1 - k
    else:
        raise InputError("kind must be 'tree' or 'forest'")
    rep = BoundsReport(kind, k, size_bound, bound)
    best_key = None
    for cell in cells:
        rep.total += 1
        pat = degeneracy(cell)
        if pat is not None:
            rep.patterns[pat] = rep.patterns.get(pat, 0) + 1
            continue
        rep.nondegenerate += 1
        d = degree(cell)
        text = format_cell(cell)
        if d < bound:
            rep.violations.append({"cell": text, "degree": d})
        key = (d, len(text), text)
        if best_key is None or key < best_key:
            best_key = key
    if best_key is not None:
        rep.min_degree, _, rep.witness = best_key
    return rep


# ------------------------------------------------------------ generating cells


def _leaves(kind: str, n: int) -> tuple:
    return ((kind,),) * n


def _slot(i: int, kids: tuple) -> Node:
    return ("s", i, kids)


def cup_cell(p: int, q: int) -> list[tuple[int, MarkedTree]]:
    return [(1, MarkedTree(_normalize(("u", (_slot(0, _leaves("a", p)), _slot(1, _leaves("a", q)))))))]


def insertion_cell(a1: int, a2: int, i: int) -> MarkedTree:
    """Slot 0 with slot 1 grafted at its i-th input."""
    inner = _slot(1, _leaves("a", a2))
    kids = _leaves("a", i) + (inner,) + _leaves("a", a1 - i - 1)
    return MarkedTree(_slot(0, kids))


def bracket_cells(a1: int, a2: int) -> list[tuple[int, MarkedTree]]:
    k1, k2 = a1 - 1, a2 - 1
    out = [(_sign(i * k2), insertion_cell(a1, a2, i)) for i in range(a1)]
    for i in range(a2):
        kids = _leaves("a", i) + (_slot(0, _leaves("a", a1)),) + _leaves("a", a2 - i - 1)
        out.append((-_sign(k1 * k2) * _sign(i * k1), MarkedTree(_slot(1, kids))))
    return out


def contraction_cells(k: int, m: int) -> list[tuple[int, CylinderForest]]:
    if m < k:
        raise InputError("contraction needs m >= k")
    first = _normalize(("u", (LEAF, _slot(0, _leaves("c", k)))))
    return [(1, CylinderForest((first,) + _leaves("c", m - k), 0))]


def lie_cells(arity: int, m: int) -> list[tuple[int, CylinderForest]]:
    k = arity - 1
    out = []
    if k < 0:
        for i in range(1, m + 2):
            trees = _leaves("c", i) + (_slot(0, ()),) + _leaves("c", m + 1 - i)
            out.append((_sign(i), CylinderForest(trees, 0)))
        return out
    if m < k:
        raise InputError("Lie derivative needs m >= arity - 1")
    q = _slot(0, _leaves("c", arity))
    for i in range(m - k + 1):
        trees = (q,) + _leaves("c", m - k) if i == 0 else _leaves("c", i) + (q,) + _leaves("c", m - k - i)
        out.append((_sign(k * i), CylinderForest(trees, 0)))
    for j in range(m - k, m):
        trees = (q,) + _leaves("c", m - k)
        out.append((_sign(m * (j + 1)), CylinderForest(trees, (j + 1) % (m + 1))))
    return out


def connes_cells(m: int) -> list[tuple[int, CylinderForest]]:
    return [(_sign(m * i), CylinderForest((UNIT,) + _leaves("c", m + 1), i)) for i in range(m + 1)]


def evaluate_sum(cells: Sequence[tuple[int, Cell]], cochains: Sequence, chain: Chain | None = None, alg=None):
    total = None
    for s, cell in cells:
        v = evaluate(cell, cochains, chain, alg).scale(s)
        total = v if total is None else total + v
    return total


@dataclass
class GeneratorReport:
    checked: dict
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": dict(sorted(self.checked.items())), "failures": self.failures, "ok": self.ok}


def check_generators(alg: AlgebraSpec, max_arity: int, max_length: int, rng: random.Random) -> GeneratorReport:
    """Signed cell sums for cup, bracket, I, L and B against the direct
    operations, on random normalized inputs."""
    from .hochschild import random_chain, random_cochain

    checked: dict = {}
    failures: list = []

    def record(op: str, ok: bool, **info) -> None:
        checked[op] = checked.get(op, 0) + 1
        if not ok:
            failures.append({"operation": op, **info})

    for p, q in itertools.product(range(max_arity + 1), repeat=2):
        if p + q > max_arity + 1:
            continue
        P, Q = random_cochain(alg, p, rng), random_cochain(alg, q, rng)
        record("cup", evaluate_sum(cup_cell(p, q), [P, Q]) == cup(P, Q), p=p, q=q)
        if p >= 1 and q >= 1:
            record("bracket", evaluate_sum(bracket_cells(p, q), [P, Q]) == gerstenhaber_bracket(P, Q), p=p, q=q)
    for a in range(max_arity + 1):
        P = random_cochain(alg, a, rng)
        for m in range(max_length + 1):
            c = random_chain(alg, m, rng)
            if m >= a:
                record("contraction", evaluate_sum(contraction_cells(a, m), [P], c) == contract_I(P, c), k=a, m=m)
            if m >= a - 1:
                got = evaluate_sum(lie_cells(a, m), [P], c)
                record("lie", got == lie_derive_L(P, c, allow_arity0=True), k=a, m=m)
    for m in range(max_length + 1):
        c = random_chain(alg, m, rng)
        record("connes", evaluate_sum(connes_cells(m), [], c, alg) == connes_B(c), m=m)
    return GeneratorReport(checked, failures)


# ------------------------------------------------------------ worked examples

PRIMER_TREE = "u(Q(a,a,1),P)"
PRIMER_FOREST = "[u(P,c) | Q(c,1,c) | 1 | c]@3"
