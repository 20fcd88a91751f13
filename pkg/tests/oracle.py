"""Naive re-implementations of the cochain and chain operations.

Every formula is expanded over full basis tuples with plain loops; only
the final projection to normalized (co)chains goes through the library
constructors.  Used to cross-check the optimized code on small algebras.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from hochcalc.algebra import AlgebraSpec
from hochcalc.hochschild import Chain, Cochain


def sgn(e: int) -> int:
    return -1 if e % 2 else 1


def mul(alg: AlgebraSpec, u: dict, v: dict) -> dict:
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in alg.table.get((i, j), {}).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: c for k, c in out.items() if c}


def add_into(out: dict, v: dict, s=1) -> None:
    for k, c in v.items():
        out[k] = out.get(k, 0) + s * c


def strip_unit(alg: AlgebraSpec, v: dict) -> dict:
    """Subtract the multiple of the unit that clears the pivot coordinate."""
    p = min(alg.unit)
    c = v.get(p, 0)
    out = dict(v)
    if c:
        s = Fraction(c) / alg.unit[p]
        for k, u in alg.unit.items():
            out[k] = out.get(k, 0) - s * u
    out.pop(p, None)
    return {k: x for k, x in out.items() if x}


def ev(P, args: list[dict]) -> dict:
    """Multilinear evaluation of a normalized or raw cochain."""
    alg = P.algebra
    raw = not isinstance(P, Cochain)
    vecs = args if raw else [strip_unit(alg, a) for a in args]
    out: dict = {}
    for combo in itertools.product(*(list(v.items()) for v in vecs)):
        t = tuple(i for i, _ in combo)
        c = Fraction(1)
        for _, x in combo:
            c *= x
        add_into(out, P.value(t), c)
    return {k: x for k, x in out.items() if x}


def e(i: int) -> dict:
    return {i: Fraction(1)}


def cochain_from(alg: AlgebraSpec, arity: int, fn) -> Cochain:
    bar = [i for i in range(alg.dim) if i != min(alg.unit)]
    return Cochain(alg, arity, {t: fn([e(i) for i in t]) for t in itertools.product(bar, repeat=arity)})


def boundary(P) -> Cochain:
    alg, k = P.algebra, P.arity

    def f(a):
        out: dict = {}
        add_into(out, mul(alg, a[0], ev(P, a[1:])))
        for i in range(1, k + 1):
            add_into(out, ev(P, a[: i - 1] + [mul(alg, a[i - 1], a[i])] + a[i + 1 :]), sgn(i))
        add_into(out, mul(alg, ev(P, a[:k]), a[k]), sgn(k + 1))
        return out

    return cochain_from(alg, k + 1, f)


def cup(P, Q) -> Cochain:
    k = P.arity
    return cochain_from(P.algebra, k + Q.arity, lambda a: mul(P.algebra, ev(P, a[:k]), ev(Q, a[k:])))


def insert(P, Q, i: int) -> Cochain:
    a2 = Q.arity
    return cochain_from(P.algebra, P.arity + a2 - 1, lambda a: ev(P, a[:i] + [ev(Q, a[i : i + a2])] + a[i + a2 :]))


def bracket(Q1, Q2) -> Cochain:
    k1, k2 = Q1.arity - 1, Q2.arity - 1
    alg = Q1.algebra
    total = Cochain.zero(alg, k1 + k2 + 1)
    for i in range(k1 + 1):
        total = total + insert(Q1, Q2, i).scale(sgn(i * k2))
    for i in range(k2 + 1):
        total = total - insert(Q2, Q1, i).scale(sgn(k1 * k2) * sgn(i * k1))
    return total


def _chain(alg: AlgebraSpec, length: int, pieces) -> Chain:
    """Sum of coefficient * (vector tensors), expanded over full basis tuples."""
    terms: dict = {}
    for coeff, vecs in pieces:
        for combo in itertools.product(*(list(v.items()) for v in vecs)):
            c = Fraction(coeff)
            for _, x in combo:
                c *= x
            t = tuple(i for i, _ in combo)
            terms[t] = terms.get(t, 0) + c
    return Chain(alg, length, terms)


def chain_b(c: Chain) -> Chain:
    alg, m = c.algebra, c.length
    pieces = []
    for t, x in c.terms.items():
        a = [e(i) for i in t]
        for i in range(m):
            pieces.append((x * sgn(i), a[:i] + [mul(alg, a[i], a[i + 1])] + a[i + 2 :]))
        if m:
            pieces.append((x * sgn(m), [mul(alg, a[m], a[0])] + a[1:m]))
    return _chain(alg, max(m - 1, 0), pieces)


def chain_B(c: Chain) -> Chain:
    alg, m = c.algebra, c.length
    pieces = []
    for t, x in c.terms.items():
        a = [e(i) for i in t]
        for i in range(m + 1):
            pieces.append((x * sgn(m * i), [dict(alg.unit)] + a[i:] + a[:i]))
    return _chain(alg, m + 1, pieces)


def chain_I(P, c: Chain) -> Chain:
    alg, m, k = c.algebra, c.length, P.arity
    pieces = []
    for t, x in c.terms.items():
        a = [e(i) for i in t]
        pieces.append((x, [mul(alg, a[0], ev(P, a[1 : k + 1]))] + a[k + 1 :]))
    return _chain(alg, m - k, pieces)


def chain_L(Q, c: Chain) -> Chain:
    alg, m, k = c.algebra, c.length, Q.arity - 1
    pieces = []
    for t, x in c.terms.items():
        a = [e(i) for i in t]
        for i in range(m - k + 1):
            pieces.append((x * sgn(k * i), a[:i] + [ev(Q, a[i : i + k + 1])] + a[i + k + 1 :]))
        for j in range(m - k, m):
            inner = ev(Q, a[j + 1 :] + a[: k + j - m + 1])
            pieces.append((x * sgn(m * (j + 1)), [inner] + a[k + j - m + 1 : j + 1]))
    return _chain(alg, m - k, pieces)
