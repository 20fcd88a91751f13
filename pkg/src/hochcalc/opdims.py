"""Graded dimensions of calculus-type operad components and free algebras.

Degrees follow the rest of the package: the bracket, l and delta lower
degree by one.  Poincare polynomials use t for minus the degree, so every
such operation contributes a factor t.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Mapping

from .errors import BoundError, InputError
from .exactlin import Echelon, axpy


@dataclass(frozen=True)
class PoincarePoly:
    """Finite map exponent -> nonnegative count."""

    coeffs: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, coeffs: Mapping[int, int]) -> "PoincarePoly":
        if any(c < 0 for c in coeffs.values()):
            raise InputError("Poincare coefficients are nonnegative")
        return cls(tuple(sorted((e, c) for e, c in coeffs.items() if c)))

    @classmethod
    def from_list(cls, cs: Iterable[int]) -> "PoincarePoly":
        return cls.of(dict(enumerate(cs)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __mul__(self, other: "PoincarePoly") -> "PoincarePoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PoincarePoly.of(out)

    def at(self, t) -> Fraction:
        return sum((Fraction(t) ** e * c for e, c in self.coeffs), Fraction(0))

    def divide(self, other: "PoincarePoly") -> "PoincarePoly | None":
        """Exact quotient with nonnegative coefficients, or None."""
        num = self.as_dict()
        den = other.as_dict()
        if not den:
            raise ZeroDivisionError("division by the zero polynomial")
        lo = min(den)
        out: dict[int, int] = {}
        while num:
            top = min(num)
            q, r = divmod(num[top], den[lo])
            if r or q < 0:
                return None
            out[top - lo] = q
            for e, c in den.items():
                num[top - lo + e] = num.get(top - lo + e, 0) - q * c
                if num[top - lo + e] == 0:
                    del num[top - lo + e]
            if num and min(num) < top:
                return None
        return PoincarePoly.of(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            parts.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(parts)


def _linear(j: int) -> PoincarePoly:
    return PoincarePoly.of({0: 1, 1: j})


def calc_component_poly(kind: str, n: int = 0) -> PoincarePoly:
    """Product formulas: a(n,1) = prod_{j<=n}(1+jt) (1+t); c(n,0) = prod_{j<n}(1+jt); a(0,1) = 1+t."""
    if not 0 <= n <= 8:
        raise InputError("component formulas are provided for 0 <= n <= 8")
    if kind == "a(0,1)":
        return _linear(1)
    if kind == "a(n,1)":
        return prod((_linear(j) for j in range(1, n + 1)), start=_linear(1))
    if kind == "c(n,0)":
        if n < 1:
            raise InputError("c(n,0) needs n >= 1")
        return prod((_linear(j) for j in range(1, n)), start=PoincarePoly.of({0: 1}))
    raise InputError(f"unknown component kind {kind!r}")


def lie_dim(n: int) -> int:
    if n < 1:
        raise InputError("Lie(n) needs n >= 1")
    return factorial(n - 1)


# ------------------------------------------------------------ bracket monomials


def _bracketings(labels: tuple[int, ...]) -> Iterable[tuple]:
    if len(labels) == 1:
        yield labels[0]
        return
    first, rest = labels[0], labels[1:]
    # every bracketing, up to antisymmetry, is [L, R] with the first label in L
    for r in range(len(rest)):
        for left_rest in itertools.combinations(rest, r):
            right = tuple(x for x in rest if x not in left_rest)
            for left in _bracketings((first,) + left_rest):
                for rt in _bracketings(right):
                    yield (left, rt)


def _expand_bracket(b) -> dict[tuple[int, ...], int]:
    if isinstance(b, int):
        return {(b,): 1}
    x, y = _expand_bracket(b[0]), _expand_bracket(b[1])
    out: dict = {}
    for u, cu in x.items():
        for v, cv in y.items():
            out[u + v] = out.get(u + v, 0) + cu * cv
            out[v + u] = out.get(v + u, 0) - cu * cv
    return {k: c for k, c in out.items() if c}


def bracket_monomial_rank(n: int) -> int:
    """Rank of all multilinear bracket monomials in n letters, expanded in the free associative algebra."""
    if not 1 <= n <= 6:
        raise InputError("bracket enumeration supports 1 <= n <= 6")
    ech = Echelon(track=False)
    for b in _bracketings(tuple(range(n))):
        ech.add({k: Fraction(c) for k, c in _expand_bracket(b).items()})
    return ech.rank


# ------------------------------------------------------------ graded series

Series = dict  # (degree, weight) -> count


def _add(f: Series, g: Series, sign: int = 1) -> Series:
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def _mul(f: Series, g: Series, bound: int) -> Series:
    out: Series = {}
    for (d1, w1), c1 in f.items():
        for (d2, w2), c2 in g.items():
            if w1 + w2 <= bound:
                k = (d1 + d2, w1 + w2)
                out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _shift(f: Series, s: int) -> Series:
    return {(d + s, w): c for (d, w), c in f.items()}


ONE_SERIES: Series = {(0, 0): 1}


def graded_symmetric(x: Series, bound: int) -> Series:
    """Free graded commutative algebra (with unit): polynomial on even, exterior on odd degrees."""
    if any(w <= 0 for (_, w) in x):
        raise InputError("generators need positive weight")
    out = dict(ONE_SERIES)
    for (d, w), n in sorted(x.items()):
        factor: Series = {}
        for k in range(bound // w + 1):
            c = comb(n + k - 1, k) if d % 2 == 0 else comb(n, k)
            if c:
                factor[(k * d, k * w)] = c
        out = _mul(out, factor, bound)
    return out


def tensor_algebra(x: Series, bound: int) -> Series:
    out = dict(ONE_SERIES)
    power = dict(ONE_SERIES)
    for _ in range(bound):
        power = _mul(power, x, bound)
        if not power:
            break
        out = _add(out, power)
    return out


def free_lie(x: Series, bound: int) -> Series:
    """Free graded Lie algebra on x, from T(x) = S(L) solved weight by weight."""
    t = tensor_algebra(x, bound)
    lie: Series = {}
    for w in range(1, bound + 1):
        s = graded_symmetric(lie, w) if lie else dict(ONE_SERIES)
        for (d, ww), c in t.items():
            if ww == w:
                rest = c - s.get((d, w), 0)
                if rest < 0:
                    raise BoundError("negative Lie dimension; generating function inconsistent", {"weight": w})
                if rest:
                    lie[(d, w)] = rest
    return lie


def _series_of(dims: Mapping[int, int]) -> Series:
    return {(d, 1): n for d, n in dims.items() if n}


KINDS = ("calc", "lie_delta_koszul")
WEIGHT_LIMIT = 14


@dataclass
class GradedDims:
    """Dimensions per color, keyed by (degree, weight)."""

    c: dict
    a: dict

    def to_json(self) -> dict:
        rows = lambda f: [{"degree": d, "weight": w, "dim": n} for (d, w), n in sorted(f.items(), key=lambda kv: (kv[0][1], -kv[0][0]))]  # noqa: E731
        return {"c": rows(self.c), "a": rows(self.a)}

    def poly(self, color: str, weight: int) -> PoincarePoly:
        f = self.c if color == "c" else self.a
        return PoincarePoly.of({-d: n for (d, w), n in f.items() if w == weight})

    def dominated_by(self, other: "GradedDims") -> bool:
        return all(other.c.get(k, 0) >= n for k, n in self.c.items()) and all(
            other.a.get(k, 0) >= n for k, n in self.a.items()
        )


def free_functor_dims(
    kind: str,
    v_dims: Mapping[int, int],
    w_dims: Mapping[int, int],
    weight_bound: int,
    u_bound: int | None = None,
) -> GradedDims:
    """Graded dimensions of a free algebra on (V, W), weight = number of generators.

    ``calc``: c = S(sL) without its unit and a = S(sL) T(X) (W + s^-1 W),
    where X = s^-1 V and L is the free Lie algebra on X.
    ``lie_delta_koszul``: c = s(S(X) - 1) and a = S(X) W[u] with |u| = -2,
    truncated at u^u_bound.
    """
    if kind not in KINDS:
        raise InputError(f"kind must be one of {KINDS}")
    if weight_bound < 0 or weight_bound > WEIGHT_LIMIT:
        raise BoundError(f"weight bound must lie in 0..{WEIGHT_LIMIT}", {"weight_bound": weight_bound})
    v, w = _series_of(v_dims), _series_of(w_dims)
    x = _shift(v, -1)
    if kind == "calc":
        lie_s = _shift(free_lie(x, weight_bound), 1)
        sym = graded_symmetric(lie_s, weight_bound)
        c = _add(sym, ONE_SERIES, -1)
        a = _mul(_mul(sym, tensor_algebra(x, weight_bound), weight_bound), _add(w, _shift(w, -1)), weight_bound)
        return GradedDims(c, a)
    if u_bound is None or u_bound < 0:
        raise BoundError("the u-power needs a nonnegative bound", {"u_bound": u_bound})
    sym = graded_symmetric(x, weight_bound)
    c = _shift(_add(sym, ONE_SERIES, -1), 1)
    u_series = {(-2 * m, 0): 1 for m in range(u_bound + 1)}
    a = _mul(_mul(sym, w, weight_bound), u_series, weight_bound)
    return GradedDims(c, a)


# ------------------------------------------------------------ multilinear parts

MaskSeries = dict  # (mask, degree) -> count


def _m_mul(f: MaskSeries, g: MaskSeries) -> MaskSeries:
    out: MaskSeries = {}
    for (m1, d1), c1 in f.items():
        for (m2, d2), c2 in g.items():
            if not m1 & m2:
                k = (m1 | m2, d1 + d2)
                out[k] = out.get(k, 0) + c1 * c2
    return out


def _submasks(m: int) -> Iterable[int]:
    s = m
    while s:
        yield s
        s = (s - 1) & m


def _by_mask(f: MaskSeries) -> dict[int, dict[int, int]]:
    out: dict = {}
    for (m, d), c in f.items():
        out.setdefault(m, {})[d] = out.get(m, {}).get(d, 0) + c
    return out


def _m_sym(f: MaskSeries, full: int) -> MaskSeries:
    """Multilinear part of the free graded commutative algebra (labels are distinct, so no signs)."""
    pieces = _by_mask(f)
    memo: dict[int, dict[int, int]] = {0: {0: 1}}
    for m in sorted(range(1, full + 1), key=lambda x: bin(x).count("1")):
        if m & ~full:
            continue
        low = m & -m
        acc: dict[int, int] = {}
        for a in _submasks(m):
            if not a & low or a not in pieces:
                continue
            for d1, c1 in pieces[a].items():
                for d2, c2 in memo.get(m ^ a, {}).items():
                    acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        memo[m] = acc
    return {(m, d): c for m, dd in memo.items() for d, c in dd.items() if c}


def _m_tensor(f: MaskSeries, full: int) -> MaskSeries:
    pieces = _by_mask(f)
    memo: dict[int, dict[int, int]] = {0: {0: 1}}
    for m in sorted(range(1, full + 1), key=lambda x: bin(x).count("1")):
        if m & ~full:
            continue
        acc: dict[int, int] = {}
        for a in _submasks(m):
            if a not in pieces:
                continue
            for d1, c1 in pieces[a].items():
                for d2, c2 in memo.get(m ^ a, {}).items():
                    acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        memo[m] = acc
    return {(m, d): c for m, dd in memo.items() for d, c in dd.items() if c}


def _m_free_lie(x: MaskSeries, full: int) -> MaskSeries:
    t = _by_mask(_m_tensor(x, full))
    lie: MaskSeries = {}
    for m in sorted(range(1, full + 1), key=lambda v: bin(v).count("1")):
        if m & ~full:
            continue
        products = _by_mask(_m_sym(lie, m)).get(m, {})  # excludes the not-yet-known L[m]
        for d, c in t.get(m, {}).items():
            rest = c - products.get(d, 0)
            if rest:
                lie[(m, d)] = rest
    return lie


def multilinear_poly(kind: str, n: int) -> PoincarePoly:
    """Multilinear component of the free calculus via the free-functor
    decomposition, one label per V-input (degree 0) and W of degree 0."""
    if not 0 <= n <= 7:
        raise InputError("multilinear computation supports 0 <= n <= 7")
    full = (1 << n) - 1
    x = {(1 << j, -1): 1 for j in range(n)}
    lie_s = {(m, d + 1): c for (m, d), c in _m_free_lie(x, full).items()}
    sym = _m_sym(lie_s, full)
    if kind == "c(n,0)":
        if n < 1:
            raise InputError("c(n,0) needs n >= 1")
        return PoincarePoly.of({-d: c for (m, d), c in sym.items() if m == full})
    if kind in ("a(n,1)", "a(0,1)"):
        if kind == "a(0,1)" and n:
            raise InputError("a(0,1) has no V-inputs")
        a = _m_mul(sym, _m_tensor(x, full))
        w = {(0, 0): 1, (0, -1): 1}
        a = _m_mul(a, w)
        return PoincarePoly.of({-d: c for (m, d), c in a.items() if m == full})
    if kind == "lie":
        lie = _m_free_lie(x, full)
        return PoincarePoly.of({-d: c for (m, d), c in lie.items() if m == full})
    raise InputError(f"unknown kind {kind!r}")


# ------------------------------------------------------------ brute-force quotient


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


class _FreeCalc:
    """Formal calculus expressions modulo the operadic ideal of the axioms, slice by slice.

    V-expressions: ("v", j), ("^", A, B), ("[", A, B).
    W-expressions: ("w", j), ("i", A, X), ("l", A, X), ("d", X).
    A slice is (counts of each generator, degree); every axiom is homogeneous.
    """

    def __init__(self, v_degrees: tuple[int, ...], w_degrees: tuple[int, ...]):
        self.vd = v_degrees
        self.wd = w_degrees
        self.nv = len(v_degrees)
        self.n = len(v_degrees) + len(w_degrees)
        self._exprs: dict = {}
        self._ideal: dict = {}

    # ---- degrees and counts
    def gen_degree(self, counts: tuple) -> int:
        return sum(c * d for c, d in zip(counts, self.vd + self.wd))

    def _splits(self, counts: tuple, color_left: str, color_right: str):
        """(c1, c2) with c1 + c2 = counts, c1 a V-count (no W) and nonzero, c2 of the right color."""
        ranges = [range(c + 1) for c in counts[: self.nv]]
        for part in itertools.product(*ranges):
            c1 = tuple(part) + (0,) * (self.n - self.nv)
            c2 = tuple(a - b for a, b in zip(counts, c1))
            if any(c1) and (color_right == "a" or any(c2[: self.nv])) and any(c2):
                yield c1, c2

    def _v_degrees(self, counts: tuple) -> range:
        g = self.gen_degree(counts)
        return range(g - (sum(counts) - 1), g + 1)

    def _w_degrees(self, counts: tuple, max_delta: int) -> range:
        g = self.gen_degree(counts)
        return range(g - sum(counts[: self.nv]) - max_delta, g + 1)

    # ---- expressions
    def exprs(self, color: str, counts: tuple, deg: int) -> list:
        key = (color, counts, deg)
        if key in self._exprs:
            return self._exprs[key]
        out: list = []
        total_w = sum(counts[self.nv :])
        if color == "c":
            if total_w == 0 and any(counts):
                if sum(counts) == 1:
                    j = counts.index(1)
                    if self.vd[j] == deg:
                        out.append(("v", j))
                for c1, c2 in self._splits(counts, "c", "c"):
                    for d1 in self._v_degrees(c1):
                        out += [("^", a, b) for a in self.exprs("c", c1, d1) for b in self.exprs("c", c2, deg - d1)]
                        out += [("[", a, b) for a in self.exprs("c", c1, d1) for b in self.exprs("c", c2, deg + 1 - d1)]
        elif total_w == 1:
            if not any(counts[: self.nv]):
                j = counts[self.nv :].index(1)
                if self.wd[j] == deg:
                    out.append(("w", j))
            if deg + 1 <= self.gen_degree(counts):
                out += [("d", x) for x in self.exprs("a", counts, deg + 1)]
            for c1, c2 in self._splits(counts, "c", "a"):
                for d1 in self._v_degrees(c1):
                    out += [("i", a, x) for a in self.exprs("c", c1, d1) for x in self.exprs("a", c2, deg - d1)]
                    out += [("l", a, x) for a in self.exprs("c", c1, d1) for x in self.exprs("a", c2, deg + 1 - d1)]
        self._exprs[key] = out
        return out

    def deg(self, e) -> int:
        k = e[0]
        if k == "v":
            return self.vd[e[1]]
        if k == "w":
            return self.wd[e[1]]
        if k == "^" or k == "i":
            return self.deg(e[1]) + self.deg(e[2])
        if k == "[" or k == "l":
            return self.deg(e[1]) + self.deg(e[2]) - 1
        return self.deg(e[1]) - 1

    def counts(self, e) -> tuple:
        k = e[0]
        if k == "v":
            return tuple(int(i == e[1]) for i in range(self.n))
        if k == "w":
            return tuple(int(i == self.nv + e[1]) for i in range(self.n))
        if k == "d":
            return self.counts(e[1])
        return tuple(a + b for a, b in zip(self.counts(e[1]), self.counts(e[2])))

    # ---- ideal
    def _top_relations(self, color: str, counts: tuple, deg: int) -> list[dict]:
        rels: list[dict] = []

        def rel(*terms):
            v: dict = {}
            for c, e in terms:
                axpy(v, e, Fraction(c))
            if v:
                rels.append(v)

        def pairs(cnt, need_right_color):
            for c1, c2 in self._splits(cnt, "c", need_right_color):
                for d1 in self._v_degrees(c1):
                    yield c1, c2, d1

        if color == "c":
            for c1, c2, d1 in pairs(counts, "c"):
                for a in self.exprs("c", c1, d1):
                    for b in self.exprs("c", c2, deg - d1):
                        pa, pb = d1, deg - d1
                        rel((1, ("^", a, b)), (-_sgn(pa * pb), ("^", b, a)))
                    for b in self.exprs("c", c2, deg + 1 - d1):
                        pa, pb = d1, deg + 1 - d1
                        rel((1, ("[", a, b)), (_sgn((pa - 1) * (pb - 1)), ("[", b, a)))
            for ca, crest, da in pairs(counts, "c"):
                for cb, cc, db in pairs(crest, "c"):
                    for a in self.exprs("c", ca, da):
                        for b in self.exprs("c", cb, db):
                            dc = deg - da - db
                            for c in self.exprs("c", cc, dc):
                                rel((1, ("^", ("^", a, b), c)), (-1, ("^", a, ("^", b, c))))
                            dc = deg + 2 - da - db
                            for c in self.exprs("c", cc, dc):
                                rel(
                                    (1, ("[", a, ("[", b, c))),
                                    (-1, ("[", ("[", a, b), c)),
                                    (-_sgn((da - 1) * (db - 1)), ("[", b, ("[", a, c))),
                                )
                            dc = deg + 1 - da - db
                            for c in self.exprs("c", cc, dc):
                                rel(
                                    (1, ("[", a, ("^", b, c))),
                                    (-1, ("^", ("[", a, b), c)),
                                    (-_sgn((da + 1) * db), ("^", b, ("[", a, c))),
                                )
            return rels
        # W color
        for x in self.exprs("a", counts, deg + 2):
            rel((1, ("d", ("d", x))))
        for c1, c2, da in pairs(counts, "a"):
            for a in self.exprs("c", c1, da):
                for w in self.exprs("a", c2, deg - da + 1):
                    rel((1, ("d", ("i", a, w))), (-_sgn(da), ("i", a, ("d", w))), (-1, ("l", a, w)))
        for ca, crest, da in pairs(counts, "a"):
            for cb, cw, db in pairs(crest, "a"):
                for a in self.exprs("c", ca, da):
                    for b in self.exprs("c", cb, db):
                        for w in self.exprs("a", cw, deg - da - db):
                            rel((1, ("i", ("^", a, b), w)), (-1, ("i", a, ("i", b, w))))
                        for w in self.exprs("a", cw, deg - da - db + 2):
                            rel(
                                (1, ("l", ("[", a, b), w)),
                                (-1, ("l", a, ("l", b, w))),
                                (_sgn((da - 1) * (db - 1)), ("l", b, ("l", a, w))),
                            )
                        for w in self.exprs("a", cw, deg - da - db + 1):
                            rel(
                                (1, ("i", a, ("l", b, w))),
                                (-_sgn(da * (db + 1)), ("l", b, ("i", a, w))),
                                (-1, ("i", ("[", a, b), w)),
                            )
                            rel(
                                (1, ("l", ("^", a, b), w)),
                                (-1, ("l", a, ("i", b, w))),
                                (-_sgn(da), ("i", a, ("l", b, w))),
                            )
        return rels

    def ideal(self, color: str, counts: tuple, deg: int) -> list[dict]:
        key = (color, counts, deg)
        if key in self._ideal:
            return self._ideal[key]
        out = list(self._top_relations(color, counts, deg))

        def lift(op, vecs_left, exprs_right, left_first=True):
            for v in vecs_left:
                for e in exprs_right:
                    out.append({((op, k, e) if left_first else (op, e, k)): c for k, c in v.items()})

        if color == "c":
            for c1, c2 in self._splits(counts, "c", "c"):
                for d1 in self._v_degrees(c1):
                    for op, d2 in (("^", deg - d1), ("[", deg + 1 - d1)):
                        lift(op, self.ideal("c", c1, d1), self.exprs("c", c2, d2))
                        lift(op, self.ideal("c", c2, d2), self.exprs("c", c1, d1), left_first=False)
        else:
            if deg + 1 <= self.gen_degree(counts):
                for v in self.ideal("a", counts, deg + 1):
                    out.append({("d", k): c for k, c in v.items()})
            for c1, c2 in self._splits(counts, "c", "a"):
                for d1 in self._v_degrees(c1):
                    for op, d2 in (("i", deg - d1), ("l", deg + 1 - d1)):
                        lift(op, self.ideal("c", c1, d1), self.exprs("a", c2, d2))
                        lift(op, self.ideal("a", c2, d2), self.exprs("c", c1, d1), left_first=False)
        self._ideal[key] = out
        return out

    def dim(self, color: str, counts: tuple, deg: int) -> int:
        basis = self.exprs(color, counts, deg)
        if not basis:
            return 0
        index = {e: i for i, e in enumerate(basis)}
        ech = Echelon(track=False)
        for v in self.ideal(color, counts, deg):
            ech.add({index[k]: c for k, c in v.items()})
        return len(basis) - ech.rank


@lru_cache(maxsize=None)
def brute_force_calc_dims(v_degrees: tuple[int, ...], w_degrees: tuple[int, ...], weight_bound: int) -> GradedDims:
    """Dimensions of the free calculus by enumerating formal expressions and
    quotienting by every axiom instance in every context.  Practical for
    weight <= 3 or 4 with one or two generators."""
    fc = _FreeCalc(v_degrees, w_degrees)
    nv, nw = len(v_degrees), len(w_degrees)
    c: dict = {}
    a: dict = {}
    for total in range(1, weight_bound + 1):
        for counts in itertools.product(range(total + 1), repeat=nv + nw):
            if sum(counts) != total:
                continue
            wcount = sum(counts[nv:])
            g = fc.gen_degree(counts)
            if wcount == 0:
                for d in fc._v_degrees(counts):
                    n = fc.dim("c", counts, d)
                    if n:
                        c[(d, total)] = c.get((d, total), 0) + n
            elif wcount == 1:
                # one degree beyond the last a formula could reach
                for d in range(g - sum(counts[:nv]) - 2, g + 1):
                    n = fc.dim("a", counts, d)
                    if n:
                        a[(d, total)] = a.get((d, total), 0) + n
    return GradedDims(c, a)


def koszul_v_zero_dims(w_dims: Mapping[int, int], u_bound: int) -> dict:
    """Monomials w u^m, |u| = -2."""
    return {(d - 2 * m, 1): n for d, n in w_dims.items() for m in range(u_bound + 1) if n}


def calc_v_zero_dims(w_dims: Mapping[int, int]) -> dict:
    """Monomials w and delta w; delta squares to zero."""
    out: dict = {}
    for d, n in w_dims.items():
        for dd in (d, d - 1):
            out[(dd, 1)] = out.get((dd, 1), 0) + n
    return {k: v for k, v in out.items() if v}


def component_table(kind: str, n_max: int) -> list[dict]:
    """Rows (n, degree, dim) for CSV output; degree = minus the t-exponent."""
    rows = []
    for n in range(1 if kind == "c(n,0)" else 0, n_max + 1):
        for e, c in calc_component_poly(kind, n).coeffs:
            rows.append({"n": n, "degree": -e, "dim": c})
    return rows
