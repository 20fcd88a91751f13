"""Cartan calculus of polyvector fields and differential forms on affine space,
the Lie-Rinehart pair (V, Omega^1(V)), and the HKR comparison maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .algebra import monomials
from .calculus import CalculusData, GradedSpace
from .errors import InputError
from .exactlin import Echelon, axpy, rank, SparseMatrix
from .hochschild import Chain, connes_B, contract_I, lie_derive_L
from .polydiff import (
    Multi,
    Poly,
    PolyDiff,
    chain_slice_basis,
    chain_slice_homology,
    chain_slice_element,
    cochain_slice_homology,
    as_cochain,
    madd,
    mdeg,
    monomial_of,
    nonzero_multis,
    pd_boundary,
    pd_bracket,
    pd_cup,
    pd_exactness_witness,
    poly_algebra,
    polydiff_cohomology,
    pd_to_vector,
)
from .signs import sign_rule

ONE = Fraction(1)
Key = tuple  # (exponent Multi, sorted tuple of odd indices)


def merge_sign(j: Sequence[int], k: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted union of ``j + k`` as a product of odd generators; None if they overlap."""
    if set(j) & set(k):
        return None
    seq = list(j) + list(k)
    inv = sum(1 for a, b in itertools.combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


class _Super:
    """Sparse sum of x^a * (product of odd generators with sorted indices J)."""

    __slots__ = ("n", "terms")
    odd_sign = 1  # +1: polyvectors (degree |J|), -1: forms (degree -|J|)

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 1:
            raise InputError("need at least one variable")
        self.n = n
        out: dict = {}
        for (a, j), c in (terms or {}).items():
            a, j = tuple(a), tuple(j)
            if len(a) != n or any(not (0 <= x < n) for x in j) or min(a, default=0) < 0:
                raise InputError(f"bad term {(a, j)} for {n} variables")
            if list(j) != sorted(set(j)):
                r = _sort_odd(j)
                if r is None:
                    continue
                sg, j = r
                c = c * sg
            axpy(out, (a, j), Fraction(c))
        self.terms = out

    @classmethod
    def zero(cls, n: int):
        return cls(n, {})

    @classmethod
    def monomial(cls, a: Multi, j: Sequence[int] = (), c=1):
        return cls(len(a), {(tuple(a), tuple(j)): c})

    @classmethod
    def function(cls, f: Mapping):
        n = len(next(iter(f))) if f else 1
        return cls(n, {(a, ()): c for a, c in f.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous_degrees(self) -> set[int]:
        return {self.odd_sign * len(j) for (_, j) in self.terms}

    @property
    def degree(self) -> int:
        degs = self.homogeneous_degrees()
        if len(degs) > 1:
            raise InputError("element is not homogeneous")
        return degs.pop() if degs else 0

    def components(self) -> dict[int, "_Super"]:
        out: dict = {}
        for (a, j), c in self.terms.items():
            out.setdefault(self.odd_sign * len(j), {})[(a, j)] = c
        return {d: type(self)(self.n, t) for d, t in out.items()}

    def _same(self, other) -> None:
        if type(self) is not type(other) or self.n != other.n:
            raise InputError("operands differ in kind or variable count")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            axpy(t, k, c)
        return type(self)(self.n, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return type(self)(self.n, {k: c * s for k, c in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def wedge(self, other):
        """Graded commutative product (x's even, odd generators anticommute)."""
        self._same(other)
        out: dict = {}
        for (a, j), c in self.terms.items():
            for (b, k), e in other.terms.items():
                r = merge_sign(j, k)
                if r is not None:
                    axpy(out, (madd(a, b), r[1]), c * e * r[0])
        return type(self)(self.n, out)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.n == other.n and self.terms == other.terms

    def __hash__(self):  # pragma: no cover - mutable-looking value type
        return hash((type(self).__name__, self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({format_super(self)})"


def _sort_odd(j: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    if len(set(j)) != len(j):
        return None
    inv = sum(1 for a, b in itertools.combinations(range(len(j)), 2) if j[a] > j[b])
    return (-1 if inv % 2 else 1), tuple(sorted(j))


class Polyvector(_Super):
    """Polyvector field: x^a d_{j1} ^ ... ^ d_{jk} sits in degree k."""

    odd_sign = 1


class Form(_Super):
    """Differential form with reversed grading: x^a dx_J sits in degree -|J|."""

    odd_sign = -1


def format_super(e: _Super) -> str:
    from .algebra import monomial_label, var_names

    names = var_names(e.n)
    odd = "d" if isinstance(e, Polyvector) else "dx"
    parts = []
    for (a, j), c in sorted(e.terms.items()):
        mon = monomial_label(a, names)
        gens = "^".join(f"{odd}{names[i]}" if odd == "d" else f"d{names[i]}" for i in j)
        body = mon if not gens else (gens if mon == "1" else f"{mon}*{gens}")
        parts.append(f"{c}*{body}")
    return " + ".join(parts) if parts else "0"


# ------------------------------------------------------------ Cartan operations


def _remove_odd(j: tuple[int, ...], i: int, from_right: bool) -> tuple[int, tuple[int, ...]] | None:
    if i not in j:
        return None
    p = j.index(i)
    moves = len(j) - 1 - p if from_right else p
    return (-1 if moves % 2 else 1), j[:p] + j[p + 1 :]


def contract(g: Polyvector, e: Form) -> Form:
    """Left contraction: I_{d_j1 ^ .. ^ d_jk} = I_{d_j1} ... I_{d_jk}, each
    I_{d_i} an odd derivation with I_{d_i}(dx_l) = delta_il; O-linear."""
    if g.n != e.n:
        raise InputError("operands differ in variable count")
    out: dict = {}
    for (a, j), c in g.terms.items():
        cur: dict = {(b, k): x * c for (b, k), x in e.terms.items()}
        for i in reversed(j):
            nxt: dict = {}
            for (b, k), x in cur.items():
                r = _remove_odd(k, i, from_right=False)
                if r is not None:
                    axpy(nxt, (b, r[1]), x * r[0])
            cur = nxt
        for (b, k), x in cur.items():
            axpy(out, (madd(a, b), k), x)
    return Form(e.n, out)


def pair(g: Polyvector, e: Form) -> Poly:
    """<g, e> = I_g e when the degrees cancel, else 0; returned as a polynomial."""
    out: Poly = {}
    for dg, gc in g.components().items():
        for de, ec in e.components().items():
            if de == -dg:
                for (a, j), c in contract(gc, ec).terms.items():
                    axpy(out, a, c)
    return out


def de_rham(e: Form) -> Form:
    out: dict = {}
    for (a, j), c in e.terms.items():
        for i in range(e.n):
            if a[i] and i not in j:
                r = merge_sign((i,), j)
                b = a[:i] + (a[i] - 1,) + a[i + 1 :]
                axpy(out, (b, r[1]), c * a[i] * r[0])
    return Form(e.n, out)


def lie_derivative(g: Polyvector, e: Form) -> Form:
    """L_g = d I_g - (-1)^|g| I_g d, componentwise in the degree of g."""
    out = Form.zero(e.n)
    for dg, gc in g.components().items():
        sg = -1 if dg % 2 else 1
        out = out + de_rham(contract(gc, e)) - contract(gc, de_rham(e)).scale(sg)
    return out


def _dx(e: _Super, i: int):
    out: dict = {}
    for (a, j), c in e.terms.items():
        if a[i]:
            axpy(out, (a[:i] + (a[i] - 1,) + a[i + 1 :], j), c * a[i])
    return type(e)(e.n, out)


def _dxi_right(e: _Super, i: int):
    out: dict = {}
    for (a, j), c in e.terms.items():
        r = _remove_odd(j, i, from_right=True)
        if r is not None:
            axpy(out, (a, r[1]), c * r[0])
    return type(e)(e.n, out)


def schouten(g1: Polyvector, g2: Polyvector) -> Polyvector:
    """Schouten-Nijenhuis bracket of degree -1:
    [P, Q] = sum_i (P d/dxi_i)(d_i Q) - (-1)^{(p-1)(q-1)} (Q d/dxi_i)(d_i P),
    with right derivatives in the odd variables; extended bilinearly over
    homogeneous components."""
    g1._same(g2)
    out = Polyvector.zero(g1.n)
    for p, a in g1.components().items():
        for q, b in g2.components().items():
            sg = -1 if ((p - 1) * (q - 1)) % 2 else 1
            for i in range(g1.n):
                out = out + _dxi_right(a, i).wedge(_dx(b, i)) - _dxi_right(b, i).wedge(_dx(a, i)).scale(sg)
    return out


# ------------------------------------------------------------ bases and calculus data


def polyvector_basis(n: int, k: int, d: int) -> list[Polyvector]:
    """x^a d_J with |a| = d and |J| = k."""
    return [
        Polyvector.monomial(a, j)
        for j in itertools.combinations(range(n), k)
        for a in nonzero_multis(n, d)
    ]


def form_basis(n: int, m: int, d: int) -> list[Form]:
    return [Form.monomial(a, j) for j in itertools.combinations(range(n), m) for a in nonzero_multis(n, d)]


def _coords(elem: _Super, index: dict) -> dict:
    out = {}
    for key, c in elem.terms.items():
        if key not in index:
            return None  # outside the window
        out[index[key]] = c
    return out


def cartan_data(n: int, max_degree: int) -> CalculusData:
    """(V, Omega) with wedge, Schouten bracket, contraction, Lie derivative and d,
    restricted to polynomial coefficients of degree <= max_degree.

    Table degrees are the calculus degrees (k for polyvectors, -m for forms);
    an operation whose output leaves the coefficient window is left out, and
    the checkers skip it.  To keep this sound every degree is flagged as
    fully known only inside the window, so instances with a truncated
    output are skipped rather than read as zero.
    """
    vb = {k: [(a, j) for j in itertools.combinations(range(n), k) for a in monomials(n, max_degree)] for k in range(n + 1)}
    wb = {-m: [(a, j) for j in itertools.combinations(range(n), m) for a in monomials(n, max_degree)] for m in range(n + 1)}
    vidx = {k: {key: i for i, key in enumerate(b)} for k, b in vb.items()}
    widx = {k: {key: i for i, key in enumerate(b)} for k, b in wb.items()}
    data = _WindowedCalculus(GradedSpace({k: len(b) for k, b in vb.items()}), GradedSpace({k: len(b) for k, b in wb.items()}))

    def put(table, key, elem, index, out_deg):
        if out_deg not in index:
            table[key] = {}
            return
        v = _coords(elem, index[out_deg])
        if v is None:
            data.missing.add(key)
        else:
            table[key] = v

    for (p, bp), (q, bq) in itertools.product(vb.items(), repeat=2):
        for i, ka in enumerate(bp):
            a = Polyvector(n, {ka: ONE})
            for j, kb in enumerate(bq):
                b = Polyvector(n, {kb: ONE})
                put(data.wedge, ((p, i), (q, j)), a.wedge(b), vidx, p + q)
                put(data.bracket, ((p, i), (q, j)), schouten(a, b), vidx, p + q - 1)
        for (wm, bw) in wb.items():
            for i, ka in enumerate(bp):
                a = Polyvector(n, {ka: ONE})
                for j, kw in enumerate(bw):
                    w = Form(n, {kw: ONE})
                    put(data.i, ((p, i), (wm, j)), contract(a, w), widx, p + wm)
                    put(data.l, ((p, i), (wm, j)), lie_derivative(a, w), widx, p + wm - 1)
    for wm, bw in wb.items():
        for j, kw in enumerate(bw):
            put(data.delta, (wm, j), de_rham(Form(n, {kw: ONE})), widx, wm - 1)
    return data


class _WindowedCalculus(CalculusData):
    """CalculusData where some table entries fall outside a coefficient window.

    Any evaluation touching a missing entry returns None, which the
    checkers treat as "outside bounds" and skip.
    """

    def __init__(self, v, w):
        super().__init__(v, w)
        self.missing: set = set()

    def _bil(self, table, out, shift, x, y):
        if x is None or y is None:
            return None
        for a in x[1]:
            for b in y[1]:
                if ((x[0], a), (y[0], b)) in self.missing:
                    return None
        return super()._bil(table, out, shift, x, y)

    def do_delta(self, y):
        if y is None:
            return None
        if any((y[0], b) in self.missing for b in y[1]):
            return None
        return super().do_delta(y)


# ------------------------------------------------------------ Lie-Rinehart structure on (V, Omega^1 V)


def _gen_degree(g: tuple[str, int]) -> int:
    return 0 if g[0] == "x" else 1


def _gen_polyvector(n: int, g: tuple[str, int]) -> Polyvector:
    kind, i = g
    if kind == "x":
        a = [0] * n
        a[i] = 1
        return Polyvector.monomial(tuple(a))
    return Polyvector.monomial((0,) * n, (i,))


class Kahler:
    """Element of Omega^1(V) for V = K[x, xi]: a sum of m * d(g) with m a
    polyvector monomial and g a generator ("x", i) or ("xi", i).

    d has degree -1, so |m d(g)| = |m| + |g| - 1.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        out: dict = {}
        for (mk, g), c in (terms or {}).items():
            axpy(out, (mk, g), Fraction(c))
        self.terms = out

    def __add__(self, other: "Kahler") -> "Kahler":
        t = dict(self.terms)
        for k, c in other.terms.items():
            axpy(t, k, c)
        return Kahler(self.n, t)

    def __sub__(self, other: "Kahler") -> "Kahler":
        return self + other.scale(-1)

    def scale(self, s) -> "Kahler":
        return Kahler(self.n, {k: c * s for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Kahler) and self.n == other.n and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def degree_components(self) -> dict[int, "Kahler"]:
        out: dict = {}
        for (mk, g), c in self.terms.items():
            deg = len(mk[1]) + _gen_degree(g) - 1
            out.setdefault(deg, {})[(mk, g)] = c
        return {d: Kahler(self.n, t) for d, t in out.items()}

    def __repr__(self) -> str:
        return f"Kahler({self.terms})"


def left_multiply(a: Polyvector, w: Kahler) -> Kahler:
    out: dict = {}
    for (mk, g), c in w.terms.items():
        prod = a.wedge(Polyvector(a.n, {mk: ONE}))
        for k2, c2 in prod.terms.items():
            axpy(out, (k2, g), c * c2)
    return Kahler(w.n, out)


def kahler_d(b: Polyvector) -> Kahler:
    """d(b) in normal form.  d is an odd derivation: d(uv) = du v + (-1)^|u| u dv,
    and dg v = (-1)^{(|g|-1)|v|} v dg moves coefficients to the left."""
    n = b.n
    out = Kahler(n)
    for (a, j), c in b.terms.items():
        gens = [("x", i) for i in range(n) for _ in range(a[i])] + [("xi", i) for i in j]
        for t, g in enumerate(gens):
            left, right = gens[:t], gens[t + 1 :]
            deg_left = sum(_gen_degree(h) for h in left)
            deg_right = sum(_gen_degree(h) for h in right)
            sg = (-1) ** (deg_left + (_gen_degree(g) - 1) * deg_right)
            coeff = _gen_product(n, left).wedge(_gen_product(n, right))
            out = out + left_multiply(coeff.scale(c * sg), Kahler(n, {(((0,) * n, ()), g): ONE}))
    return out


def _gen_product(n: int, gens: Sequence[tuple[str, int]]) -> Polyvector:
    out = Polyvector.monomial((0,) * n)
    for g in gens:
        out = out.wedge(_gen_polyvector(n, g))
    return out


def kahler(a1: Polyvector, a2: Polyvector) -> Kahler:
    """a1 d(a2) in normal form."""
    return left_multiply(a1, kahler_d(a2))


def _pieces(w: Kahler) -> Iterable[tuple[Fraction, Polyvector, Polyvector]]:
    for (mk, g), c in w.terms.items():
        yield c, Polyvector(w.n, {mk: ONE}), _gen_polyvector(w.n, g)


def _deg(p: Polyvector) -> int:
    return p.degree if not p.is_zero() else 0


def rinehart_bracket(w1: Kahler, w2: Kahler) -> Kahler:
    """{a1 da2, b1 db2} by the displayed three-term formula, bilinearly on normal forms."""
    out = Kahler(w1.n)
    for c1, a1, a2 in _pieces(w1):
        for c2, b1, b2 in _pieces(w2):
            A1, A2, B1, B2 = _deg(a1), _deg(a2), _deg(b1), _deg(b2)
            c = c1 * c2
            t1 = kahler(a1.wedge(schouten(a2, b1)), b2).scale((-1) ** (A2 + 1))
            t2 = kahler(a1.wedge(b1), schouten(a2, b2)).scale((-1) ** ((A2 + 1) * B1))
            t3 = kahler(b1.wedge(schouten(b2, a1)), a2).scale((-1) ** ((A1 + A2 + 1) * (B1 + B2 + 1) + B2))
            out = out + (t1 + t2 + t3).scale(c)
    return out


def rinehart_action(w: Kahler, b: Polyvector) -> Polyvector:
    """l_{a1 da2}(b) = (-1)^{|a2|+1} a1 [a2, b]."""
    out = Polyvector.zero(w.n)
    for c, a1, a2 in _pieces(w):
        out = out + a1.wedge(schouten(a2, b)).scale(c * (-1) ** (_deg(a2) + 1))
    return out


def rinehart(omega1: Kahler, omega2: Kahler, b: Polyvector) -> tuple[Kahler, Polyvector]:
    """({omega1, omega2}, l_{omega1}(b))."""
    return rinehart_bracket(omega1, omega2), rinehart_action(omega1, b)


def kahler_basis(n: int, max_x_degree: int, max_odd: int | None = None) -> list[Kahler]:
    """m * d(g) for monomials m of bounded x-degree and odd degree."""
    max_odd = n if max_odd is None else max_odd
    gens = [("x", i) for i in range(n)] + [("xi", i) for i in range(n)]
    out = []
    for k in range(max_odd + 1):
        for j in itertools.combinations(range(n), k):
            for a in monomials(n, max_x_degree):
                for g in gens:
                    out.append(Kahler(n, {((a, j), g): ONE}))
    return out


# ------------------------------------------------------------ HKR maps


def hkr_sign(k: int) -> int:
    """(-1)^{k(k-1)/2}: makes left contraction pair with a0 da1..dak as the
    plain determinant, so that the Connes map below needs no extra sign."""
    return -1 if (k * (k - 1) // 2) % 2 else 1


def hkr(g: Polyvector, arity: int | None = None) -> PolyDiff:
    """x^a d_J -> (eps_k / k!) sum_sigma sgn(sigma) x^a d_{j_sigma1} (x) ... (x) d_{j_sigmak}.

    ``arity`` fixes the output arity when g may be zero.
    """
    n = g.n
    if g.is_zero():
        return PolyDiff.zero(n, arity or 0)
    k = g.degree
    if arity is not None and arity != k:
        raise InputError(f"polyvector of degree {k} cannot give an arity-{arity} cochain")
    out: dict = {}
    pref = Fraction(hkr_sign(k), factorial(k))
    for (a, j), c in g.terms.items():
        for perm in itertools.permutations(range(k)):
            inv = sum(1 for x, y in itertools.combinations(range(k), 2) if perm[x] > perm[y])
            sgn = -1 if inv % 2 else 1
            syms = tuple(tuple(1 if v == j[perm[t]] else 0 for v in range(n)) for t in range(k))
            axpy(out, (a, syms), c * pref * sgn)
    return PolyDiff(n, k, out)


def chkr(c: Chain) -> Form:
    """(a0, a1, .., am) -> (1/m!) a0 da1 ^ .. ^ dam over graded_poly."""
    alg = c.algebra
    if not alg.degreewise or alg.nvars < 1:
        raise InputError("chkr needs a graded_poly algebra")
    n = alg.nvars
    m = c.length
    out = Form.zero(n)
    pref = Fraction(1, factorial(m))
    for t, x in c.terms.items():
        f = Form.monomial(monomial_of(alg, t[0]))
        for i in t[1:]:
            f = f.wedge(de_rham(Form.monomial(monomial_of(alg, i))))
            if f.is_zero():
                break
        out = out + f.scale(x * pref)
    return out


def evaluate_on(c: Chain, p: PolyDiff) -> Poly:
    """c(P) = sum a0 P(a1..am) for a chain of length m = arity(P)."""
    if c.length != p.arity:
        return {}
    alg = c.algebra
    out: Poly = {}
    for t, x in c.terms.items():
        val = p.evaluate([{monomial_of(alg, i): ONE} for i in t[1:]])
        a0 = monomial_of(alg, t[0])
        for e, y in val.items():
            axpy(out, madd(a0, e), x * y)
    return out


# ------------------------------------------------------------ comparison report


@dataclass
class SliceReport:
    kind: str  # "cochain" | "chain"
    degree: int
    arity: int
    hh_dim: int
    v_dim: int
    match: bool
    transport_checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "arity": self.arity,
            "hh_dim": self.hh_dim,
            "v_dim": self.v_dim,
            "match": self.match,
            "transport_checks": dict(sorted(self.transport_checks.items())),
        }


@dataclass
class HKRReport:
    n: int
    bounds: dict
    slices: list[SliceReport]
    checks: dict[str, bool]
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return all(s.match for s in self.slices) and all(self.checks.values()) and not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bounds": self.bounds,
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "slices": [s.to_json() for s in self.slices],
            "failures": self.failures,
        }


def _lhkr(g: Polyvector, c: Chain) -> Chain:
    """The induced Lie derivative along hkr(g), with the frozen calculus sign."""
    p = hkr(g)
    return lie_derive_L(as_cochain(p, c.algebra), c, allow_arity0=True).scale(
        sign_rule("induced_lie_derivative", a=p.arity, m=c.length)
    )


def _form_rank(forms: list[Form]) -> int:
    ech = Echelon(track=False)
    for f in forms:
        ech.add({k: v for k, v in f.terms.items()})
    return ech.rank


def verify_hkr(n: int, max_degree: int, max_arity: int, max_order: int | None = None, max_length: int | None = None) -> HKRReport:
    """Bounded affine comparison between (HH^*, HH_*) of K[x_1..x_n] and (V, Omega).

    Cochain slices: coefficient degree <= max_degree, arity <= max_arity,
    total differential order <= max_order (re-run at max_order + 1 for
    stability).  Chain slices: length <= max_length (default max_arity) at
    coefficient degree <= max_degree.
    """
    max_order = max_arity + 1 if max_order is None else max_order
    max_length = max_arity if max_length is None else max_length
    bound = 2 * max_degree + max_length + 2
    alg = poly_algebra(n, bound)
    failures: list[dict] = []
    checks: dict[str, bool] = {}
    slices: list[SliceReport] = []

    def fail(check: str, **info) -> None:
        checks[check] = False
        failures.append({"check": check, **{k: str(v) for k, v in info.items()}})

    for name in (
        "hkr_cocycles", "chkr_kills_boundaries", "pairing", "connes_to_de_rham",
        "order_stable", "hkr_bijective", "chkr_bijective",
        "transport_i", "transport_l", "transport_wedge", "transport_bracket",
    ):
        checks[name] = True

    co = polydiff_cohomology(n, max_arity, max_degree, max_order)
    co_next = polydiff_cohomology(n, max_arity, max_degree, max_order + 1)
    if co.dims != co_next.dims:
        fail("order_stable", dims=co.dims, next=co_next.dims)

    # cochain side
    for k in range(max_arity + 1):
        for d in range(max_degree + 1):
            basis = polyvector_basis(n, k, d) if k <= n else []
            v_dim = len(basis)
            hh = co.dims[(k, d)]
            tc = {}
            images = [hkr(g) for g in basis]
            for g, p in zip(basis, images):
                if not pd_boundary(p).is_zero():
                    fail("hkr_cocycles", gamma=g)
            # classes of hkr images: coordinates in the s = k slice
            if images:
                h = cochain_slice_homology(n, k, d, k)
                coords = [h.coords(pd_to_vector(p, d, k)) for p in images]
                r = rank(SparseMatrix.from_dense([list(row) for row in zip(*coords)])) if h.dim else 0
                tc["hkr_rank"] = r
                if r != hh:
                    fail("hkr_bijective", arity=k, degree=d, rank=r, dim=hh)
            elif hh:
                fail("hkr_bijective", arity=k, degree=d, rank=0, dim=hh)
            slices.append(SliceReport("cochain", d, k, hh, v_dim, hh == v_dim, tc))

    # wedge and bracket transport on small polyvectors
    small = [g for k in range(n + 1) for d in range(max_degree + 1) for g in polyvector_basis(n, k, d)]
    for g1, g2 in itertools.product(small, repeat=2):
        k1, k2 = g1.degree, g2.degree
        d1, d2 = _coef_degree(g1), _coef_degree(g2)
        if k1 + k2 <= max_arity and d1 + d2 <= max_degree:
            diff = hkr(g1.wedge(g2), k1 + k2) - pd_cup(hkr(g2), hkr(g1))
            if pd_exactness_witness(diff) is None:
                fail("transport_wedge", a=g1, b=g2)
        if 0 <= k1 + k2 - 1 <= max_arity and k1 + k2 >= 1:
            diff = hkr(schouten(g1, g2), k1 + k2 - 1) - pd_bracket(hkr(g1), hkr(g2)).scale(sign_rule("induced_bracket", a=k1, b=k2))
            if pd_exactness_witness(diff) is None:
                fail("transport_bracket", a=g1, b=g2)

    # chain side
    for m in range(max_length + 1):
        for d in range(max_degree + 1):
            total = d + m
            h = chain_slice_homology(alg, m, total)
            forms = form_basis(n, m, d) if m <= n else []
            tc = {}
            reps = [chain_slice_element(alg, m, total, z) for z in h.reps]
            images = [chkr(c) for c in reps]
            r = _form_rank(images)
            tc["chkr_rank"] = r
            if r != len(forms):
                fail("chkr_bijective", length=m, degree=d, rank=r, dim=len(forms))
            # chkr kills boundaries: image of every basis chain of length m+1
            for t in chain_slice_basis(alg, m + 1, total):
                from .hochschild import chain_boundary

                if not chkr(chain_boundary(Chain(alg, m + 1, {t: ONE}))).is_zero():
                    fail("chkr_kills_boundaries", chain=t)
                    break
            # B goes to d on every basis chain
            for t in chain_slice_basis(alg, m, total):
                c = Chain(alg, m, {t: ONE})
                if chkr(connes_B(c)) != de_rham(chkr(c)):
                    fail("connes_to_de_rham", chain=t)
                    break
            # pairing against hkr of polyvectors of matching degree
            if m <= n:
                for dg in range(total - m + 1):
                    for g in polyvector_basis(n, m, dg):
                        p = hkr(g)
                        for t in chain_slice_basis(alg, m, total):
                            c = Chain(alg, m, {t: ONE})
                            if pair(g, chkr(c)) != evaluate_on(c, p):
                                fail("pairing", gamma=g, chain=t)
                                break
            # transport of i and l on cycle representatives
            n_i = n_l = 0
            for k in range(0, min(m, n) + 1):
                for dg in range(max_degree - d + 1):
                    for g in polyvector_basis(n, k, dg):
                        pc = as_cochain(hkr(g), alg)
                        for c in reps:
                            if chkr(contract_I(pc, c)) != contract(g, chkr(c)):
                                fail("transport_i", gamma=g, length=m, degree=d)
                            n_i += 1
            for k in range(0, min(m + 1, n) + 1):
                for dg in range(max_degree - d + 1):
                    for g in polyvector_basis(n, k, dg):
                        if m - k + 1 > max_length + 1:
                            continue
                        for c in reps:
                            if chkr(_lhkr(g, c)) != lie_derivative(g, chkr(c)):
                                fail("transport_l", gamma=g, length=m, degree=d)
                            n_l += 1
            tc["transport_i"] = n_i
            tc["transport_l"] = n_l
            slices.append(SliceReport("chain", d, m, h.dim, len(forms), h.dim == len(forms), tc))
    bounds = {"max_degree": max_degree, "max_arity": max_arity, "max_order": max_order, "max_length": max_length}
    return HKRReport(n, bounds, slices, checks, failures)


def _coef_degree(g: Polyvector) -> int:
    degs = {mdeg(a) for (a, _) in g.terms}
    return max(degs) if degs else 0
