"""Hochschild complexes of polynomial algebras K[x_1..x_n], slice by slice.

Cochains are normalized polydifferential operators
``x^a0 d^a1 (x) ... (x) d^ak``: acting on (f_1..f_k) they return
``x^a0 * d^a1 f_1 * ... * d^ak f_k`` with plain (undivided) partial
derivatives.  Every a_i (i >= 1) is a nonzero multi-index.  The
differential keeps both the coefficient degree |a0| and the total order
sum |a_i|, so each (degree, order) slice is a finite complex.

Chains are ordinary normalized chains over ``graded_poly``; the chain
differential and B keep the total polynomial degree, which again gives
finite slices.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraSpec, graded_poly, monomials
from .errors import BoundError, InputError
from .exactlin import GradedDims, Homology, SparseMatrix, axpy, vec_clean
from .hochschild import Chain, RawCochain, chain_boundary, connes_B

Multi = tuple[int, ...]
Poly = dict  # Multi -> Fraction
ONE = Fraction(1)


# ------------------------------------------------------------ polynomials


def madd(a: Multi, b: Multi) -> Multi:
    return tuple(x + y for x, y in zip(a, b))


def msub(a: Multi, b: Multi) -> Multi | None:
    d = tuple(x - y for x, y in zip(a, b))
    return None if min(d, default=0) < 0 else d


def mdeg(a: Multi) -> int:
    return sum(a)


def falling(b: Multi, a: Multi) -> int:
    """Coefficient of x^(b-a) in d^a x^b (0 if some a_j > b_j)."""
    out = 1
    for bj, aj in zip(b, a):
        if aj > bj:
            return 0
        out *= factorial(bj) // factorial(bj - aj)
    return out


def binom_multi(a: Multi, b: Multi) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out


def splittings(a: Multi) -> Iterable[tuple[Multi, Multi]]:
    """All (b, c) with b + c = a."""
    for b in itertools.product(*(range(x + 1) for x in a)):
        yield b, tuple(x - y for x, y in zip(a, b))


def compositions(a: Multi, parts: int) -> Iterable[tuple[Multi, ...]]:
    """All ordered tuples of ``parts`` multi-indices summing to a."""
    if parts == 1:
        yield (a,)
        return
    for b, c in splittings(a):
        for rest in compositions(c, parts - 1):
            yield (b,) + rest


def multinomial(a: Multi, parts: Sequence[Multi]) -> int:
    """Product over variables of a_j! / prod_p p_j!."""
    num = den = 1
    for j, x in enumerate(a):
        num *= factorial(x)
        for p in parts:
            den *= factorial(p[j])
    return num // den


def poly_mul(f: Mapping, g: Mapping) -> Poly:
    out: Poly = {}
    for a, x in f.items():
        for b, y in g.items():
            axpy(out, madd(a, b), x * y)
    return out


def poly_deriv(alpha: Multi, f: Mapping) -> Poly:
    out: Poly = {}
    for b, x in f.items():
        c = falling(b, alpha)
        if c:
            axpy(out, msub(b, alpha), x * c)
    return out


def nonzero_multis(n: int, order: int) -> list[Multi]:
    return [e for e in monomials(n, order) if sum(e) == order]


# ------------------------------------------------------------ polydifferential cochains


class PolyDiff:
    """A normalized polydifferential cochain on K[x_1..x_n]."""

    __slots__ = ("n", "arity", "terms")

    def __init__(self, n: int, arity: int, terms: Mapping | None = None):
        if n < 1 or arity < 0:
            raise InputError("PolyDiff needs n >= 1 and arity >= 0")
        self.n = n
        self.arity = arity
        out: dict = {}
        for (a0, syms), c in (terms or {}).items():
            a0, syms = tuple(a0), tuple(tuple(s) for s in syms)
            if len(syms) != arity or len(a0) != n or any(len(s) != n for s in syms):
                raise InputError(f"term {(a0, syms)} does not fit arity {arity} in {n} variables")
            if any(mdeg(s) == 0 for s in syms):
                continue  # normalization: constants in a slot are killed
            axpy(out, (a0, syms), Fraction(c))
        self.terms = out

    @classmethod
    def zero(cls, n: int, arity: int) -> "PolyDiff":
        return cls(n, arity, {})

    @classmethod
    def function(cls, f: Mapping) -> "PolyDiff":
        """A polynomial as an arity-0 cochain."""
        n = len(next(iter(f))) if f else 1
        return cls(n, 0, {(a, ()): c for a, c in f.items()})

    @property
    def degree(self) -> int:
        return self.arity

    def is_zero(self) -> bool:
        return not self.terms

    def slices(self) -> dict[tuple[int, int], "PolyDiff"]:
        """Components keyed by (coefficient degree, total order)."""
        out: dict = {}
        for (a0, syms), c in self.terms.items():
            key = (mdeg(a0), sum(mdeg(s) for s in syms))
            out.setdefault(key, {})[(a0, syms)] = c
        return {k: PolyDiff(self.n, self.arity, v) for k, v in out.items()}

    def evaluate(self, args: Sequence[Mapping]) -> Poly:
        if len(args) != self.arity:
            raise InputError(f"expected {self.arity} arguments, got {len(args)}")
        out: Poly = {}
        for (a0, syms), c in self.terms.items():
            val: Poly = {a0: c}
            for s, f in zip(syms, args):
                val = poly_mul(val, poly_deriv(s, f))
                if not val:
                    break
            for k, x in val.items():
                axpy(out, k, x)
        return out

    def _check(self, other: "PolyDiff") -> None:
        if self.n != other.n or self.arity != other.arity:
            raise InputError("PolyDiff operands differ in variables or arity")

    def __add__(self, other: "PolyDiff") -> "PolyDiff":
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            axpy(t, k, c)
        return PolyDiff(self.n, self.arity, t)

    def __sub__(self, other: "PolyDiff") -> "PolyDiff":
        return self + other.scale(-1)

    def scale(self, s) -> "PolyDiff":
        return PolyDiff(self.n, self.arity, {k: c * s for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyDiff)
            and self.n == other.n
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"PolyDiff(n={self.n}, arity={self.arity}, terms={len(self.terms)})"


def pd_boundary(p: PolyDiff) -> PolyDiff:
    """Hochschild differential: the a0 P(..) and P(..) a_k terms cancel the
    unit parts of the outer Leibniz splittings, what is left splits each
    symbol into two nonzero halves."""
    out: dict = {}
    for (a0, syms), c in p.terms.items():
        for i, s in enumerate(syms, start=1):
            sg = -c if i % 2 else c
            for b, g in splittings(s):
                if mdeg(b) and mdeg(g):
                    axpy(out, (a0, syms[: i - 1] + (b, g) + syms[i:]), sg * binom_multi(s, b))
    return PolyDiff(p.n, p.arity + 1, out)


def pd_cup(p: PolyDiff, q: PolyDiff) -> PolyDiff:
    if p.n != q.n:
        raise InputError("PolyDiff operands differ in variables")
    out: dict = {}
    for (a0, s1), c1 in p.terms.items():
        for (b0, s2), c2 in q.terms.items():
            axpy(out, (madd(a0, b0), s1 + s2), c1 * c2)
    return PolyDiff(p.n, p.arity + q.arity, out)


def pd_compose_at(p: PolyDiff, q: PolyDiff, i: int) -> PolyDiff:
    """P(f_0.., Q(f_i..), ..): the symbol of P at slot i is spread over the
    coefficient of Q and Q's arguments by the multinomial Leibniz rule."""
    if p.n != q.n:
        raise InputError("PolyDiff operands differ in variables")
    if not (0 <= i < p.arity):
        raise InputError(f"insertion position {i} outside 0..{p.arity - 1}")
    out: dict = {}
    kq = q.arity
    for (a0, sp), c1 in p.terms.items():
        alpha = sp[i]
        for (b0, sq), c2 in q.terms.items():
            for parts in compositions(alpha, kq + 1):
                f = falling(b0, parts[0])
                if not f:
                    continue
                coeff = c1 * c2 * f * multinomial(alpha, parts)
                new0 = madd(a0, msub(b0, parts[0]))
                inner = tuple(madd(s, g) for s, g in zip(sq, parts[1:]))
                axpy(out, (new0, sp[:i] + inner + sp[i + 1 :]), coeff)
    return PolyDiff(p.n, p.arity + q.arity - 1, out)


def pd_bracket(q1: PolyDiff, q2: PolyDiff) -> PolyDiff:
    """[Q1, Q2]_G with k_i = arity - 1 and the same sign pattern as for finite algebras."""
    if q1.arity == 0 and q2.arity == 0:
        return PolyDiff.zero(q1.n, 0)
    k1, k2 = q1.arity - 1, q2.arity - 1
    total = PolyDiff.zero(q1.n, k1 + k2 + 1)
    for i in range(k1 + 1):
        total = total + pd_compose_at(q1, q2, i).scale(-1 if (i * k2) % 2 else 1)
    sg = -1 if (k1 * k2) % 2 else 1
    for i in range(k2 + 1):
        total = total - pd_compose_at(q2, q1, i).scale(sg * (-1 if (i * k1) % 2 else 1))
    return total


# ------------------------------------------------------------ cochain slices


@lru_cache(maxsize=None)
def cochain_slice_basis(n: int, k: int, d: int, s: int) -> tuple:
    """Basis keys (a0, symbols) with |a0| = d and total order s, every symbol nonzero."""
    if k == 0:
        return tuple((a0, ()) for a0 in nonzero_multis(n, d)) if s == 0 else ()
    keys = []
    for orders in itertools.product(range(1, s + 1), repeat=k):
        if sum(orders) != s:
            continue
        for syms in itertools.product(*(nonzero_multis(n, o) for o in orders)):
            for a0 in nonzero_multis(n, d):
                keys.append((a0, syms))
    keys.sort()
    return tuple(keys)


@lru_cache(maxsize=None)
def _slice_index(n: int, k: int, d: int, s: int) -> dict:
    return {key: i for i, key in enumerate(cochain_slice_basis(n, k, d, s))}


def pd_to_vector(p: PolyDiff, d: int, s: int) -> dict:
    idx = _slice_index(p.n, p.arity, d, s)
    out = {}
    for key, c in p.terms.items():
        if key not in idx:
            raise InputError(f"term {key} is outside slice (degree {d}, order {s})")
        out[idx[key]] = c
    return out


def vector_to_pd(n: int, k: int, d: int, s: int, vec: Mapping) -> PolyDiff:
    basis = cochain_slice_basis(n, k, d, s)
    return PolyDiff(n, k, {basis[i]: c for i, c in vec.items()})


@lru_cache(maxsize=None)
def cochain_slice_matrix(n: int, k: int, d: int, s: int) -> SparseMatrix:
    """The differential C^k -> C^{k+1} on the (d, s) slice."""
    src = cochain_slice_basis(n, k, d, s)
    tgt = _slice_index(n, k + 1, d, s)
    cols = []
    for key in src:
        img = pd_boundary(PolyDiff(n, k, {key: ONE}))
        cols.append({tgt[t]: c for t, c in img.terms.items()})
    return SparseMatrix(len(tgt), len(src), cols)


@lru_cache(maxsize=None)
def cochain_slice_homology(n: int, k: int, d: int, s: int) -> Homology:
    d_out = cochain_slice_matrix(n, k, d, s)
    if k == 0:
        d_in = SparseMatrix(d_out.cols, 0)
    else:
        d_in = cochain_slice_matrix(n, k - 1, d, s)
    return Homology(d_out, d_in)


class PolySlices:
    """(Co)homology of a polynomial algebra sliced by (arity or length, degree)."""

    def __init__(self, dims: dict, reps: dict, detail: dict):
        self.dims = dims  # (k, d) -> dim
        self.reps = reps  # (k, d) -> list of representatives
        self.detail = detail  # (k, d, s) -> dim, cochains only

    def graded(self, d: int) -> GradedDims:
        return GradedDims({k: v for (k, dd), v in self.dims.items() if dd == d})


def polydiff_cohomology(n: int, k_max: int, d_max: int, order_max: int) -> PolySlices:
    """HH^k at coefficient degree d, summed over total orders up to ``order_max``."""
    if order_max < k_max:
        raise BoundError(f"order bound {order_max} cannot hold arity {k_max}", {"order": k_max})
    dims, reps, detail = {}, {}, {}
    for k in range(k_max + 1):
        for d in range(d_max + 1):
            total, rs = 0, []
            for s in range(order_max + 1):
                h = cochain_slice_homology(n, k, d, s)
                detail[(k, d, s)] = h.dim
                total += h.dim
                rs.extend(vector_to_pd(n, k, d, s, z) for z in h.reps)
            dims[(k, d)] = total
            reps[(k, d)] = rs
    return PolySlices(dims, reps, detail)


def pd_exactness_witness(p: PolyDiff) -> PolyDiff | None:
    """A polydifferential cochain whose differential is p, verified, or None."""
    if p.is_zero():
        return PolyDiff.zero(p.n, max(p.arity - 1, 0))
    if p.arity == 0:
        return None
    total = PolyDiff.zero(p.n, p.arity - 1)
    for (d, s), piece in sorted(p.slices().items()):
        h = cochain_slice_homology(p.n, p.arity, d, s)
        y = h.witness(pd_to_vector(piece, d, s))
        if y is None:
            return None
        total = total + vector_to_pd(p.n, p.arity - 1, d, s, y)
    if pd_boundary(total) != p:  # pragma: no cover - defensive
        raise ArithmeticError("polydifferential witness failed substitution")
    return total


def pd_is_cocycle(p: PolyDiff) -> bool:
    return pd_boundary(p).is_zero()


# ------------------------------------------------------------ bridge to finite-basis chains


def poly_algebra(n: int, bound: int) -> AlgebraSpec:
    return graded_poly(n, bound)


@lru_cache(maxsize=None)
def _monomial_index(alg: AlgebraSpec) -> dict:
    return {e: i for i, e in enumerate(monomials(alg.nvars, alg.degree_bound))}


def monomial_of(alg: AlgebraSpec, i: int) -> Multi:
    return monomials(alg.nvars, alg.degree_bound)[i]


def poly_to_vector(alg: AlgebraSpec, f: Mapping) -> dict:
    idx = _monomial_index(alg)
    out = {}
    for e, c in f.items():
        if e not in idx:
            raise BoundError(f"monomial {e} exceeds the degree bound {alg.degree_bound}", {"degree": mdeg(e)})
        out[idx[e]] = c
    return vec_clean(out)


def vector_to_poly(alg: AlgebraSpec, v: Mapping) -> Poly:
    mons = monomials(alg.nvars, alg.degree_bound)
    return {mons[i]: c for i, c in v.items() if c}


def as_cochain(p: PolyDiff, alg: AlgebraSpec) -> RawCochain:
    """p as a multilinear map on the monomial basis of ``alg`` (for I, L on chains)."""
    if alg.nvars != p.n or not alg.degreewise:
        raise InputError("as_cochain needs graded_poly in the same number of variables")
    mons = monomials(alg.nvars, alg.degree_bound)

    def fn(t):
        return poly_to_vector(alg, p.evaluate([{mons[i]: ONE} for i in t]))

    return RawCochain(alg, p.arity, fn, "polydiff")


@lru_cache(maxsize=None)
def chain_slice_basis(alg: AlgebraSpec, m: int, total: int) -> tuple:
    """Normalized chain basis tuples of length m and total polynomial degree ``total``."""
    if total > alg.degree_bound:
        raise BoundError(f"chain degree {total} exceeds bound {alg.degree_bound}", {"degree": total})
    grading = alg.grading
    by_deg: dict = {}
    for i, g in enumerate(grading):
        by_deg.setdefault(g, []).append(i)
    out = []
    for degs in itertools.product(range(total + 1), repeat=m + 1):
        if sum(degs) != total or any(g == 0 for g in degs[1:]):
            continue
        for t in itertools.product(*(by_deg.get(g, []) for g in degs)):
            out.append(t)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def _chain_slice_index(alg: AlgebraSpec, m: int, total: int) -> dict:
    return {t: i for i, t in enumerate(chain_slice_basis(alg, m, total))}


def chain_slice_vector(c: Chain, total: int) -> dict:
    idx = _chain_slice_index(c.algebra, c.length, total)
    out = {}
    for t, x in c.terms.items():
        if t not in idx:
            raise InputError(f"chain term {t} is not of total degree {total}")
        out[idx[t]] = x
    return out


def chain_slice_element(alg: AlgebraSpec, m: int, total: int, vec: Mapping) -> Chain:
    basis = chain_slice_basis(alg, m, total)
    return Chain(alg, m, {basis[i]: c for i, c in vec.items()})


def chain_total_degree(alg: AlgebraSpec, t: Sequence[int]) -> int:
    return sum(alg.grading[i] for i in t)


@lru_cache(maxsize=None)
def chain_slice_matrix(alg: AlgebraSpec, m: int, total: int) -> SparseMatrix:
    """Chain differential from length m to m - 1 at fixed total degree."""
    src = chain_slice_basis(alg, m, total)
    if m == 0:
        return SparseMatrix(0, len(src))
    tgt = _chain_slice_index(alg, m - 1, total)
    cols = []
    for t in src:
        img = chain_boundary(Chain(alg, m, {t: ONE}))
        cols.append({tgt[u]: x for u, x in img.terms.items()})
    return SparseMatrix(len(tgt), len(src), cols)


@lru_cache(maxsize=None)
def chain_slice_homology(alg: AlgebraSpec, m: int, total: int) -> Homology:
    return Homology(chain_slice_matrix(alg, m, total), chain_slice_matrix(alg, m + 1, total))


def polynomial_homology(n: int, m_max: int, d_max: int) -> tuple[AlgebraSpec, PolySlices]:
    """HH_m of K[x_1..x_n] at coefficient degree d (total chain degree d + m)."""
    alg = poly_algebra(n, d_max + m_max + 1)
    dims, reps = {}, {}
    for m in range(m_max + 1):
        for d in range(d_max + 1):
            h = chain_slice_homology(alg, m, d + m)
            dims[(m, d)] = h.dim
            reps[(m, d)] = [chain_slice_element(alg, m, d + m, z) for z in h.reps]
    return alg, PolySlices(dims, reps, {})


def chain_exactness_witness(c: Chain) -> Chain | None:
    """A chain b with chain_boundary(b) = c, sliced by total degree, or None."""
    alg = c.algebra
    if c.is_zero():
        return Chain.zero(alg, c.length + 1)
    pieces: dict = {}
    for t, x in c.terms.items():
        pieces.setdefault(chain_total_degree(alg, t), {})[t] = x
    total = Chain.zero(alg, c.length + 1)
    for deg, terms in sorted(pieces.items()):
        h = chain_slice_homology(alg, c.length, deg)
        y = h.witness(chain_slice_vector(Chain(alg, c.length, terms), deg))
        if y is None:
            return None
        total = total + chain_slice_element(alg, c.length + 1, deg, y)
    if chain_boundary(total) != c:  # pragma: no cover - defensive
        raise ArithmeticError("chain witness failed substitution")
    return total


def connes_slice_matrix(alg: AlgebraSpec, m: int, total: int) -> SparseMatrix:
    src = chain_slice_basis(alg, m, total)
    tgt = _chain_slice_index(alg, m + 1, total)
    cols = []
    for t in src:
        img = connes_B(Chain(alg, m, {t: ONE}))
        cols.append({tgt[u]: x for u, x in img.terms.items()})
    return SparseMatrix(len(tgt), len(src), cols)
