"""Normalized Hochschild cochains and chains with their standard operations.

Cochains are multilinear tables on the complement ``A.bar`` of the unit line
(so they vanish on the unit by construction).  Chains are sparse tensors
``a0 (x) a1 (x) ... (x) am`` with ``a0`` in the full basis of A and the
remaining slots in ``A.bar``.  Every operation returns normalized output.

Degree conventions: a k-cochain has degree k, a chain of length m has
degree -m.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import AlgebraSpec, format_vector, parse_rational
from .errors import BoundError, InputError, ParseError
from .exactlin import (
    ONE,
    GradedDims,
    Homology,
    SparseMatrix,
    axpy,
    vec_clean,
)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# ------------------------------------------------------------ small caches


def _bar_of_basis(alg: AlgebraSpec, i: int) -> dict:
    cache = alg.cache.setdefault("bar_of_basis", {})
    v = cache.get(i)
    if v is None:
        v = cache[i] = alg.project_bar({i: ONE})
    return v


def _bar_product(alg: AlgebraSpec, i: int, j: int) -> dict:
    cache = alg.cache.setdefault("bar_product", {})
    v = cache.get((i, j))
    if v is None:
        v = cache[(i, j)] = alg.project_bar(alg.mul_basis(i, j))
    return v


def bar_tuples(alg: AlgebraSpec, k: int) -> list[tuple[int, ...]]:
    cache = alg.cache.setdefault("bar_tuples", {})
    t = cache.get(k)
    if t is None:
        t = cache[k] = list(itertools.product(alg.bar, repeat=k))
    return t


def _bar_position(alg: AlgebraSpec) -> dict:
    pos = alg.cache.get("bar_position")
    if pos is None:
        pos = alg.cache["bar_position"] = {b: p for p, b in enumerate(alg.bar)}
    return pos


def _tuple_index(alg: AlgebraSpec, t: Sequence[int]) -> int:
    pos = _bar_position(alg)
    d = len(alg.bar)
    idx = 0
    for x in t:
        idx = idx * d + pos[x]
    return idx


def _expand(vectors: Sequence[Mapping]) -> Iterable[tuple[tuple[int, ...], Fraction]]:
    """Multilinear expansion of a tuple of sparse vectors."""
    if not vectors:
        yield (), ONE
        return
    if any(not v for v in vectors):
        return
    items = [list(v.items()) for v in vectors]
    for combo in itertools.product(*items):
        c = ONE
        for _, x in combo:
            c *= x
        yield tuple(k for k, _ in combo), c


# ------------------------------------------------------------ cochains


class Cochain:
    """A normalized k-cochain: table (bar k-tuple) -> element vector."""

    __slots__ = ("algebra", "arity", "values")

    def __init__(self, algebra: AlgebraSpec, arity: int, values: Mapping | None = None):
        if arity < 0:
            raise InputError("cochain arity must be >= 0")
        self.algebra = algebra
        self.arity = arity
        vals = {}
        for t, v in (values or {}).items():
            t = tuple(t)
            if len(t) != arity:
                raise InputError(f"tuple {t} has length {len(t)}, expected {arity}")
            if not all(algebra.is_bar(i) for i in t):
                continue  # restriction to the complement of the unit line
            cv = vec_clean(v)
            if cv:
                vals[t] = cv
        self.values = vals

    @classmethod
    def from_function(cls, algebra: AlgebraSpec, arity: int, fn: Callable[[tuple[int, ...]], Mapping]) -> "Cochain":
        return cls(algebra, arity, {t: fn(t) for t in bar_tuples(algebra, arity)})

    @classmethod
    def zero(cls, algebra: AlgebraSpec, arity: int) -> "Cochain":
        return cls(algebra, arity, {})

    @classmethod
    def element(cls, algebra: AlgebraSpec, vec: Mapping) -> "Cochain":
        """An element of A viewed as a 0-cochain."""
        return cls(algebra, 0, {(): vec})

    @property
    def degree(self) -> int:
        return self.arity

    def value(self, t: tuple[int, ...]) -> dict:
        return self.values.get(t, {})

    def evaluate(self, args: Sequence[Mapping]) -> dict:
        if len(args) != self.arity:
            raise InputError(f"cochain of arity {self.arity} given {len(args)} arguments")
        alg = self.algebra
        out: dict = {}
        projected = [alg.project_bar(a) for a in args]
        for t, c in _expand(projected):
            for k, x in self.values.get(t, {}).items():
                axpy(out, k, c * x)
        return out

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other: "Cochain") -> "Cochain":
        _same(self, other)
        out = {t: dict(v) for t, v in self.values.items()}
        for t, v in other.values.items():
            tgt = out.setdefault(t, {})
            for k, c in v.items():
                axpy(tgt, k, c)
        return Cochain(self.algebra, self.arity, out)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def scale(self, s) -> "Cochain":
        s = Fraction(s)
        return Cochain(self.algebra, self.arity, {t: {k: s * c for k, c in v.items()} for t, v in self.values.items()})

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.algebra == other.algebra
            and self.arity == other.arity
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"Cochain(arity={self.arity}, nnz={len(self.values)})"


class RawCochain:
    """A multilinear map on the full basis of A, not necessarily normalized.

    Used for the multiplication and identity maps, which do not vanish on
    the unit but appear as inputs to the operations.
    """

    __slots__ = ("algebra", "arity", "fn", "name")

    def __init__(self, algebra: AlgebraSpec, arity: int, fn: Callable[[tuple[int, ...]], Mapping], name: str = ""):
        self.algebra = algebra
        self.arity = arity
        self.fn = fn
        self.name = name

    @property
    def degree(self) -> int:
        return self.arity

    def value(self, t: tuple[int, ...]) -> dict:
        return dict(self.fn(t))

    def evaluate(self, args: Sequence[Mapping]) -> dict:
        out: dict = {}
        for t, c in _expand(list(args)):
            for k, x in self.fn(t).items():
                axpy(out, k, c * x)
        return out

    def restrict(self) -> Cochain:
        return Cochain.from_function(self.algebra, self.arity, self.fn)


def multiplication(alg: AlgebraSpec) -> RawCochain:
    return RawCochain(alg, 2, lambda t: alg.mul_basis(t[0], t[1]), "mu")


def identity_map(alg: AlgebraSpec) -> RawCochain:
    return RawCochain(alg, 1, lambda t: {t[0]: ONE}, "id")


def _same(p, q) -> None:
    if p.algebra != q.algebra:
        raise InputError("operands live over different algebras")


def _restricted(alg: AlgebraSpec, arity: int, fn) -> Cochain:
    vals = {}
    for t in bar_tuples(alg, arity):
        v = fn(t)
        if v:
            vals[t] = v
    return Cochain(alg, arity, vals)


def cochain_boundary(p: Cochain | RawCochain) -> Cochain:
    """Hochschild differential of a cochain (output arity k+1)."""
    alg = p.algebra
    k = p.arity

    def at(s):
        out: dict = {}
        for kk, c in alg.mul({s[0]: ONE}, p.value(s[1:])).items():
            axpy(out, kk, c)
        for i in range(1, k + 1):
            sg = _sign(i)
            prod = alg.mul_basis(s[i - 1], s[i])
            args = [{x: ONE} for x in s[: i - 1]] + [prod] + [{x: ONE} for x in s[i + 1 :]]
            for kk, c in p.evaluate(args).items():
                axpy(out, kk, sg * c)
        sg = _sign(k + 1)
        for kk, c in alg.mul(p.value(s[:k]), {s[k]: ONE}).items():
            axpy(out, kk, sg * c)
        return out

    return _restricted(alg, k + 1, at)


def cup(p1: Cochain | RawCochain, p2: Cochain | RawCochain) -> Cochain:
    """(P1 cup P2)(a_1..a_{k1+k2}) = P1(a_1..a_k1) P2(a_{k1+1}..)."""
    _same(p1, p2)
    alg = p1.algebra
    k1, k2 = p1.arity, p2.arity
    if isinstance(p1, Cochain) and isinstance(p2, Cochain):
        vals: dict = {}
        for t1, v1 in p1.values.items():
            for t2, v2 in p2.values.items():
                prod = alg.mul(v1, v2)
                if prod:
                    tgt = vals.setdefault(t1 + t2, {})
                    for kk, c in prod.items():
                        axpy(tgt, kk, c)
        return Cochain(alg, k1 + k2, vals)
    return _restricted(alg, k1 + k2, lambda s: alg.mul(p1.value(s[:k1]), p2.value(s[k1:])))


def compose_at(q1, q2, i: int) -> Cochain:
    """Q1(a_0..a_{i-1}, Q2(a_i..), ..) with output arity a1 + a2 - 1."""
    alg = q1.algebra
    a1, a2 = q1.arity, q2.arity
    if not (0 <= i < a1):
        raise InputError(f"insertion position {i} outside 0..{a1 - 1}")
    out_arity = a1 + a2 - 1

    def at(s):
        inner = q2.value(s[i : i + a2])
        args = [{x: ONE} for x in s[:i]] + [inner] + [{x: ONE} for x in s[i + a2 :]]
        return q1.evaluate(args)

    return _restricted(alg, out_arity, at)


def gerstenhaber_bracket(q1, q2, allow_arity0: bool = False) -> Cochain:
    """[Q1, Q2]_G for Q_i of arity k_i + 1; output arity k1 + k2 + 1.

    Arity-0 inputs (k = -1) are rejected unless ``allow_arity0`` is set.
    """
    _same(q1, q2)
    if (q1.arity == 0 or q2.arity == 0) and not allow_arity0:
        raise InputError("bracket with an arity-0 cochain needs allow_arity0=True")
    alg = q1.algebra
    k1, k2 = q1.arity - 1, q2.arity - 1
    out_arity = k1 + k2 + 1
    if out_arity < 0:
        return Cochain.zero(alg, 0)
    total = Cochain.zero(alg, out_arity)
    for i in range(k1 + 1):
        total = total + compose_at(q1, q2, i).scale(_sign(i * k2))
    sg = -_sign(k1 * k2)
    for i in range(k2 + 1):
        total = total + compose_at(q2, q1, i).scale(sg * _sign(i * k1))
    return total


# ------------------------------------------------------------ chains


def _emit(alg: AlgebraSpec, out: dict, coeff, a0: Mapping, slots: Sequence[Mapping]) -> None:
    """Add coeff * (a0 (x) slots...) to out, projecting slots to the complement."""
    if not coeff or not a0:
        return
    proj = [alg.project_bar(v) for v in slots]
    if any(not v for v in proj):
        return
    for t, c in _expand(proj):
        for i0, x in a0.items():
            axpy(out, (i0,) + t, coeff * c * x)


class Chain:
    """A normalized chain of length m: sparse map (a0, a1..am) -> coefficient."""

    __slots__ = ("algebra", "length", "terms")

    def __init__(self, algebra: AlgebraSpec, length: int, terms: Mapping | None = None):
        if length < 0:
            raise InputError("chain length must be >= 0")
        self.algebra = algebra
        self.length = length
        out: dict = {}
        for t, c in (terms or {}).items():
            t = tuple(t)
            if len(t) != length + 1:
                raise InputError(f"tuple {t} has {len(t)} slots, expected {length + 1}")
            if not c:
                continue
            if all(algebra.is_bar(i) for i in t[1:]):
                axpy(out, t, Fraction(c))
            else:
                _emit(algebra, out, Fraction(c), {t[0]: ONE}, [{i: ONE} for i in t[1:]])
        self.terms = out

    @classmethod
    def from_elements(cls, algebra: AlgebraSpec, elements: Sequence[Mapping], coeff=1) -> "Chain":
        out: dict = {}
        _emit(algebra, out, Fraction(coeff), elements[0], list(elements[1:]))
        return cls(algebra, len(elements) - 1, out)

    @classmethod
    def zero(cls, algebra: AlgebraSpec, length: int) -> "Chain":
        return cls(algebra, length, {})

    @property
    def degree(self) -> int:
        return -self.length

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Chain") -> "Chain":
        _same(self, other)
        if self.length != other.length:
            raise InputError("cannot add chains of different lengths")
        out = dict(self.terms)
        for t, c in other.terms.items():
            axpy(out, t, c)
        return Chain(self.algebra, self.length, out)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + other.scale(-1)

    def scale(self, s) -> "Chain":
        s = Fraction(s)
        return Chain(self.algebra, self.length, {t: s * c for t, c in self.terms.items()})

    def __neg__(self) -> "Chain":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chain)
            and self.algebra == other.algebra
            and self.length == other.length
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"Chain(length={self.length}, nnz={len(self.terms)})"


def _chain_map(c: Chain, out_len: int, per_term: Callable[[tuple, Fraction, dict], None]) -> Chain:
    out: dict = {}
    for t, x in c.terms.items():
        per_term(t, x, out)
    return Chain(c.algebra, out_len, out)


def chain_boundary(c: Chain) -> Chain:
    alg = c.algebra
    m = c.length
    if m == 0:
        return Chain.zero(alg, 0)

    def term(t, x, out):
        for i in range(m):
            prod = alg.mul_basis(t[i], t[i + 1])
            if i == 0:
                _emit(alg, out, _sign(i) * x, prod, [{j: ONE} for j in t[2:]])
            else:
                slots = [{j: ONE} for j in t[1:i]] + [prod] + [{j: ONE} for j in t[i + 2 :]]
                _emit(alg, out, _sign(i) * x, {t[0]: ONE}, slots)
        _emit(alg, out, _sign(m) * x, alg.mul_basis(t[m], t[0]), [{j: ONE} for j in t[1:m]])

    return _chain_map(c, m - 1, term)


def connes_B(c: Chain) -> Chain:
    alg = c.algebra
    m = c.length
    unit = alg.unit

    def term(t, x, out):
        for i in range(m + 1):
            rot = t[i:] + t[:i]
            _emit(alg, out, _sign(m * i) * x, unit, [{j: ONE} for j in rot])

    return _chain_map(c, m + 1, term)


def contract_I(p, c: Chain) -> Chain:
    """I_P(a0..am) = (a0 P(a1..ak), a_{k+1}..am), zero when m < k."""
    _same(p, c)
    alg = c.algebra
    k, m = p.arity, c.length
    if m < k:
        return Chain.zero(alg, 0)

    def term(t, x, out):
        val = p.value(t[1 : k + 1])
        if val:
            _emit(alg, out, x, alg.mul({t[0]: ONE}, val), [{j: ONE} for j in t[k + 1 :]])

    return _chain_map(c, m - k, term)


def lie_derive_L(q, c: Chain, allow_arity0: bool = False) -> Chain:
    """L_Q on chains for Q of arity k+1; output length m - k.

    For arity-0 Q (k = -1, only with ``allow_arity0``) the operator inserts
    Q() into the slots 1..m+1 with alternating signs, starting with -.
    """
    _same(q, c)
    alg = c.algebra
    k = q.arity - 1
    m = c.length
    if k < 0:
        if not allow_arity0:
            raise InputError("L_Q with an arity-0 cochain needs allow_arity0=True")
        return _insert_element(q.value(()), c)
    if m < k:
        return Chain.zero(alg, 0)

    def qv(idxs):
        if all(alg.is_bar(j) for j in idxs):
            return q.value(tuple(idxs))
        return q.evaluate([{j: ONE} for j in idxs])

    def term(t, x, out):
        for i in range(m - k + 1):
            val = qv(t[i : i + k + 1])
            if not val:
                continue
            sg = _sign(k * i) * x
            if i == 0:
                _emit(alg, out, sg, val, [{j: ONE} for j in t[k + 1 :]])
            else:
                slots = [{j: ONE} for j in t[1:i]] + [val] + [{j: ONE} for j in t[i + k + 1 :]]
                _emit(alg, out, sg, {t[0]: ONE}, slots)
        for j in range(m - k, m):
            val = qv(t[j + 1 :] + t[: k + j - m + 1])
            if not val:
                continue
            rest = t[k + j + 1 - m : j + 1]
            _emit(alg, out, _sign(m * (j + 1)) * x, val, [{i: ONE} for i in rest])

    return _chain_map(c, m - k, term)


def _insert_element(f: Mapping, c: Chain) -> Chain:
    alg = c.algebra
    m = c.length

    def term(t, x, out):
        for i in range(1, m + 2):
            slots = [{j: ONE} for j in t[1:i]] + [f] + [{j: ONE} for j in t[i:]]
            _emit(alg, out, _sign(i) * x, {t[0]: ONE}, slots)

    return _chain_map(c, m + 1, term)


# ------------------------------------------------------------ complexes as matrices


def cochain_dim(alg: AlgebraSpec, k: int) -> int:
    return len(alg.bar) ** k * alg.dim


def chain_dim(alg: AlgebraSpec, m: int) -> int:
    return alg.dim * len(alg.bar) ** m


def cochain_to_vector(p: Cochain) -> dict:
    n = p.algebra.dim
    out = {}
    for t, v in p.values.items():
        base = _tuple_index(p.algebra, t) * n
        for o, c in v.items():
            out[base + o] = c
    return out


def vector_to_cochain(alg: AlgebraSpec, k: int, vec: Mapping) -> Cochain:
    n = alg.dim
    tuples = bar_tuples(alg, k)
    vals: dict = {}
    for idx, c in vec.items():
        t = tuples[idx // n]
        vals.setdefault(t, {})[idx % n] = c
    return Cochain(alg, k, vals)


def chain_to_vector(c: Chain) -> dict:
    alg = c.algebra
    block = len(alg.bar) ** c.length
    return {t[0] * block + _tuple_index(alg, t[1:]): x for t, x in c.terms.items()}


def vector_to_chain(alg: AlgebraSpec, m: int, vec: Mapping) -> Chain:
    tuples = bar_tuples(alg, m)
    block = len(tuples)
    return Chain(alg, m, {(idx // block,) + tuples[idx % block]: x for idx, x in vec.items()})


def _memo(alg: AlgebraSpec, key, build):
    store = alg.cache.setdefault("complex", {})
    if key not in store:
        store[key] = build()
    return store[key]


def cochain_differential_matrix(alg: AlgebraSpec, k: int) -> SparseMatrix:
    """Matrix of the differential C^k -> C^{k+1} in the tuple-major basis."""

    def build():
        n = alg.dim
        cols: list[dict] = [{} for _ in range(cochain_dim(alg, k))]
        for s in bar_tuples(alg, k + 1):
            rbase = _tuple_index(alg, s) * n
            # a0 P(a1..ak)
            tcol = _tuple_index(alg, s[1:]) * n
            for o in range(n):
                for r, c in alg.mul_basis(s[0], o).items():
                    axpy(cols[tcol + o], rbase + r, c)
            for i in range(1, k + 1):
                sg = _sign(i)
                for j, c in _bar_product(alg, s[i - 1], s[i]).items():
                    tcol = _tuple_index(alg, s[: i - 1] + (j,) + s[i + 1 :]) * n
                    for o in range(n):
                        axpy(cols[tcol + o], rbase + o, sg * c)
            sg = _sign(k + 1)
            tcol = _tuple_index(alg, s[:k]) * n
            for o in range(n):
                for r, c in alg.mul_basis(o, s[k]).items():
                    axpy(cols[tcol + o], rbase + r, sg * c)
        return SparseMatrix(cochain_dim(alg, k + 1), cochain_dim(alg, k), cols)

    return _memo(alg, ("dcochain", k), build)


def _chain_operator_matrix(alg: AlgebraSpec, m: int, out_len: int, op: Callable[[Chain], Chain]) -> SparseMatrix:
    cols = []
    for i0 in range(alg.dim):
        for t in bar_tuples(alg, m):
            cols.append(chain_to_vector(op(Chain(alg, m, {(i0,) + t: 1}))))
    return SparseMatrix(chain_dim(alg, out_len), chain_dim(alg, m), cols)


def chain_differential_matrix(alg: AlgebraSpec, m: int) -> SparseMatrix:
    """Matrix of C_m -> C_{m-1}; for m = 0 a map to the zero space."""
    if m == 0:
        return SparseMatrix(0, chain_dim(alg, 0))
    return _memo(alg, ("dchain", m), lambda: _chain_operator_matrix(alg, m, m - 1, chain_boundary))


def connes_matrix(alg: AlgebraSpec, m: int) -> SparseMatrix:
    return _memo(alg, ("B", m), lambda: _chain_operator_matrix(alg, m, m + 1, connes_B))


def cochain_homology(alg: AlgebraSpec, k: int) -> Homology:
    def build():
        d_out = cochain_differential_matrix(alg, k)
        d_in = cochain_differential_matrix(alg, k - 1) if k > 0 else SparseMatrix(cochain_dim(alg, 0), 0)
        return Homology(d_out, d_in)

    return _memo(alg, ("HH^", k), build)


def chain_homology(alg: AlgebraSpec, m: int) -> Homology:
    def build():
        return Homology(chain_differential_matrix(alg, m), chain_differential_matrix(alg, m + 1))

    return _memo(alg, ("HH_", m), build)


class HochschildGroups:
    """(Co)homology dimensions per degree with representative (co)cycles."""

    def __init__(self, dims: GradedDims, reps: dict, groups: dict):
        self.dims = dims
        self.reps = reps
        self.groups = groups

    def __getitem__(self, k: int) -> int:
        return self.dims[k]


def _require_finite(alg: AlgebraSpec) -> None:
    if alg.degreewise:
        raise BoundError(
            "degreewise polynomial algebras are handled slice by slice by the polydifferential model",
            {"model": "polydiff"},
        )


def cohomology(alg: AlgebraSpec, k_max: int) -> HochschildGroups:
    _require_finite(alg)
    dims, reps, groups = {}, {}, {}
    for k in range(k_max + 1):
        h = cochain_homology(alg, k)
        dims[k] = h.dim
        reps[k] = [vector_to_cochain(alg, k, z) for z in h.reps]
        groups[k] = h
    return HochschildGroups(GradedDims(dims), reps, groups)


def homology(alg: AlgebraSpec, m_max: int) -> HochschildGroups:
    """Hochschild homology keyed by chain length m (the degree is -m)."""
    _require_finite(alg)
    dims, reps, groups = {}, {}, {}
    for m in range(m_max + 1):
        h = chain_homology(alg, m)
        dims[m] = h.dim
        reps[m] = [vector_to_chain(alg, m, z) for z in h.reps]
        groups[m] = h
    return HochschildGroups(GradedDims(dims), reps, groups)


def exactness_witness(x: Cochain | Chain):
    """A preimage under the Hochschild differential, verified, or None."""
    alg = x.algebra
    _require_finite(alg)
    if isinstance(x, Cochain):
        k = x.arity
        if x.is_zero():
            return Cochain.zero(alg, max(k - 1, 0))
        if k == 0:
            return None
        if cochain_boundary_is_nonzero(x):
            return None
        y = cochain_homology(alg, k).witness(cochain_to_vector(x))
        if y is None:
            return None
        w = vector_to_cochain(alg, k - 1, y)
        if cochain_boundary(w) != x:  # pragma: no cover - defensive
            raise ArithmeticError("cochain witness failed substitution")
        return w
    m = x.length
    if x.is_zero():
        return Chain.zero(alg, m + 1)
    if not chain_boundary(x).is_zero():
        return None
    y = chain_homology(alg, m).witness(chain_to_vector(x))
    if y is None:
        return None
    w = vector_to_chain(alg, m + 1, y)
    if chain_boundary(w) != x:  # pragma: no cover - defensive
        raise ArithmeticError("chain witness failed substitution")
    return w


def cochain_boundary_is_nonzero(p: Cochain) -> bool:
    return bool(cochain_differential_matrix(p.algebra, p.arity).matvec(cochain_to_vector(p)))


# ------------------------------------------------------------ literal formats

_LINE = re.compile(r"^\s*\(([^)]*)\)\s*(?:->|→)\s*(.+?)\s*$")
_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*\*\s*(\S+)\s*$")


def _split_labels(inner: str) -> list[str]:
    return [s.strip() for s in inner.split(",") if s.strip()]


def parse_vector(text: str, alg: AlgebraSpec) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    for part in re.split(r"\s+\+\s+", text):
        m = _TERM.match(part)
        if not m:
            raise ParseError(f"cannot parse term {part!r}")
        axpy(out, alg.index_of(m.group(2)), parse_rational(m.group(1)))
    return out


def format_cochain(p: Cochain) -> str:
    labels = p.algebra.labels
    lines = [f"# arity {p.arity}"]
    for t in sorted(p.values):
        lines.append(f"({', '.join(labels[i] for i in t)}) -> {format_vector(p.values[t], labels)}")
    return "\n".join(lines) + "\n"


def parse_cochain(text: str, alg: AlgebraSpec, arity: int | None = None) -> Cochain:
    vals: dict = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("# arity"):
            arity = int(line.split()[-1]) if arity is None else arity
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"cannot parse cochain line {raw!r}")
        t = tuple(alg.index_of(s) for s in _split_labels(m.group(1)))
        if arity is None:
            arity = len(t)
        tgt = vals.setdefault(t, {})
        for k, c in parse_vector(m.group(2), alg).items():
            axpy(tgt, k, c)
    if arity is None:
        raise ParseError("empty cochain literal needs an explicit arity")
    return Cochain(alg, arity, vals)


def format_chain(c: Chain) -> str:
    labels = c.algebra.labels
    lines = [f"# length {c.length}"]
    for t in sorted(c.terms):
        x = c.terms[t]
        xs = str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        lines.append(f"({', '.join(labels[i] for i in t)}) -> {xs}")
    return "\n".join(lines) + "\n"


def parse_chain(text: str, alg: AlgebraSpec, length: int | None = None) -> Chain:
    terms: dict = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("# length"):
            length = int(line.split()[-1]) if length is None else length
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"cannot parse chain line {raw!r}")
        t = tuple(alg.index_of(s) for s in _split_labels(m.group(1)))
        if length is None:
            length = len(t) - 1
        axpy(terms, t, parse_rational(m.group(2)))
    if length is None:
        raise ParseError("empty chain literal needs an explicit length")
    return Chain(alg, length, terms)


# ------------------------------------------------------------ random samples


def random_cochain(alg: AlgebraSpec, arity: int, rng, terms: int = 3, coeff: int = 3) -> Cochain:
    """A sparse cochain with a few small integer entries drawn from ``rng``."""
    tuples = bar_tuples(alg, arity)
    vals: dict = {}
    for t in rng.sample(tuples, min(terms, len(tuples))):
        v = {rng.randrange(alg.dim): Fraction(rng.randint(-coeff, coeff)) for _ in range(2)}
        vals[t] = v
    return Cochain(alg, arity, vals)


def random_chain(alg: AlgebraSpec, length: int, rng, terms: int = 3, coeff: int = 3) -> Chain:
    bar = [i for i in range(alg.dim) if alg.is_bar(i)]
    out: dict = {}
    if not bar and length > 0:
        return Chain.zero(alg, length)
    for _ in range(terms):
        t = (rng.randrange(alg.dim),) + tuple(rng.choice(bar) for _ in range(length))
        out[t] = out.get(t, 0) + Fraction(rng.randint(-coeff, coeff))
    return Chain(alg, length, out)
