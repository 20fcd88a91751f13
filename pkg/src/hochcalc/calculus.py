"""Axiom checkers for Gerstenhaber algebras, calculi and Lie+delta algebras,
and the calculus induced on Hochschild (co)homology."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .algebra import AlgebraSpec
from .errors import ConsistencyError, InputError
from .exactlin import GradedDims, axpy, vec_add, vec_clean
from .hochschild import (
    Chain,
    Cochain,
    chain_homology,
    chain_to_vector,
    cochain_boundary,
    cochain_homology,
    cochain_to_vector,
    connes_B,
    contract_I,
    cup,
    chain_boundary,
    exactness_witness,
    gerstenhaber_bracket,
    lie_derive_L,
    vector_to_chain,
    vector_to_cochain,
)
from .signs import sign_rule

Vec = dict
Elem = tuple  # (degree, Vec); None stands for "outside the computed window"
BasisKey = tuple  # (degree, index)


@dataclass
class GradedSpace:
    """Dimensions per degree and the window in which they are known.

    Degrees missing from ``dims`` count as zero spaces, except degrees above
    ``unknown_above`` or below ``unknown_below`` which were not computed.
    """

    dims: dict[int, int]
    unknown_above: int | None = None
    unknown_below: int | None = None

    def known(self, deg: int) -> bool:
        if self.unknown_above is not None and deg > self.unknown_above:
            return False
        if self.unknown_below is not None and deg < self.unknown_below:
            return False
        return True

    def dim(self, deg: int) -> int:
        return self.dims.get(deg, 0)

    def basis(self) -> list[BasisKey]:
        return [(d, i) for d in sorted(self.dims) for i in range(self.dims[d])]


@dataclass
class CalculusData:
    """Operation tables (wedge, bracket, i, l, delta) on chosen bases.

    Binary tables map ``((deg_a, i), (deg_b, j))`` to a coordinate vector in
    the output degree; ``delta`` maps ``(deg, i)`` to a vector.  Degrees of
    the outputs: wedge |a|+|b|, bracket |a|+|b|-1, i |a|+|w|, l |a|+|w|-1,
    delta |w|-1.
    """

    v: GradedSpace
    w: GradedSpace
    wedge: dict = field(default_factory=dict)
    bracket: dict = field(default_factory=dict)
    i: dict = field(default_factory=dict)
    l: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)

    # ---- linear evaluation on elements
    def _bil(self, table: dict, out: GradedSpace, shift: int, x: Elem | None, y: Elem | None) -> Elem | None:
        if x is None or y is None:
            return None
        deg = x[0] + y[0] + shift
        if not out.known(deg):
            return None
        res: Vec = {}
        if out.dim(deg):
            for a, ca in x[1].items():
                for b, cb in y[1].items():
                    key = ((x[0], a), (y[0], b))
                    if key not in table:
                        raise InputError(f"operation table has no entry for {key}")
                    for o, co in table[key].items():
                        axpy(res, o, ca * cb * co)
        return deg, res

    def do_wedge(self, x, y):
        return self._bil(self.wedge, self.v, 0, x, y)

    def do_bracket(self, x, y):
        return self._bil(self.bracket, self.v, -1, x, y)

    def do_i(self, x, y):
        return self._bil(self.i, self.w, 0, x, y)

    def do_l(self, x, y):
        return self._bil(self.l, self.w, -1, x, y)

    def do_delta(self, y):
        if y is None:
            return None
        deg = y[0] - 1
        if not self.w.known(deg):
            return None
        res: Vec = {}
        if self.w.dim(deg):
            for b, cb in y[1].items():
                key = (y[0], b)
                if key not in self.delta:
                    raise InputError(f"delta table has no entry for {key}")
                for o, co in self.delta[key].items():
                    axpy(res, o, cb * co)
        return deg, res


def basis_elem(key: BasisKey) -> Elem:
    return key[0], {key[1]: Fraction(1)}


def _combine(*terms: tuple[int, Elem | None]) -> Elem | None:
    """Signed sum of elements of one degree; None if any term is unknown."""
    deg = None
    acc: Vec = {}
    for s, e in terms:
        if e is None:
            return None
        if deg is not None and e[0] != deg:
            raise ConsistencyError(f"degree mismatch {deg} vs {e[0]}")
        deg = e[0]
        acc = vec_add(acc, e[1], s)
    return deg, acc


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


# ---------------------------------------------------------------- reports


@dataclass
class AxiomResult:
    axiom_id: str
    status: str  # "pass" | "fail"
    checked: int = 0
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"axiom_id": self.axiom_id, "status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class AxiomReport:
    results: list[AxiomResult]
    violations: list[tuple[str, dict]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def status(self, axiom_id: str) -> str:
        for r in self.results:
            if r.axiom_id == axiom_id:
                return r.status
        raise KeyError(axiom_id)

    def failed(self) -> list[str]:
        return [r.axiom_id for r in self.results if r.status == "fail"]

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.results]


class _Checker:
    def __init__(self) -> None:
        self.results: dict[str, AxiomResult] = {}
        self.violations: list[tuple[str, dict]] = []

    def declare(self, axiom_id: str) -> None:
        self.results.setdefault(axiom_id, AxiomResult(axiom_id, "pass"))

    def check(self, axiom_id: str, diff: Elem | None, inputs: Iterable[BasisKey]) -> None:
        self.declare(axiom_id)
        if diff is None:
            return
        r = self.results[axiom_id]
        r.checked += 1
        residual = vec_clean(diff[1])
        if residual:
            witness = {
                "inputs": [list(k) for k in inputs],
                "residual_degree": diff[0],
                "residual": {str(k): str(v) for k, v in sorted(residual.items())},
            }
            if r.status == "pass":
                r.status = "fail"
                r.witness = witness
            self.violations.append((axiom_id, witness))

    def report(self) -> AxiomReport:
        return AxiomReport(list(self.results.values()), self.violations)


def _gerstenhaber_into(ch: _Checker, d: CalculusData) -> None:
    vb = d.v.basis()
    for aid in ("wedge-commutativity", "wedge-associativity", "antisymmetry", "jacobi", "leibniz"):
        ch.declare(aid)
    for ka, kb in product(vb, repeat=2):
        a, b = basis_elem(ka), basis_elem(kb)
        pa, pb = ka[0], kb[0]
        ch.check("wedge-commutativity", _combine((1, d.do_wedge(a, b)), (-_sgn(pa * pb), d.do_wedge(b, a))), (ka, kb))
        ch.check(
            "antisymmetry",
            _combine((1, d.do_bracket(a, b)), (_sgn((pa - 1) * (pb - 1)), d.do_bracket(b, a))),
            (ka, kb),
        )
    for ka, kb, kc in product(vb, repeat=3):
        a, b, c = basis_elem(ka), basis_elem(kb), basis_elem(kc)
        pa, pb = ka[0], kb[0]
        ch.check(
            "wedge-associativity",
            _combine((1, d.do_wedge(d.do_wedge(a, b), c)), (-1, d.do_wedge(a, d.do_wedge(b, c)))),
            (ka, kb, kc),
        )
        ch.check(
            "jacobi",
            _combine(
                (1, d.do_bracket(a, d.do_bracket(b, c))),
                (-1, d.do_bracket(d.do_bracket(a, b), c)),
                (-_sgn((pa - 1) * (pb - 1)), d.do_bracket(b, d.do_bracket(a, c))),
            ),
            (ka, kb, kc),
        )
        ch.check(
            "leibniz",
            _combine(
                (1, d.do_bracket(a, d.do_wedge(b, c))),
                (-1, d.do_wedge(d.do_bracket(a, b), c)),
                (-_sgn((pa + 1) * pb), d.do_wedge(b, d.do_bracket(a, c))),
            ),
            (ka, kb, kc),
        )


def check_gerstenhaber(data: CalculusData) -> AxiomReport:
    """Graded commutativity and associativity of wedge, graded antisymmetry and
    Jacobi of the degree -1 bracket, and the Leibniz compatibility."""
    ch = _Checker()
    _gerstenhaber_into(ch, data)
    return ch.report()


def _lie_module_into(ch: _Checker, d: CalculusData) -> None:
    ch.declare("l-module")
    for ka, kb in product(d.v.basis(), repeat=2):
        a, b = basis_elem(ka), basis_elem(kb)
        s = _sgn((ka[0] - 1) * (kb[0] - 1))
        for kw in d.w.basis():
            w = basis_elem(kw)
            ch.check(
                "l-module",
                _combine(
                    (1, d.do_l(d.do_bracket(a, b), w)),
                    (-1, d.do_l(a, d.do_l(b, w))),
                    (s, d.do_l(b, d.do_l(a, w))),
                ),
                (ka, kb, kw),
            )


def _delta_into(ch: _Checker, d: CalculusData, aid: str) -> None:
    ch.declare(aid)
    for kw in d.w.basis():
        w = basis_elem(kw)
        ch.check(aid, d.do_delta(d.do_delta(w)), (kw,))


def check_calculus(data: CalculusData) -> AxiomReport:
    """Module axioms for i and l plus the compatibilities l-i, l-cup,
    l-i-delta and de-2.  Gerstenhaber axioms on V are checked as well."""
    d = data
    ch = _Checker()
    _gerstenhaber_into(ch, d)
    for aid in ("i-module", "l-module", "l-i", "l-cup", "l-i-delta", "de-2"):
        ch.declare(aid)
    _lie_module_into(ch, d)
    _delta_into(ch, d, "de-2")
    vb, wb = d.v.basis(), d.w.basis()
    for ka, kw in product(vb, wb):
        a, w = basis_elem(ka), basis_elem(kw)
        ch.check(
            "l-i-delta",
            _combine(
                (1, d.do_delta(d.do_i(a, w))),
                (-_sgn(ka[0]), d.do_i(a, d.do_delta(w))),
                (-1, d.do_l(a, w)),
            ),
            (ka, kw),
        )
    for ka, kb in product(vb, repeat=2):
        a, b = basis_elem(ka), basis_elem(kb)
        pa, pb = ka[0], kb[0]
        ab_w = d.do_wedge(a, b)
        ab_b = d.do_bracket(a, b)
        for kw in wb:
            w = basis_elem(kw)
            ch.check("i-module", _combine((1, d.do_i(ab_w, w)), (-1, d.do_i(a, d.do_i(b, w)))), (ka, kb, kw))
            ch.check(
                "l-i",
                _combine(
                    (1, d.do_i(a, d.do_l(b, w))),
                    (-_sgn(pa * (pb + 1)), d.do_l(b, d.do_i(a, w))),
                    (-1, d.do_i(ab_b, w)),
                ),
                (ka, kb, kw),
            )
            ch.check(
                "l-cup",
                _combine(
                    (1, d.do_l(ab_w, w)),
                    (-1, d.do_l(a, d.do_i(b, w))),
                    (-_sgn(pa), d.do_i(a, d.do_l(b, w))),
                ),
                (ka, kb, kw),
            )
    return ch.report()


def check_lie_plus_delta(data: CalculusData) -> AxiomReport:
    """Lie algebra and module axioms for (bracket, l) plus Lie-de-2 and l-delta;
    wedge and i are ignored."""
    d = data
    ch = _Checker()
    for aid in ("antisymmetry", "jacobi", "l-module", "Lie-de-2", "l-delta"):
        ch.declare(aid)
    vb = d.v.basis()
    for ka, kb in product(vb, repeat=2):
        a, b = basis_elem(ka), basis_elem(kb)
        ch.check(
            "antisymmetry",
            _combine((1, d.do_bracket(a, b)), (_sgn((ka[0] - 1) * (kb[0] - 1)), d.do_bracket(b, a))),
            (ka, kb),
        )
    for ka, kb, kc in product(vb, repeat=3):
        a, b, c = basis_elem(ka), basis_elem(kb), basis_elem(kc)
        ch.check(
            "jacobi",
            _combine(
                (1, d.do_bracket(a, d.do_bracket(b, c))),
                (-1, d.do_bracket(d.do_bracket(a, b), c)),
                (-_sgn((ka[0] - 1) * (kb[0] - 1)), d.do_bracket(b, d.do_bracket(a, c))),
            ),
            (ka, kb, kc),
        )
    _lie_module_into(ch, d)
    _delta_into(ch, d, "Lie-de-2")
    for ka, kw in product(vb, d.w.basis()):
        a, w = basis_elem(ka), basis_elem(kw)
        # graded commutator of two odd/even operators: l_a has degree |a| - 1
        ch.check(
            "l-delta",
            _combine(
                (1, d.do_delta(d.do_l(a, w))),
                (-_sgn(ka[0] - 1), d.do_l(a, d.do_delta(w))),
            ),
            (ka, kw),
        )
    return ch.report()


# ----------------------------------------------------- induced structure on HH


@dataclass
class InducedCalculus:
    """CalculusData on (HH^*, HH_*) together with the representatives used."""

    data: CalculusData
    cochain_reps: dict[int, list[Cochain]]
    chain_reps: dict[int, list[Chain]]  # keyed by chain length m (degree -m)
    spot_checks: int = 0


def _class_coords(alg: AlgebraSpec, x: Cochain | Chain) -> Vec:
    if isinstance(x, Cochain):
        h = cochain_homology(alg, x.arity)
        v = cochain_to_vector(x)
    else:
        h = chain_homology(alg, x.length)
        v = chain_to_vector(x)
    dec = h.decompose(v)
    if dec is None:
        raise ConsistencyError(f"operation output is not a {'co' if isinstance(x, Cochain) else ''}cycle")
    return {i: c for i, c in enumerate(dec[0]) if c}


def hh_wedge(p: Cochain, q: Cochain) -> Cochain:
    """Product on cochains whose contraction is a left module action: q ∪ p."""
    return cup(q, p)


def hh_bracket(p: Cochain, q: Cochain) -> Cochain:
    return gerstenhaber_bracket(p, q).scale(sign_rule("induced_bracket", a=p.arity, b=q.arity))


def hh_l(p: Cochain, c: Chain) -> Chain:
    return lie_derive_L(p, c, allow_arity0=True).scale(sign_rule("induced_lie_derivative", a=p.arity, m=c.length))


def hh_i(p: Cochain, c: Chain) -> Chain:
    return contract_I(p, c)


def hh_delta(c: Chain) -> Chain:
    return connes_B(c)


def _bracket_any(p: Cochain, q: Cochain) -> Cochain:
    if p.arity == 0 and q.arity == 0:
        return Cochain.zero(p.algebra, 0)  # degree -1 output vanishes
    return gerstenhaber_bracket(p, q, allow_arity0=True).scale(
        sign_rule("induced_bracket", a=p.arity, b=q.arity)
    )


def induce_on_homology(
    alg: AlgebraSpec,
    k_max: int,
    m_max: int | None = None,
    spot_checks: int = 10,
    seed: int = 0,
) -> InducedCalculus:
    """Evaluate the cochain/chain operations on (co)homology representatives and
    re-express the results in the representative bases.

    V = HH^0..HH^k_max, W = HH_0..HH_m_max (degree -m).  Each operation is
    spot-checked for class-well-definedness by perturbing one input by a
    random boundary and confirming the output changes by an exact term.
    """
    if alg.degreewise:
        raise InputError("induce_on_homology needs a finite-dimensional algebra")
    m_max = k_max if m_max is None else m_max
    co_reps = {k: [vector_to_cochain(alg, k, z) for z in cochain_homology(alg, k).reps] for k in range(k_max + 1)}
    ch_reps = {m: [vector_to_chain(alg, m, z) for z in chain_homology(alg, m).reps] for m in range(m_max + 1)}
    v = GradedSpace({k: len(r) for k, r in co_reps.items()}, unknown_above=k_max)
    w = GradedSpace({-m: len(r) for m, r in ch_reps.items()}, unknown_below=-m_max)
    data = CalculusData(v, w)

    for (p, ps), (q, qs) in product(co_reps.items(), repeat=2):
        for a, pa in enumerate(ps):
            for b, qb in enumerate(qs):
                key = ((p, a), (q, b))
                if p + q <= k_max:
                    data.wedge[key] = _class_coords(alg, hh_wedge(pa, qb))
                if 0 <= p + q - 1 <= k_max:
                    data.bracket[key] = _class_coords(alg, _bracket_any(pa, qb))
    for (p, ps), (m, cs) in product(co_reps.items(), ch_reps.items()):
        for a, pa in enumerate(ps):
            for j, c in enumerate(cs):
                key = ((p, a), (-m, j))
                if m - p >= 0:
                    data.i[key] = _class_coords(alg, hh_i(pa, c))
                if 0 <= m - p + 1 <= m_max:
                    data.l[key] = _class_coords(alg, hh_l(pa, c))
    for m, cs in ch_reps.items():
        for j, c in enumerate(cs):
            if m + 1 <= m_max:
                data.delta[(-m, j)] = _class_coords(alg, hh_delta(c))

    done = _spot_check(alg, co_reps, ch_reps, k_max, m_max, spot_checks, seed)
    return InducedCalculus(data, co_reps, ch_reps, done)


def _random_boundary_cochain(alg: AlgebraSpec, k: int, rng: random.Random) -> Cochain:
    from .hochschild import bar_tuples

    if k == 0:
        return Cochain.zero(alg, 0)
    src = bar_tuples(alg, k - 1)
    vals = {}
    for t in rng.sample(src, min(2, len(src))):
        vals[t] = {rng.randrange(alg.dim): Fraction(rng.randint(-3, 3))}
    return cochain_boundary(Cochain(alg, k - 1, vals))


def _random_boundary_chain(alg: AlgebraSpec, m: int, rng: random.Random) -> Chain:
    from .hochschild import bar_tuples

    terms = {}
    letters = bar_tuples(alg, 1)
    if not letters:
        return Chain.zero(alg, m)
    for _ in range(2):
        t = (rng.randrange(alg.dim),) + tuple(rng.choice(letters)[0] for _ in range(m + 1))
        terms[t] = Fraction(rng.randint(-3, 3))
    return chain_boundary(Chain(alg, m + 1, terms))


def _exact(x: Cochain | Chain) -> bool:
    return exactness_witness(x) is not None


def _spot_check(alg, co_reps, ch_reps, k_max, m_max, n, seed) -> int:
    """Perturb one argument by a boundary; the output must change by an exact term."""
    rng = random.Random(seed)
    pairs = [(p, x) for p, xs in co_reps.items() for x in xs]
    chains = [(m, c) for m, cs in ch_reps.items() for c in cs]
    if not pairs or not chains:
        return 0
    done = 0
    for t in range(n):
        p, x = rng.choice(pairs)
        q, y = rng.choice(pairs)
        m, c = rng.choice(chains)
        dx = _random_boundary_cochain(alg, p, rng)
        dc = _random_boundary_chain(alg, m, rng)
        checks = []
        if p + q <= k_max:
            checks.append(hh_wedge(x + dx, y) - hh_wedge(x, y))
        if 0 <= p + q - 1 <= k_max:
            checks.append(_bracket_any(x + dx, y) - _bracket_any(x, y))
        if m >= p:
            checks.append(hh_i(x + dx, c) - hh_i(x, c))
            checks.append(hh_i(x, c + dc) - hh_i(x, c))
        if 0 <= m - p + 1 <= m_max:
            checks.append(hh_l(x + dx, c) - hh_l(x, c))
            checks.append(hh_l(x, c + dc) - hh_l(x, c))
        if m + 1 <= m_max:
            checks.append(hh_delta(c + dc) - hh_delta(c))
        for diff in checks:
            if not _exact(diff):
                raise ConsistencyError(f"induced operation is not well defined on classes (trial {t})")
        done += 1
    return done


def dims_of(space: GradedSpace) -> GradedDims:
    return GradedDims({d: n for d, n in space.dims.items() if n})
