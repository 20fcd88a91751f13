"""Verification suites behind the command line.

Each suite returns a :class:`SuiteResult`: a list of named checks with a
pass/fail status and an optional witness, plus structured details.  Nothing
here records wall-clock time, so equal inputs give equal results.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import cartan, envelope, ksoperad, opdims
from . import hochschild as h
from .algebra import AlgebraSpec, load_algebra
from .calculus import check_calculus, check_lie_plus_delta, induce_on_homology
from .errors import InputError
from .exactlin import composite_witness
from .signs import sign_rule

FIXTURES = ("dual_numbers", "matrix(2)", "truncated_poly(1,3)", "group_algebra_Z2")
HOMOTOPY_FIXTURES = ("dual_numbers", "truncated_poly(1,3)")


@dataclass
class Check:
    id: str
    ok: bool
    checked: int = 1
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "status": "pass" if self.ok else "fail", "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, check_id: str, ok: bool, checked: int = 1, witness: dict | None = None) -> None:
        self.checks.append(Check(check_id, ok, checked, witness))

    def tally(self, check_id: str) -> "_Tally":
        return _Tally(self, check_id)

    def summary(self) -> dict:
        failed = sum(not c.ok for c in self.checks)
        return {
            "checks": len(self.checks),
            "passed": len(self.checks) - failed,
            "failed": failed,
            "status": "pass" if failed == 0 else "fail",
        }


class _Tally:
    """Accumulates many instances of one identity into a single check."""

    def __init__(self, result: SuiteResult, check_id: str):
        self.result, self.id = result, check_id
        self.count, self.witness = 0, None

    def __enter__(self) -> "_Tally":
        return self

    def record(self, ok: bool, **info) -> None:
        self.count += 1
        if not ok and self.witness is None:
            self.witness = info

    def __exit__(self, *exc) -> None:
        if exc[0] is None and self.count:
            self.result.add(self.id, self.witness is None, self.count, self.witness)


def algebras(source: str | None, default: Sequence[str] = FIXTURES) -> list[tuple[str, AlgebraSpec]]:
    names = [source] if source else list(default)
    return [(name, load_algebra(name)) for name in names]


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


# ------------------------------------------------------------ identities


def _matrix_sum_is_zero(cols_a, cols_b) -> int | None:
    for j, (u, v) in enumerate(zip(cols_a, cols_b)):
        s = dict(u)
        for key, c in v.items():
            s[key] = s.get(key, 0) + c
        if any(s.values()):
            return j
    return None


def _differential_laws(res: SuiteResult, name: str, alg: AlgebraSpec, max_arity: int, max_chain: int) -> None:
    for k in range(max_arity + 1):
        bad = composite_witness(h.cochain_differential_matrix(alg, k + 1), h.cochain_differential_matrix(alg, k))
        res.add(f"{name}/d2-cochain/{k}", bad is None, h.cochain_dim(alg, k), None if bad is None else {"basis_index": bad})
    for m in range(2, max_chain + 1):
        bad = composite_witness(h.chain_differential_matrix(alg, m - 1), h.chain_differential_matrix(alg, m))
        res.add(f"{name}/d2-chain/{m}", bad is None, h.chain_dim(alg, m), None if bad is None else {"basis_index": bad})
    for m in range(max_chain + 1):
        bad = composite_witness(h.connes_matrix(alg, m + 1), h.connes_matrix(alg, m))
        res.add(f"{name}/B2/{m}", bad is None, h.chain_dim(alg, m), None if bad is None else {"basis_index": bad})
        # b B + B b on C_m, landing in C_m
        bb = h.chain_differential_matrix(alg, m + 1).matmul(h.connes_matrix(alg, m))
        if m > 0:
            bb2 = h.connes_matrix(alg, m - 1).matmul(h.chain_differential_matrix(alg, m))
            bad = _matrix_sum_is_zero(bb.columns(), bb2.columns())
        else:
            bad = next((j for j, col in enumerate(bb.columns()) if col), None)
        res.add(f"{name}/bB+Bb/{m}", bad is None, h.chain_dim(alg, m), None if bad is None else {"basis_index": bad})


def _matrix_matches_operator(res: SuiteResult, name: str, alg: AlgebraSpec, max_arity: int, rng: random.Random) -> None:
    with res.tally(f"{name}/cochain-matrix-vs-formula") as t:
        for k in range(min(max_arity, 3) + 1):
            p = h.random_cochain(alg, k, rng)
            direct = h.cochain_to_vector(h.cochain_boundary(p))
            via = h.cochain_differential_matrix(alg, k).matvec(h.cochain_to_vector(p))
            t.record(direct == via, arity=k)


def _strict_identities(res: SuiteResult, name: str, alg: AlgebraSpec, max_arity: int, max_chain: int, samples: int, rng: random.Random) -> None:
    rc = lambda k: h.random_cochain(alg, k, rng)  # noqa: E731
    rch = lambda m: h.random_chain(alg, m, rng, terms=4)  # noqa: E731
    cb, br, cup = h.cochain_boundary, h.gerstenhaber_bracket, h.cup
    L, I, B, b = h.lie_derive_L, h.contract_I, h.connes_B, h.chain_boundary
    mu = h.multiplication(alg)
    pairs = [(p, q) for p in range(1, max_arity + 1) for q in range(1, max_arity + 1)]

    with res.tally(f"{name}/cup-leibniz") as t:
        for p, q in pairs:
            if p + q + 1 > max_arity:
                continue
            for _ in range(samples):
                P, Q = rc(p), rc(q)
                s = sign_rule("cup_leibniz", p=p, q=q)
                t.record(cb(cup(P, Q)) == cup(cb(P), Q) + cup(P, cb(Q)).scale(s), p=p, q=q)
    with res.tally(f"{name}/bracket-derivation") as t:
        for p, q in pairs:
            if p + q > max_arity:
                continue
            for _ in range(samples):
                P, Q = rc(p), rc(q)
                s = sign_rule("bracket_derivation", p=p, q=q)
                t.record(cb(br(P, Q)) == br(cb(P), Q).scale(s) + br(P, cb(Q)), p=p, q=q)
    with res.tally(f"{name}/differential-vs-mu") as t:
        for p in range(max_arity):
            for _ in range(samples):
                P = rc(p)
                s = sign_rule("differential_vs_mu", p=p)
                t.record(cb(P) == br(mu, P, allow_arity0=True).scale(s), p=p)
    with res.tally(f"{name}/contraction-chain-map") as t:
        for p in range(max_arity + 1):
            for m in range(p, max_chain + 1):
                for _ in range(samples):
                    P, c = rc(p), rch(m)
                    s = sign_rule("contraction_chain_map", p=p)
                    t.record(b(I(P, c)) - I(P, b(c)).scale(_sgn(p)) == I(cb(P), c).scale(s), p=p, m=m)
    # the Lie-plus-delta laws
    with res.tally(f"{name}/jacobi") as t:
        for p, q, r in itertools.product(range(1, max_arity + 1), repeat=3):
            if p + q + r - 2 > max_arity:
                continue
            for _ in range(samples):
                P, Q, R = rc(p), rc(q), rc(r)
                s = sign_rule("lie_commutator", p=p, q=q)
                t.record(br(P, br(Q, R)) == br(br(P, Q), R) + br(Q, br(P, R)).scale(s), p=p, q=q, r=r)
    with res.tally(f"{name}/lie-commutator") as t:
        for p, q in pairs:
            if p + q - 1 > max_arity:
                continue
            for m in range(p + q - 2, max_chain + 1):
                for _ in range(samples):
                    P, Q, c = rc(p), rc(q), rch(m)
                    s = sign_rule("lie_commutator", p=p, q=q)
                    t.record(L(P, L(Q, c)) - L(Q, L(P, c)).scale(s) == L(br(P, Q), c), p=p, q=q, m=m)
    with res.tally(f"{name}/connes-lie-commute") as t:
        for q in range(1, max_arity + 1):
            for m in range(max(q - 1, 0), max_chain):
                for _ in range(samples):
                    Q, c = rc(q), rch(m)
                    s = sign_rule("connes_lie_commute", q=q)
                    t.record(B(L(Q, c)) == L(Q, B(c)).scale(s), q=q, m=m)


def identities_suite(algebra: str | None, max_arity: int, max_chain: int, samples: int, seed: int) -> SuiteResult:
    """Differential laws on every basis (co)chain and the strict
    identities on seeded random cochains."""
    res = SuiteResult("identities")
    rng = random.Random(seed)
    for name, alg in algebras(algebra):
        _differential_laws(res, name, alg, max_arity, max_chain)
        _matrix_matches_operator(res, name, alg, max_arity, rng)
        _strict_identities(res, name, alg, max_arity, max_chain, samples, rng)
    return res


# ------------------------------------------------------------ cohomology


def cohomology_suite(algebra: str | None, max_arity: int, max_chain: int) -> SuiteResult:
    res = SuiteResult("cohomology")
    for name, alg in algebras(algebra):
        co = h.cohomology(alg, max_arity)
        ch = h.homology(alg, max_chain)
        res.details[name] = {
            "HH^": {str(k): co[k] for k in range(max_arity + 1)},
            "HH_": {str(-m): ch[m] for m in range(max_chain + 1)},
        }
        with res.tally(f"{name}/cocycle-representatives") as t:
            for k, reps in co.reps.items():
                for i, z in enumerate(reps):
                    t.record(h.cochain_boundary(z).is_zero() and h.exactness_witness(z) is None, degree=k, index=i)
        with res.tally(f"{name}/cycle-representatives") as t:
            for m, reps in ch.reps.items():
                for i, z in enumerate(reps):
                    t.record(h.chain_boundary(z).is_zero() and h.exactness_witness(z) is None, degree=-m, index=i)
    return res


# ------------------------------------------------------------ calculus


def random_cocycle(alg: AlgebraSpec, reps: dict, k: int, rng: random.Random) -> h.Cochain:
    z = h.Cochain.zero(alg, k)
    for r in reps.get(k, []):
        z = z + r.scale(Fraction(rng.randint(-2, 2)))
    if k > 0:
        z = z + h.cochain_boundary(h.random_cochain(alg, k - 1, rng))
    return z


def random_cycle(alg: AlgebraSpec, reps: dict, m: int, rng: random.Random) -> h.Chain:
    z = h.Chain.zero(alg, m)
    for r in reps.get(m, []):
        z = z + r.scale(Fraction(rng.randint(-2, 2)))
    return z + h.chain_boundary(h.random_chain(alg, m + 1, rng))


def homotopy_defects(
    res: SuiteResult, name: str, alg: AlgebraSpec, total: int, samples: int, rng: random.Random
) -> dict:
    """Cup-commutator and Cartan-homotopy defects must be exact; every witness
    is checked by substitution.  Returns how often the unit-coefficient
    variant of the Cartan defect is exact, for the record."""
    co = h.cohomology(alg, total)
    chs = h.homology(alg, total + 1)
    with res.tally(f"{name}/cup-commutator-exact") as t:
        for p in range(total + 1):
            for q in range(total + 1 - p):
                for _ in range(samples):
                    P, Q = random_cocycle(alg, co.reps, p, rng), random_cocycle(alg, co.reps, q, rng)
                    x = h.cup(P, Q) - h.cup(Q, P).scale(sign_rule("cup_commutator", p=p, q=q))
                    w = h.exactness_witness(x)
                    t.record(x.is_zero() or (w is not None and h.cochain_boundary(w) == x), p=p, q=q)
    unit_sign = {"exact": 0, "not_exact": 0}
    with res.tally(f"{name}/cartan-homotopy-exact") as t:
        for p in range(total + 1):
            for m in range(max(p - 1, 0), total + 1):
                for _ in range(samples):
                    P, c = random_cocycle(alg, co.reps, p, rng), random_cycle(alg, chs.reps, m, rng)
                    core = h.contract_I(P, h.connes_B(c)).scale(-_sgn(p))
                    if m >= p:
                        core = core + h.connes_B(h.contract_I(P, c))
                    lp = h.lie_derive_L(P, c, allow_arity0=True)
                    x = core - lp.scale(sign_rule("cartan_homotopy", p=p))
                    w = h.exactness_witness(x)
                    t.record(w is not None and h.chain_boundary(w) == x, p=p, m=m)
                    unit_sign["exact" if h.exactness_witness(core - lp) is not None else "not_exact"] += 1
    return unit_sign


def calculus_suite(algebra: str | None, max_degree: int | None, samples: int, seed: int) -> SuiteResult:
    res = SuiteResult("calculus")
    rng = random.Random(seed)
    defaults = {"dual_numbers": 4, "matrix(2)": 3, "truncated_poly(1,3)": 3, "group_algebra_Z2": 3}
    for name, alg in algebras(algebra, tuple(defaults)):
        k_max = max_degree if max_degree is not None else defaults.get(name, 3)
        induced = induce_on_homology(alg, k_max, seed=seed)
        rep = check_calculus(induced.data)
        for r in rep.results:
            res.add(f"{name}/calc/{r.axiom_id}", r.status == "pass", r.checked, r.witness)
        lie = check_lie_plus_delta(induced.data)
        res.add(f"{name}/lie-plus-delta", lie.ok, len(lie.results), None if lie.ok else {"failed": lie.failed()})
        res.add(f"{name}/well-defined-on-classes", True, induced.spot_checks)
        res.details[name] = {"degrees": k_max, "cohomology_dims": {str(k): n for k, n in induced.data.v.dims.items()}}
        if algebra is not None or name in HOMOTOPY_FIXTURES:
            total = min(k_max, 4)
            res.details[name]["cartan_defect_with_unit_coefficient"] = homotopy_defects(res, name, alg, total, samples, rng)
    return res


# ------------------------------------------------------------ hkr


def hkr_suite(n: int, max_degree: int, max_arity: int, max_order: int | None) -> SuiteResult:
    res = SuiteResult("hkr")
    rep = cartan.verify_hkr(n, max_degree, max_arity, max_order)
    for key, ok in sorted(rep.checks.items()):
        wit = next((f for f in rep.failures if f.get("check") == key), None)
        res.add(key, ok, witness=wit)
    for s in rep.slices:
        res.add(
            f"slice/{s.kind}/d{s.degree}/k{s.arity}",
            s.match,
            witness=None if s.match else {"hh_dim": s.hh_dim, "v_dim": s.v_dim},
        )
    if rep.failures:
        res.add("no-failures", False, witness=rep.failures[0])
    res.details = {"n": n, "bounds": rep.bounds, "slices": [s.to_json() for s in rep.slices]}
    return res


# ------------------------------------------------------------ envelope


def envelope_suite(n: int, max_k: int, max_weight: int, form_degree: int) -> SuiteResult:
    res = SuiteResult("envelope")
    for nn in range(1, n + 1):
        rel = envelope.check_relations(nn, form_degree=form_degree)
        for rid, count in sorted(rel.checked.items()):
            fail = next((f for f in rel.failures if f.get("relation") == rid), None)
            res.add(f"n{nn}/relation/{rid}", fail is None, count, fail)
        if rel.failures and not any(f.get("relation") in rel.checked for f in rel.failures):
            res.add(f"n{nn}/relations", False, witness=rel.failures[0])
        slices = []
        for k in range(max_k + 1):
            for w in range(-max_weight, max_weight + 1):
                s = envelope.graded_dims(nn, k, w)
                slices.append(s.to_json())
                res.add(f"n{nn}/pbw/k{k}/w{w}", s.match, witness=None if s.match else s.to_json())
        res.details[f"n{nn}"] = {"pbw": slices}
    inj = envelope.injectivity_rank(1, 2, 2)
    res.add("n1/map-r-injective", inj.full_rank, inj.domain_dim, None if inj.full_rank else inj.to_json())
    res.details["injectivity"] = inj.to_json()
    return res


# ------------------------------------------------------------ ks operad


PRIMER_EXPECTED = {
    ksoperad.PRIMER_TREE: "Q(a1,a2,1) P",
    ksoperad.PRIMER_FOREST: "(P a3, Q(a0,1,a1), 1, a2)",
}


def ks_suite(slots: int, max_edges: int, max_marked: int, algebra: str | None, seed: int) -> SuiteResult:
    res = SuiteResult("ks")
    reports = []
    for kind, ks, size in (("tree", range(1, slots + 1), max_edges), ("forest", range(0, slots + 1), max_marked)):
        for k in ks:
            rep = ksoperad.enumerate_check(kind, k, size)
            reports.append(rep.to_json())
            wit = rep.violations[0] if rep.violations else {"cell": rep.witness, "degree": rep.min_degree}
            res.add(f"{kind}/k{k}/degree-bound", rep.ok, rep.nondegenerate, wit)
    for literal, expected in PRIMER_EXPECTED.items():
        got = ksoperad.symbolic(ksoperad.parse_cell(literal))
        res.add(f"primer/{literal}", got == expected, witness={"rendered": got, "expected": expected})
    rng = random.Random(seed)
    for name, alg in algebras(algebra, ("dual_numbers", "matrix(2)")):
        gen = ksoperad.check_generators(alg, 2, 3, rng)
        res.add(f"{name}/generators", gen.ok, sum(gen.checked.values()), gen.failures[0] if gen.failures else None)
    res.details = {"enumeration": reports}
    return res


# ------------------------------------------------------------ operad dimensions


def dims_suite(n_max: int, weight: int) -> SuiteResult:
    res = SuiteResult("dims")
    p = opdims.PoincarePoly
    res.add("a(1,1)", opdims.calc_component_poly("a(n,1)", 1) == p.from_list([1, 2, 1]))
    with res.tally("recursion-factor") as t:
        for kind in ("a(n,1)", "c(n,0)"):
            for n in range(2 if kind == "c(n,0)" else 1, n_max + 1):
                q = opdims.calc_component_poly(kind, n).divide(opdims.calc_component_poly(kind, n - 1))
                want = p.of({0: 1, 1: n if kind == "a(n,1)" else n - 1})
                t.record(q == want, kind=kind, n=n)
    with res.tally("lie-dim-vs-bracket-monomials") as t:
        for n in range(1, min(n_max, 5) + 1):
            t.record(opdims.lie_dim(n) == opdims.bracket_monomial_rank(n), n=n)
    with res.tally("multilinear-vs-product-formula") as t:
        for n in range(1, min(n_max, 5) + 1):
            t.record(opdims.multilinear_poly("a(n,1)", n) == opdims.calc_component_poly("a(n,1)", n), kind="a(n,1)", n=n)
            t.record(opdims.multilinear_poly("c(n,0)", n) == opdims.calc_component_poly("c(n,0)", n), kind="c(n,0)", n=n)
    with res.tally("free-calc-vs-brute-force") as t:
        for v, w in (((0,), (0,)), ((1,), (0,)), ((2,), (1,))):
            want = opdims.brute_force_calc_dims(v, w, weight)
            vd = {d: v.count(d) for d in set(v)}
            wd = {d: w.count(d) for d in set(w)}
            got = opdims.free_functor_dims("calc", vd, wd, weight)
            got_c = {k: n for k, n in got.c.items() if k[1] <= weight}
            got_a = {k: n for k, n in got.a.items() if k[1] <= weight}
            t.record(got_c == want.c and got_a == want.a, v=list(v), w=list(w))
    res.details = {
        kind: opdims.component_table(kind, n_max) for kind in ("a(n,1)", "c(n,0)")
    }
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "identities": identities_suite,
    "cohomology": cohomology_suite,
    "calculus": calculus_suite,
    "hkr": hkr_suite,
    "envelope": envelope_suite,
    "ks": ks_suite,
    "dims": dims_suite,
}


def require_positive(**bounds: int | None) -> None:
    for key, value in bounds.items():
        if value is not None and value < 0:
            raise InputError(f"bound {key} must be nonnegative")
