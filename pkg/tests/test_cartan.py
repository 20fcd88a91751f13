import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from hochcalc.algebra import builtin
from hochcalc.calculus import check_calculus
from hochcalc.cartan import (
    Form,
    Polyvector,
    cartan_data,
    chkr,
    contract,
    de_rham,
    evaluate_on,
    hkr,
    kahler,
    kahler_basis,
    lie_derivative,
    pair,
    rinehart_action,
    rinehart_bracket,
    schouten,
    verify_hkr,
)
from hochcalc.hochschild import Chain, connes_B
from hochcalc.polydiff import (
    PolyDiff,
    as_cochain,
    pd_boundary,
    pd_bracket,
    pd_cup,
    pd_is_cocycle,
    poly_to_vector,
)

X0, Y0 = (0, 0), ()
pv = Polyvector.monomial
fm = Form.monomial


def test_schouten_examples():
    dx, x = pv((0,), (0,)), pv((1,))
    assert schouten(dx, x) == pv((0,))
    assert schouten(pv((0, 0), (0,)), pv((0, 0), (1,))).is_zero()
    assert schouten(pv((1,), (0,)), dx) == dx.scale(-1)


def test_contraction_and_pairing():
    # d_x contracted into x dy ^ dx
    e = fm((1, 0), (1, 0))
    assert contract(pv((0, 0), (0,)), e) == fm((1, 0), (1,)).scale(-1)
    # contraction removes d_y first, then d_x
    assert pair(pv((0, 0), (0, 1)), fm((0, 0), (0, 1))) == {(0, 0): -1}
    assert pair(pv((0, 0), (0,)), fm((0, 0), (0, 1))) == {}


def test_de_rham_squares_to_zero():
    e = fm((2, 1)) + fm((1, 1), (0,))
    assert de_rham(e) == fm((1, 1), (0,)).scale(2) + fm((2, 0), (1,)) + fm((1, 0), (1, 0))
    assert de_rham(de_rham(e)).is_zero()


def test_lie_derivative_examples():
    assert lie_derivative(pv((0, 0), (0,)), fm((1, 0), (1,))) == fm((0, 0), (1,))
    f = pv((2, 1))
    assert lie_derivative(f, fm((0, 0))) == de_rham(fm((2, 1)))


def _super_sp(e, syms):
    out = 0
    for (a, j), c in e.terms.items():
        out += sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**k for s, k in zip(syms, a)]) * sp.Symbol("J" + "".join(map(str, j)))
    return sp.expand(out)


def test_de_rham_matches_symbolic_exterior_derivative():
    x, y = sp.symbols("x y")
    f = Form.function({(3, 1): Fraction(2), (0, 2): Fraction(-1)})
    df = de_rham(f)
    want = {(0,): sp.diff(2 * x**3 * y - y**2, x), (1,): sp.diff(2 * x**3 * y - y**2, y)}
    for (j,), expr in want.items():
        got = sum(
            (sp.Rational(c.numerator, c.denominator) * x ** a[0] * y ** a[1] for (a, jj), c in df.terms.items() if jj == (j,)),
            sp.Integer(0),
        )
        assert sp.expand(got - expr) == 0


def test_rinehart_examples():
    one = pv((0,))
    x = pv((1,))
    w = kahler(one, x)  # dx
    # l_{dx}(d_x) = (-1)^{0+1} [x, d_x] = 1
    assert rinehart_action(w, pv((0,), (0,))) == one
    assert rinehart_bracket(w, w).is_zero()


def _jacobi(a, b, c):
    deg = lambda w: next(iter(w.degree_components()))  # noqa: E731
    A, B = deg(a), deg(b)
    br = rinehart_bracket
    lhs = br(a, br(b, c))
    rhs = br(br(a, b), c) + br(b, br(a, c)).scale((-1) ** (A * B))
    return lhs, rhs


def test_rinehart_bracket_antisymmetry_and_jacobi():
    basis = kahler_basis(1, 1)
    degs = [next(iter(w.degree_components())) for w in basis]
    for (a, da), (b, db) in itertools.product(zip(basis, degs), repeat=2):
        assert rinehart_bracket(a, b) == rinehart_bracket(b, a).scale(-((-1) ** (da * db)))
    for a, b, c in itertools.product(basis[:6], repeat=3):
        lhs, rhs = _jacobi(a, b, c)
        assert lhs == rhs


def test_rinehart_action_is_lie_module():
    basis = kahler_basis(1, 1)
    targets = [pv((1,), (0,)), pv((2,)), pv((0,), (0,))]
    for a, b in itertools.product(basis, repeat=2):
        A = next(iter(a.degree_components()))
        B = next(iter(b.degree_components()))
        for t in targets:
            lhs = rinehart_action(rinehart_bracket(a, b), t)
            rhs = rinehart_action(a, rinehart_action(b, t)) - rinehart_action(b, rinehart_action(a, t)).scale((-1) ** (A * B))
            assert lhs == rhs


def test_hkr_of_vector_field_is_derivation_cocycle():
    p = hkr(pv((2,), (0,)))
    assert p.arity == 1
    assert pd_is_cocycle(p)
    assert p.evaluate([{(3,): Fraction(1)}]) == {(4,): 3}


def test_hkr_bivector_is_antisymmetric_cocycle():
    p = hkr(pv((0, 0), (0, 1)))
    assert pd_is_cocycle(p)
    f, g = {(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}
    assert p.evaluate([f, g]) == {(0, 0): Fraction(-1, 2)}
    assert p.evaluate([g, f]) == {(0, 0): Fraction(1, 2)}


def _chain(alg, *monos, c=1):
    idx = [next(iter(poly_to_vector(alg, {m: 1}))) for m in monos]
    return Chain(alg, len(idx) - 1, {tuple(idx): Fraction(c)})


def test_chkr_examples():
    alg = builtin("graded_poly", 2, 4)
    c = _chain(alg, (1, 0), (1, 0), (0, 1))
    assert chkr(c) == fm((1, 0), (0, 1)).scale(Fraction(1, 2))
    c2 = _chain(alg, (0, 0), (0, 1), (1, 0))
    assert chkr(c2) == fm((0, 0), (0, 1)).scale(Fraction(-1, 2))
    assert chkr(_chain(alg, (2, 1))) == fm((2, 1))


def test_chkr_intertwines_connes_with_de_rham():
    alg = builtin("graded_poly", 2, 4)
    for monos in [((1, 0), (0, 1)), ((1, 1), (1, 0)), ((0, 2), (1, 0), (0, 1)), ((2, 0),)]:
        c = _chain(alg, *monos)
        assert chkr(connes_B(c)) == de_rham(chkr(c))


def test_chkr_kills_boundaries():
    from hochcalc.hochschild import chain_boundary

    alg = builtin("graded_poly", 1, 5)
    c = _chain(alg, (1,), (2,), (1,))
    assert chkr(chain_boundary(c)).is_zero()


def test_hkr_pairs_with_chkr():
    alg = builtin("graded_poly", 2, 4)
    g = pv((1, 0), (0, 1))
    c = _chain(alg, (0, 1), (1, 0), (0, 1))
    assert evaluate_on(c, hkr(g)) == pair(g, chkr(c))


@pytest.mark.parametrize("n,deg,arity", [(1, 3, 3), (2, 2, 2)])
def test_verify_hkr(n, deg, arity):
    rep = verify_hkr(n, deg, arity)
    assert rep.ok, rep.failures[:3]
    assert all(s.match for s in rep.slices)


@pytest.mark.parametrize("n,deg", [(1, 4), (2, 3), (3, 2)])
def test_polyvector_calculus(n, deg):
    assert check_calculus(cartan_data(n, deg)).ok


# ------------------------------------------------------------ polydifferential oracles

multis1 = st.tuples(st.integers(0, 2))
symbols1 = st.tuples(st.integers(1, 2))


@st.composite
def polydiffs(draw, arity):
    terms = draw(
        st.dictionaries(
            st.tuples(multis1, st.tuples(*[symbols1] * arity)),
            st.integers(-3, 3).map(Fraction),
            min_size=1,
            max_size=3,
        )
    )
    return PolyDiff(1, arity, terms)


def _sympy_eval(p: PolyDiff, fs):
    x = sp.Symbol("x")
    out = 0
    for (a0, syms), c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator) * x ** a0[0]
        for s, f in zip(syms, fs):
            term *= sp.diff(f, x, s[0])
        out += term
    return sp.Poly(sp.expand(out), x) if out != 0 else None


def _as_poly(f):
    x = sp.Symbol("x")
    return sum((sp.Rational(c.numerator, c.denominator) * x ** a[0] for a, c in f.items()), sp.Integer(0))


@given(polydiffs(2), st.lists(st.dictionaries(multis1, st.integers(-2, 2).map(Fraction), max_size=3), min_size=2, max_size=2))
def test_polydiff_evaluation_matches_symbolic(p, args):
    fs = [_as_poly(f) for f in args]
    got = _as_poly(p.evaluate(args))
    want = _sympy_eval(p, fs)
    assert sp.expand(got - (want.as_expr() if want is not None else 0)) == 0


@given(polydiffs(1), st.integers(0, 3), st.integers(0, 3))
def test_pd_boundary_matches_symbolic_differential(p, i, j):
    x = sp.Symbol("x")
    f, g = x**i, x**j
    ev = lambda h: _sympy_eval(p, [h])  # noqa: E731
    val = lambda r: r.as_expr() if r is not None else 0  # noqa: E731
    want = sp.expand(f * val(ev(g)) - val(ev(f * g)) + val(ev(f)) * g)
    got = _as_poly(pd_boundary(p).evaluate([{(i,): Fraction(1)}, {(j,): Fraction(1)}]))
    assert sp.expand(got - want) == 0


def test_as_cochain_agrees_with_evaluation():
    alg = builtin("graded_poly", 1, 6)
    p = PolyDiff(1, 2, {((1,), ((1,), (2,))): Fraction(3)})
    raw = as_cochain(p, alg)
    # 3 * x * d(x^2) * d^2(x^3) = 3 * x * 2x * 6x
    assert raw.value((2, 3)) == poly_to_vector(alg, {(3,): Fraction(36)})
    assert raw.value((0, 3)) == {}


@given(polydiffs(1), polydiffs(1))
def test_cup_and_bracket_of_polydiffs_agree_with_evaluation(p, q):
    f, g = {(1,): Fraction(1)}, {(2,): Fraction(1)}
    cup = pd_cup(p, q).evaluate([f, g])
    from hochcalc.polydiff import poly_mul

    assert cup == poly_mul(p.evaluate([f]), q.evaluate([g]))
    br = pd_bracket(p, q).evaluate([g])
    want = {}
    for k, c in p.evaluate([q.evaluate([g])]).items():
        want[k] = want.get(k, 0) + c
    for k, c in q.evaluate([p.evaluate([g])]).items():
        want[k] = want.get(k, 0) - c
    assert br == {k: c for k, c in want.items() if c}
