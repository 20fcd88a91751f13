import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from hochcalc import hochschild as h
from hochcalc.algebra import AlgebraSpec, builtin
from hochcalc.errors import BoundError, InputError, ParseError
from hochcalc.signs import sign_rule

seeds = st.integers(0, 10**6)


def upper_triangular() -> AlgebraSpec:
    # basis e11, e12, e22; unit e11 + e22 is not a basis vector
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}
    return AlgebraSpec(["e11", "e12", "e22"], {0: 1, 2: 1}, table, name="upper_triangular")


SMALL = ["dual_numbers", "truncated_poly(1,2)", "group_algebra_Z2", "upper"]


def small_algebra(name: str) -> AlgebraSpec:
    return upper_triangular() if name == "upper" else builtin(name)


def shift_derivation(alg, j: int):
    """x^(j+1) d/dx on K[x]/(x^n): x^k -> k x^(k+j); it preserves the ideal for j >= 0."""
    n = alg.dim

    def fn(t):
        k = t[0]
        if k == 0 or k + j >= n:
            return {}
        return {k + j: Fraction(k)}

    return h.RawCochain(alg, 1, fn, f"D{j}")


# ---------------------------------------------------------------- examples


def test_boundary_of_identity_is_multiplication(mat2):
    assert h.cochain_boundary(h.identity_map(mat2)) == h.multiplication(mat2).restrict()


def test_boundary_of_unit_vanishes(mat2):
    assert h.cochain_boundary(h.Cochain.element(mat2, mat2.unit)).is_zero()


def test_derivation_is_a_cocycle(cubic):
    for j in range(2):
        assert h.cochain_boundary(shift_derivation(cubic, j)).is_zero()


def test_chain_boundary_examples(mat2, dual):
    e11, e12 = mat2.index_of("e11"), mat2.index_of("e12")
    c = h.Chain.from_elements(mat2, [{e11: 1}, {e12: 1}])
    assert h.chain_boundary(c) == h.Chain(mat2, 0, {(e12,): 1})
    assert h.chain_boundary(h.Chain(dual, 1, {(1, 1): 1})).is_zero()
    assert h.chain_boundary(h.Chain(dual, 0, {(1,): 1})).is_zero()


def test_cup_examples(mat2, rng):
    a, b = h.Cochain.element(mat2, {0: 1}), h.Cochain.element(mat2, {1: 1})
    assert h.cup(a, b) == h.Cochain.element(mat2, mat2.mul({0: 1}, {1: 1}))
    q = h.random_cochain(mat2, 2, rng)
    left = h.cup(b, q)
    for t, v in left.values.items():
        assert v == mat2.mul({1: 1}, q.value(t))


def test_bracket_of_derivations_is_commutator():
    alg = builtin("truncated_poly(1,4)")
    d0, d1 = shift_derivation(alg, 0), shift_derivation(alg, 1)
    got = h.gerstenhaber_bracket(d0.restrict(), d1.restrict())
    assert got == h.compose_at(d0, d1, 0) - h.compose_at(d1, d0, 0)
    # [D_0, D_1] = D_1 for the shift derivations
    assert got == d1.restrict()


def test_bracket_mu_mu_and_mu_derivation(mat2, cubic):
    mu = h.multiplication(mat2)
    assert h.gerstenhaber_bracket(mu, mu).is_zero()
    assert h.gerstenhaber_bracket(h.multiplication(cubic), shift_derivation(cubic, 1)).is_zero()


def test_bracket_needs_flag_for_arity_zero(dual):
    with pytest.raises(InputError):
        h.gerstenhaber_bracket(h.Cochain.element(dual, {1: 1}), h.identity_map(dual).restrict())


def test_contraction_examples(dual, mat2, rng):
    p2 = h.random_cochain(dual, 2, rng)
    assert h.contract_I(p2, h.Chain(dual, 1, {(0, 1): 1})).is_zero()
    c = h.random_chain(mat2, 2, rng)
    p = {1: Fraction(1)}
    got = h.contract_I(h.Cochain.element(mat2, p), c)
    want = h.Chain.zero(mat2, 2)
    for t, x in c.terms.items():
        want = want + h.Chain.from_elements(mat2, [mat2.mul({t[0]: 1}, p)] + [{i: 1} for i in t[1:]], x)
    assert got == want
    a0, a1 = mat2.index_of("e12"), mat2.index_of("e21")
    assert h.contract_I(h.identity_map(mat2), h.Chain(mat2, 1, {(a0, a1): 1})) == h.Chain(mat2, 0, {(mat2.index_of("e11"),): 1})


def test_lie_derivative_examples(cubic, mat2, rng):
    d = shift_derivation(cubic, 0)
    c = h.random_chain(cubic, 2, rng)
    want = h.Chain.zero(cubic, 2)
    for t, x in c.terms.items():
        for i in range(3):
            args = [{j: 1} for j in t]
            args[i] = d.value((t[i],))
            want = want + h.Chain.from_elements(cubic, args, x)
    assert h.lie_derive_L(d, c) == want
    q = h.random_cochain(mat2, 1, rng)
    assert h.lie_derive_L(q, h.Chain(mat2, 0, {(2,): 1})) == h.Chain(mat2, 0, {(k,): v for k, v in q.evaluate([{2: 1}]).items()})
    c3 = h.random_chain(mat2, 3, rng)
    assert h.lie_derive_L(h.multiplication(mat2), c3) == h.chain_boundary(c3)


def test_connes_examples(mat2):
    one = mat2.unit
    c0 = h.Chain(mat2, 0, {(1,): 1})
    assert h.connes_B(c0) == h.Chain.from_elements(mat2, [one, {1: 1}])
    c1 = h.Chain(mat2, 1, {(1, 2): 1})
    want = h.Chain.from_elements(mat2, [one, {1: 1}, {2: 1}]) - h.Chain.from_elements(mat2, [one, {2: 1}, {1: 1}])
    assert h.connes_B(c1) == want
    assert h.connes_B(h.connes_B(c1)).is_zero()


# ---------------------------------------------------------------- (co)homology


def dense_dims(alg, k_max, cochains=True):
    import sympy

    dims = []
    for k in range(k_max + 1):
        if cochains:
            d_out = h.cochain_differential_matrix(alg, k)
            d_in = h.cochain_differential_matrix(alg, k - 1) if k else None
        else:
            d_out = h.chain_differential_matrix(alg, k)
            d_in = h.chain_differential_matrix(alg, k + 1)
        r_out = sympy.Matrix(d_out.to_dense()).rank() if d_out.rows else 0
        r_in = sympy.Matrix(d_in.to_dense()).rank() if d_in is not None and d_in.cols else 0
        dims.append(d_out.cols - r_out - r_in)
    return dims


def test_matrix_cohomology_and_homology(mat2):
    assert h.cohomology(mat2, 3).dims.as_list(0, 3) == [1, 0, 0, 0]
    assert h.homology(mat2, 3).dims.as_list(0, 3) == [1, 0, 0, 0]


def test_ground_field_is_concentrated_in_degree_zero():
    k = builtin("K")
    assert h.cohomology(k, 3).dims.as_list(0, 3) == [1, 0, 0, 0]
    assert h.homology(k, 3).dims.as_list(0, 3) == [1, 0, 0, 0]


def test_dual_numbers_agree_with_dense_oracle(dual):
    assert h.cohomology(dual, 3).dims.as_list(0, 3) == dense_dims(dual, 3)
    assert h.homology(dual, 3).dims.as_list(0, 3) == dense_dims(dual, 3, cochains=False)


@pytest.mark.parametrize("name", ["truncated_poly(1,2)", "group_algebra_Z2"])
def test_more_dims_against_dense_oracle(name):
    alg = builtin(name)
    assert h.cohomology(alg, 3).dims.as_list(0, 3) == dense_dims(alg, 3)
    assert h.homology(alg, 3).dims.as_list(0, 3) == dense_dims(alg, 3, cochains=False)


def test_representatives_are_cocycles(cubic):
    co = h.cohomology(cubic, 3)
    for k, reps in co.reps.items():
        for z in reps:
            assert h.cochain_boundary(z).is_zero()
            assert h.exactness_witness(z) is None


def test_degreewise_algebras_need_slices():
    with pytest.raises(BoundError):
        h.cohomology(builtin("graded_poly(1,3)"), 2)


def test_exactness_witness_examples(dual, rng):
    co = h.cohomology(dual, 3)
    p1, p2 = co.reps[1][0], co.reps[2][0]
    x = h.cup(p1, p2) - h.cup(p2, p1).scale(sign_rule("cup_commutator", p=1, q=2))
    w = h.exactness_witness(x)
    assert w is not None and h.cochain_boundary(w) == x
    assert h.exactness_witness(p2) is None
    assert h.exactness_witness(h.Cochain.zero(dual, 2)).is_zero()
    assert h.exactness_witness(h.Chain.zero(dual, 1)).is_zero()


# ---------------------------------------------------------------- oracle agreement


@pytest.mark.parametrize("name", SMALL)
@given(seed=seeds)
def test_cochain_operations_match_oracle(name, seed):
    alg = small_algebra(name)
    rng = random.Random(seed)
    p, q = rng.randint(0, 2), rng.randint(1, 2)
    P, Q = h.random_cochain(alg, p, rng), h.random_cochain(alg, q, rng)
    assert h.cochain_boundary(P) == oracle.boundary(P)
    assert h.cup(P, Q) == oracle.cup(P, Q)
    if p >= 1:
        assert h.gerstenhaber_bracket(P, Q) == oracle.bracket(P, Q)


@pytest.mark.parametrize("name", SMALL)
@given(seed=seeds)
def test_chain_operations_match_oracle(name, seed):
    alg = small_algebra(name)
    rng = random.Random(seed)
    m = rng.randint(0, 3)
    c = h.random_chain(alg, m, rng)
    assert h.chain_boundary(c) == oracle.chain_b(c)
    assert h.connes_B(c) == oracle.chain_B(c)
    k = rng.randint(0, m)
    P = h.random_cochain(alg, k, rng)
    assert h.contract_I(P, c) == oracle.chain_I(P, c)
    q = rng.randint(1, m + 1)
    Q = h.random_cochain(alg, q, rng)
    assert h.lie_derive_L(Q, c) == oracle.chain_L(Q, c)


def test_raw_multiplication_matches_oracle():
    alg = upper_triangular()
    c = h.Chain(alg, 2, {(0, 1, 2): 1, (2, 1, 1): 3})
    assert h.lie_derive_L(h.multiplication(alg), c) == oracle.chain_L(h.multiplication(alg), c)


# ---------------------------------------------------------------- invariants


@pytest.mark.parametrize("name", ["dual_numbers", "matrix(2)", "group_algebra_Z2"])
@given(seed=seeds)
def test_square_zero_laws(name, seed):
    alg = builtin(name)
    rng = random.Random(seed)
    k = rng.randint(0, 3)
    P = h.random_cochain(alg, k, rng)
    assert h.cochain_boundary(h.cochain_boundary(P)).is_zero()
    c = h.random_chain(alg, rng.randint(0, 3), rng)
    b, B = h.chain_boundary, h.connes_B
    if c.length >= 2:
        assert b(b(c)).is_zero()
    assert B(B(c)).is_zero()
    if c.length >= 1:
        assert (b(B(c)) + B(b(c))).is_zero()
    else:
        assert b(B(c)).is_zero()


@given(seed=seeds)
def test_leibniz_and_bracket_derivation(seed):
    alg = builtin("matrix(2)")
    rng = random.Random(seed)
    p, q = rng.randint(1, 2), rng.randint(1, 2)
    P, Q = h.random_cochain(alg, p, rng), h.random_cochain(alg, q, rng)
    d = h.cochain_boundary
    assert d(h.cup(P, Q)) == h.cup(d(P), Q) + h.cup(P, d(Q)).scale(sign_rule("cup_leibniz", p=p, q=q))
    br = h.gerstenhaber_bracket
    assert d(br(P, Q)) == br(d(P), Q).scale(sign_rule("bracket_derivation", p=p, q=q)) + br(P, d(Q))


@given(seed=seeds)
def test_lie_derivatives_represent_the_bracket(seed):
    alg = builtin("matrix(2)")
    rng = random.Random(seed)
    p, q = rng.randint(1, 2), rng.randint(1, 2)
    P, Q = h.random_cochain(alg, p, rng), h.random_cochain(alg, q, rng)
    c = h.random_chain(alg, p + q, rng)
    L = h.lie_derive_L
    s = sign_rule("lie_commutator", p=p, q=q)
    assert L(P, L(Q, c)) - L(Q, L(P, c)).scale(s) == L(h.gerstenhaber_bracket(P, Q), c)
    assert h.connes_B(L(Q, c)) == L(Q, h.connes_B(c)).scale(sign_rule("connes_lie_commute", q=q))


@given(seed=seeds)
def test_contraction_is_a_chain_map_up_to_sign(seed):
    alg = builtin("matrix(2)")
    rng = random.Random(seed)
    p = rng.randint(0, 2)
    P, c = h.random_cochain(alg, p, rng), h.random_chain(alg, p + rng.randint(1, 2), rng)
    b, I = h.chain_boundary, h.contract_I
    lhs = b(I(P, c)) - I(P, b(c)).scale(-1 if p % 2 else 1)
    assert lhs == I(h.cochain_boundary(P), c).scale(sign_rule("contraction_chain_map", p=p))


def test_unit_sign_in_contraction_law_fails_for_even_arity(mat2, rng):
    """With coefficient +1 on I_(dP) the chain-map law breaks at even arity."""
    P, c = h.random_cochain(mat2, 2, rng, terms=6), h.random_chain(mat2, 4, rng, terms=8)
    b, I = h.chain_boundary, h.contract_I
    defect = b(I(P, c)) - I(P, b(c)) - I(h.cochain_boundary(P), c)
    assert not defect.is_zero()


@given(seed=seeds)
def test_cartan_homotopy_defect_is_exact(seed):
    alg = builtin("truncated_poly(1,2)")
    rng = random.Random(seed)
    co, ch = h.cohomology(alg, 2), h.homology(alg, 3)
    p = rng.randint(0, 2)
    m = rng.randint(max(p, 1), 3)
    P = sum((z.scale(rng.randint(-2, 2)) for z in co.reps[p]), h.Cochain.zero(alg, p))
    c = sum((z.scale(rng.randint(-2, 2)) for z in ch.reps[m]), h.Chain.zero(alg, m))
    x = (
        h.connes_B(h.contract_I(P, c))
        - h.contract_I(P, h.connes_B(c)).scale(-1 if p % 2 else 1)
        - h.lie_derive_L(P, c, allow_arity0=True).scale(sign_rule("cartan_homotopy", p=p))
    )
    w = h.exactness_witness(x)
    assert w is not None
    assert x.is_zero() or h.chain_boundary(w) == x


def test_differential_is_bracket_with_multiplication(mat2, rng):
    mu = h.multiplication(mat2)
    for p in range(3):
        P = h.random_cochain(mat2, p, rng)
        s = sign_rule("differential_vs_mu", p=p)
        assert h.cochain_boundary(P) == h.gerstenhaber_bracket(mu, P, allow_arity0=True).scale(s)


# ---------------------------------------------------------------- literals


def test_cochain_and_chain_literals_round_trip(mat2, rng):
    P = h.random_cochain(mat2, 2, rng).scale(Fraction(1, 3))
    assert h.parse_cochain(h.format_cochain(P), mat2) == P
    c = h.random_chain(mat2, 2, rng).scale(Fraction(-2, 5))
    assert h.parse_chain(h.format_chain(c), mat2) == c
    text = "(eps) -> 1*1 + -1/2*eps\n"
    assert h.parse_cochain(text, builtin("dual_numbers")).values == {(1,): {0: 1, 1: Fraction(-1, 2)}}
    with pytest.raises(ParseError):
        h.parse_chain("(1, eps) -> one\n", builtin("dual_numbers"))


def test_normalization_is_eager(dual):
    # unit in a bar slot: the chain vanishes, the cochain entry is dropped
    assert h.Chain(dual, 1, {(1, 0): 5}).is_zero()
    assert h.Cochain(dual, 1, {(0,): {1: 1}}).is_zero()
