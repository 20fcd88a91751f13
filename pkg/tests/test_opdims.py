from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochcalc.errors import BoundError, InputError
from hochcalc.opdims import (
    PoincarePoly,
    bracket_monomial_rank,
    brute_force_calc_dims,
    calc_component_poly,
    calc_v_zero_dims,
    component_table,
    free_functor_dims,
    koszul_v_zero_dims,
    lie_dim,
    multilinear_poly,
)

P = PoincarePoly.from_list


def test_component_examples():
    assert calc_component_poly("a(n,1)", 1) == P([1, 2, 1])
    assert calc_component_poly("a(0,1)") == P([1, 1])
    assert calc_component_poly("c(n,0)", 3) == P([1, 3, 2])


@pytest.mark.parametrize("n", range(1, 9))
def test_each_new_input_adds_a_linear_factor(n):
    q = calc_component_poly("a(n,1)", n).divide(calc_component_poly("a(n,1)", n - 1))
    assert q == P([1, n])


@pytest.mark.parametrize("n", range(0, 7))
def test_total_dimension_is_twice_factorial(n):
    # (1 + 1) * prod_{j<=n} (1 + j) = 2 (n+1)!
    assert calc_component_poly("a(n,1)", n).at(1) == 2 * factorial(n + 1)


@pytest.mark.xfail(strict=True, reason="2^(n+1) n! agrees with the product formula only for n <= 1")
def test_power_of_two_total_dimension():
    for n in range(0, 7):
        assert calc_component_poly("a(n,1)", n).at(1) == 2 ** (n + 1) * factorial(n)


@pytest.mark.parametrize("n,want", [(1, 1), (4, 6), (7, 720)])
def test_lie_dim(n, want):
    assert lie_dim(n) == want


@pytest.mark.parametrize("n", range(1, 6))
def test_lie_dim_matches_bracket_monomials(n):
    assert bracket_monomial_rank(n) == lie_dim(n)
    # n desuspended letters, each in degree -1
    assert multilinear_poly("lie", n) == PoincarePoly.of({n: lie_dim(n)})


@pytest.mark.parametrize("n", range(0, 6))
def test_multilinear_free_calculus_matches_product_formula(n):
    assert multilinear_poly("a(n,1)", n) == calc_component_poly("a(n,1)", n)
    if n:
        assert multilinear_poly("c(n,0)", n) == calc_component_poly("c(n,0)", n)


def test_bad_inputs():
    with pytest.raises(InputError):
        calc_component_poly("a(n,1)", 9)
    with pytest.raises(InputError):
        lie_dim(0)
    with pytest.raises(InputError):
        free_functor_dims("koszul", {}, {}, 2)
    with pytest.raises(BoundError):
        free_functor_dims("calc", {0: 1}, {}, 99)
    with pytest.raises(BoundError):
        free_functor_dims("lie_delta_koszul", {0: 1}, {0: 1}, 2)


def test_empty_w_gives_free_gerstenhaber_part_only():
    g = free_functor_dims("calc", {0: 1}, {}, 4)
    assert g.a == {}
    assert g.c == brute_force_calc_dims((0,), (), 4).c


def test_calculus_with_no_v_is_w_and_its_delta():
    for w in ({0: 1}, {0: 2, 1: 1}):
        g = free_functor_dims("calc", {}, w, 3)
        assert g.c == {}
        assert g.a == calc_v_zero_dims(w)
        assert g.a == brute_force_calc_dims((), tuple(d for d, n in w.items() for _ in range(n)), 1).a


@pytest.mark.xfail(strict=True, reason="delta squares to zero, so no u^2 and higher terms survive")
def test_no_v_geometric_series():
    g = free_functor_dims("calc", {}, {0: 1}, 3)
    assert g.a.get((-2, 1), 0) == 1


def test_koszul_dual_with_no_v():
    g = free_functor_dims("lie_delta_koszul", {}, {0: 1}, 3, u_bound=4)
    assert g.a == koszul_v_zero_dims({0: 1}, 4)


@pytest.mark.parametrize("v,w", [((0,), (0,)), ((1,), (0,)), ((2,), (1,)), ((0, 0), ())])
def test_free_calculus_against_brute_force(v, w):
    bound = 3
    series = free_functor_dims("calc", {d: v.count(d) for d in set(v)}, {d: w.count(d) for d in set(w)}, bound)
    brute = brute_force_calc_dims(v, w, bound)
    assert series.c == brute.c
    assert series.a == brute.a


dims_dicts = st.dictionaries(st.integers(-1, 2), st.integers(0, 2), max_size=2)


@given(dims_dicts, dims_dicts, st.dictionaries(st.integers(-1, 2), st.integers(1, 2), min_size=1, max_size=1))
def test_monotone_in_v(v, w, extra):
    bigger = dict(v)
    for d, n in extra.items():
        bigger[d] = bigger.get(d, 0) + n
    for kind, kw in (("calc", {}), ("lie_delta_koszul", {"u_bound": 2})):
        small = free_functor_dims(kind, v, w, 4, **kw)
        large = free_functor_dims(kind, bigger, w, 4, **kw)
        assert small.dominated_by(large)


def test_component_table_rows():
    rows = component_table("a(n,1)", 2)
    assert {"n": 2, "degree": -3, "dim": 2} in rows
    assert sum(r["dim"] for r in rows if r["n"] == 2) == 12


def test_poincare_division():
    assert P([1, 3, 2]).divide(P([1, 1])) == P([1, 2])
    assert P([1, 3, 3]).divide(P([1, 2])) is None
    with pytest.raises(InputError):
        PoincarePoly.of({0: -1})
