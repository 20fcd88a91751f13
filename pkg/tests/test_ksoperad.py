import itertools
import random
from fractions import Fraction

import pytest

from hochcalc.algebra import builtin
from hochcalc.errors import BoundError, InputError, ParseError
from hochcalc.hochschild import Cochain, RawCochain, random_chain, random_cochain
from hochcalc.ksoperad import (
    PRIMER_FOREST,
    PRIMER_TREE,
    MarkedTree,
    check_generators,
    compose,
    degeneracy,
    degree,
    enumerate_check,
    enumerate_forests,
    enumerate_trees,
    evaluate,
    evaluate_raw,
    format_cell,
    is_degenerate,
    is_normal,
    normalize,
    parse_cell,
    render_diagram,
    same_expression,
    symbolic,
)


def test_normalize_examples():
    assert normalize(parse_cell("u(u(a,a),a)")) == parse_cell("u(a,a,a)")
    assert normalize(parse_cell("u(P(a))")) == parse_cell("P(a)")
    assert normalize(parse_cell("u(a,u(1),P)")) == parse_cell("u(a,P)")
    cell = parse_cell("u(a,Q(a,1),P)")
    assert normalize(cell) == cell and is_normal(cell)


@pytest.mark.parametrize("text", [PRIMER_TREE, PRIMER_FOREST, "P(a,Q(a,a))", "[c | P(c,c)]@1", "u(a,a)"])
def test_literal_round_trip(text):
    cell = parse_cell(text)
    assert parse_cell(format_cell(cell)) == cell
    assert render_diagram(cell)


@pytest.mark.parametrize("bad", ["P(a", "[c | a]@0", "[1]@0", "P(a) x", "[c]@2"])
def test_bad_literals(bad):
    with pytest.raises((ParseError, InputError)):
        parse_cell(bad)


def test_primer_tree():
    t = parse_cell(PRIMER_TREE)
    assert same_expression(symbolic(t), "Q(a1,a2,1) P")
    assert t.arity == 2 and t.slot_arities() == [0, 3]
    assert degree(t) == -1
    assert degeneracy(t) == "unit-into-slot"


def test_primer_forest():
    f = parse_cell(PRIMER_FOREST)
    assert same_expression(symbolic(f), "(P a3, Q(a0,1,a1), 1, a2)")
    assert (f.m_a, f.m_r, sum(f.slot_arities())) == (3, 3, 3)
    assert degree(f) == -3


def test_pass_through_forest():
    f = parse_cell("[c | c | c]@0")
    assert degree(f) == 0 and not is_degenerate(f)
    alg = builtin("dual_numbers")
    c = random_chain(alg, 2, random.Random(1))
    assert evaluate(f, [], c) == c


def test_single_slot_tree_is_identity(dual):
    rng = random.Random(3)
    P = random_cochain(dual, 2, rng)
    assert evaluate(parse_cell("P(a,a)"), [P]) == P


def test_primer_tree_evaluation(dual):
    rng = random.Random(4)
    P = Cochain(dual, 0, {(): {1: Fraction(2)}})
    Q = random_cochain(dual, 3, rng)
    got = evaluate(parse_cell(PRIMER_TREE), [P, Q])
    # normalized Q vanishes once a unit enters, so the whole operation is zero
    assert got.is_zero()
    Q = RawCochain(dual, 3, lambda t: {t[2]: Fraction(1 + t[0] - t[1])})
    raw = evaluate_raw(parse_cell(PRIMER_TREE), dual, [P, Q])
    unit = next(iter(dual.unit))
    for t in itertools.product(range(dual.dim), repeat=2):
        want = dual.mul(Q.evaluate([{t[0]: 1}, {t[1]: 1}, {unit: 1}]), P.value(()))
        assert raw.value(t) == {k: v for k, v in want.items() if v}


def test_primer_forest_evaluation(dual):
    # raw inputs so the unit entering Q is visible
    P = RawCochain(dual, 0, lambda t: {0: Fraction(2), 1: Fraction(-1)})
    Q = RawCochain(dual, 3, lambda t: {(t[0] + t[1] + t[2]) % 2: Fraction(1 + t[0] + 2 * t[2])})
    f = parse_cell(PRIMER_FOREST)
    nonzero = 0
    unit = next(iter(dual.unit))
    for t in itertools.product(range(dual.dim), repeat=4):
        out = evaluate_raw(f, dual, [P, Q], {t: Fraction(1)})
        comp0 = dual.mul(P.value(()), {t[3]: 1})
        comp1 = Q.evaluate([{t[0]: 1}, {unit: 1}, {t[1]: 1}])
        want: dict = {}
        for (a, x), (b, y) in itertools.product(comp0.items(), comp1.items()):
            key = (a, b, unit, t[2])
            want[key] = want.get(key, 0) + x * y
        assert out == {k: v for k, v in want.items() if v}
        nonzero += bool(out)
    assert nonzero == 16


def test_degenerate_cell_vanishes_on_normalized_inputs(dual):
    rng = random.Random(6)
    for text in ("P(a,1)", "u(a,P(1,a))"):
        cell = parse_cell(text)
        assert is_degenerate(cell)
        assert evaluate(cell, [random_cochain(dual, 2, rng)]).is_zero()


def _raw_equal(x, y, alg, arity):
    return all(x.value(t) == y.value(t) for t in itertools.product(range(alg.dim), repeat=arity))


def test_evaluation_is_class_invariant(dual):
    rng = random.Random(7)
    for text in ("u(u(a,P(a)),a)", "u(u(1),a,u(P(a,u(a))))"):
        cell = parse_cell(text)
        cochains = [random_cochain(dual, a, rng) for a in cell.slot_arities()]
        x = evaluate_raw(cell, dual, cochains)
        y = evaluate_raw(normalize(cell), dual, cochains)
        assert _raw_equal(x, y, dual, cell.arity)


def test_tree_grafting_is_compatible_with_evaluation(dual):
    rng = random.Random(8)
    outers = [t for t in enumerate_trees(2, 5) if max(t.slot_arities()) <= 2][:25]
    inners = [t for t in enumerate_trees(1, 4)][:10]
    checked = 0
    for outer, inner in itertools.product(outers, inners):
        for slot in range(outer.k):
            if outer.slot_arities()[slot] != inner.arity or outer.arity > 3:
                continue
            co = [random_cochain(dual, a, rng) for a in outer.slot_arities()]
            ci = [random_cochain(dual, a, rng) for a in inner.slot_arities()]
            composed = compose(outer, inner, slot)
            plugged = list(co)
            plugged[slot] = evaluate_raw(inner, dual, ci)
            lhs = evaluate_raw(composed, dual, co[:slot] + ci + co[slot + 1 :])
            rhs = evaluate_raw(outer, dual, plugged)
            assert _raw_equal(lhs, rhs, dual, outer.arity)
            checked += 1
    assert checked > 20


def test_grafting_identity_tree_is_neutral():
    outer = parse_cell("u(P(a,a),Q(a))")
    ident = MarkedTree(("s", 0, (("a",), ("a",))))
    assert compose(outer, ident, 0).root == outer.root


def test_forest_stacking_is_compatible_with_evaluation(dual):
    rng = random.Random(9)
    forests = [f for f in enumerate_forests(1, 5) if max(f.slot_arities()) <= 2 and f.m_a <= 2]
    forests += list(enumerate_forests(0, 4))
    checked = 0
    for outer, inner in itertools.product(forests[:30], repeat=2):
        if outer.m_a != inner.m_r:
            continue
        co = [random_cochain(dual, a, rng) for a in outer.slot_arities()]
        ci = [random_cochain(dual, a, rng) for a in inner.slot_arities()]
        chain = {t: Fraction(1) for t in itertools.islice(itertools.product(range(dual.dim), repeat=inner.m_a + 1), 3)}
        lhs = evaluate_raw(compose(outer, inner), dual, co + ci, chain)
        rhs = evaluate_raw(outer, dual, co, evaluate_raw(inner, dual, ci, chain))
        assert lhs == rhs
        checked += 1
    assert checked > 20


def test_stacking_mismatch_is_rejected():
    with pytest.raises(InputError):
        compose(parse_cell("[c | c]@0"), parse_cell("[c]@0"))
    with pytest.raises(InputError):
        compose(parse_cell("P(a,a)"), parse_cell("Q(a)"), 0)


def test_one_slot_trees_are_nonnegative():
    rep = enumerate_check("tree", 1, 7)
    assert rep.ok and rep.min_degree == 0


def test_two_slot_trees_reach_minus_one():
    rep = enumerate_check("tree", 2, 8)
    assert rep.ok
    assert rep.min_degree == -1 and rep.witness == "P(Q)"


def test_chain_forests_without_slots():
    rep = enumerate_check("forest", 0, 6)
    assert rep.ok
    assert rep.min_degree == -1 and rep.witness == "[1 | c]@0"


def test_forests_with_two_slots():
    rep = enumerate_check("forest", 2, 6)
    assert rep.ok
    assert rep.min_degree == -3 and rep.witness == "[1 | P(Q,c)]@0"
    assert rep.patterns  # degenerate cells are counted, not dropped silently


def test_enumeration_limits():
    with pytest.raises(BoundError):
        enumerate_check("tree", 2, 10)
    with pytest.raises(BoundError):
        enumerate_check("forest", 4, 5)
    with pytest.raises(InputError):
        enumerate_check("tree", 0, 4)


@pytest.mark.parametrize("name", ["dual_numbers", "matrix(2)"])
def test_generator_cells_match_operations(name):
    rep = check_generators(builtin(name), 2, 3, random.Random(11))
    assert rep.ok, rep.failures[:3]
    assert set(rep.checked) == {"cup", "bracket", "contraction", "lie", "connes"}
