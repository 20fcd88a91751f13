
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochcalc import envelope as env
from hochcalc.cartan import Form, Polyvector, de_rham
from hochcalc.envelope import (
    DELTA,
    DiffOp,
    EnvelopeElement,
    Symbol,
    act_on_forms,
    check_relations,
    commutator,
    de_rham_word,
    format_element,
    graded_dims,
    injectivity_rank,
    map_r,
    normal_form,
    parse_word,
    substitute_d,
)
from hochcalc.errors import BoundError, InputError, ParseError

fm = Form.monomial


def w(text, n=1):
    return parse_word(text, n)


def test_delta_past_i_produces_l():
    # delta i[dx] -> (-1)^1 i[dx] delta + l[dx]
    got = normal_form(w("delta i[dx]"))
    assert got == w("l[dx]") - w("i[dx]") * EnvelopeElement.delta(1)
    assert normal_form(w("delta i[x]")) == w("i[x]") * EnvelopeElement.delta(1) + normal_form(w("l[x]"))


def test_delta_squares_to_zero():
    assert normal_form(w("delta delta")).is_zero()


def test_decomposable_i_expands():
    assert normal_form(w("i[x*dx]"), "Y0") == normal_form(w("i[x] i[dx]"), "Y0")
    assert normal_form(w("i[x*x]"), "Y0") == w("i[x] i[x]")


def test_delta_is_not_in_y0():
    with pytest.raises(InputError):
        normal_form(w("delta"), "Y0")


def test_word_length_bound():
    with pytest.raises(BoundError):
        env.normal_form_table(w(" ".join(["i[x]"] * 13)))


def test_action_examples():
    one = fm((0,))
    assert act_on_forms(w("i[x] l[x]"), one) == fm((1,), (0,))
    assert act_on_forms(w("l[dx]"), fm((1,))) == fm((0,))
    assert act_on_forms(EnvelopeElement.one(1), fm((2,), (0,))) == fm((2,), (0,))


def test_d_word_acts_as_de_rham():
    forms = env.test_forms(2, 2)
    d = de_rham_word(2)
    assert all(act_on_forms(d, phi) == de_rham(phi) for phi in forms)


@pytest.mark.parametrize("n", [1, 2])
def test_relations_hold(n):
    rep = check_relations(n, max_x=1, form_degree=2)
    assert rep.ok, rep.failures[:3]
    assert rep.checked["l-l"] > 0


def test_frak_d_is_central_at_word_level():
    n = 1
    dd = EnvelopeElement.delta(n) - de_rham_word(n)
    for text in ("i[x]", "i[dx]", "l[x]", "l[x*dx]"):
        assert env.normal_form_table(commutator(dd, w(text)), "Y") == {}
    assert env.normal_form_table(dd * dd, "Y") == {}


def test_substitute_d_separates_the_central_symbol():
    out = substitute_d(w("i[x] delta"))
    dd_words = [word for word in out.terms if word and word[-1].kind == "dd"]
    assert len(dd_words) == 1
    forms = env.test_forms(1, 2)
    assert env.acts_equal(out, normal_form(w("i[x]") * de_rham_word(1)), forms)


symbols_1 = st.sampled_from(["i[x]", "i[dx]", "i[1]", "l[x]", "l[dx]", "l[x*dx]", "l[x*x]", "delta"])


@given(st.lists(symbols_1, min_size=1, max_size=4))
def test_normal_form_is_idempotent_and_preserves_action(tokens):
    e = w(" ".join(tokens))
    nf = normal_form(e)
    assert normal_form(nf) == nf
    assert nf.is_zero() or nf.degrees() <= e.degrees()
    forms = env.test_forms(1, 2)
    assert env.acts_equal(nf, e, forms)


@given(st.lists(symbols_1, min_size=1, max_size=2), st.lists(symbols_1, min_size=1, max_size=2))
def test_action_is_multiplicative(a, b):
    e1, e2 = w(" ".join(a)), w(" ".join(b))
    for phi in env.test_forms(1, 2):
        assert act_on_forms(e1 * e2, phi) == act_on_forms(e1, act_on_forms(e2, phi))


def test_filtration_zero_is_v():
    for weight in range(-1, 3):
        s = graded_dims(1, 0, weight)
        assert s.match
        assert s.filtered_dim == len([k for k in env.v_monomials(1, 4) if sum(k[0]) - len(k[1]) == weight])


@pytest.mark.parametrize("n,k,weight", [(1, 1, 0), (1, 1, 2), (1, 2, -1), (2, 1, 0), (2, 2, 0), (2, 2, 1)])
def test_pbw_dimensions(n, k, weight):
    s = graded_dims(n, k, weight)
    assert s.match, s.to_json()


def test_symmetric_power_count_by_enumeration():
    # n = 1, k = 1: V-basis times {dx, dxi}; weight w gets x^a xi^J with a - |J| = w - 1 (dx) or w + 1 (dxi)
    for weight in range(-1, 4):
        want = sum(1 for a in range(8) for j in (0, 1) for shift in (1, -1) if a - j == weight - shift)
        assert env.symmetric_power_dim(1, 1, weight) == want


def test_map_r_examples():
    dx = fm((0,), (0,))
    one = fm((0,))
    d_x = Polyvector.monomial((0,), (0,))
    assert map_r(dx, DiffOp((0,), (0,)), d_x, dx) == dx
    f = fm((3,))
    assert map_r(one, DiffOp((0,), (1,)), Polyvector.monomial((0,)), f) == fm((2,)).scale(3)
    assert map_r(dx, DiffOp((0,), (0,)), d_x, f).is_zero()


def test_map_r_injective_on_small_slices():
    assert injectivity_rank(1, 2, 2).full_rank
    assert injectivity_rank(2, 1, 1).full_rank


def test_parse_and_format_round_trip():
    e = w("i[x] l[x*dx] delta")
    assert parse_word(format_element(e).split("*", 1)[1], 1) == e
    assert w("i[dy*dx]", 2) == w("i[dx*dy]", 2).scale(-1)
    for bad in ("q[x]", "i[z]", "i[x"):
        with pytest.raises(ParseError):
            parse_word(bad, 1)


def test_degrees_of_generators():
    assert Symbol("i", ((0,), (0,))).degree() == 1
    assert Symbol("l", ((0,), (0,))).degree() == 0
    assert DELTA.degree() == -1
