import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyreg import catalog
from polyreg.automata import equivalent, evaluate
from polyreg.decomp import (
    CommutativeDecomposition,
    ModuloType,
    NotCommutative,
    add_decomp,
    decompose,
    from_function,
    glued_polynomial,
    is_npoly,
    is_nsf,
    is_ultimately_polynomial,
    is_zsf,
    modtype,
    refine,
    shift,
    shift_word,
    sub_decomp,
    synthesize_automaton,
)
from polyreg.oracle import WordEnumerator, progression_polynomial_check
from polyreg.parse import parse_polynomial as P


def test_modtype():
    assert modtype(2, (0, 5)) == ModuloType(frozenset({2}), (0, 1))
    assert str(modtype(3, (4, 1))) == "S={1} r=(1,1)"


def test_alternating_length_decomposition_frozen():
    res = decompose(catalog.alternating_length_automaton())
    D = res.decomposition
    assert (res.omega, res.degree) == (2, 1)
    assert {str(t): str(p) for t, p in D.pieces.items()} == {
        "S={} r=(0)": "0",
        "S={} r=(1)": "-1",
        "S={1} r=(0)": "2*X1",
        "S={1} r=(1)": "-2*X1 - 1",
    }
    assert is_npoly(D).verdict == "no"
    up = is_ultimately_polynomial(D)
    assert up.verdict == "no"
    assert up.certificate["polynomials"] == ["X1", "-X1"]


def test_letter_product_decomposition():
    res = decompose(catalog.letter_product_automaton())
    assert (res.omega, res.degree, res.synthesized_dim) == (1, 1, 9)
    D = res.decomposition
    assert is_npoly(D).yes and is_nsf(D).yes


def test_parity():
    D = decompose(catalog.even_length_automaton()).decomposition
    assert D.omega == 2
    assert is_npoly(D).yes
    assert is_zsf(D).verdict == "no"


def test_decompose_reports_non_commutative_input():
    with pytest.raises(NotCommutative) as err:
        decompose(catalog.first_letter_automaton())
    assert err.value.pair == ("ab", "ba")


def test_decompose_gives_up_honestly():
    res = decompose(catalog.even_length_automaton(), max_omega=1)
    assert not res.ok and res.status == "inconclusive"


def test_npoly_uses_actual_domain():
    # a^n -> n - 1 for n >= 1 is natural on its domain even though X1 - 1 is not strongly natural
    D = from_function(("a",), 1, lambda x: max(x[0] - 1, 0), 1)
    assert str(D.pieces[ModuloType(frozenset({1}), (0,))]) == "X1 - 1"
    assert is_npoly(D).yes


def test_npoly_degree_bound():
    D = catalog.letter_product_decomposition()
    # the bound is on total degree: |w|_a * |w|_b grows quadratically
    assert is_npoly(D, 2).yes
    assert is_npoly(D, 1).verdict == "no"


def test_square_difference():
    D = catalog.square_difference_decomposition()
    assert is_npoly(D).verdict == "no"
    assert is_zsf(D).yes
    assert not is_nsf(D).yes


def test_glued_polynomial():
    t = ModuloType(frozenset({1}), (1,))
    assert glued_polynomial(t, P("2*X1 + 1"), 2) == P("X1")


def test_late_linear_is_ultimately_polynomial():
    D = catalog.late_linear_decomposition()
    rep = is_ultimately_polynomial(D)
    assert rep.yes and rep.certificate["polynomial"] == "X1 - 3"
    assert str(progression_polynomial_check(lambda x: D(x), (3,), [(1,)], 2, 0)) == "X1"


def test_shift_and_refine_preserve_values():
    D = catalog.late_linear_decomposition()
    R = refine(D, 2)
    assert R.omega == 6
    assert all(R((n,)) == D((n,)) for n in range(20))
    S = shift(D, 1, 2)
    assert all(S((n,)) == D((n + 2,)) for n in range(20))
    assert shift_word(D, "aa") == S


def test_arithmetic():
    A, B = catalog.letter_product_decomposition(), catalog.square_difference_decomposition()
    for x in [(0, 0), (1, 3), (5, 2)]:
        assert add_decomp(A, B)(x) == A(x) + B(x)
        assert sub_decomp(A, B)(x) == A(x) - B(x)


def test_rejects_non_integer_pieces():
    with pytest.raises(ValueError):
        CommutativeDecomposition(("a",), 1, {ModuloType(frozenset(), (0,)): P("0"), ModuloType(frozenset({1}), (0,)): P("X1/2")})


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 3),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_synthesis_round_trip(omega, cs):
    """Synthesized automata evaluate to the decomposition, and decompose recovers the function."""
    c0, c1, c2 = cs
    f = lambda x: c0 + c1 * x[0] * x[1] + c2 * (x[0] % omega)
    D = from_function(("a", "b"), omega, f, 2)
    A = synthesize_automaton(D)
    for w in WordEnumerator(("a", "b"), 4):
        assert evaluate(A, w) == D.eval_word(w)
    res = decompose(A)
    assert res.ok
    assert equivalent(synthesize_automaton(res.decomposition), A) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(-2, 3), min_size=4, max_size=4))
def test_npoly_yes_implies_nonnegative(omega, cs):
    c0, c1, c2, c3 = cs
    f = lambda x: c0 + c1 * x[0] + c2 * x[0] * x[1] + c3 * (x[1] % omega)
    D = from_function(("a", "b"), omega, f, 2)
    if is_npoly(D).yes:
        assert all(D((x, y)) >= 0 for x in range(12) for y in range(12))
