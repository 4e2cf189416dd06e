"""Named example objects used by the tests, the CLI and the README."""

from __future__ import annotations

from .automata import MonoidPresentation, WeightedAutomaton
from .decomp import CommutativeDecomposition, ModuloType, from_function
from .parse import parse_polynomial
from .poly import Polynomial
from .transducer import HTransducer


def sum_of_squares_counterexample() -> Polynomial:
    """``Z(X+Y)^2 + 2(X-Y)^2``: non-negative maximal monomials, yet not ℕ-rational."""
    return parse_polynomial("Z*(X+Y)^2 + 2*(X-Y)^2")


def shifted_binomial_example() -> Polynomial:
    """Integer-valued but not strongly natural: fails once ``X = 0``."""
    return parse_polynomial("C(X - 4, 1)*C(Y, 1)*C(Z, 1) + 8*C(Y, 2) + 8*C(Z, 2) + 4")


def alternating_length_automaton() -> WeightedAutomaton:
    """Four states on the letter ``a``; ``a^n ↦ (-1)^n n``."""
    a = [
        [0, 1, 0, 0],
        [1, 0, 1, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ]
    return WeightedAutomaton(("a",), (1, 0, 0, 0), {"a": a}, (0, -1, 2, -2))


def letter_product_automaton() -> WeightedAutomaton:
    """``w ↦ |w|_a * |w|_b``."""
    a = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    b = [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
    return WeightedAutomaton(("a", "b"), (1, 0, 0, 0), {"a": a, "b": b}, (0, 0, 0, 1))


def constant_series_automaton(c: int = 5, alphabet=("a", "b")) -> WeightedAutomaton:
    return WeightedAutomaton(tuple(alphabet), (c,), {x: [[1]] for x in alphabet}, (1,))


def even_length_automaton(alphabet=("a",)) -> WeightedAutomaton:
    """Indicator of even length."""
    return WeightedAutomaton(tuple(alphabet), (1, 0), {x: [[0, 1], [1, 0]] for x in alphabet}, (1, 0))


def first_letter_automaton() -> WeightedAutomaton:
    """``1`` when the word starts with ``a``; not commutative."""
    return WeightedAutomaton(
        ("a", "b"),
        (1, 0, 0),
        {"a": [[0, 1, 0], [0, 1, 0], [0, 0, 1]], "b": [[0, 0, 1], [0, 1, 0], [0, 0, 1]]},
        (0, 1, 0),
    )


# -- decompositions --------------------------------------------------------------


def even_length_decomposition() -> CommutativeDecomposition:
    return from_function(("a",), 2, lambda x: 1 - x[0] % 2, 0)


def letter_product_decomposition() -> CommutativeDecomposition:
    return from_function(("a", "b"), 1, lambda x: x[0] * x[1], 1)


def length_minus_one_decomposition() -> CommutativeDecomposition:
    """``ε ↦ 1`` and ``a w ↦ |w|``."""
    return from_function(("a",), 1, lambda x: 1 if x[0] == 0 else x[0] - 1, 1)


def late_linear(n: int) -> int:
    return (1, 0, 1)[n] if n < 3 else n - 3


def late_linear_decomposition() -> CommutativeDecomposition:
    """``a^n ↦ 1, 0, 1`` for ``n < 3`` and ``n - 3`` afterwards."""
    return from_function(("a",), 3, lambda x: late_linear(x[0]), 1)


def square_difference_decomposition() -> CommutativeDecomposition:
    """``(|w|_a - |w|_b)^2``: non-negative but not ℕ-rational."""
    return from_function(("a", "b"), 1, lambda x: (x[0] - x[1]) ** 2, 2)


def constant_decomposition(c: int, alphabet=("a",)) -> CommutativeDecomposition:
    return from_function(tuple(alphabet), 1, lambda x: c, 0)


# -- presentations ----------------------------------------------------------------


def length_plus_one_presentation() -> MonoidPresentation:
    """Trivial monoid, two factors, production 1: ``|w| + 1``."""
    return MonoidPresentation((0,), 0, ((0,),), {"a": 0}, 1, {(0, 0): 1})


def pairs_presentation() -> MonoidPresentation:
    """``({0,1}, max)`` with three factors; counts pairs of positions: ``C(|w|, 2)``."""
    prod = {(x, y, z): x * y for x in (0, 1) for y in (0, 1) for z in (0, 1) if x * y}
    return MonoidPresentation((0, 1), 0, ((0, 1), (1, 1)), {"a": 1}, 2, prod)


def constant_presentation(c: int = 3) -> MonoidPresentation:
    return MonoidPresentation((0,), 0, ((0,),), {"a": 0}, 0, {(0,): c})


# -- transducers -----------------------------------------------------------------


def _zero(alphabet=("a",)) -> CommutativeDecomposition:
    return constant_decomposition(0, alphabet)


def length_minus_one_transducer() -> HTransducer:
    """Two states ``ε`` and ``a``; the looping transition on ``a`` emits 1."""
    return HTransducer(
        ("a",),
        ("", "a"),
        {("", "a"): "a", ("a", "a"): "a"},
        {("", "a"): _zero(), ("a", "a"): constant_decomposition(1)},
        {"": 1, "a": 0},
    )


def length_minus_one_transducer_alt() -> HTransducer:
    """Also two states and also computes ``ε ↦ 1, a w ↦ |w|``, but loops back to ``ε``.

    The return transition emits ``2`` on any non-empty remainder. It is not the
    canonical residual transducer.
    """
    back = from_function(("a",), 1, lambda x: 2 if x[0] >= 1 else 0, 0)
    return HTransducer(
        ("a",),
        ("", "a"),
        {("", "a"): "a", ("a", "a"): ""},
        {("", "a"): _zero(), ("a", "a"): back},
        {"": 1, "a": 0},
    )
