"""Brute-force reference implementations.

Nothing here shares a code path with the fast procedures it is used to check:
runs are enumerated explicitly, words are compared one by one, and
interpolation is done by plain Lagrange products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .automata import WeightedAutomaton
from .poly import Polynomial


@dataclass(frozen=True)
class WordEnumerator:
    """All words up to ``max_length`` in shortlex order."""

    alphabet: tuple[str, ...]
    max_length: int

    def __iter__(self) -> Iterator[str]:
        letters = sorted(self.alphabet)
        for n in range(self.max_length + 1):
            for t in itertools.product(letters, repeat=n):
                yield "".join(t)


def brute_eval_automaton(A: WeightedAutomaton, word: str, max_paths: int = 2_000_000) -> int:
    """Sum over every run of the product of its weights (depth-first, no matrix products)."""
    total = 0
    visited = 0
    stack = [(0, q, A.initial[q]) for q in range(A.dim) if A.initial[q]]
    while stack:
        pos, q, weight = stack.pop()
        visited += 1
        if visited > max_paths:
            raise RuntimeError("too many runs to enumerate")
        if pos == len(word):
            total += weight * A.final[q]
            continue
        row = A.matrices[word[pos]][q]
        for nxt, x in enumerate(row):
            if x:
                stack.append((pos + 1, nxt, weight * x))
    return total


def brute_equivalent(A: WeightedAutomaton, B: WeightedAutomaton, length: int) -> str | None:
    """First word of length ``<= length`` on which the automata differ, else ``None``."""
    for w in WordEnumerator(A.alphabet, length):
        if brute_eval_automaton(A, w) != brute_eval_automaton(B, w):
            return w
    return None


def commutativity_brute(A: WeightedAutomaton, length: int) -> tuple[str, str] | None:
    """Compare every word up to ``length`` with all rearrangements of its letters."""
    seen = set()
    for w in WordEnumerator(A.alphabet, length):
        key = "".join(sorted(w))
        if key in seen:
            continue
        seen.add(key)
        perms = sorted(set("".join(p) for p in itertools.permutations(w)))
        ref = brute_eval_automaton(A, perms[0])
        for p in perms[1:]:
            if brute_eval_automaton(A, p) != ref:
                return perms[0], p
    return None


def lagrange_interpolate(points: dict[tuple[int, ...], int], nodes: Sequence[Sequence[int]], names: Sequence[str]) -> Polynomial:
    """Tensor-product Lagrange interpolation over the grid ``nodes[0] × nodes[1] × ...``."""
    result = Polynomial.zero(names)
    for pt, value in points.items():
        term = Polynomial.constant(Fraction(value), names)
        for axis, x in enumerate(pt):
            X = Polynomial.var(names[axis])
            for other in nodes[axis]:
                if other != x:
                    term = term * (X - other) / (x - other)
        result = result + term
    return result


def progression_polynomial_check(
    f: Callable[[tuple[int, ...]], int],
    base: Sequence[int],
    directions: Sequence[Sequence[int]],
    degree: int,
    start: int,
    names: Sequence[str] | None = None,
) -> Polynomial | None:
    """Polynomial ``P(n_1..n_p)`` with ``f(base + Σ n_j dir_j) = P(n)`` on the window, else ``None``.

    Interpolates on ``{start..start+degree}^p`` and confirms on ``2p`` points
    outside the grid.
    """
    p = len(directions)
    names = list(names) if names else [f"X{i + 1}" for i in range(p)]

    def at(ns):
        x = list(base)
        for n, d in zip(ns, directions):
            for i, step in enumerate(d):
                x[i] += n * step
        return f(tuple(x))

    nodes = [list(range(start, start + degree + 1))] * p
    points = {ns: at(ns) for ns in itertools.product(*nodes)}
    P = lagrange_interpolate(points, nodes, names)
    far = start + degree + 1
    checks = []
    for j in range(p):
        pt = [start] * p
        pt[j] = far + j
        checks.append(tuple(pt))
        checks.append(tuple(far + i + j for i in range(p)))
    for pt in checks:
        if P.evaluate(dict(zip(names, pt))) != at(pt):
            return None
    return P


def count_function(A: WeightedAutomaton) -> Callable[[tuple[int, ...]], int]:
    """Count vector ``x ↦ A(a1^x1 a2^x2 ...)`` via run enumeration."""
    return lambda x: brute_eval_automaton(A, "".join(a * n for a, n in zip(A.alphabet, x)))


# -- polynomial oracles --------------------------------------------------------------


def _natural(p: Polynomial) -> bool:
    return all(c.denominator == 1 and c >= 0 for c in p.terms.values())


def _negative_maximal(p: Polynomial) -> bool:
    exps = list(p.terms)
    for e in exps:
        if any(f != e and all(a <= b for a, b in zip(e, f)) for f in exps):
            continue
        if p.terms[e] < 0:
            return True
    return False


def str_nneg_by_enumeration(p: Polynomial, K: int) -> tuple[bool, dict[str, int] | None]:
    """Literal check: ``τ_K(p|ν)`` has natural coefficients for every ``ν`` into ``{0..K}``.

    Returns the verdict and the first failing valuation (unfixed before 0 before 1...).
    """
    names = p.used_variables()
    choices = [None] + list(range(K + 1))
    for combo in itertools.product(choices, repeat=len(names)):
        nu = {v: c for v, c in zip(names, combo) if c is not None}
        q = p.restrict(nu)
        if not _natural(q.translate(K)):
            return False, nu
    return True, None


def failing_valuations_in_box(p: Polynomial, bound: int) -> list[dict[str, int]]:
    """Every valuation with values in ``{0..bound}`` whose restriction has a negative maximal monomial."""
    names = p.used_variables()
    out = []
    for combo in itertools.product([None] + list(range(bound + 1)), repeat=len(names)):
        nu = {v: c for v, c in zip(names, combo) if c is not None}
        if _negative_maximal(p.restrict(nu)):
            out.append(nu)
    return out


def binomial_eval(table: dict[tuple[int, ...], Fraction], point: Sequence[int]) -> Fraction:
    """Evaluate ``Σ c_α Π C(x_i, α_i)`` directly with integer binomials."""
    total = Fraction(0)
    for alpha, c in table.items():
        total += c * math.prod(math.comb(x, a) for x, a in zip(point, alpha))
    return total


def recursive_eval_transducer(T, word: str, state: str = "") -> int:
    """The recursive semantics: ``A(q, aw) = A(δ(q,a), w) + λ(q,a)(w)`` and ``A(q, ε) = F(q)``."""
    if not word:
        return T.final[state]
    a, rest = word[0], word[1:]
    return recursive_eval_transducer(T, rest, T.delta[(state, a)]) + T.lam[(state, a)].eval_word(rest)
