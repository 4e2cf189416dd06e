"""Decompositions of commutative functions by modulus types.

For a modulus ``ω`` a count vector ``x ∈ ℕ^k`` has type ``(S, r)`` where
``S = {i : x_i >= ω}`` (1-based letter indices) and ``r_i = x_i mod ω``; for
``i ∉ S`` this is the literal count. A decomposition assigns to each type a
polynomial in ``X_i`` (``i ∈ S``), evaluated at the quotients
``⌊x_i / ω⌋ >= 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .automata import (
    WeightedAutomaton,
    equivalent,
    is_commutative,
)
from .classes import NO, YES, INCONCLUSIVE, ClassificationReport, is_integer_valued, is_strongly_natural
from .poly import Polynomial, interpolate_grid, to_binomial_basis


def var(i: int) -> str:
    """Name of the quotient variable for the 1-based letter index ``i``."""
    return f"X{i}"


@dataclass(frozen=True, order=True)
class ModuloType:
    S: frozenset
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "r", tuple(self.r))

    def sort_key(self):
        return (len(self.S), tuple(sorted(self.S)), self.r)

    def variables(self) -> tuple[str, ...]:
        return tuple(var(i) for i in sorted(self.S))

    def __str__(self) -> str:
        return f"S={{{','.join(map(str, sorted(self.S)))}}} r=({','.join(map(str, self.r))})"


def modtype(omega: int, x: Sequence[int]) -> ModuloType:
    return ModuloType(frozenset(i + 1 for i, v in enumerate(x) if v >= omega), tuple(v % omega for v in x))


def all_types(k: int, omega: int) -> list[ModuloType]:
    out = []
    for S in itertools.chain.from_iterable(itertools.combinations(range(1, k + 1), s) for s in range(k + 1)):
        for r in itertools.product(range(omega), repeat=k):
            out.append(ModuloType(frozenset(S), r))
    return out


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class CommutativeDecomposition:
    alphabet: tuple[str, ...]
    omega: int
    pieces: Mapping[ModuloType, Polynomial]
    check: bool = field(default=True, compare=False, repr=False)

    __hash__ = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.omega < 1:
            raise DecompositionError("modulus must be positive")
        k = len(self.alphabet)
        pieces = {}
        for t in all_types(k, self.omega):
            if t not in self.pieces:
                raise DecompositionError(f"missing piece for type {t}")
            p = self.pieces[t]
            allowed = set(t.variables())
            if not set(p.used_variables()) <= allowed:
                raise DecompositionError(f"piece for {t} uses variables outside S")
            pieces[t] = p.with_variables(allowed | set(p.used_variables()))
        if len(self.pieces) != len(pieces):
            raise DecompositionError("pieces given for types outside the modulus range")
        object.__setattr__(self, "pieces", pieces)
        if self.check:
            for t, p in pieces.items():
                if not is_integer_valued(p).yes:
                    raise DecompositionError(f"piece for {t} is not integer-valued: {p}")

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def types(self) -> list[ModuloType]:
        return sorted(self.pieces, key=ModuloType.sort_key)

    def __call__(self, x: Sequence[int]) -> int:
        return eval_decomp(self, x)

    def eval_word(self, word: str) -> int:
        return eval_decomp(self, counts(self.alphabet, word))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CommutativeDecomposition):
            return NotImplemented
        return self.alphabet == other.alphabet and self.omega == other.omega and self.pieces == other.pieces


def counts(alphabet: Sequence[str], word: str) -> tuple[int, ...]:
    for a in word:
        if a not in alphabet:
            raise ValueError(f"letter {a!r} is not in the alphabet")
    return tuple(word.count(a) for a in alphabet)


def word_of(alphabet: Sequence[str], x: Sequence[int]) -> str:
    return "".join(a * n for a, n in zip(alphabet, x))


def eval_decomp(D: CommutativeDecomposition, x: Sequence[int]) -> int:
    if len(x) != D.k:
        raise ValueError("count vector has the wrong length")
    t = modtype(D.omega, x)
    point = {var(i): x[i - 1] // D.omega for i in t.S}
    value = D.pieces[t].evaluate(point)
    if value.denominator != 1:
        raise DecompositionError("piece produced a non-integer value")
    return int(value)


def from_function(alphabet: Sequence[str], omega: int, f: Callable[[tuple[int, ...]], int], degree: int) -> CommutativeDecomposition:
    """Interpolate each piece of ``f`` on the quotient grid ``{1..degree+1}^|S|``."""
    k = len(alphabet)
    pieces = {}
    for t in all_types(k, omega):
        pieces[t] = _interpolate_piece(t, omega, degree, f)
    return CommutativeDecomposition(tuple(alphabet), omega, pieces)


def _point(t: ModuloType, omega: int, q: dict[int, int]) -> tuple[int, ...]:
    return tuple(omega * q[i + 1] + t.r[i] if (i + 1) in t.S else t.r[i] for i in range(len(t.r)))


def _interpolate_piece(t: ModuloType, omega: int, degree: int, f) -> Polynomial:
    S = sorted(t.S)
    names = [var(i) for i in S]
    if not S:
        return Polynomial.constant(f(t.r))
    values = {}
    for qs in itertools.product(range(1, degree + 2), repeat=len(S)):
        values[qs] = f(_point(t, omega, dict(zip(S, qs))))
    return interpolate_grid(values, names, degree, start=1)


# -- structural operations ------------------------------------------------------


def refine(D: CommutativeDecomposition, m: int) -> CommutativeDecomposition:
    """Same function with modulus ``m * ω``."""
    if m < 1:
        raise ValueError("refinement factor must be positive")
    if m == 1:
        return D
    w, W = D.omega, D.omega * m
    pieces = {}
    for t in all_types(D.k, W):
        old_S = set()
        subst = {}
        fixed = {}
        for i in range(1, D.k + 1):
            ri = t.r[i - 1]
            if i in t.S:
                old_S.add(i)
                subst[var(i)] = Polynomial.var(var(i)) * m + (ri // w)
            elif ri >= w:
                old_S.add(i)
                fixed[var(i)] = ri // w
        old = ModuloType(frozenset(old_S), tuple(x % w for x in t.r))
        p = D.pieces[old]
        if fixed:
            p = p.restrict({v: c for v, c in fixed.items() if v in p.variables})
        if subst:
            p = p.substitute({v: s for v, s in subst.items() if v in p.variables})
        pieces[t] = p
    return CommutativeDecomposition(D.alphabet, W, pieces, check=False)


def shift(D: CommutativeDecomposition, i: int, n: int) -> CommutativeDecomposition:
    """Decomposition of ``x ↦ f(x + n e_i)`` (``i`` is 1-based)."""
    if not 1 <= i <= D.k:
        raise ValueError("letter index out of range")
    if n == 0:
        return D
    w = D.omega
    pieces = {}
    for t in all_types(D.k, w):
        ri = t.r[i - 1]
        r_new = list(t.r)
        r_new[i - 1] = (ri + n) % w
        carry = (ri + n) // w
        if i in t.S:
            old = ModuloType(t.S, tuple(r_new))
            p = D.pieces[old]
            if var(i) in p.variables and carry:
                p = p.translate({var(i): carry})
        elif ri + n < w:
            old = ModuloType(t.S, tuple(r_new))
            p = D.pieces[old]
        else:
            old = ModuloType(t.S | {i}, tuple(r_new))
            p = D.pieces[old]
            if var(i) in p.variables:
                p = p.restrict({var(i): carry})
        pieces[t] = p
    return CommutativeDecomposition(D.alphabet, w, pieces, check=False)


def shift_word(D: CommutativeDecomposition, u: str) -> CommutativeDecomposition:
    """Decomposition of ``w ↦ f(u w)``."""
    for idx, n in enumerate(counts(D.alphabet, u)):
        if n:
            D = shift(D, idx + 1, n)
    return D


def _combine(D1: CommutativeDecomposition, D2: CommutativeDecomposition, op) -> CommutativeDecomposition:
    if D1.alphabet != D2.alphabet:
        raise ValueError("alphabet mismatch")
    W = math.lcm(D1.omega, D2.omega)
    A, B = refine(D1, W // D1.omega), refine(D2, W // D2.omega)
    pieces = {t: op(A.pieces[t], B.pieces[t]) for t in A.pieces}
    return CommutativeDecomposition(D1.alphabet, W, pieces, check=False)


def sub_decomp(D1: CommutativeDecomposition, D2: CommutativeDecomposition) -> CommutativeDecomposition:
    return _combine(D1, D2, lambda p, q: p - q)


def add_decomp(D1: CommutativeDecomposition, D2: CommutativeDecomposition) -> CommutativeDecomposition:
    return _combine(D1, D2, lambda p, q: p + q)


def constant_decomp(alphabet: Sequence[str], c: int) -> CommutativeDecomposition:
    return from_function(alphabet, 1, lambda x: c, 0)


def degree(D: CommutativeDecomposition) -> int:
    return max((p.degree() for p in D.pieces.values()), default=0)


def is_zero_decomp(D: CommutativeDecomposition) -> bool:
    return all(p.is_zero() for p in D.pieces.values())


# -- classification ---------------------------------------------------------------


def _on_quotients(t: ModuloType, p: Polynomial) -> Polynomial:
    """The piece re-indexed so that its domain starts at 0: quotient ``q = X + 1``."""
    return p.translate({v: 1 for v in t.variables()})


def is_npoly(D: CommutativeDecomposition, d: int | None = None) -> ClassificationReport:
    """Every piece, read on its actual domain ``q >= 1``, is strongly natural."""
    deg = degree(D)
    if d is not None and deg > d:
        worst = max(D.types(), key=lambda t: D.pieces[t].degree())
        return ClassificationReport(
            "NPoly", NO, {"reason": "degree", "degree": deg, "limit": d, "type": str(worst), "piece": str(D.pieces[worst])}
        )
    for t in D.types():
        shifted = _on_quotients(t, D.pieces[t])
        rep = is_strongly_natural(shifted)
        if not rep.yes:
            cert = {
                "reason": "piece",
                "type": str(t),
                "piece": str(D.pieces[t]),
                "shifted_piece": str(shifted),
                "witness": rep.certificate.get("witness"),
                "monomial": rep.certificate.get("monomial"),
            }
            if "offending" in rep.certificate:
                cert["offending"] = rep.certificate["offending"]
            return ClassificationReport("NPoly", NO, cert)
    return ClassificationReport("NPoly", YES, {"degree": deg})


def glued_polynomial(t: ModuloType, p: Polynomial, omega: int) -> Polynomial:
    """Express a piece in the raw counts: ``X_i ↦ (X_i - r_i) / ω`` for ``i ∈ S``."""
    subst = {var(i): (Polynomial.var(var(i)) - t.r[i - 1]) / omega for i in t.S}
    return p.substitute({v: s for v, s in subst.items() if v in p.variables}).with_variables(
        set(t.variables()) | set(p.used_variables())
    )


def is_ultimately_polynomial(D: CommutativeDecomposition) -> ClassificationReport:
    """Pieces expressed in raw counts agree across residues of the growing letters."""
    groups: dict[tuple, tuple[ModuloType, Polynomial]] = {}
    glued = {}
    for t in D.types():
        R = glued_polynomial(t, D.pieces[t], D.omega)
        key = (t.S, tuple(t.r[i - 1] for i in range(1, D.k + 1) if i not in t.S))
        if key in groups:
            t0, R0 = groups[key]
            if R0 != R:
                return ClassificationReport(
                    "UltimatelyPolynomial",
                    NO,
                    {"types": [str(t0), str(t)], "polynomials": [str(R0), str(R)]},
                )
        else:
            groups[key] = (t, R)
            glued[key] = R
    full = glued.get((frozenset(range(1, D.k + 1)), ()))
    return ClassificationReport(
        "UltimatelyPolynomial", YES, {"polynomial": str(full) if full is not None else None}
    )


def is_nsf(D: CommutativeDecomposition) -> ClassificationReport:
    np_ = is_npoly(D)
    up = is_ultimately_polynomial(D)
    verdict = YES if np_.yes and up.yes else NO
    return ClassificationReport("NSF", verdict, {"npoly": np_, "ultimately_polynomial": up})


def is_zsf(D: CommutativeDecomposition) -> ClassificationReport:
    up = is_ultimately_polynomial(D)
    return ClassificationReport("ZSF", up.verdict, {"ultimately_polynomial": up})


# -- synthesis ---------------------------------------------------------------------


class SynthesisTooLarge(ValueError):
    pass


def _letter_block(omega: int, deg: int):
    """States and per-letter transitions of the single-letter counter.

    Literal states ``L[r]`` (count ``r < ω``) then ``B[r][j]`` holding
    ``C(q, j)`` for count ``ωq + r``; wrapping the residue applies Pascal's rule.
    """
    n = omega + omega * (deg + 1)

    def L(r):
        return r

    def B(r, j):
        return omega + r * (deg + 1) + j

    rows = [[0] * n for _ in range(n)]
    for r in range(omega - 1):
        rows[L(r)][L(r + 1)] = 1
        for j in range(deg + 1):
            rows[B(r, j)][B(r + 1, j)] = 1
    rows[L(omega - 1)][B(0, 0)] = 1
    if deg >= 1:
        rows[L(omega - 1)][B(0, 1)] = 1
    for j in range(deg + 1):
        rows[B(omega - 1, j)][B(0, j)] += 1
        if j + 1 <= deg:
            rows[B(omega - 1, j)][B(0, j + 1)] += 1
    return n, rows, L, B


def synthesize_automaton(D: CommutativeDecomposition, max_dim: int = 4096) -> WeightedAutomaton:
    """Weighted automaton computing ``w ↦ eval_decomp(D, counts(w))``."""
    k, w = D.k, D.omega
    degs = [max((p.degree_in(var(i)) for p in D.pieces.values()), default=0) for i in range(1, k + 1)]
    blocks = [_letter_block(w, dg) for dg in degs]
    sizes = [b[0] for b in blocks]
    total = math.prod(sizes) if sizes else 1
    if total > max_dim:
        raise SynthesisTooLarge(f"synthesized automaton would have {total} states")
    strides = [math.prod(sizes[i + 1 :]) for i in range(k)]

    def flat(idx):
        return sum(a * s for a, s in zip(idx, strides))

    mats = {}
    for i, a in enumerate(D.alphabet):
        rows = [[0] * total for _ in range(total)]
        step = blocks[i][1]
        for idx in itertools.product(*(range(s) for s in sizes)):
            src = flat(idx)
            for j, v in enumerate(step[idx[i]]):
                if v:
                    tgt = list(idx)
                    tgt[i] = j
                    rows[src][flat(tgt)] += v
        mats[a] = rows
    initial = [0] * total
    initial[flat([blocks[i][2](0) for i in range(k)])] = 1
    final = [0] * total
    for t, p in D.pieces.items():
        names = list(p.variables)
        for alpha, c in to_binomial_basis(p).items():
            if not c:
                continue
            if c.denominator != 1:
                raise DecompositionError("piece is not integer-valued")
            expo = dict(zip(names, alpha))
            idx = []
            for i in range(1, k + 1):
                L, B = blocks[i - 1][2], blocks[i - 1][3]
                r = t.r[i - 1]
                idx.append(B(r, expo.get(var(i), 0)) if i in t.S else L(r))
            final[flat(idx)] += int(c)
    return WeightedAutomaton(D.alphabet, tuple(initial), mats, tuple(final))


# -- decomposition of automata ---------------------------------------------------------


class NotCommutative(ValueError):
    def __init__(self, pair: tuple[str, str]):
        super().__init__(f"automaton is not commutative: f({pair[0]!r}) != f({pair[1]!r})")
        self.pair = pair


@dataclass
class DecomposeResult:
    decomposition: CommutativeDecomposition | None
    status: str
    omega: int | None = None
    degree: int | None = None
    candidates_tried: int = 0
    synthesized_dim: int | None = None

    @property
    def ok(self) -> bool:
        return self.decomposition is not None


class _CountEvaluator:
    """Memoised ``A`` on count vectors, reading letters in alphabet order."""

    def __init__(self, A: WeightedAutomaton):
        self.A = A
        self.cache: dict[tuple, int] = {}
        self.vectors: dict[tuple, list] = {(): list(A.initial)}

    def _vector(self, x: tuple[int, ...]) -> list:
        if x in self.vectors:
            return self.vectors[x]
        # peel one letter off the last non-zero coordinate
        last = max(i for i, v in enumerate(x) if v)
        prev = list(x)
        prev[last] -= 1
        while prev and prev[-1] == 0:
            prev.pop()
        vec = self.A.step(self._vector(tuple(prev)), self.A.alphabet[last])
        self.vectors[x] = vec
        return vec

    def __call__(self, x: Sequence[int]) -> int:
        x = tuple(x)
        if x not in self.cache:
            key = list(x)
            while key and key[-1] == 0:
                key.pop()
            vec = self._vector(tuple(key))
            self.cache[x] = sum(a * b for a, b in zip(vec, self.A.final))
        return self.cache[x]


def decompose(
    A: WeightedAutomaton,
    max_omega: int = 24,
    max_degree: int | None = None,
    max_dim: int = 4096,
    check_commutative: bool = True,
) -> DecomposeResult:
    """Find the least modulus (then least degree) decomposition equivalent to ``A``.

    Each candidate is interpolated from values of ``A`` and accepted only after
    its synthesized automaton passes exact equivalence with ``A``.

    Candidates ``(ω, d)`` are tried in order of ``ω(d+1)``. The pairs that work
    are closed under raising ``d`` and under the admissible multiples of ``ω``,
    so the first hit is still the least modulus with its least degree.
    """
    if check_commutative:
        pair = is_commutative(A)
        if pair is not None:
            raise NotCommutative(pair)
    f = _CountEvaluator(A)
    k = len(A.alphabet)
    top = A.dim - 1 if max_degree is None else min(A.dim - 1, max_degree)
    tried = 0
    order = sorted(
        ((omega, d) for omega in range(1, max_omega + 1) for d in range(top + 1)),
        key=lambda od: (od[0] * (od[1] + 1), od[0]),
    )
    for omega, d in order:
        tried += 1
        pieces = {}
        ok = True
        for t in all_types(k, omega):
            p = _interpolate_piece(t, omega, d, f)
            if t.S:
                probe = {i: d + 2 for i in t.S}
                pt = {var(i): v for i, v in probe.items()}
                if p.evaluate(pt) != f(_point(t, omega, probe)):
                    ok = False
                    break
            pieces[t] = p
        if not ok:
            continue
        try:
            D = CommutativeDecomposition(A.alphabet, omega, pieces)
        except DecompositionError:
            continue
        try:
            B = synthesize_automaton(D, max_dim=max_dim)
        except SynthesisTooLarge:
            continue
        if equivalent(A, B) is None:
            return DecomposeResult(D, YES, omega, d, tried, B.dim)
    return DecomposeResult(None, INCONCLUSIVE, candidates_tried=tried)
