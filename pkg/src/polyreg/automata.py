"""Integer-weighted automata as linear representations.

A word ``w = w1...wn`` is mapped to ``initial · M_{w1} ··· M_{wn} · final``
(row vector times matrices times column vector).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Matrix = tuple[tuple[int, ...], ...]


def _matrix(rows) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vecmat(v: Sequence, a: Matrix) -> tuple:
    n = len(a[0]) if a else 0
    out = [0] * n
    for i, x in enumerate(v):
        if x:
            row = a[i]
            for j in range(n):
                if row[j]:
                    out[j] += x * row[j]
    return tuple(out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x * y for x in ra for y in rb) for ra in a for rb in b
    )


@dataclass(frozen=True)
class WeightedAutomaton:
    alphabet: tuple[str, ...]
    initial: tuple[int, ...]
    matrices: Mapping[str, Matrix]
    final: tuple[int, ...]
    _sparse: dict = field(default=None, init=False, repr=False, compare=False)

    __hash__ = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial", tuple(int(x) for x in self.initial))
        object.__setattr__(self, "final", tuple(int(x) for x in self.final))
        mats = {a: _matrix(self.matrices[a]) for a in self.alphabet if a in self.matrices}
        object.__setattr__(self, "matrices", mats)
        n = len(self.initial)
        if n < 1:
            raise ValueError("automaton needs at least one state")
        if len(self.final) != n:
            raise ValueError("initial and final vectors differ in length")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated letter in alphabet")
        for a in self.alphabet:
            if a not in mats:
                raise ValueError(f"missing matrix for letter {a!r}")
            m = mats[a]
            if len(m) != n or any(len(r) != n for r in m):
                raise ValueError(f"matrix for {a!r} is not {n}x{n}")
        extra = set(self.matrices) - set(self.alphabet)
        if extra:
            raise ValueError(f"matrices for letters outside the alphabet: {sorted(extra)}")

    @property
    def dim(self) -> int:
        return len(self.initial)

    def sparse(self) -> dict[str, list[list[tuple[int, int]]]]:
        """Per letter, the non-zero entries of each row."""
        if self._sparse is None:
            sp = {
                a: [[(j, x) for j, x in enumerate(row) if x] for row in m]
                for a, m in self.matrices.items()
            }
            object.__setattr__(self, "_sparse", sp)
        return self._sparse

    def step(self, vec: Sequence, letter: str) -> list:
        rows = self.sparse()[letter]
        out = [0] * self.dim
        for i, x in enumerate(vec):
            if x:
                for j, y in rows[i]:
                    out[j] += x * y
        return out

    def __call__(self, word: Iterable[str]) -> int:
        return evaluate(self, word)


def evaluate(A: WeightedAutomaton, word: Iterable[str]) -> int:
    vec = list(A.initial)
    for letter in word:
        if letter not in A.matrices:
            raise ValueError(f"letter {letter!r} is not in the alphabet")
        vec = A.step(vec, letter)
    return sum(x * y for x, y in zip(vec, A.final))


def _check_alphabets(A: WeightedAutomaton, B: WeightedAutomaton) -> None:
    if tuple(A.alphabet) != tuple(B.alphabet):
        raise ValueError(f"alphabet mismatch: {A.alphabet} vs {B.alphabet}")


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    rows = [tuple(r) + (0,) * m for r in a]
    rows += [(0,) * n + tuple(r) for r in b]
    return tuple(rows)


def add(A: WeightedAutomaton, B: WeightedAutomaton) -> WeightedAutomaton:
    """Direct sum: computes ``A(w) + B(w)``."""
    _check_alphabets(A, B)
    return WeightedAutomaton(
        A.alphabet,
        A.initial + B.initial,
        {a: block_diag(A.matrices[a], B.matrices[a]) for a in A.alphabet},
        A.final + B.final,
    )


def hadamard(A: WeightedAutomaton, B: WeightedAutomaton) -> WeightedAutomaton:
    """Kronecker product: computes ``A(w) * B(w)``."""
    _check_alphabets(A, B)
    return WeightedAutomaton(
        A.alphabet,
        tuple(x * y for x in A.initial for y in B.initial),
        {a: kron(A.matrices[a], B.matrices[a]) for a in A.alphabet},
        tuple(x * y for x in A.final for y in B.final),
    )


def scalar_mul(A: WeightedAutomaton, c: int) -> WeightedAutomaton:
    return WeightedAutomaton(A.alphabet, tuple(c * x for x in A.initial), A.matrices, A.final)


def sub(A: WeightedAutomaton, B: WeightedAutomaton) -> WeightedAutomaton:
    return add(A, scalar_mul(B, -1))


def geometric_scale(A: WeightedAutomaton, alpha: int) -> WeightedAutomaton:
    """Computes ``alpha^|w| * A(w)`` by scaling every transition."""
    if alpha < 1:
        raise ValueError("scale factor must be a positive integer")
    return WeightedAutomaton(
        A.alphabet,
        A.initial,
        {a: tuple(tuple(alpha * x for x in row) for row in m) for a, m in A.matrices.items()},
        A.final,
    )


def constant_automaton(alphabet: Sequence[str], c: int) -> WeightedAutomaton:
    return WeightedAutomaton(tuple(alphabet), (c,), {a: ((1,),) for a in alphabet}, (1,))


def zero_automaton(alphabet: Sequence[str]) -> WeightedAutomaton:
    return constant_automaton(alphabet, 0)


# -- zeroness and equivalence ---------------------------------------------


class _EchelonBasis:
    """Exact row-echelon basis; each stored vector has a leading 1 at its pivot."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        v = dict(vec)
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                return v
            c = v[p]
            for j, y in row.items():
                nv = v.get(j, 0) - c * y
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
        return v

    def insert(self, vec: dict[int, Fraction]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        c = v[p]
        self.rows[p] = {j: y / c for j, y in v.items()}
        return True

    def __len__(self) -> int:
        return len(self.rows)


def _sparse_vec(vec: Sequence) -> dict[int, Fraction]:
    return {i: Fraction(x) for i, x in enumerate(vec) if x}


def reachable_basis(A: WeightedAutomaton):
    """Breadth-first closure of ``initial · M_w``; yields ``(word, vector)`` for each new basis vector."""
    basis = _EchelonBasis()
    start = list(A.initial)
    if not basis.insert(_sparse_vec(start)):
        return
    queue = deque([("", start)])
    yield "", start
    while queue:
        word, vec = queue.popleft()
        for a in A.alphabet:
            nxt = A.step(vec, a)
            if basis.insert(_sparse_vec(nxt)):
                yield word + a, nxt
                queue.append((word + a, nxt))


def is_zero(A: WeightedAutomaton) -> str | None:
    """``None`` when ``A`` computes the zero series, else a shortest word with non-zero value.

    The empty word is returned as ``""``, so test the result against ``None``.
    """
    for word, vec in reachable_basis(A):
        if sum(x * y for x, y in zip(vec, A.final)):
            return word
    return None


def equivalent(A: WeightedAutomaton, B: WeightedAutomaton) -> str | None:
    """``None`` when equivalent, else a shortest word on which they differ."""
    _check_alphabets(A, B)
    return is_zero(sub(A, B))


# -- commutativity ------------------------------------------------------------


def _place(blocks: int, dim: int, parts: dict[tuple[int, int], Matrix]) -> Matrix:
    n = blocks * dim
    rows = [[0] * n for _ in range(n)]
    for (bi, bj), m in parts.items():
        for i in range(dim):
            for j in range(dim):
                if m[i][j]:
                    rows[bi * dim + i][bj * dim + j] += m[i][j]
    return tuple(tuple(r) for r in rows)


def compose_transposition(A: WeightedAutomaton) -> WeightedAutomaton:
    """Automaton for ``w ↦ A(w')`` where ``w'`` swaps the first two letters of ``w``.

    Blocks: a start copy, one holding copy per letter, and a running copy.
    """
    sigma = A.alphabet
    n = A.dim
    k = len(sigma)
    blocks = k + 2
    start, run = 0, k + 1
    hold = {a: 1 + i for i, a in enumerate(sigma)}
    eye = identity(n)
    mats = {}
    for b in sigma:
        parts = {(start, hold[b]): eye, (run, run): A.matrices[b]}
        for a in sigma:
            parts[(hold[a], run)] = matmul(A.matrices[b], A.matrices[a])
        mats[b] = _place(blocks, n, parts)
    initial = list(A.initial) + [0] * (n * (blocks - 1))
    final = list(A.final)
    for a in sigma:
        final += list(matvec(A.matrices[a], A.final))
    final += list(A.final)
    return WeightedAutomaton(sigma, tuple(initial), mats, tuple(final))


def compose_cycle(A: WeightedAutomaton) -> WeightedAutomaton:
    """Automaton for ``w ↦ A(w')`` where ``w'`` moves the last letter of ``w`` to the front.

    For each letter ``c`` the automaton guesses that ``c`` is last, applies it
    first, and then skips exactly one occurrence of ``c`` which must be the
    final letter. Block ``P_c`` means "the last letter read was ``c`` and it
    has not been applied yet".
    """
    sigma = A.alphabet
    n = A.dim
    k = len(sigma)
    blocks = 1 + 2 * k
    N = {c: 1 + 2 * i for i, c in enumerate(sigma)}
    P = {c: 2 + 2 * i for i, c in enumerate(sigma)}
    eye = identity(n)
    mats = {}
    for x in sigma:
        parts = {}
        for c in sigma:
            if x == c:
                parts[(N[c], P[c])] = eye
                parts[(P[c], P[c])] = A.matrices[c]
            else:
                parts[(N[c], N[c])] = A.matrices[x]
                parts[(P[c], N[c])] = matmul(A.matrices[c], A.matrices[x])
        mats[x] = _place(blocks, n, parts)
    initial = list(A.initial)
    final = list(A.final)
    for c in sigma:
        initial += list(vecmat(A.initial, A.matrices[c])) + [0] * n
        final += [0] * n + list(A.final)
    return WeightedAutomaton(sigma, tuple(initial), mats, tuple(final))


def swap_first_two(word: str) -> str:
    return word[1] + word[0] + word[2:] if len(word) >= 2 else word


def rotate_last_to_front(word: str) -> str:
    return word[-1] + word[:-1] if len(word) >= 2 else word


def is_commutative(A: WeightedAutomaton) -> tuple[str, str] | None:
    """``None`` when commutative, else ``(w, σ(w))`` with ``A(w) != A(σ(w))``."""
    w = equivalent(A, compose_transposition(A))
    if w is not None:
        return w, swap_first_two(w)
    w = equivalent(A, compose_cycle(A))
    if w is not None:
        return w, rotate_last_to_front(w)
    return None


# -- monoid presentations -----------------------------------------------------


@dataclass(frozen=True)
class MonoidPresentation:
    """A finite monoid, a morphism from letters, and a production function of arity ``degree + 1``.

    ``table[i][j]`` is the index of ``elements[i] * elements[j]``. Production
    entries that are absent count as 0.
    """

    elements: tuple[Hashable, ...]
    identity: Hashable
    table: tuple[tuple[int, ...], ...]
    morphism: Mapping[str, Hashable]
    degree: int
    production: Mapping[tuple, int]

    __hash__ = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        object.__setattr__(self, "production", {tuple(k): int(v) for k, v in self.production.items()})
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError("repeated monoid element")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table has the wrong shape")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("multiplication table entry out of range")
        if self.identity not in self.elements:
            raise ValueError("identity is not an element")
        e = self.elements.index(self.identity)
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise ValueError("identity element does not act as identity")
        if not validate_associative(self.table):
            raise ValueError("multiplication table is not associative")
        for a, m in self.morphism.items():
            if m not in self.elements:
                raise ValueError(f"morphism maps {a!r} outside the monoid")
        if self.degree < 0:
            raise ValueError("degree must be natural")
        for key in self.production:
            if len(key) != self.degree + 1:
                raise ValueError("production tuple has the wrong arity")
            if any(x not in self.elements for x in key):
                raise ValueError("production tuple mentions an unknown element")

    def index(self, x) -> int:
        return self.elements.index(x)

    def mul(self, x, y):
        return self.elements[self.table[self.index(x)][self.index(y)]]

    def image(self, word: str):
        acc = self.identity
        for letter in word:
            if letter not in self.morphism:
                raise ValueError(f"letter {letter!r} has no image")
            acc = self.mul(acc, self.morphism[letter])
        return acc

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(self.morphism))


def validate_associative(table: Sequence[Sequence[int]]) -> bool:
    n = len(table)
    return all(
        table[table[i][j]][k] == table[i][table[j][k]]
        for i in range(n)
        for j in range(n)
        for k in range(n)
    )


def evaluate_presentation(P: MonoidPresentation, word: str) -> int:
    """Sum of the production over all splittings of ``word`` into ``degree + 1`` factors."""
    n = len(word)
    total = 0
    for cuts in itertools.combinations_with_replacement(range(n + 1), P.degree):
        bounds = (0,) + cuts + (n,)
        key = tuple(P.image(word[bounds[i] : bounds[i + 1]]) for i in range(P.degree + 1))
        total += P.production.get(key, 0)
    return total


def presentation_to_automaton(P: MonoidPresentation, alphabet: Sequence[str] | None = None, max_states: int = 20_000) -> WeightedAutomaton:
    """Automaton equivalent to the presentation.

    A state is ``(closed, current)``: the images of the completed factors and
    the image of the factor being read. Reading a letter either extends the
    current factor or closes it, skips some empty factors and opens a new one.
    """
    sigma = tuple(alphabet) if alphabet is not None else P.alphabet
    e = P.identity
    d = P.degree
    start = ((), e)
    index = {start: 0}
    order = [start]
    edges: dict[str, list[tuple[int, int]]] = {a: [] for a in sigma}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        closed, cur = state
        src = index[state]
        for a in sigma:
            m = P.morphism[a]
            targets = [(closed, P.mul(cur, m))]
            for t in range(d - len(closed)):
                targets.append((closed + (cur,) + (e,) * t, m))
            for tgt in targets:
                if tgt not in index:
                    if len(order) >= max_states:
                        raise ValueError("presentation automaton exceeds the state guard")
                    index[tgt] = len(order)
                    order.append(tgt)
                    queue.append(tgt)
                edges[a].append((src, index[tgt]))
    n = len(order)
    mats = {}
    for a in sigma:
        rows = [[0] * n for _ in range(n)]
        for i, j in edges[a]:
            rows[i][j] += 1
        mats[a] = rows
    final = []
    for closed, cur in order:
        key = closed + (cur,) + (e,) * (d - len(closed))
        final.append(P.production.get(key, 0))
    initial = [1] + [0] * (n - 1)
    return WeightedAutomaton(sigma, tuple(initial), mats, tuple(final))


def is_aperiodic_monoid(table: Sequence[Sequence[int]]) -> bool:
    """Every element satisfies ``x^(n+1) = x^n`` with ``n`` the monoid size."""
    n = len(table)
    for x in range(n):
        powers = [None, x]
        for _ in range(n):
            powers.append(table[powers[-1]][x])
        if powers[n + 1] != powers[n]:
            return False
    return True
