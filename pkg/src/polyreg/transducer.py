"""Transducers whose transitions emit functions, and the canonical residual construction.

States are words. Running on ``w`` from state ``q`` sums, at each step, the
label of the transition taken applied to the rest of the input, and finally
adds the value attached to the last state.

The residual construction needs the order ``v ⪯ u`` meaning that
``w ↦ f(uw) - f(vw)`` belongs to the ℕ-polyregular functions of degree
``k - 1``; for ``k = 0`` that class is taken to hold only the zero function.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .classes import INCONCLUSIVE, NO, YES, ClassificationReport
from .decomp import (
    CommutativeDecomposition,
    constant_decomp,
    counts,
    degree,
    eval_decomp,
    is_npoly,
    is_nsf,
    is_zero_decomp,
    is_zsf,
    shift_word,
    sub_decomp,
    synthesize_automaton,
)
from .automata import WeightedAutomaton


def shortlex(word: str):
    return (len(word), word)


@dataclass(frozen=True)
class HTransducer:
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    delta: Mapping[tuple[str, str], str]
    lam: Mapping[tuple[str, str], CommutativeDecomposition]
    final: Mapping[str, int]

    __hash__ = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(sorted(set(self.states), key=shortlex)))
        object.__setattr__(self, "delta", dict(self.delta))
        object.__setattr__(self, "lam", dict(self.lam))
        object.__setattr__(self, "final", {q: int(v) for q, v in self.final.items()})
        Q = set(self.states)
        if "" not in Q:
            raise ValueError("the empty word must be a state")
        for q in self.states:
            if q not in self.final:
                raise ValueError(f"state {q!r} has no final value")
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise ValueError(f"transition ({q!r}, {a!r}) is missing")
                if self.delta[(q, a)] not in Q:
                    raise ValueError(f"transition ({q!r}, {a!r}) leaves the state set")
                if (q, a) not in self.lam:
                    raise ValueError(f"label for ({q!r}, {a!r}) is missing")

    def run(self, word: str, state: str = "") -> str:
        for a in word:
            state = self.delta[(state, a)]
        return state

    def __call__(self, word: str) -> int:
        return eval_transducer(self, word)


def eval_transducer(T: HTransducer, word: str, state: str = "") -> int:
    total = 0
    for i, a in enumerate(word):
        if a not in T.alphabet:
            raise ValueError(f"letter {a!r} is not in the alphabet")
        total += T.lam[(state, a)].eval_word(word[i + 1 :])
        state = T.delta[(state, a)]
    return total + T.final[state]


def same_function(D1: CommutativeDecomposition, D2: CommutativeDecomposition) -> bool:
    return is_zero_decomp(sub_decomp(D1, D2))


def same_transducer(T1: HTransducer, T2: HTransducer) -> bool:
    if T1.alphabet != T2.alphabet or T1.states != T2.states or T1.delta != T2.delta or T1.final != T2.final:
        return False
    return all(same_function(T1.lam[key], T2.lam[key]) for key in T1.lam)


def transducer_to_automaton(T: HTransducer) -> WeightedAutomaton:
    """Weighted automaton computing the same function.

    A deterministic copy of the control states carries the final values; on
    each step it may also branch into the automaton of the label it just
    crossed, which then reads the rest of the word.
    """
    Q = list(T.states)
    idx = {q: i for i, q in enumerate(Q)}
    labels = []
    offset = len(Q)
    for q in Q:
        for a in T.alphabet:
            d = T.lam[(q, a)]
            if is_zero_decomp(d):
                continue
            B = synthesize_automaton(d)
            labels.append(((q, a), B, offset))
            offset += B.dim
    n = offset
    mats = {}
    for x in T.alphabet:
        rows = [[0] * n for _ in range(n)]
        for q in Q:
            rows[idx[q]][idx[T.delta[(q, x)]]] += 1
        for (q, a), B, off in labels:
            if a == x:
                for j, v in enumerate(B.initial):
                    rows[idx[q]][off + j] += v
            M = B.matrices[x]
            for i in range(B.dim):
                for j in range(B.dim):
                    if M[i][j]:
                        rows[off + i][off + j] += M[i][j]
        mats[x] = rows
    initial = [0] * n
    initial[idx[""]] = 1
    final = [T.final[q] for q in Q]
    for _, B, _ in labels:
        final.extend(B.final)
    return WeightedAutomaton(T.alphabet, tuple(initial), mats, tuple(final))


# -- the residual order ------------------------------------------------------------


def derivative(f: CommutativeDecomposition, u: str, v: str) -> CommutativeDecomposition:
    """``w ↦ f(uw) - f(vw)``."""
    return sub_decomp(shift_word(f, u), shift_word(f, v))


@dataclass
class ResidualOrderCheck:
    u: str
    v: str
    verdict: bool
    certificate: ClassificationReport
    derivative: CommutativeDecomposition = field(repr=False)


def resleq(f: CommutativeDecomposition, u: str, v: str, k: int) -> ResidualOrderCheck:
    """Decide ``v ⪯ u``: the derivative ``f(u·) - f(v·)`` is ℕ-polyregular of degree ``k - 1``."""
    if k < 0:
        raise ValueError("k must be natural")
    d = derivative(f, u, v)
    if k == 0:
        zero = is_zero_decomp(d)
        rep = ClassificationReport("Zero", YES if zero else NO, {})
        return ResidualOrderCheck(u, v, zero, rep, d)
    rep = is_npoly(d, k - 1)
    return ResidualOrderCheck(u, v, rep.yes, rep, d)


# -- construction -------------------------------------------------------------------


class _Stepper:
    """Memoises comparisons so that repeated queries are cheap."""

    def __init__(self, f: CommutativeDecomposition, k: int):
        self.f, self.k = f, k
        self.cache: dict[tuple[str, str], ResidualOrderCheck] = {}

    def check(self, u: str, v: str) -> ResidualOrderCheck:
        key = (u, v)
        if key not in self.cache:
            self.cache[key] = resleq(self.f, u, v, self.k)
        return self.cache[key]


def build_residual_transducer(
    f: CommutativeDecomposition,
    k: int,
    cap: int = 10_000,
    choose: Callable[[list[str]], str] | None = None,
    check_invariants: bool = False,
) -> HTransducer | None:
    """Worklist construction of the canonical ``k``-residual transducer.

    ``choose`` picks the next pending word (shortlex minimum by default).
    Returns ``None`` when ``cap`` worklist steps or states are exceeded.
    """
    sigma = f.alphabet
    st = _Stepper(f, k)
    Q = [""]
    Qset = {""}
    O = list(sigma)
    delta: dict[tuple[str, str], str] = {}
    lam: dict[tuple[str, str], CommutativeDecomposition] = {}
    zero = constant_decomp(sigma, 0)
    steps = 0
    while O:
        steps += 1
        if steps > cap or len(Q) + len(O) > cap:
            return None
        if check_invariants:
            _assert_worklist(Qset, O)
        ua = choose(list(O)) if choose else min(O, key=shortlex)
        O.remove(ua)
        u, a = ua[:-1], ua[-1]
        target = None
        # candidates are prefixes of ua already in Q, longest first
        for n in range(len(ua), -1, -1):
            w = ua[:n]
            if w in Qset and st.check(ua, w).verdict:
                target = w
                break
        if target is not None:
            delta[(u, a)] = target
            lam[(u, a)] = st.check(ua, target).derivative
        else:
            Q.append(ua)
            Qset.add(ua)
            delta[(u, a)] = ua
            lam[(u, a)] = zero
            O.extend(ua + b for b in sigma)
    final = {q: f.eval_word(q) for q in Q}
    return HTransducer(sigma, tuple(Q), delta, lam, final)


def _assert_worklist(Q: set[str], O: list[str]) -> None:
    union = Q | set(O)
    for w in union:
        assert w == "" or w[:-1] in union, f"{w!r} has no parent in Q ∪ O"
    for x in O:
        for y in O:
            assert x == y or not y.startswith(x), "pending words must be prefix-incomparable"
        assert not any(q != x and q.startswith(x) for q in union), "pending words must be maximal"


def random_chooser(seed: int) -> Callable[[list[str]], str]:
    rng = random.Random(seed)
    return lambda items: rng.choice(sorted(items, key=shortlex))


# -- checks -------------------------------------------------------------------------


@dataclass
class CanonicalCheck:
    ok: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.ok


def words_up_to(alphabet: Sequence[str], n: int) -> Iterable[str]:
    import itertools

    for length in range(n + 1):
        for letters in itertools.product(alphabet, repeat=length):
            yield "".join(letters)


def verify_canonical(T: HTransducer, f: CommutativeDecomposition, k: int, length: int = 6) -> CanonicalCheck:
    """Re-check every defining clause of the ``k``-residual transducer of ``f``."""
    fails = []
    if T.alphabet != f.alphabet:
        return CanonicalCheck(False, ["alphabet differs from the function's"])
    Q = set(T.states)
    # labels must be in the right class
    for key, d in T.lam.items():
        ok = is_zero_decomp(d) if k == 0 else is_npoly(d, k - 1).yes
        if not ok:
            fails.append(f"label on {key} is outside the label class")
    # computes f (bounded cross-check)
    for w in words_up_to(T.alphabet, length):
        if eval_transducer(T, w) != f.eval_word(w):
            fails.append(f"value differs on {w!r}")
            break
    if any(q[:-1] not in Q for q in Q if q):
        fails.append("state set is not prefix-closed")
    if "" not in Q:
        fails.append("empty word is not a state")
    seen = {""}
    queue = deque([""])
    while queue:
        q = queue.popleft()
        for a in T.alphabet:
            t = T.delta[(q, a)]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    if seen != Q:
        fails.append("some states are unreachable")
    st = _Stepper(f, k)
    for q in T.states:
        if T.final[q] != f.eval_word(q):
            fails.append(f"final value of {q!r} is not f({q!r})")
        for a in T.alphabet:
            ua = q + a
            expected = None
            for n in range(len(ua), -1, -1):
                w = ua[:n]
                if w in Q and st.check(ua, w).verdict:
                    expected = w
                    break
            if T.delta[(q, a)] != expected:
                fails.append(f"transition ({q!r}, {a!r}) should go to {expected!r}")
                continue
            if not same_function(T.lam[(q, a)], derivative(f, ua, expected)):
                fails.append(f"label on ({q!r}, {a!r}) is not the derivative")
    return CanonicalCheck(not fails, fails)


def transition_monoid(T: HTransducer) -> list[tuple[str, tuple[int, ...]]]:
    """Elements of the transition monoid as ``(shortest word, map on state indices)``, shortlex order."""
    idx = {q: i for i, q in enumerate(T.states)}
    gens = {a: tuple(idx[T.delta[(q, a)]] for q in T.states) for a in T.alphabet}
    ident = tuple(range(len(T.states)))
    seen = {ident: ""}
    order = [("", ident)]
    queue = deque([("", ident)])
    while queue:
        word, rho = queue.popleft()
        for a in T.alphabet:
            g = gens[a]
            nxt = tuple(g[rho[i]] for i in range(len(rho)))
            if nxt not in seen:
                seen[nxt] = word + a
                order.append((word + a, nxt))
                queue.append((word + a, nxt))
    return order


def find_counter(T: HTransducer) -> tuple[str, str] | None:
    """A counter ``(q, u)``: ``δ(q, u) != q`` but ``δ(q, u^n) = q`` for some ``n >= 2``."""
    for word, rho in transition_monoid(T):
        n = len(rho)
        for start in range(n):
            # walk until a repeat to find whether start lies on a cycle
            x, steps = rho[start], 1
            while x != start and steps <= n:
                x, steps = rho[x], steps + 1
            if x == start and steps >= 2:
                return T.states[start], word
    return None


def classify_via_transducer(f: CommutativeDecomposition, k: int, cap: int = 10_000) -> ClassificationReport:
    npoly = is_npoly(f, k)
    T = build_residual_transducer(f, k, cap=cap)
    cert: dict = {"npoly": npoly, "transducer": T}
    if T is None:
        cert["transducer_exists"] = None
        return ClassificationReport("ResidualTransducer", INCONCLUSIVE, cert)
    cert["transducer_exists"] = True
    cert["states"] = list(T.states)
    cert["counter"] = find_counter(T)
    cert["nsf"] = is_nsf(f)
    cert["zsf"] = is_zsf(f)
    if degree(f) == 0:
        T0 = T if k == 0 else build_residual_transducer(f, 0, cap=cap)
        if T0 is not None:
            free0 = find_counter(T0) is None
            cert["counter_free_0"] = free0
            cert["aperiodic_matches"] = free0 == cert["zsf"].yes
    return ClassificationReport("ResidualTransducer", YES, cert)
