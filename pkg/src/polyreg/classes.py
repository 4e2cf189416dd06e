"""Classifiers for polynomial classes, each returning a certificate.

PolyStrNNeg membership is decided by a memoised recursion:

* a polynomial with a negative maximal monomial fails outright;
* otherwise some translation ``τ_K(p)`` has only natural coefficients, and
  every valuation whose values are all ``>= K`` then restricts to a natural
  polynomial, so only the single restrictions ``X_i = c`` with ``c < K`` need
  a recursive look.

The reported bound is the largest ``K`` met during the recursion. The
closed-form bound from the constructive argument is available as
:func:`str_nneg_bound`; it is valid but far too large to enumerate below for
anything beyond toy inputs (see :mod:`polyreg.oracle`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .poly import Monomial, Polynomial, to_binomial_basis

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


class TooLarge(RuntimeError):
    """Raised when an enumeration would exceed its guard."""


@dataclass
class ClassificationReport:
    class_name: str
    verdict: str
    certificate: dict[str, Any] = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.verdict == YES

    def record(self) -> str:
        parts = [f"class={self.class_name}", f"verdict={self.verdict}"]
        cert = self.certificate
        if "witness" in cert and cert["witness"] is not None:
            parts.append(f"witness={format_valuation(cert['witness'])}")
        if cert.get("monomial") is not None:
            parts.append(f"monomial={cert['monomial']}")
        if "bound" in cert:
            parts.append(f"bound={cert['bound']}")
        return " ".join(parts)


def format_valuation(nu: dict[str, int]) -> str:
    return "{" + ",".join(f"{k}:{v}" for k, v in nu.items()) + "}"


def _require_integer(p: Polynomial) -> None:
    if not p.has_integer_coefficients():
        raise ValueError("polynomial must have integer coefficients")


def has_nonneg_maximal_monomials(p: Polynomial) -> bool:
    _require_integer(p)
    return all(m.coefficient > 0 for m in p.maximal_monomials())


def negative_maximal_monomial(p: Polynomial) -> Monomial | None:
    """Graded-lex smallest maximal monomial with a negative coefficient."""
    bad = [m for m in p.maximal_monomials() if m.coefficient < 0]
    return bad[-1] if bad else None


def sampled_nonnegative(p: Polynomial, bound: int) -> tuple[dict[str, int], Fraction] | None:
    """First point of ``{0..bound}^k`` (product order) where ``p`` is negative, else ``None``."""
    names = p.used_variables()
    for point in itertools.product(range(bound + 1), repeat=len(names)):
        nu = dict(zip(names, point))
        value = p.evaluate(nu)
        if value < 0:
            return nu, value
    return None


# -- PolyStrNNeg ----------------------------------------------------------


def _translation_threshold(p: Polynomial) -> int:
    """Least ``K`` with ``τ_K(p)`` in ``ℕ[X]``; assumes all maximal monomials positive."""
    if p.has_natural_coefficients():
        return 0
    hi = 1
    while not p.translate(hi).has_natural_coefficients():
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if p.translate(mid).has_natural_coefficients():
            hi = mid
        else:
            lo = mid
    return hi


@lru_cache(maxsize=None)
def _threshold(p: Polynomial) -> int:
    return _translation_threshold(p)


@lru_cache(maxsize=None)
def _fails(p: Polynomial, free: frozenset) -> bool:
    """Is there a valuation leaving ``free`` unfixed whose restriction has a negative maximal monomial?"""
    if negative_maximal_monomial(p) is not None:
        return True
    K = _threshold(p)
    for x in p.used_variables():
        if x in free:
            continue
        for c in range(K):
            if _fails(p.restrict({x: c}), free & frozenset(p.restrict({x: c}).used_variables())):
                return True
    return False


@lru_cache(maxsize=None)
def _max_bound(p: Polynomial) -> int:
    """Largest translation threshold met by the decision recursion (passing inputs only)."""
    K = _threshold(p)
    best = K
    for x in p.used_variables():
        for c in range(K):
            best = max(best, _max_bound(p.restrict({x: c})))
    return best


def _lex_witness(p: Polynomial) -> dict[str, int]:
    """Lexicographically least failing valuation, with ``unfixed < 0 < 1 < ...`` per variable."""
    names = list(p.used_variables())
    nu: dict[str, int] = {}
    free: set[str] = set()
    cur = p
    for i, x in enumerate(names):
        if x not in cur.used_variables():
            free.add(x)
            continue
        if _fails(cur, frozenset((free | {x}) & set(cur.used_variables()))):
            free.add(x)
            continue
        c = 0
        while True:
            nxt = cur.restrict({x: c})
            if _fails(nxt, frozenset(free & set(nxt.used_variables()))):
                nu[x] = c
                cur = nxt
                break
            c += 1
    return nu


def failing_valuations(p: Polynomial, box: int, limit: int = 32, budget: int = 200_000) -> list[dict[str, int]]:
    """All failing valuations with the fewest fixed variables and values ``< box``.

    A valuation fails when the restriction has a negative maximal monomial.
    Returns at most ``limit`` entries; an empty list when the box search
    exceeds ``budget`` restrictions.
    """
    names = p.used_variables()
    spent = 0
    for size in range(len(names) + 1):
        found = []
        for subset in itertools.combinations(names, size):
            for values in itertools.product(range(box), repeat=size):
                spent += 1
                if spent > budget:
                    return []
                nu = dict(zip(subset, values))
                if negative_maximal_monomial(p.restrict(nu)) is not None:
                    found.append(nu)
        if found:
            found.sort(key=lambda nu: tuple((0,) if v not in nu else (1, nu[v]) for v in names))
            return found[:limit]
    return []


def is_poly_str_nneg(p: Polynomial) -> ClassificationReport:
    _require_integer(p)
    q = p.with_variables(p.used_variables())
    if not _fails(q, frozenset()):
        return ClassificationReport("PolyStrNNeg", YES, {"bound": _max_bound(q)})
    nu = _lex_witness(q)
    restricted = q.restrict(nu)
    mono = negative_maximal_monomial(restricted)
    box = max(1, _threshold_or_zero(q))
    cert = {
        "witness": nu,
        "monomial": str(mono),
        "restriction": str(restricted),
        "bound": _threshold_or_zero(q),
        "witnesses": [
            {"valuation": w, "monomial": str(negative_maximal_monomial(q.restrict(w)))}
            for w in failing_valuations(q, box)
        ],
    }
    return ClassificationReport("PolyStrNNeg", NO, cert)


def _threshold_or_zero(p: Polynomial) -> int:
    if negative_maximal_monomial(p) is not None:
        return 0
    return _threshold(p)


def str_nneg_bound(p: Polynomial, guard: int = 200_000) -> int:
    """Closed-form bound ``K`` of the constructive argument.

    Constants give 0. Otherwise ``K0 = D * a`` with ``a`` the largest absolute
    coefficient and ``D`` the size of the downward closure of the exponent
    vectors, and ``K = K0`` plus the largest bound over restrictions fixing at
    least one variable to a value in ``{0..K0}``. Raises :class:`TooLarge`
    once more than ``guard`` restrictions have been visited in total.
    """
    _require_integer(p)
    budget = [guard]
    return _str_bound(p.with_variables(p.used_variables()), budget, {})


def _str_bound(p: Polynomial, budget: list[int], memo: dict) -> int:
    if p in memo:
        return memo[p]
    names = p.used_variables()
    if not names:
        return 0
    alpha = max(abs(c) for c in p.coefficients())
    K0 = int(len(p.support_closure()) * alpha)
    best = 0
    if len(names) > 1:
        budget[0] -= (K0 + 2) ** len(names)
        if budget[0] < 0:
            raise TooLarge("bound recursion exceeds its enumeration guard")
        for size in range(1, len(names) + 1):
            for subset in itertools.combinations(names, size):
                for values in itertools.product(range(K0 + 1), repeat=size):
                    sub = p.restrict(dict(zip(subset, values)))
                    best = max(best, _str_bound(sub, budget, memo))
    memo[p] = K0 + best
    return K0 + best


# -- integer-valued and strongly natural ------------------------------------


def is_integer_valued(p: Polynomial) -> ClassificationReport:
    table = to_binomial_basis(p)
    coeffs = {alpha: c for alpha, c in sorted(table.items())}
    bad = [alpha for alpha, c in coeffs.items() if c.denominator != 1]
    cert: dict[str, Any] = {"variables": list(p.variables), "coefficients": coeffs}
    if bad:
        cert["offending"] = bad[0]
        return ClassificationReport("IntegerValued", NO, cert)
    return ClassificationReport("IntegerValued", YES, cert)


def is_strongly_natural(p: Polynomial) -> ClassificationReport:
    alpha = p.denominator_lcm()
    scaled = p * alpha
    iv = is_integer_valued(p)
    sn = is_poly_str_nneg(scaled)
    cert: dict[str, Any] = {"alpha": alpha, "integer_valued": iv, "str_nneg": sn}
    if not iv.yes:
        cert["offending"] = iv.certificate["offending"]
        return ClassificationReport("StronglyNatural", NO, cert)
    if not sn.yes:
        for key in ("witness", "monomial", "bound"):
            cert[key] = sn.certificate[key]
        return ClassificationReport("StronglyNatural", NO, cert)
    cert["bound"] = sn.certificate["bound"]
    return ClassificationReport("StronglyNatural", YES, cert)


def clear_caches() -> None:
    for fn in (_threshold, _fails, _max_bound):
        fn.cache_clear()


def lcm_of(values) -> int:
    return math.lcm(1, *values)
