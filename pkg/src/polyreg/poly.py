"""Exact multivariate polynomials over the rationals.

Polynomials are immutable. Every polynomial carries an ordered tuple of
indeterminate names (sorted with a natural key, so ``X2 < X10``) and a
mapping from exponent vectors to non-zero :class:`~fractions.Fraction`
coefficients. Binary operations first align both operands on the union of
their indeterminates.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponents = tuple[int, ...]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def var_key(name: str):
    """Natural sort key: digit runs compare numerically."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def _sorted_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Monomial:
    """A single term: sorted ``(name, exponent)`` pairs and a non-zero coefficient."""

    exponents: tuple[tuple[str, int], ...]
    coefficient: Fraction

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("monomial coefficient must be non-zero")
        if any(e <= 0 for _, e in self.exponents):
            raise ValueError("stored exponents must be positive")

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def divides(self, other: "Monomial") -> bool:
        """Exponentwise divisibility; coefficients are ignored."""
        theirs = dict(other.exponents)
        return all(theirs.get(v, 0) >= e for v, e in self.exponents)

    def monic_str(self) -> str:
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exponents) or "1"

    def __str__(self) -> str:
        body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exponents)
        if not body:
            return _fmt_coef(self.coefficient)
        if self.coefficient == 1:
            return body
        if self.coefficient == -1:
            return "-" + body
        return f"{_fmt_coef(self.coefficient)}*{body}"


class Polynomial:
    """Immutable polynomial in ``ℚ[variables]``."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[Exponents, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        for v in variables:
            if not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        order = _sorted_vars(variables)
        clean: dict[Exponents, Fraction] = {}
        if terms:
            perm = [variables.index(v) for v in order]
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != len(variables):
                    raise ValueError("exponent vector length does not match variables")
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                c = _as_fraction(c)
                if c:
                    key = tuple(exps[i] for i in perm)
                    c = clean.get(key, 0) + c
                    if c:
                        clean[key] = c
                    else:
                        clean.pop(key, None)
        object.__setattr__(self, "variables", order)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, c, variables: Iterable[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls((name,), {(1,): 1})

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "Polynomial":
        return cls(variables)

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial], variables: Iterable[str] = ()) -> "Polynomial":
        monomials = list(monomials)
        names = _sorted_vars(list(variables) + [v for m in monomials for v, _ in m.exponents])
        idx = {v: i for i, v in enumerate(names)}
        terms: dict[Exponents, Fraction] = {}
        for m in monomials:
            e = [0] * len(names)
            for v, k in m.exponents:
                e[idx[v]] += k
            terms[tuple(e)] = terms.get(tuple(e), 0) + m.coefficient
        return cls(names, terms)

    # -- alignment ------------------------------------------------------

    def with_variables(self, variables: Iterable[str]) -> "Polynomial":
        """Re-express over a superset of the current indeterminates."""
        target = _sorted_vars(variables)
        if target == self.variables:
            return self
        missing = set(self.variables) - set(target)
        if missing:
            used = self.used_variables()
            if missing & set(used):
                raise ValueError(f"cannot drop used variables {sorted(missing & set(used))}")
        idx = [target.index(v) if v in target else None for v in self.variables]
        terms = {}
        for exps, c in self.terms.items():
            e = [0] * len(target)
            for i, k in zip(idx, exps):
                if i is not None:
                    e[i] = k
            terms[tuple(e)] = c
        return Polynomial(target, terms)

    def _align(self, other) -> tuple["Polynomial", "Polynomial"]:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(_as_fraction(other), self.variables)
        if other.variables == self.variables:
            return self, other
        names = set(self.variables) | set(other.variables)
        return self.with_variables(names), other.with_variables(names)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(a.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._align(other)
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, c) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial(self.variables, {e: v / c for e, v in self.terms.items()})

    # -- comparison -----------------------------------------------------

    def _normal_form(self) -> frozenset:
        return frozenset(
            (tuple((v, k) for v, k in zip(self.variables, e) if k), c) for e, c in self.terms.items()
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._normal_form() == other._normal_form()

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self._normal_form())
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0 here."""
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficients(self) -> list[Fraction]:
        return list(self.terms.values())

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        unknown = set(exponents) - set(self.variables)
        if any(exponents[v] for v in unknown):
            return Fraction(0)
        key = tuple(exponents.get(v, 0) for v in self.variables)
        return self.terms.get(key, Fraction(0))

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def has_natural_coefficients(self) -> bool:
        return all(c.denominator == 1 and c >= 0 for c in self.terms.values())

    def denominator_lcm(self) -> int:
        return math.lcm(1, *(c.denominator for c in self.terms.values()))

    def sorted_exponents(self) -> list[Exponents]:
        """Exponent vectors in graded lexicographic order, largest first."""
        return sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)

    def monomial(self, exps: Exponents) -> Monomial:
        return Monomial(tuple((v, k) for v, k in zip(self.variables, exps) if k), self.terms[exps])

    def monomials(self) -> list[Monomial]:
        return [self.monomial(e) for e in self.sorted_exponents()]

    def maximal_monomials(self) -> list[Monomial]:
        """Monomials maximal under exponentwise divisibility, graded-lex descending."""
        exps = list(self.terms)
        out = []
        for e in exps:
            if not any(f != e and all(a <= b for a, b in zip(e, f)) for f in exps):
                out.append(e)
        out.sort(key=lambda e: (sum(e), e), reverse=True)
        return [self.monomial(e) for e in out]

    def support_closure(self) -> set[Exponents]:
        """Exponent vectors dividing some monomial of the polynomial (constant included)."""
        seen: set[Exponents] = set()
        for e in self.terms:
            for d in itertools.product(*(range(k + 1) for k in e)):
                seen.add(d)
        if not seen:
            seen.add((0,) * len(self.variables))
        return seen

    # -- evaluation and substitution -------------------------------------

    def evaluate(self, point) -> Fraction:
        """Evaluate at a mapping ``name -> value`` or a sequence aligned with ``variables``."""
        if isinstance(point, Mapping):
            missing = [v for v in self.used_variables() if v not in point]
            if missing:
                raise ValueError(f"missing values for {missing}")
            values = [point.get(v, 0) for v in self.variables]
        else:
            values = list(point)
            if len(values) != len(self.variables):
                raise ValueError("point has wrong arity")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(values, e):
                if k:
                    t *= x**k
            total += t
        return total

    __call__ = evaluate

    def restrict(self, valuation: Mapping[str, int]) -> "Polynomial":
        """Fix the indeterminates in ``valuation``; they disappear from the result."""
        unknown = set(valuation) - set(self.variables)
        if unknown:
            raise ValueError(f"valuation fixes unknown variables {sorted(unknown)}")
        if not valuation:
            return self
        keep = [i for i, v in enumerate(self.variables) if v not in valuation]
        fixed = [(i, valuation[v]) for i, v in enumerate(self.variables) if v in valuation]
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            t = c
            for i, x in fixed:
                if e[i]:
                    t *= Fraction(x) ** e[i]
            if t:
                k = tuple(e[i] for i in keep)
                terms[k] = terms.get(k, 0) + t
        return Polynomial([self.variables[i] for i in keep], terms)

    def substitute(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneously replace indeterminates by polynomials."""
        names = set(self.variables) - set(mapping)
        for p in mapping.values():
            names |= set(p.variables)
        result = Polynomial.zero(names)
        powers: dict[tuple[str, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(c, names)
            for v, k in zip(self.variables, e):
                if not k:
                    continue
                key = (v, k)
                if key not in powers:
                    base = mapping[v] if v in mapping else Polynomial.var(v)
                    powers[key] = base**k
                term = term * powers[key]
            result = result + term
        return result

    def translate(self, shift) -> "Polynomial":
        """``P(X1 + K, ..., Xk + K)``; ``shift`` may also map names to individual offsets."""
        if isinstance(shift, Mapping):
            offsets = [_as_fraction(shift.get(v, 0)) for v in self.variables]
        else:
            offsets = [_as_fraction(shift)] * len(self.variables)
        if not any(offsets):
            return self
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            ranges = [range(k + 1) for k in e]
            for g in itertools.product(*ranges):
                t = c
                for k, j, off in zip(e, g, offsets):
                    if k != j:
                        t *= math.comb(k, j) * off ** (k - j)
                if t:
                    terms[g] = terms.get(g, 0) + t
        return Polynomial(self.variables, terms)

    def diff_k(self, k: int) -> "Polynomial":
        """Discrete derivative ``τ_K(P) − P``."""
        return self.translate(k) - self

    def partial_difference(self, name: str) -> "Polynomial":
        """Forward difference in one indeterminate."""
        if name not in self.variables:
            raise ValueError(f"{name!r} is not a variable of this polynomial")
        return self.translate({name: 1}) - self

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, e in enumerate(self.sorted_exponents()):
            s = str(self.monomial(e))
            if i == 0:
                parts.append(s)
            elif s.startswith("-"):
                parts.append("- " + s[1:])
            else:
                parts.append("+ " + s)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, variables={self.variables})"


def polynomial(text: str) -> Polynomial:
    """Shorthand for :func:`polyreg.parse.parse_polynomial`."""
    from .parse import parse_polynomial

    return parse_polynomial(text)


def maximal_monomials(p: Polynomial) -> list[Monomial]:
    return p.maximal_monomials()


def restrict(p: Polynomial, valuation: Mapping[str, int]) -> Polynomial:
    return p.restrict(valuation)


def translate(p: Polynomial, k: int) -> Polynomial:
    return p.translate(k)


def diff_k(p: Polynomial, k: int) -> Polynomial:
    return p.diff_k(k)


def partial_discrete_derivative(p: Polynomial, name: str) -> Polynomial:
    return p.partial_difference(name)


# -- binomial basis -----------------------------------------------------


@dataclass(frozen=True)
class BinomialTerm:
    """``coefficient * prod C(var - shift, degree)`` with at most one factor per variable."""

    factors: tuple[tuple[str, int, int], ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        names = [f[0] for f in self.factors]
        if len(set(names)) != len(names):
            raise ValueError("at most one binomial factor per variable")
        object.__setattr__(self, "coefficient", _as_fraction(self.coefficient))
        object.__setattr__(self, "factors", tuple(tuple(f) for f in self.factors))

    def __str__(self) -> str:
        fs = []
        for v, shift, k in self.factors:
            arg = v if shift == 0 else (f"{v} - {shift}" if shift > 0 else f"{v} + {-shift}")
            fs.append(f"C({arg}, {k})")
        body = "*".join(fs)
        if not body:
            return _fmt_coef(self.coefficient)
        return body if self.coefficient == 1 else f"{_fmt_coef(self.coefficient)}*{body}"


def binomial_monomial(name: str, shift: int, k: int) -> Polynomial:
    """``C(X - shift, k) = prod_{j<k} (X - shift - j) / k!`` as a polynomial."""
    if k < 0:
        raise ValueError("binomial degree must be natural")
    x = Polynomial.var(name)
    p = Polynomial.constant(1, (name,))
    for j in range(k):
        p = p * (x - (shift + j))
    return p / math.factorial(k)


def from_binomial_terms(terms: Iterable[BinomialTerm], variables: Iterable[str] = ()) -> Polynomial:
    names = set(variables)
    terms = list(terms)
    for t in terms:
        names.update(f[0] for f in t.factors)
    total = Polynomial.zero(names)
    cache: dict[tuple[str, int, int], Polynomial] = {}
    for t in terms:
        p = Polynomial.constant(t.coefficient, names)
        for f in t.factors:
            if f not in cache:
                cache[f] = binomial_monomial(*f)
            p = p * cache[f]
        total = total + p
    return total


def _forward_differences(values: dict[Exponents, Fraction], shape: Sequence[int]) -> dict[Exponents, Fraction]:
    """Iterated forward differences of a grid of values, one axis at a time."""
    table = dict(values)
    for axis, n in enumerate(shape):
        for step in range(1, n):
            # after this pass, entries with index >= step along axis hold Δ^step
            for idx in sorted(table, key=lambda t: -t[axis]):
                if idx[axis] >= step:
                    prev = idx[:axis] + (idx[axis] - 1,) + idx[axis + 1 :]
                    table[idx] = table[idx] - table[prev]
    return table


def to_binomial_basis(p: Polynomial) -> dict[Exponents, Fraction]:
    """Coefficients ``c_α = Δ_α P(0)`` over all ``α`` with ``α_i <= deg_{X_i} P``.

    Multi-indices are aligned with ``p.variables``; zero coefficients are kept so
    the table covers the full box.
    """
    shape = [p.degree_in(v) + 1 for v in p.variables]
    grid = {idx: p.evaluate(idx) for idx in itertools.product(*(range(n) for n in shape))}
    return _forward_differences(grid, shape)


def binomial_terms(p: Polynomial) -> list[BinomialTerm]:
    """Non-zero entries of :func:`to_binomial_basis` as unshifted binomial terms."""
    out = []
    for alpha, c in sorted(to_binomial_basis(p).items()):
        if c:
            factors = tuple((v, 0, a) for v, a in zip(p.variables, alpha) if a)
            out.append(BinomialTerm(factors, c))
    return out


def interpolate_grid(values: Mapping[Exponents, object], variables: Sequence[str], degree: int, start: int = 0) -> Polynomial:
    """Polynomial of per-variable degree ``<= degree`` through ``values`` on ``(start + {0..degree})^k``.

    ``values`` is keyed by the absolute grid points.
    """
    k = len(variables)
    shape = [degree + 1] * k
    rel = {}
    for idx in itertools.product(*(range(n) for n in shape)):
        pt = tuple(start + i for i in idx)
        rel[idx] = _as_fraction(values[pt])
    diffs = _forward_differences(rel, shape)
    terms = []
    for alpha, c in diffs.items():
        if c:
            terms.append(BinomialTerm(tuple((v, start, a) for v, a in zip(variables, alpha) if a), c))
    return from_binomial_terms(terms, variables)
