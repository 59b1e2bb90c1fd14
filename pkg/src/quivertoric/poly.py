"""Sparse multivariate polynomials over exact rationals.

Monomials are exponent tuples over a fixed variable space; a polynomial
maps exponent tuples to nonzero Fractions.  The term order compares
exponent vectors lexicographically from the LAST coordinate downward
(so among single variables the one with the largest index is biggest);
this is not the graded reverse-lexicographic order of Groebner software.
The module also provides binomials attached to integer vectors, the
telescoping reduction of a binomial against a list of generator
binomials, and subduction of a polynomial against a subalgebra basis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence


class PolyError(Exception):
    pass


class SpaceMismatchError(PolyError):
    pass


class ZeroPolynomialError(PolyError):
    pass


class ExponentSignError(PolyError):
    pass


class SubductionError(PolyError):
    """Subduction failure; carries the offending monomial when known."""

    def __init__(self, reason, monomial=None):
        self.monomial = monomial
        super().__init__(reason)


@dataclass(frozen=True)
class VarSpace:
    """Fixed list of variables: ``prefix1 .. prefixN``.

    ``allow_negative`` distinguishes Laurent exponents from ordinary ones;
    spaces compare by value, and polynomials over different spaces never mix.
    """

    prefix: str
    count: int
    allow_negative: bool = False

    def variable_name(self, i: int) -> str:
        return "%s%d" % (self.prefix, i + 1)

    def unit_exponent(self, i: int) -> tuple:
        if not 0 <= i < self.count:
            raise PolyError("variable index %d out of range" % i)
        return tuple(1 if k == i else 0 for k in range(self.count))


def tail_key(exponent) -> tuple:
    """Sort key realizing the last-coordinate-first comparison."""
    return tuple(reversed(exponent))


class TermOrder:
    """Total order on exponent vectors, scanned from the last coordinate down.

    u is smaller than v iff there is an index i with u_i < v_i and
    u_j = v_j for every j > i.  The order is compatible with addition of
    exponents, and the zero vector is minimal among nonnegative ones.
    """

    def __init__(self, count: int):
        self.count = count

    def key(self, exponent) -> tuple:
        if len(exponent) != self.count:
            raise SpaceMismatchError("exponent length %d, expected %d" % (len(exponent), self.count))
        return tail_key(exponent)

    def compare(self, u, v) -> int:
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("space", "_terms")

    def __init__(self, space: VarSpace, terms):
        self.space = space
        clean = {}
        for exp, coeff in dict(terms).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            exp = tuple(int(e) for e in exp)
            if len(exp) != space.count:
                raise SpaceMismatchError("exponent length %d, expected %d" % (len(exp), space.count))
            if not space.allow_negative and any(e < 0 for e in exp):
                raise ExponentSignError("negative exponent in space %r" % (space.prefix,))
            clean[exp] = clean.get(exp, Fraction(0)) + coeff
        self._terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def zero(cls, space: VarSpace) -> "Polynomial":
        return cls(space, {})

    @classmethod
    def constant(cls, space: VarSpace, value) -> "Polynomial":
        return cls(space, {(0,) * space.count: Fraction(value)})

    @classmethod
    def monomial(cls, space: VarSpace, exponent, coeff=1) -> "Polynomial":
        return cls(space, {tuple(exponent): Fraction(coeff)})

    @classmethod
    def variable(cls, space: VarSpace, i: int) -> "Polynomial":
        return cls.monomial(space, space.unit_exponent(i))

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list:
        """Terms as (exponent, coefficient), descending in the term order."""
        return sorted(self._terms.items(), key=lambda t: tail_key(t[0]), reverse=True)

    def coefficient(self, exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def _require_same_space(self, other):
        if self.space != other.space:
            raise SpaceMismatchError("mixed spaces %r and %r" % (self.space, other.space))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self):
        return hash((self.space, frozenset(self._terms.items())))

    def __add__(self, other):
        self._require_same_space(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.space, out)

    def __sub__(self, other):
        self._require_same_space(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return Polynomial(self.space, out)

    def __neg__(self):
        return Polynomial(self.space, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.space, {e: c * other for e, c in self._terms.items()})
        self._require_same_space(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative polynomial power")
        result = Polynomial.constant(self.space, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def evaluate(self, values: Sequence) -> Fraction:
        """Exact evaluation; negative exponents require nonzero values."""
        vals = [Fraction(v) for v in values]
        if len(vals) != self.space.count:
            raise SpaceMismatchError("got %d values, expected %d" % (len(vals), self.space.count))
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            term = coeff
            for e, v in zip(exp, vals):
                if e:
                    term *= v**e
            total += term
        return total

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for exp, coeff in self._terms.items():
            if exp[i] == 0:
                continue
            e = list(exp)
            e[i] -= 1
            out[tuple(e)] = out.get(tuple(e), Fraction(0)) + coeff * exp[i]
        return Polynomial(self.space, out)

    def __repr__(self):
        return render(self)


def initial_term(poly: Polynomial, order: Optional[TermOrder] = None) -> tuple:
    """Largest (exponent, coefficient) pair of a nonzero polynomial."""
    if poly.is_zero():
        raise ZeroPolynomialError("zero polynomial has no initial term")
    order = order or TermOrder(poly.space.count)
    exp = max(poly._terms, key=order.key)
    return exp, poly._terms[exp]


def initial_monomial(poly: Polynomial, order: Optional[TermOrder] = None) -> Polynomial:
    """Initial monomial with coefficient one."""
    exp, _ = initial_term(poly, order)
    return Polynomial.monomial(poly.space, exp)


# --- rendering and parsing ----------------------------------------------------


def render(poly: Polynomial) -> str:
    """Deterministic text form: terms descending in the term order."""
    if poly.is_zero():
        return "0"
    parts = []
    for exp, coeff in poly.terms():
        factors = [
            poly.space.variable_name(i) + ("^%d" % e if e != 1 else "")
            for i, e in enumerate(exp)
            if e != 0
        ]
        mono = "*".join(factors)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = "%s*%s" % (mag, mono)
        if not parts:
            parts.append(body if coeff > 0 else "-" + body)
        else:
            parts.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(parts)


_TERM_RE = re.compile(r"^(?:(?P<coeff>\d+(?:/\d+)?)\*?)?(?P<mono>(?:[A-Za-z]+\d+(?:\^-?\d+)?\*?)*)$")
_FACTOR_RE = re.compile(r"([A-Za-z]+)(\d+)(?:\^(-?\d+))?")


def parse_polynomial(text: str, space: VarSpace) -> Polynomial:
    """Parse the grammar produced by :func:`render`."""
    s = text.strip()
    if s == "0":
        return Polynomial.zero(space)
    # split into signed chunks; '-' inside an exponent follows '^'
    chunks = []
    sign = 1
    buf = []
    prev = ""
    for ch in s:
        if ch in "+-" and prev != "^":
            if buf and "".join(buf).strip():
                chunks.append((sign, "".join(buf).strip()))
            sign = 1 if ch == "+" else -1
            buf = []
        elif not ch.isspace():
            buf.append(ch)
        if not ch.isspace():
            prev = ch
    if buf and "".join(buf).strip():
        chunks.append((sign, "".join(buf).strip()))
    terms = {}
    for sgn, chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (not m.group("coeff") and not m.group("mono")):
            raise PolyError("cannot parse term %r" % chunk)
        coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        exp = [0] * space.count
        consumed = 0
        for fm in _FACTOR_RE.finditer(m.group("mono")):
            prefix, idx, power = fm.group(1), int(fm.group(2)), fm.group(3)
            if prefix != space.prefix:
                raise PolyError("variable prefix %r does not match space %r" % (prefix, space.prefix))
            if not 1 <= idx <= space.count:
                raise PolyError("variable index %d out of range" % idx)
            exp[idx - 1] += int(power) if power is not None else 1
            consumed += fm.end() - fm.start()
        key = tuple(exp)
        terms[key] = terms.get(key, Fraction(0)) + sgn * coeff
    return Polynomial(space, terms)


# --- binomials attached to integer vectors --------------------------------------


@dataclass(frozen=True)
class Binomial:
    """The binomial S^(w+) - S^(w-) attached to an integer vector w."""

    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(c) for c in self.vector))

    @property
    def positive(self) -> tuple:
        return tuple(max(c, 0) for c in self.vector)

    @property
    def negative(self) -> tuple:
        return tuple(max(-c, 0) for c in self.vector)

    def polynomial(self, space: VarSpace) -> Polynomial:
        if space.count != len(self.vector):
            raise SpaceMismatchError("binomial over %d variables, space has %d"
                                     % (len(self.vector), space.count))
        return Polynomial(space, {self.positive: Fraction(1), self.negative: Fraction(-1)})

    def evaluate(self, images: Sequence[Polynomial]) -> Polynomial:
        """Image of the binomial under variable -> polynomial substitution."""
        if len(images) != len(self.vector):
            raise SpaceMismatchError("got %d images, expected %d" % (len(images), len(self.vector)))
        return power_product(images, self.positive) - power_product(images, self.negative)


def power_product(factors: Sequence[Polynomial], exponents) -> Polynomial:
    """The product of factors[i]**exponents[i] (exponents nonnegative)."""
    if not factors:
        raise PolyError("empty factor list")
    space = factors[0].space
    result = Polynomial.constant(space, 1)
    for f, e in zip(factors, exponents):
        if e < 0:
            raise ExponentSignError("negative exponent %d in power product" % e)
        if e:
            result = result * f**e
    return result


# --- telescoping reduction of binomials ------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    """One telescoping step: cofactor * (generator with the given sign)."""

    cofactor: tuple
    generator: int
    sign: int


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple

    def __len__(self):
        return len(self.steps)


def telescope_reduce(
    target: Binomial,
    generators: Sequence[Binomial],
    max_states: int = 200_000,
) -> Optional[ReductionTrace]:
    """Write the target binomial as a monomial combination of the generators.

    Searches for a chain of monomials from the target's positive side to
    its negative side, where each move subtracts a generator's positive
    exponent (it must divide the current monomial) and adds its negative
    one, or the same with the generator negated.  The emitted steps expand
    telescopically to the target, exactly.  Breadth-first search gives a
    shortest, deterministic trace; returns None when the state budget is
    exhausted without reaching the goal.
    """
    n = len(target.vector)
    for g in generators:
        if len(g.vector) != n:
            raise SpaceMismatchError("generator length %d, expected %d" % (len(g.vector), n))
    start = target.positive
    goal = target.negative
    if start == goal:
        return ReductionTrace(())
    moves = []
    for gi, g in enumerate(generators):
        moves.append((gi, 1, g.positive, g.negative))
        moves.append((gi, -1, g.negative, g.positive))
    size_cap = sum(start) + sum(goal) + max(
        (sum(g.positive) + sum(g.negative) for g in generators), default=0
    )
    parent = {start: None}
    frontier = [start]
    states = 1
    while frontier:
        new_frontier = []
        for m in frontier:
            for gi, sign, head, tail in moves:
                if any(h > c for h, c in zip(head, m)):
                    continue
                nxt = tuple(c - h + t for c, h, t in zip(m, head, tail))
                if nxt in parent or sum(nxt) > size_cap:
                    continue
                cofactor = tuple(c - h for c, h in zip(m, head))
                parent[nxt] = (m, ReductionStep(cofactor, gi, sign))
                if nxt == goal:
                    steps = []
                    cur = nxt
                    while parent[cur] is not None:
                        prev, step = parent[cur]
                        steps.append(step)
                        cur = prev
                    return ReductionTrace(tuple(reversed(steps)))
                states += 1
                if states > max_states:
                    return None
                new_frontier.append(nxt)
        frontier = new_frontier
    return None


def expand_trace(trace: ReductionTrace, generators: Sequence[Binomial], space: VarSpace) -> Polynomial:
    """Exact polynomial expansion of a reduction trace."""
    total = Polynomial.zero(space)
    for step in trace.steps:
        g = generators[step.generator]
        total = total + step.sign * Polynomial.monomial(space, step.cofactor) * g.polynomial(space)
    return total


# --- subduction -------------------------------------------------------------------


def subduct(
    poly: Polynomial,
    basis: Sequence[Polynomial],
    order: Optional[TermOrder] = None,
    decomposer: Optional[Callable] = None,
    max_steps: int = 10_000,
) -> list:
    """Represent a polynomial as a rational combination of basis power products.

    At each step the initial exponent of the remainder is decomposed by
    ``decomposer`` into nonnegative powers of the basis elements' initial
    exponents; the corresponding power product is subtracted with the
    matching coefficient, which strictly lowers the initial term.  Returns
    a list of (coefficient, exponent-vector-over-basis) pairs whose power
    products sum back to the input, every summand's initial monomial being
    at most the input's.  Raises :class:`SubductionError` when a leading
    exponent is not decomposable or fails to decrease.
    """
    order = order or TermOrder(poly.space.count)
    if decomposer is None:
        raise SubductionError("a monomial decomposer is required")
    rep = []
    remainder = poly
    previous = None
    steps = 0
    while not remainder.is_zero():
        steps += 1
        if steps > max_steps:
            raise SubductionError("step budget exhausted")
        exp, coeff = initial_term(remainder, order)
        if previous is not None and order.compare(exp, previous) >= 0:
            raise SubductionError("initial term failed to decrease", exp)
        previous = exp
        u = decomposer(exp)
        if u is None:
            raise SubductionError("initial exponent is not a product of basis initials", exp)
        prod = power_product(basis, u)
        pexp, pcoeff = initial_term(prod, order)
        if pexp != exp:
            raise SubductionError("decomposer returned a mismatching product", exp)
        lam = coeff / pcoeff
        rep.append((lam, tuple(int(c) for c in u)))
        remainder = remainder - lam * prod
    return rep
