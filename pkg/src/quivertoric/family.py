"""The five-parameter quiver family and everything attached to it.

For parameters 0 <= p <= q <= r <= s <= t the module builds two quivers:
a thin one on t+6 vertices (``toric_quiver``) whose orbit closure is a
toric variety, and a marked one on t+3 vertices (``orbit_quiver``) whose
dimension vector is 2 at the central vertex and 1 elsewhere, carrying the
distinguished point returned by ``marked_point``.  On top of these it
provides the fifteen strand vectors, the twenty-six primitive cycle
vectors and their binomials, the coordinate generators of both orbit
closures, the parametrizations of both orbits with the group element
transporting one to the marked point, the exact rank of the
parametrization, and the Sagbi certificate tying the two sides together.

Empty chain segments (equal parameters) contribute no arrows and attach
the neighbouring arrows to the segment's other endpoint; vertex and arrow
labels are unaffected, so the label ranges are contiguous for every
parameter choice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import ratmat
from .quiver import Quiver, validate
from .lattice import NotInConeError, decompose_arrow_cone, all_cycle_vectors
from .poly import (
    Binomial,
    Polynomial,
    SubductionError,
    TermOrder,
    VarSpace,
    initial_term,
    power_product,
    render,
    subduct,
    telescope_reduce,
    expand_trace,
)


class FamilyError(Exception):
    pass


class InvalidParamsError(FamilyError):
    pass


class OutsideDomainError(FamilyError):
    """The sample point misses the open set where the transport element exists."""


@dataclass(frozen=True)
class FamilyParams:
    """Nondecreasing nonnegative parameter tuple 0 <= p <= q <= r <= s <= t."""

    p: int
    q: int
    r: int
    s: int
    t: int

    def __post_init__(self):
        vals = (self.p, self.q, self.r, self.s, self.t)
        if any(int(v) != v for v in vals):
            raise InvalidParamsError("parameters must be integers")
        if not (0 <= self.p <= self.q <= self.r <= self.s <= self.t):
            raise InvalidParamsError("parameters must satisfy 0 <= p <= q <= r <= s <= t")

    @property
    def strict(self) -> bool:
        return 0 < self.p < self.q < self.r < self.s < self.t

    @property
    def n_variables(self) -> int:
        return self.t + 5

    @property
    def n_arrows(self) -> int:
        return self.t + 10

    def as_tuple(self) -> tuple:
        return (self.p, self.q, self.r, self.s, self.t)


def all_params(max_t: int) -> list:
    """All parameter tuples with t <= max_t, in lexicographic order."""
    out = []
    for t in range(max_t + 1):
        for s in range(t + 1):
            for r in range(s + 1):
                for q in range(r + 1):
                    for p in range(q + 1):
                        out.append(FamilyParams(p, q, r, s, t))
    out.sort(key=FamilyParams.as_tuple)
    return out


# --- index helpers (all public indices are 1-based, as in the displays) ---------


def _unit(n: int, i: int) -> list:
    e = [0] * n
    e[i - 1] = 1
    return e


def _segment(n: int, lo: int, hi: int) -> list:
    return [1 if lo <= i <= hi else 0 for i in range(1, n + 1)]


def _combine(n: int, *parts) -> tuple:
    total = [0] * n
    for part in parts:
        for k, v in enumerate(part):
            total[k] += v
    return tuple(total)


def t_space(params: FamilyParams) -> VarSpace:
    return VarSpace("T", params.n_variables, allow_negative=True)


def s_space(params: FamilyParams) -> VarSpace:
    return VarSpace("S", params.n_arrows, allow_negative=False)


# --- the two quivers -------------------------------------------------------------


def toric_quiver(params: FamilyParams) -> Quiver:
    """The thin quiver: vertices 0..t+5, arrows b1..b(t+10).

    Three chains leave vertex 0 and feed the four sink hubs r+1..r+4,
    which are also fed by two chains leaving vertex t+5.
    """
    p, q, r, s, t = params.as_tuple()
    arrows = []

    def add(i, src, tgt):
        arrows.append(("b%d" % i, src, tgt))

    for i in range(1, p + 1):
        add(i, i - 1, i)
    for i in range(p + 1, q + 1):
        add(i, 0 if i == p + 1 else i - 1, i)
    for i in range(q + 1, r + 1):
        add(i, 0 if i == q + 1 else i - 1, i)
    end_a = p
    end_b = q if q > p else 0
    end_c = r if r > q else 0
    end_d = r + 5 if s > r else t + 5
    end_e = s + 5 if t > s else t + 5
    add(r + 1, end_a, r + 1)
    add(r + 2, end_a, r + 2)
    add(r + 3, end_b, r + 2)
    add(r + 4, end_b, r + 3)
    add(r + 5, end_c, r + 3)
    add(r + 6, end_c, r + 4)
    add(r + 7, end_d, r + 1)
    add(r + 8, end_d, r + 2)
    add(r + 9, end_e, r + 3)
    add(r + 10, end_e, r + 4)
    if s > r:
        for i in range(r + 11, s + 10):
            add(i, i - 5, i - 6)
        add(s + 10, t + 5, s + 4)
    if t > s:
        for i in range(s + 11, t + 10):
            add(i, i - 5, i - 6)
        add(t + 10, t + 5, t + 4)
    arrows.sort(key=lambda a: int(a[0][1:]))
    quiver = Quiver(range(t + 6), arrows)
    validate(quiver)
    return quiver


def orbit_quiver(params: FamilyParams) -> Quiver:
    """The marked quiver: vertices 0..t+2, arrows a1..a(t+5).

    All chains flow toward vertex 0; the central vertex r+1 (the only one
    of dimension two) sends one arrow to each left-chain endpoint and
    receives one from each right chain.
    """
    p, q, r, s, t = params.as_tuple()
    arrows = []

    def add(i, src, tgt):
        arrows.append(("a%d" % i, src, tgt))

    for i in range(1, p + 1):
        add(i, i, i - 1)
    for i in range(p + 1, q + 1):
        add(i, i, 0 if i == p + 1 else i - 1)
    for i in range(q + 1, r + 1):
        add(i, i, 0 if i == q + 1 else i - 1)
    end_a = p
    end_b = q if q > p else 0
    end_c = r if r > q else 0
    add(r + 1, r + 1, end_a)
    add(r + 2, r + 1, end_b)
    add(r + 3, r + 1, end_c)
    add(r + 4, r + 2 if s > r else t + 2, r + 1)
    add(r + 5, s + 2 if t > s else t + 2, r + 1)
    if s > r:
        for i in range(r + 6, s + 5):
            add(i, i - 3, i - 4)
        add(s + 5, t + 2, s + 1)
    if t > s:
        for i in range(s + 6, t + 5):
            add(i, i - 4, i - 5)
        add(t + 5, t + 2, t + 1)
    arrows.sort(key=lambda a: int(a[0][1:]))
    quiver = Quiver(range(t + 3), arrows)
    validate(quiver)
    return quiver


def orbit_dimension_vector(params: FamilyParams) -> tuple:
    return tuple(2 if v == params.r + 1 else 1 for v in range(params.t + 3))


@dataclass(frozen=True)
class RepPoint:
    """Exact rational matrices attached to the arrows of a quiver."""

    quiver: Quiver
    dims: tuple
    matrices: dict = field(compare=False)

    def __post_init__(self):
        if len(self.dims) != self.quiver.n_vertices:
            raise FamilyError("dimension vector does not match the quiver")
        for name, src, tgt in self.quiver.arrows:
            mat = self.matrices[name]
            rows, cols = self.dims[self.quiver.vertex_index(tgt)], self.dims[self.quiver.vertex_index(src)]
            if len(mat) != rows or any(len(row) != cols for row in mat):
                raise FamilyError("matrix for arrow %r has the wrong shape" % name)

    def matrix(self, name):
        return self.matrices[name]

    def __eq__(self, other):
        if not isinstance(other, RepPoint):
            return NotImplemented
        return (
            self.quiver.arrows == other.quiver.arrows
            and self.dims == other.dims
            and self.matrices == other.matrices
        )


def _frac_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def marked_point(params: FamilyParams) -> RepPoint:
    """The distinguished representation: five explicit matrices at the hub."""
    r = params.r
    quiver = orbit_quiver(params)
    matrices = {}
    for name, src, tgt in quiver.arrows:
        matrices[name] = _frac_matrix([[1]])
    matrices["a%d" % (r + 1)] = _frac_matrix([[1, 0]])
    matrices["a%d" % (r + 2)] = _frac_matrix([[-1, -1]])
    matrices["a%d" % (r + 3)] = _frac_matrix([[0, 1]])
    matrices["a%d" % (r + 4)] = _frac_matrix([[0], [1]])
    matrices["a%d" % (r + 5)] = _frac_matrix([[1], [0]])
    return RepPoint(quiver, orbit_dimension_vector(params), matrices)


# --- strand and cycle vectors -----------------------------------------------------

# Each of the 26 primitive cycle vectors is a signed sum of strands: the ten
# hub arrows (strands 1..10) and the five chain segments (strands 11..15).
_CYCLE_COMBOS = (
    ((2, 11), (3, 12)),
    ((4, 12), (5, 13)),
    ((1, 8), (2, 7)),
    ((5, 10), (6, 9)),
    ((3, 9, 15), (4, 8, 14)),
    ((1, 9, 11, 15), (4, 7, 12, 14)),
    ((3, 10, 12, 15), (6, 8, 13, 14)),
    ((1, 10, 11, 15), (6, 7, 13, 14)),
    ((1, 8, 11), (3, 7, 12)),
    ((4, 10, 12), (6, 9, 13)),
    ((2, 4, 11), (3, 5, 13)),
    ((1, 3, 9, 15), (2, 4, 7, 14)),
    ((3, 5, 10, 15), (4, 6, 8, 14)),
    ((2, 9, 11, 15), (4, 8, 12, 14)),
    ((3, 9, 12, 15), (5, 8, 13, 14)),
    ((1, 4, 8, 11), (3, 5, 7, 13)),
    ((2, 4, 10, 11), (3, 6, 9, 13)),
    ((1, 3, 9, 12, 15), (2, 5, 7, 13, 14)),
    ((2, 5, 10, 11, 15), (4, 6, 8, 12, 14)),
    ((1, 3, 5, 10, 15), (2, 4, 6, 7, 14)),
    ((2, 9, 11, 15), (5, 8, 13, 14)),
    ((1, 4, 8, 10, 11), (3, 6, 7, 9, 13)),
    ((1, 9, 11, 15), (5, 7, 13, 14)),
    ((2, 10, 11, 15), (6, 8, 13, 14)),
    ((1, 5, 10, 11, 15), (4, 6, 7, 12, 14)),
    ((1, 3, 10, 12, 15), (2, 6, 7, 13, 14)),
)


def strand_vectors(params: FamilyParams) -> list:
    """Fifteen arrow-indexed building blocks of the cycle space.

    Strands 1..10 are the unit vectors of the ten hub arrows; strands
    11..15 are the indicator vectors of the five chain segments (zero when
    the segment is empty).
    """
    p, q, r, s, t = params.as_tuple()
    n = params.n_arrows
    out = [tuple(_unit(n, r + i)) for i in range(1, 11)]
    out.append(tuple(_segment(n, 1, p)))
    out.append(tuple(_segment(n, p + 1, q)))
    out.append(tuple(_segment(n, q + 1, r)))
    out.append(tuple(_segment(n, r + 11, s + 10)))
    out.append(tuple(_segment(n, s + 11, t + 10)))
    return out


def cycle_table(params: FamilyParams) -> list:
    """The twenty-six primitive cycle vectors, as signed strand sums."""
    strands = strand_vectors(params)
    n = params.n_arrows
    table = []
    for plus, minus in _CYCLE_COMBOS:
        vec = [0] * n
        for i in plus:
            for k, c in enumerate(strands[i - 1]):
                vec[k] += c
        for i in minus:
            for k, c in enumerate(strands[i - 1]):
                vec[k] -= c
        table.append(tuple(vec))
    return table


def cycle_binomials(params: FamilyParams, count: int = 8) -> list:
    """Binomials of the first ``count`` cycle vectors (the first 8 generate)."""
    if not 0 <= count <= 26:
        raise FamilyError("count must lie in [0, 26]")
    return [Binomial(v) for v in cycle_table(params)[:count]]


@dataclass
class CycleMatchResult:
    status: str  # "match", "mismatch", or "not-strict"
    classes: int = 0
    missing: tuple = ()
    extra: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status == "match"


def match_cycles(params: FamilyParams) -> CycleMatchResult:
    """Compare enumerated primitive cycle vectors with the tabulated ones.

    Only meaningful for strict parameters, where the table is complete;
    the comparison is up to sign on both sides.
    """
    if not params.strict:
        return CycleMatchResult("not-strict")
    quiver = toric_quiver(params)
    enumerated = all_cycle_vectors(quiver)
    found = set()
    for v in enumerated:
        found.add(v)
        found.add(tuple(-c for c in v))
    expected = set()
    for v in cycle_table(params):
        expected.add(v)
        expected.add(tuple(-c for c in v))
    if found == expected:
        return CycleMatchResult("match", classes=len(enumerated))
    return CycleMatchResult(
        "mismatch",
        classes=len(enumerated),
        missing=tuple(sorted(expected - found)),
        extra=tuple(sorted(found - expected)),
    )


# --- coordinate generators of the two orbit closures ------------------------------


def coordinate_generators(params: FamilyParams) -> list:
    """Generators of the coordinate ring of the marked orbit closure.

    All are monomials except the two at positions r+3 and r+4, which are
    sums of two monomials.
    """
    p, q, r, s, t = params.as_tuple()
    n = params.n_variables
    space = t_space(params)

    def mono(*parts):
        return Polynomial.monomial(space, _combine(n, *parts))

    out = []
    for i in range(1, r + 1):
        out.append(mono(_unit(n, i)))
    mid = _combine(n, _segment(n, 1, p), _segment(n, q + 1, r))
    out.append(mono(_segment(n, p + 1, r), _unit(n, r + 1)))
    out.append(mono(_segment(n, p + 1, r), _unit(n, r + 3)))
    out.append(mono(mid, _unit(n, r + 2)) + mono(mid, _unit(n, r + 3)))
    out.append(mono(mid, _unit(n, r + 1)) + mono(mid, _unit(n, r + 4)))
    out.append(mono(_segment(n, 1, q), _unit(n, r + 4)))
    out.append(mono(_segment(n, 1, q), _unit(n, r + 2)))
    tail_e = _segment(n, s + 6, t + 5)
    tail_d = _segment(n, r + 6, s + 5)
    out.append(mono(_unit(n, r + 1), _unit(n, r + 5), tail_e))
    out.append(mono(_unit(n, r + 3), _unit(n, r + 5), tail_e))
    out.append(mono(_unit(n, r + 4), _unit(n, r + 5), tail_d))
    out.append(mono(_unit(n, r + 2), _unit(n, r + 5), tail_d))
    for i in range(r + 11, t + 11):
        out.append(mono(_unit(n, i - 5)))
    return out


def initial_generators(params: FamilyParams) -> list:
    """Generators of the toric coordinate ring; the initial monomials above."""
    p, q, r, s, t = params.as_tuple()
    n = params.n_variables
    space = t_space(params)

    def mono(*parts):
        return Polynomial.monomial(space, _combine(n, *parts))

    out = []
    for i in range(1, r + 1):
        out.append(mono(_unit(n, i)))
    mid = _combine(n, _segment(n, 1, p), _segment(n, q + 1, r))
    out.append(mono(_segment(n, p + 1, r), _unit(n, r + 1)))
    out.append(mono(_segment(n, p + 1, r), _unit(n, r + 3)))
    out.append(mono(mid, _unit(n, r + 3)))
    out.append(mono(mid, _unit(n, r + 4)))
    out.append(mono(_segment(n, 1, q), _unit(n, r + 4)))
    out.append(mono(_segment(n, 1, q), _unit(n, r + 2)))
    tail_e = _segment(n, s + 6, t + 5)
    tail_d = _segment(n, r + 6, s + 5)
    out.append(mono(_unit(n, r + 1), _unit(n, r + 5), tail_e))
    out.append(mono(_unit(n, r + 3), _unit(n, r + 5), tail_e))
    out.append(mono(_unit(n, r + 4), _unit(n, r + 5), tail_d))
    out.append(mono(_unit(n, r + 2), _unit(n, r + 5), tail_d))
    for i in range(r + 11, t + 11):
        out.append(mono(_unit(n, i - 5)))
    return out


def vertex_weights(params: FamilyParams) -> list:
    """Torus weight of each thin-quiver vertex, as an exponent vector.

    The weight difference across an arrow equals the exponent of the
    matching toric generator, which is what ties the thin quiver's cone to
    the initial algebra.
    """
    p, q, r, s, t = params.as_tuple()
    n = params.n_variables
    weights = [None] * (t + 6)
    weights[0] = (0,) * n
    for j in range(1, p + 1):
        weights[j] = _combine(n, _segment(n, 1, j))
    for j in range(p + 1, q + 1):
        weights[j] = _combine(n, _segment(n, p + 1, j))
    for j in range(q + 1, r + 1):
        weights[j] = _combine(n, _segment(n, q + 1, j))
    left = _segment(n, 1, r)
    weights[r + 1] = _combine(n, left, _unit(n, r + 1))
    weights[r + 2] = _combine(n, left, _unit(n, r + 3))
    weights[r + 3] = _combine(n, left, _unit(n, r + 4))
    weights[r + 4] = _combine(n, left, _unit(n, r + 2))
    tail_e = _segment(n, s + 6, t + 5)
    for j in range(r + 5, s + 5):
        neg = [-c for c in _combine(n, _segment(n, r + 5, j), tail_e)]
        weights[j] = _combine(n, left, neg)
    for j in range(s + 5, t + 6):
        neg = [-c for c in _segment(n, r + 5, j)]
        weights[j] = _combine(n, left, neg)
    return weights


def monomial_decomposer(params: FamilyParams) -> Callable:
    """Decompose a T-exponent as nonnegative powers of the toric generators.

    Solves the vertex-weight system for the unique preimage vertex vector
    and decomposes it in the arrow cone of the thin quiver; returns the
    arrow exponent vector, or None when either step fails.
    """
    n = params.n_variables
    weights = vertex_weights(params)
    matrix = [[Fraction(weights[j][row]) for j in range(1, n + 1)] for row in range(n)]
    inverse = ratmat.mat_inv(matrix)
    quiver = toric_quiver(params)
    ctx: dict = {}

    def decompose(exponent) -> Optional[tuple]:
        if len(exponent) != n:
            return None
        y = [
            sum((inverse[i][k] * Fraction(exponent[k]) for k in range(n)), Fraction(0))
            for i in range(n)
        ]
        if any(v.denominator != 1 for v in y):
            return None
        ints = [int(v) for v in y]
        x = [-sum(ints)] + ints
        try:
            return decompose_arrow_cone(quiver, tuple(x), _ctx=ctx)
        except NotInConeError:
            return None

    return decompose


# --- parametrizations, the transport element, and the orbit identity --------------


def orbit_map_matrices(params: FamilyParams) -> dict:
    """Polynomial matrices of the parametrization of the marked orbit.

    Entries are, up to sign, exactly the coordinate generators.
    """
    p, q, r, s, t = params.as_tuple()
    n = params.n_variables
    space = t_space(params)
    a = coordinate_generators(params)

    def gen(i):  # 1-based
        return a[i - 1]

    matrices = {}
    for i in list(range(1, r + 1)) + list(range(r + 6, t + 6)):
        poly = gen(i) if i <= r else gen(i + 5)
        matrices["a%d" % i] = ((poly,),)
    matrices["a%d" % (r + 1)] = ((gen(r + 1), gen(r + 2)),)
    matrices["a%d" % (r + 2)] = ((-gen(r + 4), -gen(r + 3)),)
    matrices["a%d" % (r + 3)] = ((gen(r + 5), gen(r + 6)),)
    matrices["a%d" % (r + 4)] = ((-gen(r + 8),), (gen(r + 7),))
    matrices["a%d" % (r + 5)] = ((gen(r + 10),), (-gen(r + 9),))
    return matrices


def orbit_point(params: FamilyParams, x: Sequence) -> RepPoint:
    """Evaluate the orbit parametrization at a rational point."""
    vals = [Fraction(v) for v in x]
    quiver = orbit_quiver(params)
    matrices = {}
    for name, entries in orbit_map_matrices(params).items():
        matrices[name] = tuple(tuple(e.evaluate(vals) for e in row) for row in entries)
    return RepPoint(quiver, orbit_dimension_vector(params), matrices)


def torus_point(params: FamilyParams, x: Sequence) -> RepPoint:
    """Evaluate the thin parametrization: one toric generator per arrow."""
    vals = [Fraction(v) for v in x]
    quiver = toric_quiver(params)
    gens = initial_generators(params)
    matrices = {}
    for j, (name, _, _) in enumerate(quiver.arrows):
        matrices[name] = ((gens[j].evaluate(vals),),)
    return RepPoint(quiver, (1,) * quiver.n_vertices, matrices)


def in_domain(params: FamilyParams, x: Sequence) -> bool:
    """Open condition for the transport element: nonzero chain coordinates
    and an invertible central block."""
    p, q, r, s, t = params.as_tuple()
    vals = [Fraction(v) for v in x]
    if len(vals) != params.n_variables:
        return False
    for i in list(range(1, r + 1)) + list(range(r + 5, t + 6)):
        if vals[i - 1] == 0:
            return False
    return vals[r] * vals[r + 1] != vals[r + 2] * vals[r + 3]


def sample_domain_point(params: FamilyParams, rng: random.Random) -> tuple:
    """Random rational point in the domain; numerators and denominators in
    [1, 100] with random signs, resampled until the domain condition holds."""
    n = params.n_variables
    while True:
        x = tuple(
            Fraction(rng.randint(1, 100), rng.randint(1, 100)) * rng.choice((1, -1))
            for _ in range(n)
        )
        if in_domain(params, x):
            return x


def _prod(vals, lo, hi):
    out = Fraction(1)
    for i in range(lo, hi + 1):
        out *= vals[i - 1]
    return out


def transport_element(params: FamilyParams, x: Sequence) -> dict:
    """Invertible block per marked-quiver vertex carrying the parametrized
    point to the marked point."""
    p, q, r, s, t = params.as_tuple()
    vals = [Fraction(v) for v in x]
    if not in_domain(params, vals):
        raise OutsideDomainError("point violates the domain conditions")
    x_of = lambda i: vals[i - 1]
    det = x_of(r + 1) * x_of(r + 2) - x_of(r + 3) * x_of(r + 4)
    g = {}
    for i in range(0, p + 1):
        g[i] = ((_prod(vals, 1, i),),)
    for i in range(p + 1, q + 1):
        g[i] = ((_prod(vals, p + 1, i),),)
    for i in range(q + 1, r + 1):
        g[i] = ((_prod(vals, q + 1, i),),)
    head = _prod(vals, 1, r)
    g[r + 1] = (
        (head * x_of(r + 1), head * x_of(r + 3)),
        (head * x_of(r + 4), head * x_of(r + 2)),
    )
    tail_e = _prod(vals, s + 6, t + 5)
    for i in range(r + 2, s + 2):
        g[i] = ((head * det * x_of(r + 5) * _prod(vals, r + 6, i + 3) * tail_e,),)
    for i in range(s + 2, t + 3):
        g[i] = ((head * det * x_of(r + 5) * _prod(vals, r + 6, s + 5) * _prod(vals, s + 6, i + 3),),)
    return g


def group_act(point: RepPoint, g: dict) -> RepPoint:
    """Base change: conjugate every arrow matrix by the blocks at its ends."""
    quiver = point.quiver
    matrices = {}
    inverses = {v: ratmat.mat_inv([list(row) for row in g[v]]) for v in quiver.vertices}
    for name, src, tgt in quiver.arrows:
        m = [list(row) for row in point.matrices[name]]
        out = ratmat.mat_mul(ratmat.mat_mul([list(row) for row in g[tgt]], m), inverses[src])
        matrices[name] = tuple(tuple(row) for row in out)
    return RepPoint(quiver, point.dims, matrices)


def verify_orbit_identity(params: FamilyParams, x: Sequence) -> bool:
    """Exact check that the transport element maps the parametrized point
    to the marked point."""
    moved = group_act(orbit_point(params, x), transport_element(params, x))
    return moved == marked_point(params)


# --- rank of the parametrization ----------------------------------------------------


def parametrization_entries(params: FamilyParams) -> list:
    """All matrix entries of the orbit parametrization, in arrow order."""
    quiver = orbit_quiver(params)
    mats = orbit_map_matrices(params)
    out = []
    for name, _, _ in quiver.arrows:
        for row in mats[name]:
            out.extend(row)
    return out


def parametrization_rank(params: FamilyParams, x: Sequence) -> int:
    """Exact rank of the Jacobian of the parametrization at the point."""
    vals = [Fraction(v) for v in x]
    n = params.n_variables
    jac = []
    for entry in parametrization_entries(params):
        jac.append([entry.derivative(j).evaluate(vals) for j in range(n)])
    return ratmat.rank(jac)


def orbit_dimension(params: FamilyParams, seed: int = 0, points: int = 3) -> int:
    """Largest Jacobian rank over seeded random domain points."""
    rng = random.Random(seed)
    return max(parametrization_rank(params, sample_domain_point(params, rng)) for _ in range(points))


# --- checks and certificates ----------------------------------------------------------


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    items: list

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def first_failure(self) -> Optional[CheckItem]:
        for item in self.items:
            if not item.ok:
                return item
        return None


def initials_match(params: FamilyParams) -> bool:
    """Each toric generator is the initial monomial of its counterpart."""
    order = TermOrder(params.n_variables)
    space = t_space(params)
    for a, b in zip(coordinate_generators(params), initial_generators(params)):
        exp, coeff = initial_term(a, order)
        if coeff != 1 or Polynomial.monomial(space, exp) != b:
            return False
    return True


def sagbi_certificate(params: FamilyParams) -> Report:
    """Subduction-based certificate that the coordinate generators form a
    Sagbi basis.

    Evaluates the eight generating binomials at the coordinate generators,
    pins the three vanishing ones and the five closed forms, subducts every
    nonzero value against the basis with the cone-backed decomposer, and
    checks the strict initial-monomial comparison that closes the argument.
    """
    p, q, r, s, t = params.as_tuple()
    n = params.n_variables
    space = t_space(params)
    order = TermOrder(n)
    a = coordinate_generators(params)
    xi = cycle_binomials(params, 8)
    values = [b.evaluate(a) for b in xi]
    items = []

    def mono(*parts):
        return Polynomial.monomial(space, _combine(n, *parts))

    def a_product(unit_indices, segments):
        exps = [0] * params.n_arrows
        for i in unit_indices:
            exps[i - 1] += 1
        for lo, hi in segments:
            for i in range(lo, hi + 1):
                exps[i - 1] += 1
        return power_product(a, exps)

    for i in (3, 4, 8):
        ok = values[i - 1].is_zero()
        items.append(CheckItem("binomial_%d_vanishes" % i, ok, "" if ok else render(values[i - 1])))

    left = _segment(n, 1, r)
    tail = _combine(n, _unit(n, r + 5), _segment(n, r + 6, t + 5))
    closed = {
        1: (-mono(left, _unit(n, r + 2)), -a_product([r + 6], [(q + 1, r)])),
        2: (mono(left, _unit(n, r + 1)), a_product([r + 1], [(1, p)])),
        6: (
            -mono(left, _unit(n, r + 1), _unit(n, r + 1), tail),
            -a_product([r + 1, r + 7], [(1, p), (r + 11, s + 10)]),
        ),
        7: (
            mono(left, _unit(n, r + 2), _unit(n, r + 2), tail),
            a_product([r + 6, r + 10], [(q + 1, r), (s + 11, t + 10)]),
        ),
        5: (
            mono(_segment(n, 1, p), _segment(n, q + 1, r), _unit(n, r + 2), _unit(n, r + 4), tail)
            - mono(_segment(n, 1, p), _segment(n, q + 1, r), _unit(n, r + 1), _unit(n, r + 3), tail),
            a_product([r + 4, r + 10], [(s + 11, t + 10)])
            - a_product([r + 3, r + 7], [(r + 11, s + 10)]),
        ),
    }
    for i in sorted(closed):
        t_form, a_form = closed[i]
        ok = values[i - 1] == t_form and values[i - 1] == a_form
        items.append(
            CheckItem(
                "binomial_%d_closed_form" % i,
                ok,
                "" if ok else "value %s" % render(values[i - 1]),
            )
        )

    decomposer = monomial_decomposer(params)
    for i in (1, 2, 5, 6, 7):
        value = values[i - 1]
        name = "binomial_%d_subduction" % i
        try:
            rep = subduct(value, a, order, decomposer)
        except SubductionError as exc:
            items.append(CheckItem(name, False, str(exc)))
            continue
        rebuilt = Polynomial.zero(space)
        lead = initial_term(value, order)[0]
        bounded = True
        for lam, u in rep:
            summand = lam * power_product(a, u)
            rebuilt = rebuilt + summand
            if order.compare(initial_term(summand, order)[0], lead) > 0:
                bounded = False
        ok = rebuilt == value and bounded
        items.append(CheckItem(name, ok, "" if ok else "%d summands" % len(rep)))

    low = a_product([r + 3, r + 7], [(r + 11, s + 10)])
    high = a_product([r + 4, r + 10], [(s + 11, t + 10)])
    cmp_low_high = order.compare(initial_term(low, order)[0], initial_term(high, order)[0])
    same_lead = initial_term(high, order)[0] == initial_term(values[4], order)[0]
    items.append(
        CheckItem(
            "deciding_initials_comparison",
            cmp_low_high < 0 and same_lead,
            "strictly smaller" if cmp_low_high < 0 else "comparison failed",
        )
    )
    return Report("sagbi certificate for %s" % (params.as_tuple(),), items)


def telescope_report(params: FamilyParams) -> Report:
    """Reduce every non-generating cycle binomial over the generating eight,
    verifying each trace expansion exactly."""
    space = s_space(params)
    table = cycle_table(params)
    generators = [Binomial(v) for v in table[:8]]
    items = []
    for i in range(9, 27):
        target = Binomial(table[i - 1])
        trace = telescope_reduce(target, generators)
        if trace is None:
            items.append(CheckItem("binomial_%d_reduces" % i, False, "no trace found"))
            continue
        ok = expand_trace(trace, generators, space) == target.polynomial(space)
        items.append(
            CheckItem("binomial_%d_reduces" % i, ok, "%d steps" % len(trace.steps))
        )
    return Report("ideal generation for %s" % (params.as_tuple(),), items)


def family_report(params: FamilyParams, seed: int = 0, samples: int = 100) -> Report:
    """Every per-tuple certificate: construction, cycle census (strict
    tuples only), ideal generation, initial monomials, the Sagbi
    certificate, the orbit identity on seeded samples, and the rank."""
    items = []
    quiver = toric_quiver(params)
    delta = orbit_quiver(params)
    items.append(
        CheckItem(
            "build",
            quiver.n_vertices == params.t + 6
            and quiver.n_arrows == params.t + 10
            and delta.n_vertices == params.t + 3
            and delta.n_arrows == params.t + 5,
            "%d+%d and %d+%d vertices+arrows" % (
                quiver.n_vertices, quiver.n_arrows, delta.n_vertices, delta.n_arrows,
            ),
        )
    )
    if params.strict:
        census = match_cycles(params)
        items.append(CheckItem("cycle_census", census.ok, "%d classes" % census.classes))
    else:
        items.append(CheckItem("cycle_census", True, "skipped (needs strict parameters)"))
    tele = telescope_report(params)
    items.append(CheckItem("ideal_generation", tele.ok,
                           "" if tele.ok else tele.first_failure().name))
    items.append(CheckItem("initial_monomials", initials_match(params), ""))
    cert = sagbi_certificate(params)
    items.append(CheckItem("sagbi_certificate", cert.ok,
                           "" if cert.ok else cert.first_failure().name))
    rng = random.Random(seed)
    orbit_ok = all(
        verify_orbit_identity(params, sample_domain_point(params, rng)) for _ in range(samples)
    )
    items.append(CheckItem("orbit_identity", orbit_ok, "%d samples" % samples))
    dim = orbit_dimension(params, seed=seed)
    items.append(CheckItem("rank", dim == params.t + 5, "rank %d" % dim))
    return Report("family checks for %s" % (params.as_tuple(),), items)
