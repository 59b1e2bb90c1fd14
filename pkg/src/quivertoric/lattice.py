"""Integer lattice vectors over a quiver, the weight cone, and its certificates.

Vertex-indexed vectors live in Z^(vertices), arrow-indexed ones in
Z^(arrows), both ordered positionally by the quiver.  The incidence map
sends the basis vector of an arrow to the difference of the basis vectors
of its endpoints; the cone spanned by those differences coincides with the
set of zero-sum vectors whose partial sum over every filter is nonnegative.
``decompose_arrow_cone`` realizes the constructive half of that equality
and returns explicit multiplicities, while failures carry a violated
filter as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .quiver import Quiver, SizeLimitError, filters, primitive_cycles, cycle_vector, subset_limit


class LatticeError(Exception):
    pass


class DimensionMismatchError(LatticeError):
    pass


class ZeroVectorError(LatticeError):
    pass


class NotInKernelError(LatticeError):
    pass


class NotInConeError(LatticeError):
    """Cone membership failure; carries a violated filter when one exists.

    ``violated_filter`` is a frozenset of vertex labels with negative
    partial sum, or None when the coordinate sum itself is nonzero.
    """

    def __init__(self, violated_filter, reason: str):
        self.violated_filter = violated_filter
        self.reason = reason
        super().__init__(reason)


def positive_part(w) -> tuple:
    return tuple(max(c, 0) for c in w)


def negative_part(w) -> tuple:
    return tuple(max(-c, 0) for c in w)


def _check_len(vec, expected, what):
    if len(vec) != expected:
        raise DimensionMismatchError("%s has length %d, expected %d" % (what, len(vec), expected))


def arrow_step_vector(quiver: Quiver, j: int) -> tuple:
    """Vertex-indexed image of the j-th arrow: e(target) - e(source)."""
    x = [0] * quiver.n_vertices
    x[quiver.target_index(j)] += 1
    x[quiver.source_index(j)] -= 1
    return tuple(x)


def incidence_image(quiver: Quiver, w) -> tuple:
    """Apply the incidence map to an arrow-indexed vector."""
    _check_len(w, quiver.n_arrows, "arrow vector")
    x = [0] * quiver.n_vertices
    for j, c in enumerate(w):
        if c:
            x[quiver.target_index(j)] += c
            x[quiver.source_index(j)] -= c
    return tuple(x)


def is_balanced(quiver: Quiver, w) -> bool:
    """Kernel membership: at every vertex, outgoing weight equals incoming weight."""
    return all(c == 0 for c in incidence_image(quiver, w))


def in_filter_cone(quiver: Quiver, x, limit: Optional[int] = None) -> bool:
    """Zero total sum and nonnegative partial sum over every filter."""
    _check_len(x, quiver.n_vertices, "vertex vector")
    if sum(x) != 0:
        return False
    vidx = quiver.vertex_index
    for f in filters(quiver, limit):
        if sum(x[vidx(v)] for v in f) < 0:
            return False
    return True


def filter_cone_certificate(quiver: Quiver, x, limit: Optional[int] = None):
    """Return None for members, else a violated filter (or None with nonzero sum)."""
    _check_len(x, quiver.n_vertices, "vertex vector")
    if sum(x) != 0:
        raise NotInConeError(None, "coordinate sum is %d, not 0" % sum(x))
    vidx = quiver.vertex_index
    for f in filters(quiver, limit):
        if sum(x[vidx(v)] for v in f) < 0:
            return f
    return None


# --- constructive cone decomposition -----------------------------------------


class _SubquiverData:
    """Filter structure of the full subquiver on a vertex-index subset.

    Precomputes, once per subset: the proper nonempty filters (as vertex
    index tuples, in ascending bitmask order), for each arrow the filters
    separating its target from its source, and the least internal arrow,
    which in an acyclic quiver always admits a separating filter.
    """

    def __init__(self, quiver: Quiver, vset: tuple, cap: int):
        self.vset = vset
        k = len(vset)
        if 2**k > cap:
            raise SizeLimitError("2^%d subsets exceed the limit %d" % (k, cap))
        pos = {v: i for i, v in enumerate(vset)}
        self.arrows_in = [
            j
            for j in range(quiver.n_arrows)
            if quiver.source_index(j) in pos and quiver.target_index(j) in pos
        ]
        pairs = [(pos[quiver.source_index(j)], pos[quiver.target_index(j)]) for j in self.arrows_in]
        self.filter_members = []  # local index tuples, proper nonempty, mask order
        full = (1 << k) - 1
        for mask in range(1, full):
            if all(not (mask >> s) & 1 or (mask >> t) & 1 for s, t in pairs):
                self.filter_members.append(tuple(i for i in range(k) if (mask >> i) & 1))
        # affected[a] = filters containing target but not source of arrows_in[a];
        # these are exactly the filters whose sum drops by one per subtraction
        self.affected = []
        for a, (s, t) in enumerate(pairs):
            aff = [
                fi
                for fi, mem in enumerate(self.filter_members)
                if t in mem and s not in mem
            ]
            self.affected.append(aff)
        self.chosen = None
        for a, (s, t) in enumerate(pairs):
            if self._closure_excludes(pairs, t, s):
                self.chosen = a
                break
        # acyclicity guarantees a separating filter for every arrow
        assert self.chosen is not None or not self.arrows_in

    @staticmethod
    def _closure_excludes(pairs, start, avoid) -> bool:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for s, t in pairs:
                if s == v and t not in seen:
                    if t == avoid:
                        return False
                    seen.add(t)
                    stack.append(t)
        return avoid not in seen


def decompose_arrow_cone(quiver: Quiver, x, limit: Optional[int] = None, _ctx: Optional[dict] = None) -> tuple:
    """Express a vertex vector as a nonnegative integer sum of arrow steps.

    Follows the double induction of the cone equality: split the quiver
    along a proper filter with zero partial sum whenever one exists,
    otherwise subtract an arrow step whose target is separated from its
    source by a filter.  Returns arrow-indexed multiplicities; raises
    :class:`NotInConeError` with a violated-filter certificate otherwise.
    """
    _check_len(x, quiver.n_vertices, "vertex vector")
    if sum(x) != 0:
        raise NotInConeError(None, "coordinate sum is %d, not 0" % sum(x))
    cap = subset_limit(limit)
    ctx = _ctx if _ctx is not None else {}
    mult = [0] * quiver.n_arrows
    xs = list(x)

    def labels(vset, members):
        return frozenset(quiver.vertices[vset[i]] for i in members)

    def solve(vset: tuple):
        if all(xs[v] == 0 for v in vset):
            return
        key = vset
        data = ctx.get(key)
        if data is None:
            data = ctx[key] = _SubquiverData(quiver, vset, cap)
        if not data.arrows_in:
            for v in vset:
                if xs[v] < 0:
                    raise NotInConeError(
                        frozenset({quiver.vertices[v]}),
                        "vertex %r has negative value in an arrowless component" % (quiver.vertices[v],),
                    )
            raise AssertionError("nonzero zero-sum vector with no negative entry")
        sums = [sum(xs[vset[i]] for i in mem) for mem in data.filter_members]
        for fi, s in enumerate(sums):
            if s < 0:
                raise NotInConeError(
                    labels(vset, data.filter_members[fi]),
                    "filter has partial sum %d" % s,
                )
        zero_pool = {fi for fi, s in enumerate(sums) if s == 0}
        while True:
            if all(xs[v] == 0 for v in vset):
                return
            if zero_pool:
                fi = min(zero_pool)
                inside = set(data.filter_members[fi])
                part = tuple(vset[i] for i in sorted(inside))
                rest = tuple(vset[i] for i in range(len(vset)) if i not in inside)
                solve(part)
                solve(rest)
                return
            a = data.chosen
            j = data.arrows_in[a]
            mult[j] += 1
            xs[quiver.target_index(j)] -= 1
            xs[quiver.source_index(j)] += 1
            for fi in data.affected[a]:
                sums[fi] -= 1
                if sums[fi] == 0:
                    zero_pool.add(fi)
                elif sums[fi] < 0:
                    raise NotInConeError(
                        labels(vset, data.filter_members[fi]),
                        "filter has partial sum %d" % sums[fi],
                    )

    solve(tuple(range(quiver.n_vertices)))
    return tuple(mult)


# --- kernel vectors and primitive cycles --------------------------------------


def dominating_cycle(quiver: Quiver, w) -> tuple:
    """Primitive cycle vector u with u+ <= w+ and u- <= w- componentwise.

    Walks from the least vertex touching the support, stepping forward
    along positive arrows and backward along negative ones (the balance
    condition always offers a continuation), until a vertex repeats; the
    enclosed loop is the cycle.
    """
    _check_len(w, quiver.n_arrows, "arrow vector")
    if all(c == 0 for c in w):
        raise ZeroVectorError("zero vector has no dominating cycle")
    if not is_balanced(quiver, w):
        raise NotInKernelError("vector violates the balance condition")
    start = min(
        i
        for j, c in enumerate(w)
        if c
        for i in (quiver.source_index(j), quiver.target_index(j))
    )
    steps = []
    first_seen = {start: 0}
    order = [start]
    current = start
    while True:
        last = steps[-1] if steps else None
        best = None
        for j in quiver.out_arrow_indices(current):
            if w[j] > 0 and not (last is not None and last == (j, -1)):
                if best is None or j < best[0]:
                    best = (j, 1, quiver.target_index(j))
        for j in quiver.in_arrow_indices(current):
            if w[j] < 0 and not (last is not None and last == (j, 1)):
                if best is None or j < best[0]:
                    best = (j, -1, quiver.source_index(j))
        if best is None:
            raise AssertionError("balance condition left no continuation")
        j, d, nxt = best
        steps.append((j, d))
        if nxt in first_seen:
            loop = steps[first_seen[nxt]:]
            vec = [0] * quiver.n_arrows
            for a, dd in loop:
                vec[a] = dd
            return tuple(vec)
        first_seen[nxt] = len(order)
        order.append(nxt)
        current = nxt


def peel_into_cycles(quiver: Quiver, w) -> list:
    """Write a kernel vector as a sum of primitive cycle vectors.

    Each peeled cycle is sign-compatible with the remainder, so the total
    weight drops strictly at every step and the list has at most |w| terms.
    """
    _check_len(w, quiver.n_arrows, "arrow vector")
    if not is_balanced(quiver, w):
        raise NotInKernelError("vector violates the balance condition")
    remaining = list(w)
    out = []
    while any(remaining):
        u = dominating_cycle(quiver, tuple(remaining))
        for j, c in enumerate(u):
            remaining[j] -= c
        out.append(u)
    return out


# --- brute-force cone equality -------------------------------------------------


@dataclass
class ConeScanResult:
    equal: bool
    points: int
    members: int
    counterexample: Optional[tuple] = None
    detail: str = ""

    def __bool__(self):
        return self.equal


def cone_equality_scan(
    quiver: Quiver,
    bound: int,
    limit: Optional[int] = None,
    max_points: int = 5_000_000,
    failure_samples: int = 200,
) -> ConeScanResult:
    """Compare filter-cone membership with constructive decomposability.

    Scans every zero-sum vertex vector with coordinates in [-bound, bound].
    The filter inequalities are evaluated for all points at once (exact
    integer matrix arithmetic); every member is then decomposed and the
    incidence image of the multiplicities is checked against the input.
    Nonmembers can never decompose (arrow steps have nonnegative filter
    sums), and a deterministic sample of them exercises the certificate
    path of the decomposition routine.
    """
    n = quiver.n_vertices
    box = 2 * bound + 1
    if box**n > max_points:
        raise SizeLimitError("%d^%d scan points exceed the limit %d" % (box, n, max_points))
    filts = filters(quiver, limit)
    vidx = quiver.vertex_index
    fmat = np.array(
        [[1 if v in f else 0 for v in quiver.vertices] for f in filts], dtype=np.int64
    )
    grids = np.meshgrid(*([np.arange(-bound, bound + 1, dtype=np.int64)] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    pts = pts[pts.sum(axis=1) == 0]
    member_mask = (pts @ fmat.T >= 0).all(axis=1)
    ctx: dict = {}
    members = 0
    for row, is_member in zip(pts, member_mask):
        if not is_member:
            continue
        x = tuple(int(c) for c in row)
        members += 1
        try:
            mult = decompose_arrow_cone(quiver, x, limit, _ctx=ctx)
        except NotInConeError as exc:
            return ConeScanResult(
                False, len(pts), members, x,
                "filter test accepts the point but decomposition fails: %s" % exc,
            )
        if incidence_image(quiver, mult) != x:
            return ConeScanResult(
                False, len(pts), members, x, "decomposition does not reproduce the point"
            )
    sampled = 0
    for row, is_member in zip(pts, member_mask):
        if is_member or sampled >= failure_samples:
            continue
        sampled += 1
        x = tuple(int(c) for c in row)
        try:
            decompose_arrow_cone(quiver, x, limit, _ctx=ctx)
        except NotInConeError:
            continue
        return ConeScanResult(
            False, len(pts), members, x, "decomposition accepts a point outside the filter cone"
        )
    return ConeScanResult(True, int(len(pts)), members)


def all_cycle_vectors(quiver: Quiver, limit: Optional[int] = None) -> list:
    """Cycle vectors of all primitive cycle classes (one sign per class)."""
    return [cycle_vector(quiver, steps) for steps in primitive_cycles(quiver, limit)]
