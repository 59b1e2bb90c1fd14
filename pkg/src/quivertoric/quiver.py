"""Finite acyclic quivers, filters, and primitive nonoriented cycles.

A quiver is a finite directed multigraph with a fixed total order on its
vertices and uniquely named arrows.  All vector data downstream (cone
membership, binomial ideals) is indexed positionally by the vertex and
arrow orders chosen here, so both orders are part of a quiver's identity.
"""

from __future__ import annotations

import os
from typing import Iterable, Optional

DEFAULT_SUBSET_LIMIT = 2**24
DEFAULT_CYCLE_LIMIT = 1_000_000

SIZE_LIMIT_ENV = "QUIVERTORIC_SIZE_LIMIT"


class QuiverError(Exception):
    """Base class for quiver construction and traversal errors."""


class DuplicateIdentifierError(QuiverError):
    pass


class CyclicQuiverError(QuiverError):
    """Raised when a quiver contains an oriented cycle; names one such cycle."""

    def __init__(self, arrow_names):
        self.cycle = tuple(arrow_names)
        super().__init__("oriented cycle through arrows %s" % (list(self.cycle),))


class SizeLimitError(QuiverError):
    pass


def subset_limit(override: Optional[int] = None) -> int:
    """Resolve the enumeration size limit (argument, else env var, else default)."""
    if override is not None:
        return override
    env = os.environ.get(SIZE_LIMIT_ENV)
    if env:
        return int(env)
    return DEFAULT_SUBSET_LIMIT


class Quiver:
    """Directed multigraph with ordered vertices and uniquely named arrows.

    ``vertices`` is a tuple of hashable labels whose order is total and
    fixed; ``arrows`` is a tuple of ``(name, source, target)`` triples.
    Parallel arrows are allowed, oriented cycles are not excluded here
    (use :func:`validate`).
    """

    __slots__ = ("vertices", "arrows", "_vindex", "_aindex", "_out", "_in")

    def __init__(self, vertices: Iterable, arrows: Iterable):
        self.vertices = tuple(vertices)
        self.arrows = tuple((name, src, tgt) for name, src, tgt in arrows)
        self._vindex = {}
        for i, v in enumerate(self.vertices):
            if v in self._vindex:
                raise DuplicateIdentifierError("duplicate vertex %r" % (v,))
            self._vindex[v] = i
        self._aindex = {}
        self._out = tuple([] for _ in self.vertices)
        self._in = tuple([] for _ in self.vertices)
        for j, (name, src, tgt) in enumerate(self.arrows):
            if name in self._aindex:
                raise DuplicateIdentifierError("duplicate arrow %r" % (name,))
            if src not in self._vindex or tgt not in self._vindex:
                raise QuiverError("arrow %r joins unknown vertices %r -> %r" % (name, src, tgt))
            self._aindex[name] = j
            self._out[self._vindex[src]].append(j)
            self._in[self._vindex[tgt]].append(j)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def vertex_index(self, label) -> int:
        return self._vindex[label]

    def arrow_index(self, name) -> int:
        return self._aindex[name]

    def arrow_name(self, j: int):
        return self.arrows[j][0]

    def source_index(self, j: int) -> int:
        return self._vindex[self.arrows[j][1]]

    def target_index(self, j: int) -> int:
        return self._vindex[self.arrows[j][2]]

    def out_arrow_indices(self, vertex_idx: int):
        return self._out[vertex_idx]

    def in_arrow_indices(self, vertex_idx: int):
        return self._in[vertex_idx]

    def __repr__(self):
        return "Quiver(%d vertices, %d arrows)" % (self.n_vertices, self.n_arrows)


def validate(quiver: Quiver) -> None:
    """Check that the quiver has no oriented cycles.

    Raises :class:`CyclicQuiverError` naming an explicit oriented cycle.
    Identifier uniqueness is already enforced by the constructor.
    """
    n = quiver.n_vertices
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    # iterative DFS; on hitting a vertex already on the stack, report the loop
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, iter(quiver.out_arrow_indices(root)))]
        state[root] = 1
        path_arrows = []
        path_vertices = [root]
        while stack:
            v, it = stack[-1]
            advanced = False
            for j in it:
                w = quiver.target_index(j)
                if state[w] == 1:
                    k = path_vertices.index(w)
                    names = [quiver.arrow_name(a) for a in path_arrows[k:]] + [quiver.arrow_name(j)]
                    raise CyclicQuiverError(names)
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(quiver.out_arrow_indices(w))))
                    path_arrows.append(j)
                    path_vertices.append(w)
                    advanced = True
                    break
            if not advanced:
                state[v] = 2
                stack.pop()
                if path_arrows:
                    path_arrows.pop()
                path_vertices.pop()


def is_filter(quiver: Quiver, vertex_set) -> bool:
    """True iff every arrow starting inside ``vertex_set`` also ends inside it."""
    members = set(vertex_set)
    for _, src, tgt in quiver.arrows:
        if src in members and tgt not in members:
            return False
    return True


def filters(quiver: Quiver, limit: Optional[int] = None) -> list:
    """Enumerate every filter (up-closed vertex set) of the quiver.

    Returns frozensets of vertex labels, sorted by size then by vertex
    position; always includes the empty set and the full vertex set.
    Raises :class:`SizeLimitError` when 2**n exceeds the limit.
    """
    n = quiver.n_vertices
    cap = subset_limit(limit)
    if 2**n > cap:
        raise SizeLimitError("2^%d vertex subsets exceed the limit %d" % (n, cap))
    pairs = [(quiver.source_index(j), quiver.target_index(j)) for j in range(quiver.n_arrows)]
    out = []
    for mask in range(2**n):
        if all(not (mask >> s) & 1 or (mask >> t) & 1 for s, t in pairs):
            out.append(frozenset(quiver.vertices[i] for i in range(n) if (mask >> i) & 1))
    out.sort(key=lambda f: (len(f), sorted(quiver.vertex_index(v) for v in f)))
    return out


# --- nonoriented walks in the double quiver ---------------------------------
#
# A step is (arrow_name, direction) with direction +1 (source -> target) or
# -1 (target -> source).  A nonoriented walk never follows a step by its own
# reversal.


def step_endpoints(quiver: Quiver, step) -> tuple:
    """Vertex indices (start, end) traversed by one step."""
    name, direction = step
    j = quiver.arrow_index(name)
    s, t = quiver.source_index(j), quiver.target_index(j)
    return (s, t) if direction > 0 else (t, s)


def walk_vertex_indices(quiver: Quiver, steps) -> list:
    """Vertex index sequence visited by the walk (one longer than the walk)."""
    if not steps:
        return []
    seq = [step_endpoints(quiver, steps[0])[0]]
    for st in steps:
        a, b = step_endpoints(quiver, st)
        if a != seq[-1]:
            raise QuiverError("walk steps are not concatenable at %r" % (st,))
        seq.append(b)
    return seq


def is_nonoriented_walk(quiver: Quiver, steps) -> bool:
    """Concatenable in the double quiver, with no immediate backtracking."""
    try:
        walk_vertex_indices(quiver, steps)
    except QuiverError:
        return False
    for (a1, d1), (a2, d2) in zip(steps, steps[1:]):
        if a1 == a2 and d1 == -d2:
            return False
    return True


def is_primitive_cycle(quiver: Quiver, steps) -> bool:
    """Closed nontrivial nonbacktracking walk with no proper closed sub-walk.

    Sub-walks are scanned over all rotations, so the backtracking and
    closedness conditions are checked cyclically.
    """
    n = len(steps)
    if n < 2 or not is_nonoriented_walk(quiver, steps):
        return False
    seq = walk_vertex_indices(quiver, steps)
    if seq[0] != seq[-1]:
        return False
    a1, d1 = steps[-1]
    a2, d2 = steps[0]
    if a1 == a2 and d1 == -d2:
        return False
    doubled = list(steps) + list(steps)
    for start in range(n):
        verts = walk_vertex_indices(quiver, doubled[start:start + n])
        for i in range(n):
            for j in range(i + 1, n + 1):
                if j - i == n:
                    continue
                if j - i >= 2 and verts[i] == verts[j]:
                    return False
    return True


def _canonical_cycle(steps_idx):
    """Lexicographically least rotation among the cycle and its inversion.

    Keys compare (arrow index, direction) with forward < backward, so the
    canonical sequence always starts with its least arrow traversed forward.
    """
    n = len(steps_idx)
    inverted = tuple((a, -d) for a, d in reversed(steps_idx))
    best = None
    for seq in (tuple(steps_idx), inverted):
        for i in range(n):
            rot = seq[i:] + seq[:i]
            key = tuple((a, 0 if d > 0 else 1) for a, d in rot)
            if best is None or key < best[0]:
                best = (key, rot)
    return best[1]


def primitive_cycles(quiver: Quiver, limit: Optional[int] = None) -> list:
    """One canonical representative per equivalence class of primitive cycles.

    Classes identify a cycle with all its rotations and all rotations of its
    inversion.  Enumeration is a depth-first search in the double quiver from
    each base vertex, visiting only vertices after the base in the vertex
    order; primitivity bounds the depth by the vertex count.
    """
    cap = limit if limit is not None else DEFAULT_CYCLE_LIMIT
    n = quiver.n_vertices
    found = set()

    def close_or_extend(base, current, steps, visited):
        last = steps[-1] if steps else None
        candidates = []
        for j in quiver.out_arrow_indices(current):
            candidates.append((j, 1, quiver.target_index(j)))
        for j in quiver.in_arrow_indices(current):
            candidates.append((j, -1, quiver.source_index(j)))
        for j, d, nxt in candidates:
            if last is not None and last[0] == j and last[1] == -d:
                continue
            if nxt == base:
                if len(steps) >= 1:
                    cyc = _canonical_cycle(steps + [(j, d)])
                    found.add(cyc)
                    if len(found) > cap:
                        raise SizeLimitError("more than %d primitive cycle classes" % cap)
                continue
            if nxt < base or nxt in visited:
                continue
            visited.add(nxt)
            steps.append((j, d))
            close_or_extend(base, nxt, steps, visited)
            steps.pop()
            visited.remove(nxt)

    for base in range(n):
        close_or_extend(base, base, [], {base})

    cycles = sorted(found, key=lambda seq: tuple((a, 0 if d > 0 else 1) for a, d in seq))
    return [tuple((quiver.arrow_name(a), d) for a, d in seq) for seq in cycles]


def cycle_vector(quiver: Quiver, steps) -> tuple:
    """Arrow-indexed vector of a cycle: +1 forward, -1 backward, 0 elsewhere."""
    vec = [0] * quiver.n_arrows
    for name, d in steps:
        j = quiver.arrow_index(name)
        if vec[j] != 0:
            raise QuiverError("arrow %r used twice; not a primitive cycle" % (name,))
        vec[j] = 1 if d > 0 else -1
    return tuple(vec)


def dot_export(quiver: Quiver, name: str = "quiver") -> str:
    """Deterministic DOT rendering of the quiver."""
    lines = ["digraph %s {" % name]
    for v in quiver.vertices:
        lines.append('  "%s";' % (v,))
    for aname, src, tgt in quiver.arrows:
        lines.append('  "%s" -> "%s" [label="%s"];' % (src, tgt, aname))
    lines.append("}")
    return "\n".join(lines) + "\n"
