"""Pointed n-cubes: enumeration by constraint propagation, C3, reflections.

Geometric model. A pointed cube with sorted directions ``D = (p, j_1, ...)``
lives on the vertices ``{0,1}^n``; coordinate 0 is the base direction ``p``.
Every edge carries the label read in its positive direction. A 2-face in
directions ``a < b`` with lower corner ``x`` is the loop

    (lab_a(x), lab_b(x + e_a), lab_a(x + e_b)^-1, lab_b(x)^-1)

and must be a pointed square. The printed families translate as follows,
with ``L`` a subset of ``J = D \\ {p}`` (stored as a bitmask over J):

* ``u^L`` is the p-edge over position L, read +p when |L| is even and -p
  when |L| is odd;
* ``v_j^L`` is the +j edge at position L with p-coordinate ``1 - |L| mod 2``;
* ``w_j^L`` is the j-edge at position L with p-coordinate ``|L| mod 2``, read
  in the -j direction.

With these readings conditions (a), (b) and (c) are exactly the boundary
loops of the faces (p, j), (i, j) at p-level ``1 - |L|``, and (i, j) at
p-level ``|L|``, so checking every face is the same as checking (a)-(c).
``check_conditions`` verifies the printed conditions literally anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

from .presentation import (
    Literal,
    Presentation,
    SquareSet,
    close_square_set,
    inv,
    normalize_square,
)

# --- cube geometry (independent of labels)


@dataclass(frozen=True)
class CubeShape:
    """Edge and face indexing of the n-cube. Coordinates are 0..n-1."""

    n: int
    edges: tuple  # (direction, position mask with that bit clear)
    faces: tuple  # (a, b, lower corner mask) with a < b
    face_edges: tuple  # per face, the 4 edge ids in loop order

    @classmethod
    def build(cls, n: int) -> "CubeShape":
        edges = [(d, pos) for d in range(n) for pos in range(1 << n) if not pos >> d & 1]
        eid = {e: t for t, e in enumerate(edges)}
        faces, face_edges = [], []
        for a, b in combinations(range(n), 2):
            for x in range(1 << n):
                if x >> a & 1 or x >> b & 1:
                    continue
                faces.append((a, b, x))
                face_edges.append((
                    eid[(a, x)], eid[(b, x | 1 << a)], eid[(a, x | 1 << b)], eid[(b, x)]
                ))
        return cls(n, tuple(edges), tuple(faces), tuple(face_edges))

    def edge_id(self, d: int, pos: int) -> int:
        return self.edges.index((d, pos))


_SHAPES: dict = {}


def cube_shape(n: int) -> CubeShape:
    if n not in _SHAPES:
        _SHAPES[n] = CubeShape.build(n)
    return _SHAPES[n]


def face_loop(shape: CubeShape, labels: Sequence[Literal], f: int) -> tuple:
    e0, e1, e2, e3 = shape.face_edges[f]
    return (labels[e0], labels[e1], inv(labels[e2]), inv(labels[e3]))


def _schedule(shape: CubeShape) -> list:
    """Order in which faces force their edges, starting from the corner edges.

    The known edges at the start are the p-edge at the origin and the +j
    edges at ``e_p``. A face is usable once two adjacent sides are known;
    C2 then fixes the whole square. Independent of labels, so computed once.
    """
    n = shape.n
    known = {shape.edge_id(0, 0)} | {shape.edge_id(j, 1) for j in range(1, n)}
    steps = []
    progress = True
    while progress and len(known) < len(shape.edges):
        progress = False
        for f, fe in enumerate(shape.face_edges):
            if all(e in known for e in fe):
                continue
            for s in range(4):
                if fe[s] in known and fe[(s + 1) % 4] in known:
                    steps.append((f, s))
                    known.update(fe)
                    progress = True
                    break
    if len(known) != len(shape.edges):
        raise AssertionError("propagation schedule does not reach every edge")
    return steps


_SCHEDULES: dict = {}


def schedule(n: int) -> list:
    if n not in _SCHEDULES:
        _SCHEDULES[n] = _schedule(cube_shape(n))
    return _SCHEDULES[n]


# --- cubes


def _parity(mask: int) -> int:
    return bin(mask).count("1") & 1


@dataclass(frozen=True)
class PointedCube:
    """An edge-labelled pointed n-cube with directions ``directions`` (sorted).

    ``labels[t]`` is the +direction label of ``cube_shape(n).edges[t]``.
    """

    directions: tuple
    labels: tuple

    @property
    def n(self) -> int:
        return len(self.directions)

    @property
    def shape(self) -> CubeShape:
        return cube_shape(self.n)

    def _label(self, d: int, pos: int) -> Literal:
        return self.labels[self.shape.edge_id(d, pos)]

    def _jpos(self, L: int) -> int:
        # L is a mask over J = coordinates 1..n-1, bit t <-> coordinate t+1
        return L << 1

    def u(self, L: int) -> Literal:
        lab = self._label(0, self._jpos(L))
        return inv(lab) if _parity(L) else lab

    def v(self, j: int, L: int) -> Literal:
        """``v_j^L``; ``j`` is a coordinate in 1..n-1, L a mask over J without j."""
        return self._label(j, self._jpos(L) | (1 - _parity(L)))

    def w(self, j: int, L: int) -> Literal:
        return inv(self._label(j, self._jpos(L) | _parity(L)))

    def families(self) -> tuple:
        """``(u, v, w)`` with u indexed by L and v, w by (j, L) in binary order."""
        n = self.n
        m = n - 1
        u = tuple(self.u(L) for L in range(1 << m))
        v, w = [], []
        for j in range(1, n):
            bit = 1 << (j - 1)
            v.append(tuple(self.v(j, L) for L in range(1 << m) if not L & bit))
            w.append(tuple(self.w(j, L) for L in range(1 << m) if not L & bit))
        return u, tuple(v), tuple(w)

    def sort_key(self) -> tuple:
        u, v, w = self.families()
        return (self.directions, u, v, w)

    def faces(self) -> list:
        shape = self.shape
        return [face_loop(shape, self.labels, f) for f in range(len(shape.faces))]

    def reflect(self, mask: int) -> "PointedCube":
        """Reflect in every coordinate whose bit is set in ``mask``."""
        shape = self.shape
        out = []
        for d, pos in shape.edges:
            src = pos ^ (mask & ~(1 << d))
            lab = self.labels[shape.edge_id(d, src)]
            out.append(inv(lab) if mask >> d & 1 else lab)
        return PointedCube(self.directions, tuple(out))

    def to_dict(self, p: Presentation) -> dict:
        u, v, w = self.families()
        fmt = p.format_literal
        J = self.directions[1:]
        return {
            "directions": list(self.directions),
            "u": [fmt(x) for x in u],
            "v": {str(J[t]): [fmt(x) for x in v[t]] for t in range(len(J))},
            "w": {str(J[t]): [fmt(x) for x in w[t]] for t in range(len(J))},
        }


def cube_symmetries(c: PointedCube) -> set:
    """Orbit of ``c`` under the 2^n axis reflections."""
    return {c.reflect(mask) for mask in range(1 << c.n)}


def check_conditions(c: PointedCube, sq: SquareSet) -> list:
    """Evaluate conditions (a)-(c) on the families; returns failing tuples."""
    n = c.n
    D = c.directions
    m = n - 1
    bad = []
    for j in range(1, n):
        bj = 1 << (j - 1)
        for L in range(1 << m):
            if L & bj:
                continue
            s = (c.u(L), c.v(j, L), c.u(L | bj), c.w(j, L))
            if s not in sq:
                bad.append(("a", D[j], L, s))
    for i, j in combinations(range(1, n), 2):
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        for L in range(1 << m):
            if L & (bi | bj):
                continue
            for a, b in ((i, j), (j, i)):
                ba, bb = 1 << (a - 1), 1 << (b - 1)
                s = (inv(c.v(a, L)), c.v(b, L), inv(c.w(a, L | bb)), c.w(b, L | ba))
                if s not in sq:
                    bad.append(("b", (D[a], D[b]), L, s))
                s = (c.w(a, L), inv(c.w(b, L)), c.v(a, L | bb), inv(c.v(b, L | ba)))
                if s not in sq:
                    bad.append(("c", (D[a], D[b]), L, s))
    return bad


# --- enumeration


class C3Failure(Exception):
    def __init__(self, witnesses):
        super().__init__(f"C3 fails: {len(witnesses)} corner configurations do not extend")
        self.witnesses = witnesses


@dataclass
class CubeSet:
    n: int
    cubes: list
    index: dict = field(repr=False)
    witnesses: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self) -> Iterator[PointedCube]:
        return iter(self.cubes)

    def __getitem__(self, t: int) -> PointedCube:
        return self.cubes[t]

    @property
    def ok(self) -> bool:
        return not self.witnesses

    @classmethod
    def from_cubes(cls, n: int, cubes, witnesses=()) -> "CubeSet":
        cubes = sorted(set(cubes), key=PointedCube.sort_key)
        return cls(n, cubes, {c: t for t, c in enumerate(cubes)}, list(witnesses))


def _lookup_tables(sq: SquareSet, D: Sequence[int]) -> dict:
    """``tables[(a, b, s)][(x, y)]`` -> square of F(D[a], D[b]) with x, y at loop slots s, s+1."""
    tables = {}
    for a, b in combinations(range(len(D)), 2):
        comp = sq.component(D[a], D[b])
        for s in range(4):
            t = (s + 1) % 4
            tables[(a, b, s)] = {(sqr[s], sqr[t]): sqr for sqr in comp}
    return tables


def _extend_corner(shape, steps, tables, sq, corner_labels):
    labels: list = [None] * len(shape.edges)
    for e, lab in corner_labels.items():
        labels[e] = lab
    for f, s in steps:
        a, b, _ = shape.faces[f]
        fe = shape.face_edges[f]
        loop = face_loop_partial(labels, fe)
        t = (s + 1) % 4
        hit = tables[(a, b, s)].get((loop[s], loop[t]))
        if hit is None:
            return None, ("missing square", shape.faces[f], (loop[s], loop[t]))
        for slot in range(4):
            e = fe[slot]
            val = hit[slot] if slot < 2 else inv(hit[slot])
            if labels[e] is None:
                labels[e] = val
            elif labels[e] != val:
                return None, ("inconsistent", shape.faces[f], (labels[e], val))
    for f in range(len(shape.faces)):
        loop = face_loop(shape, labels, f)
        if normalize_square(loop) not in sq.squares:
            return None, ("inconsistent", shape.faces[f], loop)
    return tuple(labels), None


def face_loop_partial(labels, fe) -> list:
    out = []
    for slot, e in enumerate(fe):
        lab = labels[e]
        out.append(lab if lab is None or slot < 2 else inv(lab))
    return out


def enumerate_cubes_for(p: Presentation, directions: Sequence[int],
                        sq: SquareSet | None = None) -> CubeSet:
    """All pointed cubes with the given direction set (sorted, base = smallest)."""
    D = tuple(sorted(directions))
    n = len(D)
    if n < 2:
        raise ValueError("cubes need at least two directions")
    if len(set(D)) != n or not all(0 <= d < p.k for d in D):
        raise ValueError(f"bad direction set {directions}")
    sq = sq or close_square_set(p)
    shape = cube_shape(n)
    steps = schedule(n)
    tables = _lookup_tables(sq, D)
    corner_edges = [shape.edge_id(0, 0)] + [shape.edge_id(j, 1) for j in range(1, n)]
    found, witnesses = [], []
    for choice in product(*(p.literals(d) for d in D)):
        labels, why = _extend_corner(shape, steps, tables, sq, dict(zip(corner_edges, choice)))
        if labels is None:
            witnesses.append({
                "directions": D,
                "corner": tuple(p.format_literal(x) for x in choice),
                "reason": why[0],
                "face": why[1],
            })
        else:
            found.append(PointedCube(D, labels))
    return CubeSet.from_cubes(n, found, witnesses)


def enumerate_cubes(p: Presentation, n: int, sq: SquareSet | None = None) -> CubeSet:
    """S_n: pointed n-cubes over every n-subset of colors, in deterministic order."""
    if not 2 <= n <= p.k:
        raise ValueError(f"dimension must lie in 2..{p.k}, got {n}")
    sq = sq or close_square_set(p)
    cubes, witnesses = [], []
    for D in combinations(range(p.k), n):
        part = enumerate_cubes_for(p, D, sq)
        cubes.extend(part.cubes)
        witnesses.extend(part.witnesses)
    return CubeSet.from_cubes(n, cubes, witnesses)


def brute_force_cubes(p: Presentation, directions: Sequence[int],
                      sq: SquareSet | None = None) -> set:
    """Test oracle: backtrack over all edge labelings, keep those whose faces are squares."""
    D = tuple(sorted(directions))
    n = len(D)
    sq = sq or close_square_set(p)
    shape = cube_shape(n)
    # faces that become complete once edge t is assigned
    closing = [[] for _ in shape.edges]
    for f, fe in enumerate(shape.face_edges):
        closing[max(fe)].append(f)
    choices = [p.literals(D[d]) for d, _ in shape.edges]
    labels: list = [None] * len(shape.edges)
    out = set()

    def rec(t):
        if t == len(labels):
            out.add(PointedCube(D, tuple(labels)))
            return
        for lab in choices[t]:
            labels[t] = lab
            if all(normalize_square(face_loop(shape, labels, f)) in sq.squares for f in closing[t]):
                rec(t + 1)
        labels[t] = None

    rec(0)
    return out


@dataclass
class C3Report:
    passed: bool
    counts: dict  # direction tuple -> number of cubes
    expected: dict  # direction tuple -> product of sizes
    witnesses: list

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "counts": {",".join(map(str, D)): n for D, n in self.counts.items()},
            "expected": {",".join(map(str, D)): n for D, n in self.expected.items()},
            "witnesses": [dict(w, face=list(w["face"]), directions=list(w["directions"]))
                          for w in self.witnesses],
        }


def check_c3(p: Presentation, sq: SquareSet | None = None) -> C3Report:
    """Run the extension test for every direction subset of size 3..k."""
    sq = sq or close_square_set(p)
    counts, expected, witnesses = {}, {}, []
    for n in range(3, p.k + 1):
        for D in combinations(range(p.k), n):
            part = enumerate_cubes_for(p, D, sq)
            counts[D] = len(part)
            e = 1
            for d in D:
                e *= p.sizes[d]
            expected[D] = e
            witnesses.extend(part.witnesses)
    passed = not witnesses and counts == expected
    return C3Report(passed, counts, expected, witnesses)
