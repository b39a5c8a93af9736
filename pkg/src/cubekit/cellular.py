"""Cellular homology of the quotient cube complex via barycentric subdivision.

The quotient has one vertex, one edge per generator, one square per relator
orbit and one n-cube per orbit of pointed n-cubes under the 2^n axis
reflections. A cell is stored by an orbit representative, a pointed cube
whose base corner sits at the origin of ``{0,1}^n``.

A face of the standard n-cube is a pair ``(free, pos)`` of bitmasks: the
free coordinates and the position on the fixed ones (``pos & free == 0``).
A simplex of the subdivision is a chain of faces ``F_0 < ... < F_m`` of some
top cell; its vertices are the barycenters of the F_i, ordered by dimension.
Two chains give the same simplex exactly when a reflection carrying one top
cell representative to the other carries one chain to the other, so the
canonical key is the lexicographically smallest chain over the stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .cubes import PointedCube, cube_shape, enumerate_cubes
from .groups import AbelianGroup
from .homology import homology_from_boundaries
from .presentation import Literal, Presentation, close_square_set, inv, verify_vh_axioms
from .snf import smith_normal_form

MAX_SUBDIVISION_DIM = 3


class CellularError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _key(c: PointedCube) -> tuple:
    return (c.directions, c.labels)


def subcube(c: PointedCube, free: int, pos: int) -> PointedCube:
    """The face of ``c`` spanned by the coordinates in ``free`` at ``pos``."""
    A = [a for a in range(c.n) if free >> a & 1]
    small = cube_shape(len(A))
    big = c.shape
    labels = []
    for d, lpos in small.edges:
        gpos = pos
        for t, a in enumerate(A):
            if lpos >> t & 1:
                gpos |= 1 << a
        labels.append(c.labels[big.edge_id(A[d], gpos)])
    return PointedCube(tuple(c.directions[a] for a in A), tuple(labels))


def _reflect_face(face: tuple, mask: int) -> tuple:
    free, pos = face
    return (free, pos ^ (mask & ~free))


def _restrict_face(face: tuple, outer_free: int) -> tuple:
    """Rewrite a face contained in the face with free set ``outer_free`` in
    that face's own coordinates."""
    free, pos = face
    A = [a for a in range(outer_free.bit_length()) if outer_free >> a & 1]
    lf = lp = 0
    for t, a in enumerate(A):
        if free >> a & 1:
            lf |= 1 << t
        if pos >> a & 1:
            lp |= 1 << t
    return (lf, lp)


def cube_faces(n: int) -> list:
    """All faces of the standard n-cube, sorted by (dimension, free, pos)."""
    out = []
    for free in range(1 << n):
        rest = ((1 << n) - 1) & ~free
        sub = rest
        while True:
            out.append((free, sub))
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return sorted(out, key=lambda f: (_popcount(f[0]), f[0], f[1]))


def _contains(outer: tuple, inner: tuple) -> bool:
    of, op = outer
    inf, ip = inner
    return inf & ~of == 0 and (ip & ~of) == op and inf != of


@dataclass
class CellComplex:
    """Cells of the quotient by dimension with their attaching faces."""

    name: str
    cells: list  # cells[n] = list of representative PointedCubes
    index: list  # index[n] = {key: id}
    faces: list  # faces[n][id] = tuple of (free, pos, face_dim, face_id)
    stabilizers: list  # stabilizers[n][id] = masks fixing the representative
    relaxed: bool = False

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list:
        return [len(c) for c in self.cells]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * m for n, m in enumerate(self.counts()))

    def canonical(self, c: PointedCube) -> tuple:
        """``(id, masks)`` with ``c.reflect(m)`` the representative for m in masks."""
        images = {m: c.reflect(m) for m in range(1 << c.n)}
        rep_key = min(_key(x) for x in images.values())
        try:
            cid = self.index[c.n][rep_key]
        except KeyError:
            raise CellularError(f"no {c.n}-cell representative for {rep_key}") from None
        return cid, tuple(m for m, x in images.items() if _key(x) == rep_key)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cell_counts": self.counts(),
            "euler_characteristic": self.euler_characteristic(),
            "relaxed": self.relaxed,
        }


def _one_cells(p: Presentation) -> list:
    return [PointedCube((c,), (Literal(c, i, 1),)) for c in range(p.k) for i in range(len(p.colors[c]))]


def build_cube_complex(p: Presentation, max_dim: int | None = None, relaxed: bool = False) -> CellComplex:
    """One cell per reflection orbit in each dimension 0..max_dim (default k).

    Unless ``relaxed`` the presentation must pass the VH axioms, and every
    enumerated family must be C3-complete. ``relaxed`` admits toy inputs such
    as the torus with one generator per color.
    """
    top = p.k if max_dim is None else max_dim
    if not 0 <= top <= p.k:
        raise CellularError(f"dimension must lie in 0..{p.k}, got {top}")
    if not relaxed:
        rep = verify_vh_axioms(p)
        if not rep.passed:
            raise CellularError("presentation fails the VH axioms; pass relaxed=True for toy inputs")
    sq = close_square_set(p)
    pointed = [[PointedCube((), ())], [c.reflect(m) for c in _one_cells(p) for m in (0, 1)]]
    for n in range(2, top + 1):
        cs = enumerate_cubes(p, n, sq)
        if not relaxed and not cs.ok:
            raise CellularError(f"C3 fails in dimension {n}")
        pointed.append(list(cs))

    cells, index, stabs = [], [], []
    for n in range(top + 1):
        reps: dict = {}
        for c in pointed[n]:
            orbit = {_key(c.reflect(m)): c.reflect(m) for m in range(1 << n)}
            if (1 << n) % len(orbit):
                raise CellularError(f"orbit of size {len(orbit)} does not divide {1 << n}")
            k = min(orbit)
            reps.setdefault(k, orbit[k])
        keys = sorted(reps)
        members = {_key(c) for c in pointed[n]}
        for k in keys:
            rep = reps[k]
            if any(_key(rep.reflect(m)) not in members for m in range(1 << n)):
                raise CellularError(f"{n}-cell orbit leaves the enumerated set")
        cells.append([reps[k] for k in keys])
        index.append({k: t for t, k in enumerate(keys)})
        stabs.append([tuple(m for m in range(1 << n) if reps[k].reflect(m) == reps[k]) for k in keys])

    cx = CellComplex(p.name, cells, index, [], stabs, relaxed)
    for n in range(top + 1):
        per = []
        for rep in cells[n]:
            fs = []
            for free, pos in cube_faces(n):
                if free == (1 << n) - 1:
                    continue
                sub = subcube(rep, free, pos)
                fid, _ = cx.canonical(sub)
                fs.append((free, pos, _popcount(free), fid))
            per.append(tuple(fs))
        cx.faces.append(per)
    return cx


# --- barycentric subdivision


@dataclass
class SimplicialComplex:
    """Simplices by dimension; ``vertices[t]`` is ``(cell_dim, cell_id)``."""

    simplices: list  # simplices[m] = list of canonical keys
    index: list  # index[m] = {key: id}
    boundaries: list  # boundaries[m-1] = integer matrix of ∂_m (rows: (m-1)-simplices)
    vertices: list = field(default_factory=list)

    def counts(self) -> list:
        return [len(s) for s in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * c for m, c in enumerate(self.counts()))

    def has_loops(self) -> bool:
        if len(self.simplices) < 2:
            return False
        d1 = self.boundaries[0]
        return bool(np.any(np.count_nonzero(d1, axis=0) < 2))

    def check_boundaries(self) -> list:
        """Indices m with ∂_m ∂_{m+1} != 0."""
        bad = []
        for m in range(1, len(self.boundaries)):
            a = sp.csr_matrix(self.boundaries[m - 1])
            if (a @ sp.csr_matrix(self.boundaries[m])).count_nonzero():
                bad.append(m)
        return bad


def _chains(n: int) -> list:
    """Chains of faces of the n-cube ending at the full cube (low to high)."""
    full = ((1 << n) - 1, 0)
    faces = [f for f in cube_faces(n) if f != full]
    out = []

    def grow(chain):
        out.append(tuple(chain))
        low = chain[0]
        for f in faces:
            if _contains(low, f):
                grow([f] + chain)

    grow([full])
    return out


class _Subdivider:
    def __init__(self, cx: CellComplex, descending: bool):
        self.cx = cx
        self.descending = descending

    def key(self, n: int, cid: int, chain: tuple, masks=None) -> tuple:
        masks = self.cx.stabilizers[n][cid] if masks is None else masks
        best = min(tuple(_reflect_face(f, m) for f in chain) for m in masks)
        return (n, cid, best)

    def key_for(self, c: PointedCube, chain: tuple) -> tuple:
        cid, masks = self.cx.canonical(c)
        best = min(tuple(_reflect_face(f, m) for f in chain) for m in masks)
        return (c.n, cid, best)

    def vertex_of(self, n: int, cid: int, face: tuple) -> tuple:
        free, pos = face
        if free == (1 << n) - 1:
            return (n, cid)
        for f, q, d, fid in self.cx.faces[n][cid]:
            if (f, q) == face:
                return (d, fid)
        raise CellularError(f"face {face} missing from cell ({n}, {cid})")

    def faces_of(self, key: tuple) -> list:
        """Signed codimension-one faces as (sign, key)."""
        n, cid, chain = key
        m = len(chain) - 1
        rep = self.cx.cells[n][cid]
        out = []
        for j in range(m + 1):
            # vertex order: low to high dimension, or reversed
            pos_in_order = (m - j) if self.descending else j
            sign = -1 if pos_in_order % 2 else 1
            rest = chain[:j] + chain[j + 1:]
            if j < m:
                out.append((sign, self.key(n, cid, rest)))
            else:
                free, pos = chain[m - 1]
                sub = subcube(rep, free, pos)
                local = tuple(_restrict_face(f, free) for f in rest)
                out.append((sign, self.key_for(sub, local)))
        return out


def barycentric_subdivision(cx: CellComplex, descending: bool = False) -> SimplicialComplex:
    """Subdivide every cell; ``descending`` orders simplex vertices from the
    highest-dimensional barycenter down (an alternative consistent orientation)."""
    if cx.dim > MAX_SUBDIVISION_DIM:
        raise CellularError(f"subdivision above dimension {MAX_SUBDIVISION_DIM} is not supported")
    sub = _Subdivider(cx, descending)
    by_dim: dict = {}
    for n in range(cx.dim + 1):
        chains = _chains(n)
        for cid in range(len(cx.cells[n])):
            for chain in chains:
                by_dim.setdefault(len(chain) - 1, set()).add(sub.key(n, cid, chain))
    top = max(by_dim)
    simplices = [sorted(by_dim[m]) for m in range(top + 1)]
    index = [{k: t for t, k in enumerate(s)} for s in simplices]
    boundaries = []
    for m in range(1, top + 1):
        mat = np.zeros((len(simplices[m - 1]), len(simplices[m])), dtype=np.int64)
        for col, key in enumerate(simplices[m]):
            for sign, fk in sub.faces_of(key):
                mat[index[m - 1][fk], col] += sign
        boundaries.append(mat)
    vertices = [sub.vertex_of(n, cid, chain[0]) for n, cid, chain in simplices[0]]
    return SimplicialComplex(simplices, index, boundaries, vertices)


def cellular_homology(s: SimplicialComplex) -> list:
    """H_0 .. H_top of the subdivision."""
    bad = s.check_boundaries()
    if bad:
        raise CellularError(f"boundary maps do not compose to zero at {bad}")
    return homology_from_boundaries(s.boundaries, s.counts())


# --- oracles


def abelianization(p: Presentation) -> AbelianGroup:
    """Γ^ab from the relator matrix; equals H_1 of the quotient complex."""
    offs, t = {}, 0
    for c in range(p.k):
        for i in range(len(p.colors[c])):
            offs[(c, i)] = t
            t += 1
    rows = []
    for r in p.relators:
        row = [0] * t
        for x in r:  # the relator is the word a b a' b' read left to right
            row[offs[(x.color, x.index)]] += x.sign
        rows.append(row)
    if not rows:
        return AbelianGroup.free(t)
    res = smith_normal_form(np.array(rows, dtype=np.int64))
    return AbelianGroup.from_cyclic(t - res.rank, res.torsion)


def torus_presentation() -> Presentation:
    """F_1 x F_1: one generator per color and a single commutator."""
    a, b = Literal(0, 0, 1), Literal(1, 0, 1)
    return Presentation("torus", (("a",), ("b",)), ((a, b, inv(a), inv(b)),))


def subdivision_counts_per_cell(n: int) -> int:
    """Top simplices per n-cell: n! 2^n (8 triangles per square, 48 per cube)."""
    return len([c for c in _chains(n) if len(c) == n + 1])


__all__ = [
    "CellComplex",
    "CellularError",
    "SimplicialComplex",
    "abelianization",
    "barycentric_subdivision",
    "build_cube_complex",
    "cellular_homology",
    "cube_faces",
    "subcube",
    "subdivision_counts_per_cell",
    "torus_presentation",
]
