"""Adjacency matrices on S_k, k-graph validation, unique common extensions.

Orientation: ``M_i[A, B] = 1`` means B is E_i-adjacent to A; rows are A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .cubes import CubeSet, PointedCube
from .presentation import Presentation, inv


@dataclass
class AdjacencyMatrices:
    mats: list  # scipy.sparse.csr_matrix, int64
    sizes: tuple | None = None  # literal counts per color, when known

    @property
    def k(self) -> int:
        return len(self.mats)

    @property
    def n(self) -> int:
        return self.mats[0].shape[0]

    def dense(self, i: int) -> np.ndarray:
        return self.mats[i].toarray()

    def permuted(self, perm) -> "AdjacencyMatrices":
        """Relabel vertices: new vertex t is old vertex ``perm[t]``."""
        perm = np.asarray(perm)
        return AdjacencyMatrices([m[perm][:, perm].tocsr() for m in self.mats], self.sizes)

    @classmethod
    def from_dense(cls, mats, sizes=None) -> "AdjacencyMatrices":
        return cls([sp.csr_matrix(np.asarray(m, dtype=np.int64)) for m in mats], sizes)


def _key_p(c: PointedCube, as_b: bool, printed: bool = False) -> tuple:
    """Face data compared by M_p criterion (i).

    Default: the far p-face of A against the near p-face of B. The p-level
    of the v and w edges alternates with |L|, so that means v^L vs z^L for
    even |L| and w^L vs y^L for odd |L|. ``printed=True`` imposes both
    equalities for every L, which forces A's two p-faces onto B's swapped
    faces and leaves no adjacencies in most presentations.
    """
    n = c.n
    m = n - 1
    out = []
    for j in range(1, n):
        bj = 1 << (j - 1)
        for L in range(1 << m):
            if L & bj:
                continue
            odd = bin(L).count("1") & 1
            if as_b:  # inverted z, y of B
                if printed or not odd:
                    out.append(inv(c.w(j, L)))
                if printed or odd:
                    out.append(inv(c.v(j, L)))
            else:
                if printed or not odd:
                    out.append(c.v(j, L))
                if printed or odd:
                    out.append(c.w(j, L))
    return tuple(out)


def _key_i(c: PointedCube, i: int, as_b: bool) -> tuple:
    n = c.n
    m = n - 1
    bi = 1 << (i - 1)
    out = []
    for L in range(1 << m):
        if L & bi:
            continue
        if as_b:
            out.append(inv(c.u(L)))
        else:
            out.append(c.u(L | bi))
        for j in range(1, n):
            bj = 1 << (j - 1)
            if j == i or L & bj:
                continue
            if as_b:
                out.append((inv(c.v(j, L)), inv(c.w(j, L))))
            else:
                out.append((c.w(j, L | bi), c.v(j, L | bi)))
    return tuple(out)


def _ok_p(a: PointedCube, b: PointedCube) -> bool:
    return all(a.u(L) != inv(b.u(L)) for L in range(1 << (a.n - 1)))


def _ok_i(a: PointedCube, b: PointedCube, i: int) -> bool:
    bi = 1 << (i - 1)
    for L in range(1 << (a.n - 1)):
        if L & bi:
            continue
        if a.v(i, L) == inv(b.v(i, L)) or a.w(i, L) == inv(b.w(i, L)):
            return False
    return True


def adjacency_matrices(cubes: CubeSet, p: Presentation | None = None,
                       printed_mp: bool = False) -> AdjacencyMatrices:
    """Matrices M_1..M_k over the pointed k-cubes, by the printed criteria.

    The first direction of the cubes plays the role of the base direction.
    Criteria (i)-(iii) are equalities between a face of A and the inverted
    opposite face of B, so candidates are found through a dictionary keyed
    on that face; the inequalities are then checked pairwise.
    """
    cs = list(cubes)
    if not cs:
        raise ValueError("empty cube set")
    n = cs[0].n
    if any(c.directions != cs[0].directions for c in cs):
        raise ValueError("adjacency matrices need cubes over a single direction set")
    N = len(cs)
    mats = []
    for i in range(n):
        if i == 0:
            kb = [_key_p(c, True, printed_mp) for c in cs]
            ka = [_key_p(c, False, printed_mp) for c in cs]
            ok = _ok_p
        else:
            kb = [_key_i(c, i, True) for c in cs]
            ka = [_key_i(c, i, False) for c in cs]
            ok = lambda a, b, i=i: _ok_i(a, b, i)  # noqa: E731
        by_key: dict = {}
        for t, key in enumerate(kb):
            by_key.setdefault(key, []).append(t)
        rows, cols = [], []
        for s, key in enumerate(ka):
            for t in by_key.get(key, ()):
                if ok(cs[s], cs[t]):
                    rows.append(s)
                    cols.append(t)
        data = np.ones(len(rows), dtype=np.int64)
        mats.append(sp.csr_matrix((data, (rows, cols)), shape=(N, N), dtype=np.int64))
    sizes = tuple(p.sizes[d] for d in cs[0].directions) if p is not None else None
    return AdjacencyMatrices(mats, sizes)


# --- validation


@dataclass
class UCEReport:
    passed: bool
    checked: int
    mode: str  # "all" or "sample"
    seed: int | None
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "mode": self.mode,
                "seed": self.seed, "witnesses": self.witnesses[:20]}


@dataclass
class KGraphReport:
    is_k_graph: bool
    nonzero_pass: bool
    commutation_pass: bool
    zero_one_pass: bool
    uce_pass: bool
    row_three_pass: bool
    column_sums_pass: bool | None
    row_sums_equal_size_minus_one: bool | None
    connected: bool | None = None
    aperiodic: bool | None = None
    uce: UCEReport | None = None
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k not in ("uce", "witnesses")}
        d["uce"] = self.uce.to_dict() if self.uce else None
        d["witnesses"] = self.witnesses[:20]
        return d


def _rows(m) -> list:
    m = m.tocsr()
    return [m.indices[m.indptr[a]:m.indptr[a + 1]].tolist() for a in range(m.shape[0])]


def _max_entry(m) -> int:
    return int(m.max()) if m.nnz else 0


def check_uce(m: AdjacencyMatrices, sample: int | str = 1000, seed: int = 0) -> UCEReport:
    """Unique common extensions, checked on matrix rows only.

    k >= 3: for A and B_p, B_q, B_r adjacent in three distinct colors, the
    cubes C_pq, C_pr, C_qr and D must each exist uniquely. The completion
    conditions read C_pq in M_p(B_q, .) and M_q(B_p, .), and cyclically, with
    D in M_p(C_qr, .), M_q(C_pr, .), M_r(C_pq, .). k = 2: the square case.
    ``sample="all"`` checks every quadruple.
    """
    rows = [_rows(x) for x in m.mats]
    sets = [[set(r) for r in rs] for rs in rows]
    k, N = m.k, m.n
    witnesses = []
    checked = 0

    def one(A, cols, Bs):
        nonlocal checked
        checked += 1
        if k == 2:
            (c1, c2), (B, C) = cols, Bs
            Ds = sets[c2][B] & sets[c1][C]
            if len(Ds) != 1:
                witnesses.append({"A": A, "B": list(Bs), "colors": list(cols), "D": sorted(Ds)})
            return
        p, q, r = cols
        Bp, Bq, Br = Bs
        Cpq = sets[p][Bq] & sets[q][Bp]
        Cpr = sets[p][Br] & sets[r][Bp]
        Cqr = sets[q][Br] & sets[r][Bq]
        if not (len(Cpq) == len(Cpr) == len(Cqr) == 1):
            witnesses.append({"A": A, "B": list(Bs), "colors": list(cols),
                              "C": [sorted(Cpq), sorted(Cpr), sorted(Cqr)]})
            return
        (cpq,), (cpr,), (cqr,) = Cpq, Cpr, Cqr
        Ds = sets[p][cqr] & sets[q][cpr] & sets[r][cpq]
        if len(Ds) != 1:
            witnesses.append({"A": A, "B": list(Bs), "colors": list(cols), "D": sorted(Ds)})

    color_sets = list(combinations(range(k), 2 if k == 2 else 3))
    if sample == "all":
        for A in range(N):
            for cols in color_sets:
                lists = [rows[c][A] for c in cols]
                for Bs in _product(lists):
                    one(A, cols, Bs)
        return UCEReport(not witnesses, checked, "all", None, witnesses)

    rng = np.random.default_rng(seed)
    for _ in range(int(sample)):
        A = int(rng.integers(N))
        cols = color_sets[int(rng.integers(len(color_sets)))]
        lists = [rows[c][A] for c in cols]
        if any(not x for x in lists):
            witnesses.append({"A": A, "colors": list(cols), "reason": "empty row"})
            checked += 1
            continue
        Bs = tuple(x[int(rng.integers(len(x)))] for x in lists)
        one(A, cols, Bs)
    return UCEReport(not witnesses, checked, "sample", seed, witnesses)


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def connectivity_aperiodicity(m: AdjacencyMatrices, p: Presentation | None = None) -> dict:
    union = m.mats[0].copy()
    for x in m.mats[1:]:
        union = union + x
    ncomp, _ = connected_components(union, directed=True, connection="strong")
    sizes = p.sizes if p is not None else m.sizes
    aperiodic = bool(sizes is not None and all(s >= 4 for s in sizes))
    return {"connected": bool(ncomp == 1), "components": int(ncomp), "aperiodic": aperiodic}


def validate_k_graph(m: AdjacencyMatrices, uce_sample: int | str = 1000, seed: int = 0,
                     p: Presentation | None = None) -> KGraphReport:
    k = m.k
    witnesses = []
    nonzero = all(x.nnz > 0 for x in m.mats)
    if not nonzero:
        witnesses.append({"check": "nonzero", "zero": [i for i, x in enumerate(m.mats) if not x.nnz]})

    commute = True
    for i, j in combinations(range(k), 2):
        d = m.mats[i] @ m.mats[j] - m.mats[j] @ m.mats[i]
        if d.count_nonzero():
            commute = False
            witnesses.append({"check": "commutation", "pair": [i, j]})

    zero_one = True
    for r in (1, 2, 3):
        for combo in combinations(range(k), r):
            prod = m.mats[combo[0]]
            for c in combo[1:]:
                prod = prod @ m.mats[c]
            if prod.nnz and (prod.min() < 0 or _max_entry(prod) > 1):
                zero_one = False
                witnesses.append({"check": "zero_one", "product": list(combo),
                                  "max_entry": _max_entry(prod)})

    row_nnz = [np.diff(x.tocsr().indptr) for x in m.mats]
    row_three = all(int(r.min()) >= 3 for r in row_nnz)
    if not row_three:
        witnesses.append({"check": "row_three", "min_row_nnz": [int(r.min()) for r in row_nnz]})

    col_ok = rows_eq = None
    if m.sizes is not None:
        col_ok, rows_eq = True, True
        for i, x in enumerate(m.mats):
            want = m.sizes[i] - 1
            cs = np.asarray(x.sum(axis=0)).ravel()
            rs = np.asarray(x.sum(axis=1)).ravel()
            if not np.all(cs == want):
                col_ok = False
                witnesses.append({"check": "column_sums", "matrix": i,
                                  "values": sorted(set(cs.tolist()))})
            if not np.all(rs == want):
                rows_eq = False

    uce = check_uce(m, uce_sample, seed) if k >= 2 and nonzero else None
    uce_pass = bool(uce and uce.passed)
    flags = connectivity_aperiodicity(m, p)
    return KGraphReport(
        is_k_graph=commute and zero_one and uce_pass,
        nonzero_pass=nonzero,
        commutation_pass=commute,
        zero_one_pass=zero_one,
        uce_pass=uce_pass,
        row_three_pass=row_three,
        column_sums_pass=col_ok,
        row_sums_equal_size_minus_one=rows_eq,
        connected=flags["connected"],
        aperiodic=flags["aperiodic"],
        uce=uce,
        witnesses=witnesses,
    )


def write_matrix_text(path, a) -> None:
    """``rows cols`` on the first line, then one line per row."""
    a = a.toarray() if sp.issparse(a) else np.asarray(a)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def read_matrix_text(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        r, c = map(int, fh.readline().split())
        data = [list(map(int, line.split())) for line in fh if line.strip()]
    a = np.array(data, dtype=np.int64).reshape(r, c)
    return a
