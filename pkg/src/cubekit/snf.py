"""Exact Smith normal form over the integers.

Dense elimination on numpy arrays. Entries are int64 while a cheap bound
shows no overflow is possible; otherwise the working arrays switch to
Python integers (object dtype) and stay exact. Pivots have minimal absolute
value; among those the entry with the smallest Markowitz cost
(row count - 1) * (column count - 1) wins, then the smallest (row, col).

When transforms are requested we also carry their inverses, so
``U @ Uinv == I`` certifies unimodularity without computing determinants.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np

_SAFE = 2 ** 62


@dataclass
class SNFResult:
    shape: tuple
    diagonal: list  # python ints, length min(shape), divisors then zeros
    U: np.ndarray | None = None
    V: np.ndarray | None = None
    Uinv: np.ndarray | None = None
    Vinv: np.ndarray | None = None
    prime_bound: int | None = None  # set when torsion was only examined at primes <= bound

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def divisors(self) -> list:
        return [d for d in self.diagonal if d]

    @property
    def torsion(self) -> list:
        return [d for d in self.diagonal if d > 1]

    def S(self) -> np.ndarray:
        m, n = self.shape
        dt = object if any(abs(d) >= _SAFE for d in self.diagonal) else np.int64
        s = np.zeros((m, n), dtype=dt)
        for t, d in enumerate(self.diagonal):
            s[t, t] = d
        return s

    def multiplicities(self) -> dict:
        out: dict = {}
        for d in self.diagonal:
            out[d] = out.get(d, 0) + 1
        return out


def _as_int_array(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return a.copy()
    if a.size and not np.issubdtype(a.dtype, np.integer):
        raise TypeError("integer matrix expected")
    return a.astype(np.int64, copy=True)


def _maxabs(x) -> int:
    if x.size == 0:
        return 0
    return int(max(abs(int(x.max())), abs(int(x.min()))))


class _Work:
    """The matrix under reduction plus optional transform bookkeeping."""

    def __init__(self, a, track: bool):
        self.a = _as_int_array(a)
        m, n = self.a.shape
        self.track = track
        if track:
            self.U = np.eye(m, dtype=np.int64)
            self.Uinv = np.eye(m, dtype=np.int64)
            self.V = np.eye(n, dtype=np.int64)
            self.Vinv = np.eye(n, dtype=np.int64)

    def _promote(self) -> None:
        self.a = self.a.astype(object)
        if self.track:
            for name in ("U", "Uinv", "V", "Vinv"):
                setattr(self, name, getattr(self, name).astype(object))

    @property
    def exact_python(self) -> bool:
        return self.a.dtype == object

    def _guard(self, q, *blocks) -> None:
        """Promote to Python ints if ``block - q * row`` could overflow int64."""
        if self.exact_python:
            return
        mq = _maxabs(q)
        for row, block in blocks:
            if mq * _maxabs(row) + _maxabs(block) >= _SAFE:
                self._promote()
                return

    def swap_rows(self, i, j) -> None:
        if i == j:
            return
        self.a[[i, j]] = self.a[[j, i]]
        if self.track:
            self.U[[i, j]] = self.U[[j, i]]
            self.Uinv[:, [i, j]] = self.Uinv[:, [j, i]]

    def swap_cols(self, i, j) -> None:
        if i == j:
            return
        self.a[:, [i, j]] = self.a[:, [j, i]]
        if self.track:
            self.V[:, [i, j]] = self.V[:, [j, i]]
            self.Vinv[[i, j]] = self.Vinv[[j, i]]

    def row_eliminate(self, t, rows, q) -> None:
        """row_i -= q_i * row_t for i in rows."""
        a = self.a
        cols = np.flatnonzero(a[t])
        blocks = [(a[t, cols], a[np.ix_(rows, cols)])]
        if self.track:
            blocks.append((self.U[t], self.U[rows]))
            blocks.append((q, self.Uinv[:, t]))
        self._guard(q, *blocks)
        a = self.a
        a[np.ix_(rows, cols)] -= np.outer(q, a[t, cols])
        if self.track:
            self.U[rows] -= np.outer(q, self.U[t])
            self.Uinv[:, t] += self.Uinv[:, rows] @ q.astype(self.Uinv.dtype)

    def col_eliminate(self, t, cols, q) -> None:
        """col_j -= q_j * col_t for j in cols."""
        a = self.a
        rows = np.flatnonzero(a[:, t])
        blocks = [(a[rows, t], a[np.ix_(rows, cols)])]
        if self.track:
            blocks.append((self.V[:, t], self.V[:, cols]))
            blocks.append((q, self.Vinv[t]))
        self._guard(q, *blocks)
        a = self.a
        a[np.ix_(rows, cols)] -= np.outer(a[rows, t], q)
        if self.track:
            self.V[:, cols] -= np.outer(self.V[:, t], q)
            self.Vinv[t] += q.astype(self.Vinv.dtype) @ self.Vinv[cols]

    def negate_row(self, i) -> None:
        self.a[i] *= -1
        if self.track:
            self.U[i] *= -1
            self.Uinv[:, i] *= -1


def _find_pivot(sub) -> tuple | None:
    nz = sub != 0
    if not nz.any():
        return None
    absd = np.abs(sub)
    if sub.dtype == object:
        big = max(int(x) for x in absd[nz]) + 1
        absd = np.where(nz, absd, big).astype(object)
        flat = list(absd.ravel())
        pos = min(range(len(flat)), key=lambda t: (flat[t], t))
    else:
        absd = np.where(nz, absd, np.iinfo(np.int64).max)
        ri, ci = np.nonzero(absd == absd.min())
        if ri.size == 1:
            return int(ri[0]), int(ci[0])
        # Markowitz tie-break: least fill-in, then smallest (row, col)
        rcount = np.count_nonzero(nz, axis=1)
        ccount = np.count_nonzero(nz, axis=0)
        cost = (rcount[ri] - 1) * (ccount[ci] - 1)
        best = int(np.argmin(cost))  # nonzero() is row-major, so ties go to (row, col)
        return int(ri[best]), int(ci[best])
    return divmod(pos, sub.shape[1])


def _diagonalize(w: _Work) -> None:
    a = w.a
    m, n = a.shape
    for t in range(min(m, n)):
        piv = _find_pivot(w.a[t:, t:])
        if piv is None:
            return
        w.swap_rows(t, t + piv[0])
        w.swap_cols(t, t + piv[1])
        while True:
            a = w.a
            p = a[t, t]
            col = a[t + 1:, t]
            rows = np.flatnonzero(col)
            if rows.size:
                q = col[rows] // p
                w.row_eliminate(t, rows + t + 1, q)
            a = w.a
            row = a[t, t + 1:]
            cols = np.flatnonzero(row)
            if cols.size:
                q = row[cols] // p
                w.col_eliminate(t, cols + t + 1, q)
            a = w.a
            rem_c = np.flatnonzero(a[t + 1:, t])
            rem_r = np.flatnonzero(a[t, t + 1:])
            if not rem_c.size and not rem_r.size:
                break
            # a remainder smaller than the pivot survived: move it to (t, t)
            cands = [(abs(int(a[t + 1 + i, t])), t + 1 + i, t) for i in rem_c]
            cands += [(abs(int(a[t, t + 1 + j])), t, t + 1 + j) for j in rem_r]
            _, i, j = min(cands)
            w.swap_rows(t, i)
            w.swap_cols(t, j)


def _xgcd(a: int, b: int) -> tuple:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _fix_chain(w: _Work, diag: list) -> None:
    """Make the non-zero diagonal a divisibility chain via 2x2 unimodular moves.

    For diag(a, b) with g = xa + yb: L = [[x, y], [-b/g, a/g]] and
    R = [[1, -yb/g], [1, xa/g]] give L diag(a, b) R = diag(g, ab/g).
    """
    r = sum(1 for d in diag if d)
    for i in range(r):
        if abs(diag[i]) == 1:
            continue
        for j in range(i + 1, r):
            a, b = diag[i], diag[j]
            if b % a == 0:
                continue
            g, x, y = _xgcd(a, b)
            if g < 0:
                g, x, y = -g, -x, -y
            diag[i], diag[j] = g, a * b // g
            if w.track:
                _apply_2x2(w, i, j, [[x, y], [-b // g, a // g]], [[1, -y * b // g], [1, x * a // g]])
    for i in range(r):
        if diag[i] < 0:
            diag[i] = -diag[i]
            if w.track:
                w.negate_row(i)


def _apply_2x2(w: _Work, i, j, L, R) -> None:
    """U <- L U on rows i, j and V <- V R on columns i, j (inverses alongside)."""
    Li = [[L[1][1], -L[0][1]], [-L[1][0], L[0][0]]]  # both determinants are 1
    Ri = [[R[1][1], -R[0][1]], [-R[1][0], R[0][0]]]
    _guard_rows(w, (w.U[i], w.U[j], w.Uinv[:, i], w.Uinv[:, j],
                    w.V[:, i], w.V[:, j], w.Vinv[i], w.Vinv[j]), L + R)
    for M, C, by_rows in ((w.U, L, True), (w.Vinv, Ri, True),
                          (w.Uinv, [list(c) for c in zip(*Li)], False),
                          (w.V, [list(c) for c in zip(*R)], False)):
        x = M[i].copy() if by_rows else M[:, i].copy()
        y = M[j].copy() if by_rows else M[:, j].copy()
        new_i = C[0][0] * x + C[0][1] * y
        new_j = C[1][0] * x + C[1][1] * y
        if by_rows:
            M[i], M[j] = new_i, new_j
        else:
            M[:, i], M[:, j] = new_i, new_j


def _guard_rows(w: _Work, vecs, coeffs) -> None:
    if w.exact_python:
        return
    mc = max(abs(v) for row in coeffs for v in row)
    if 2 * mc * max(_maxabs(v) for v in vecs) >= _SAFE:
        w._promote()


_AUDIT = {"enabled": False, "calls": 0, "failures": 0}


def set_audit(enabled: bool) -> dict:
    """When enabled every call tracks transforms and checks them exactly.
    Returns the counter dict (reset on each call)."""
    _AUDIT.update(enabled=bool(enabled), calls=0, failures=0)
    return _AUDIT


def audit_counts() -> dict:
    return dict(_AUDIT)


def smith_normal_form(a, transforms: bool = False) -> SNFResult:
    """Smith normal form ``U @ a @ V = S``; transforms only if requested."""
    if _AUDIT["enabled"]:
        res = _smith(a, True)
        _AUDIT["calls"] += 1
        if not verify_snf(a, res)["ok"]:
            _AUDIT["failures"] += 1
            raise AssertionError("SNF audit failed")
        if not transforms:
            res.U = res.V = res.Uinv = res.Vinv = None
        return res
    return _smith(a, transforms)


def _smith(a, transforms: bool) -> SNFResult:
    w = _Work(a, transforms)
    m, n = w.a.shape
    _diagonalize(w)
    diag = [int(w.a[t, t]) for t in range(min(m, n))]
    nz = [d for d in diag if d]
    # the diagonal is already sorted so that zeros come last
    r = len(nz)
    if diag[:r] != nz:
        raise AssertionError("zero pivots before non-zero ones")
    _fix_chain(w, diag)
    res = SNFResult((m, n), diag)
    if transforms:
        res.U, res.V, res.Uinv, res.Vinv = w.U, w.V, w.Uinv, w.Vinv
    return res


# --- exact verification


def _small_primes(count: int, below: int) -> list:
    out = []
    c = below - 1
    while len(out) < count:
        if c % 2 and all(c % d for d in range(3, int(c ** 0.5) + 1, 2)):
            out.append(c)
        c -= 1
    return out


def exact_matmul(a, b) -> np.ndarray:
    """Exact integer product. Float64 BLAS when the result provably fits
    in 53 bits, otherwise residues modulo several primes and CRT."""
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[1]
    bound = inner * _maxabs(a) * _maxabs(b)
    if bound < 2 ** 53:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(out).astype(np.int64)
    # each residue product needs inner * p^2 < 2^53
    p_max = int((2 ** 53 / max(inner, 1)) ** 0.5)
    primes = []
    span = 1
    for p in _small_primes(64, p_max):
        primes.append(p)
        span *= p
        if span > 2 * bound + 1:
            break
    else:
        return np.dot(a.astype(object), b.astype(object))
    residues = []
    for p in primes:
        ap = np.mod(a.astype(object), p).astype(np.float64)
        bp = np.mod(b.astype(object), p).astype(np.float64)
        residues.append(np.mod(np.rint(ap @ bp).astype(np.int64), p))
    out = np.zeros(residues[0].shape, dtype=object)
    for p, r in zip(primes, residues):
        m = span // p
        out = out + r.astype(object) * (m * pow(m, -1, p))
    out = np.mod(out, span)
    half = span // 2
    out = np.where(out > half, out - span, out)
    return out


def _equal(x, y) -> bool:
    return bool(np.all(np.asarray(x, dtype=object) == np.asarray(y, dtype=object))) \
        if (np.asarray(x).dtype == object or np.asarray(y).dtype == object) \
        else bool(np.array_equal(x, y))


def verify_snf(a, res: SNFResult) -> dict:
    """Recompute ``U a V``, ``U Uinv`` and ``V Vinv`` exactly; check the chain."""
    if res.U is None:
        raise ValueError("transforms were not tracked")
    ua = exact_matmul(res.U, np.asarray(a))
    uav = exact_matmul(ua, res.V)
    m, n = res.shape
    ok_s = _equal(uav, res.S())
    ok_u = _equal(exact_matmul(res.U, res.Uinv), np.eye(m, dtype=np.int64))
    ok_v = _equal(exact_matmul(res.V, res.Vinv), np.eye(n, dtype=np.int64))
    divs = res.divisors
    chain = all(d > 0 for d in divs) and all(divs[t + 1] % divs[t] == 0 for t in range(len(divs) - 1))
    return {"UAV_equals_S": ok_s, "U_unimodular": ok_u, "V_unimodular": ok_v,
            "divisor_chain": chain, "ok": ok_s and ok_u and ok_v and chain}


def bareiss_det(a) -> int:
    """Fraction-free determinant (small matrices; Python integers)."""
    m = [[int(x) for x in row] for row in np.asarray(a, dtype=object)]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinantal_divisors(a, r: int) -> int:
    """gcd of all r x r minors (small matrices only; test oracle)."""
    from itertools import combinations

    a = np.asarray(a, dtype=object)
    g = 0
    for rows in combinations(range(a.shape[0]), r):
        for cols in combinations(range(a.shape[1]), r):
            g = gcd(g, bareiss_det(a[np.ix_(rows, cols)]))
    return g


def divisor_product(res: SNFResult, r: int) -> int:
    return prod(res.divisors[:r])


# --- sparse preprocessing for large matrices


def unit_pivot_reduce(a, max_density: float = 0.25) -> tuple:
    """Eliminate ±1 pivots on a sparse copy of ``a``.

    Each step is a Schur complement on a unit pivot, so
    ``S(a) = diag(1, ..., 1, S(core))``. Pivots are taken in order of
    Markowitz cost (lazy heap). Elimination stops early once the remaining
    block is denser than ``max_density`` (dicts cost far more memory than a
    dense int64 core by then). Returns ``(count, core)`` with ``core`` a
    dense matrix over the surviving rows and columns.
    """
    import heapq

    import scipy.sparse as sp

    m = sp.csr_matrix(a)
    nrows, ncols = m.shape
    rows = []
    cols = [set() for _ in range(ncols)]
    for i in range(nrows):
        lo, hi = m.indptr[i], m.indptr[i + 1]
        r = {int(j): int(v) for j, v in zip(m.indices[lo:hi], m.data[lo:hi]) if v}
        rows.append(r)
        for j in r:
            cols[j].add(i)

    def cost(i, j):
        return (len(rows[i]) - 1) * (len(cols[j]) - 1)

    heap = [(cost(i, j), i, j) for i in range(nrows) for j, v in rows[i].items() if abs(v) == 1]
    heapq.heapify(heap)
    count = 0
    nnz = sum(len(r) for r in rows)
    while heap:
        if nnz > 1_000_000 and nnz > max_density * (nrows - count) * (ncols - count):
            break
        c, i, j = heapq.heappop(heap)
        v = rows[i].get(j)
        if v is None or abs(v) != 1:
            continue
        now = cost(i, j)
        if now != c:
            heapq.heappush(heap, (now, i, j))
            continue
        prow = rows[i]
        for t in list(cols[j]):
            if t == i:
                continue
            f = rows[t][j] * v  # v is its own inverse
            rt = rows[t]
            for jj, x in prow.items():
                y = rt.get(jj, 0) - f * x
                if y:
                    if jj not in rt:
                        cols[jj].add(t)
                        nnz += 1
                    rt[jj] = y
                    if abs(y) == 1:
                        heapq.heappush(heap, (cost(t, jj), t, jj))
                elif jj in rt:
                    del rt[jj]
                    cols[jj].discard(t)
                    nnz -= 1
        for jj in prow:
            cols[jj].discard(i)
        nnz -= len(prow)
        rows[i] = {}
        count += 1
    live_r = [i for i in range(nrows) if rows[i]]
    live_c = sorted({j for i in live_r for j in rows[i]})
    cpos = {j: t for t, j in enumerate(live_c)}
    big = any(abs(x) >= _SAFE for i in live_r for x in rows[i].values())
    core = np.zeros((len(live_r), len(live_c)), dtype=object if big else np.int64)
    for s, i in enumerate(live_r):
        for j, x in rows[i].items():
            core[s, cpos[j]] = x
    return count, core


def smith_normal_form_sparse(a) -> SNFResult:
    """Diagonal of the Smith form via unit-pivot elimination, then the dense
    algorithm on the remaining core. No transforms."""
    shape = tuple(a.shape)
    count, core = unit_pivot_reduce(a)
    inner = smith_normal_form(core) if core.size else SNFResult(core.shape, [])
    nz = [d for d in inner.diagonal if d]
    diag = [1] * count + nz
    diag += [0] * (min(shape) - len(diag))
    return SNFResult(shape, diag)
