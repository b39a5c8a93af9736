"""The chain complex D_k built from k commuting matrices, and its homology.

``(D_k)_l`` is a direct sum of copies of Z^N indexed by the strictly
increasing tuples of length l (lexicographic order). The block of ``∂_l``
in row λ and column μ is ``(-1)^(i+1) (I - M_{μ_i}^T)`` when λ is μ with
its i-th entry removed (1-based i), and zero otherwise.

Homology uses ``H_p = Z^(c - r - s) + ⊕ Z/a_j`` with c the dimension of
``(D_k)_p``, s = rank ∂_p, r = rank ∂_{p+1} and a_j the divisors of
∂_{p+1} above 1. This is valid because im ∂_{p+1} sits inside ker ∂_p,
which is a saturated sublattice, so the Smith form of ∂_{p+1} computed in
the ambient lattice gives the torsion of the quotient.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .groups import AbelianGroup
from .snf import SNFResult, audit_counts, exact_matmul, smith_normal_form, smith_normal_form_sparse

INFINITE = math.inf
DENSE_LIMIT = 4_000_000  # entries; larger maps go through sparse unit-pivot elimination


def index_sets(k: int) -> list:
    """N_0 .. N_k; colors numbered from 1 as in the block formula."""
    return [list(combinations(range(1, k + 1), l)) for l in range(k + 1)]


@dataclass
class ChainComplex:
    k: int
    n: int  # vertices per block
    boundaries: list  # ∂_1 .. ∂_k as scipy.sparse csr int64
    index: list  # N_0 .. N_k

    def boundary(self, p: int):
        """∂_p for 0 <= p <= k+1; the outer maps are zero."""
        if 1 <= p <= self.k:
            return self.boundaries[p - 1]
        if p == 0:
            return sp.csr_matrix((0, self.dim(0)), dtype=np.int64)
        if p == self.k + 1:
            return sp.csr_matrix((self.dim(self.k), 0), dtype=np.int64)
        raise IndexError(p)

    def dim(self, p: int) -> int:
        return len(self.index[p]) * self.n

    def permuted(self, perm) -> "ChainComplex":
        """Apply the same vertex relabelling inside every block."""
        perm = np.asarray(perm)
        out = []
        for p, d in enumerate(self.boundaries, start=1):
            rp = np.concatenate([perm + b * self.n for b in range(len(self.index[p - 1]))])
            cp = np.concatenate([perm + b * self.n for b in range(len(self.index[p]))])
            out.append(d[rp][:, cp].tocsr())
        return ChainComplex(self.k, self.n, out, self.index)


def _blocks_to_sparse(blocks, nrows, ncols, n) -> sp.csr_matrix:
    grid = [[blocks.get((r, c)) for c in range(ncols)] for r in range(nrows)]
    for r in range(nrows):
        if all(b is None for b in grid[r]):
            grid[r][0] = sp.csr_matrix((n, n), dtype=np.int64)
    for c in range(ncols):
        if all(grid[r][c] is None for r in range(nrows)):
            grid[0][c] = sp.csr_matrix((n, n), dtype=np.int64)
    return sp.bmat(grid, format="csr", dtype=np.int64)


def build_chain_complex(k: int, mats, check_commuting: bool = True) -> ChainComplex:
    """Generic D_k from M_1..M_k (sparse or dense integer matrices)."""
    mats = [sp.csr_matrix(m, dtype=np.int64) for m in mats]
    if len(mats) != k:
        raise ValueError(f"expected {k} matrices, got {len(mats)}")
    n = mats[0].shape[0]
    if check_commuting:
        for i, j in combinations(range(k), 2):
            if (mats[i] @ mats[j] - mats[j] @ mats[i]).count_nonzero():
                raise ValueError(f"M_{i + 1} and M_{j + 1} do not commute; D_k is not a complex")
    ident = sp.identity(n, dtype=np.int64, format="csr")
    blocks_im = [(ident - m.T).tocsr() for m in mats]
    N = index_sets(k)
    boundaries = []
    for l in range(1, k + 1):
        row_of = {lam: r for r, lam in enumerate(N[l - 1])}
        blocks = {}
        for c, mu in enumerate(N[l]):
            for i in range(1, l + 1):
                lam = mu[:i - 1] + mu[i:]
                sign = 1 if (i + 1) % 2 == 0 else -1
                blocks[(row_of[lam], c)] = sign * blocks_im[mu[i - 1] - 1]
        boundaries.append(_blocks_to_sparse(blocks, len(N[l - 1]), len(N[l]), n))
    return ChainComplex(k, n, boundaries, N)


def printed_boundaries(mats) -> list:
    """The explicit block matrices written out for k = 3 and k = 4."""
    mats = [sp.csr_matrix(m, dtype=np.int64) for m in mats]
    k = len(mats)
    n = mats[0].shape[0]
    I = sp.identity(n, dtype=np.int64, format="csr")
    P = [None] + [(I - m.T).tocsr() for m in mats]  # P[i] = I - M_i^T
    Q = [None] + [(m.T - I).tocsr() for m in mats]  # Q[i] = M_i^T - I
    Z = None
    if k == 3:
        d1 = [[P[1], P[2], P[3]]]
        d2 = [[Q[2], Q[3], Z], [P[1], Z, Q[3]], [Z, P[1], P[2]]]
        d3 = [[P[3]], [Q[2]], [P[1]]]
        grids = [d1, d2, d3]
    elif k == 4:
        d1 = [[P[1], P[2], P[3], P[4]]]
        d2 = [[Q[2], Q[3], Q[4], Z, Z, Z],
              [P[1], Z, Z, Q[3], Q[4], Z],
              [Z, P[1], Z, P[2], Z, Q[4]],
              [Z, Z, P[1], Z, P[2], P[3]]]
        d3 = [[P[3], P[4], Z, Z],
              [Q[2], Z, P[4], Z],
              [Z, Q[2], Q[3], Z],
              [P[1], Z, Z, P[4]],
              [Z, P[1], Z, Q[3]],
              [Z, Z, P[1], P[2]]]
        d4 = [[Q[4]], [P[3]], [Q[2]], [P[1]]]
        grids = [d1, d2, d3, d4]
    else:
        raise ValueError("explicit block forms are only written out for k = 3 and k = 4")
    return [sp.bmat(g, format="csr", dtype=np.int64) for g in grids]


def check_chain(c: ChainComplex) -> list:
    """Indices p with ∂_p ∂_{p+1} != 0 (empty list means a complex)."""
    bad = []
    for p in range(1, c.k):
        if (c.boundaries[p - 1] @ c.boundaries[p]).count_nonzero():
            bad.append(p)
    return bad


@dataclass
class HomologyResult:
    groups: list  # H_0 .. H_k
    snf: list  # SNFResult of ∂_1 .. ∂_k
    timings: dict = field(default_factory=dict)

    @property
    def prime_bound(self):
        """None when exact; otherwise torsion was only examined at primes <= this."""
        bounds = [s.prime_bound for s in self.snf if s.prime_bound is not None]
        return min(bounds) if bounds else None

    def to_dict(self) -> dict:
        out = {
            "groups": {f"H_{p}": str(g) for p, g in enumerate(self.groups)},
            "ranks": [s.rank for s in self.snf],
            "divisor_multiplicities": [
                {str(d): m for d, m in sorted(s.multiplicities().items())} for s in self.snf
            ],
        }
        if self.prime_bound is not None:
            out["torsion_primes_up_to"] = self.prime_bound
        return out


def _snf(mat, transforms: bool, method: str, prime_bound: int = 100) -> SNFResult:
    if method == "auto":
        big = mat.shape[0] * mat.shape[1] > DENSE_LIMIT
        method = "sparse" if big and not transforms and not audit_counts()["enabled"] else "dense"
    if method == "sparse":
        if transforms:
            raise ValueError("the sparse route does not produce transforms")
        return smith_normal_form_sparse(mat)
    if method == "modular":
        if transforms:
            raise ValueError("the modular route does not produce transforms")
        from .modular import smith_normal_form_modular

        return smith_normal_form_modular(mat, prime_bound)
    if method != "dense":
        raise ValueError(f"unknown method {method!r}")
    return smith_normal_form(mat.toarray(), transforms=transforms)


def homology_groups(c: ChainComplex, threads: int = 1, transforms_for=(),
                    method: str = "auto", prime_bound: int = 100) -> HomologyResult:
    """H_0 .. H_k of the complex. ``transforms_for`` lists the p whose ∂_p
    SNF should keep its transforms (e.g. 1 for the order of the identity).
    ``method`` is "dense", "sparse", "auto" (sparse above DENSE_LIMIT) or
    "modular"; the modular route only looks for torsion at primes up to
    ``prime_bound`` and the result records that."""
    ps = list(range(1, c.k + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            snfs = list(pool.map(lambda p: _snf(c.boundary(p), p in transforms_for, method, prime_bound), ps))
    else:
        snfs = [_snf(c.boundary(p), p in transforms_for, method, prime_bound) for p in ps]
    groups = []
    for p in range(c.k + 1):
        dim = c.dim(p)
        s = snfs[p - 1].rank if p >= 1 else 0
        if p < c.k:
            nxt = snfs[p]
            r, tors = nxt.rank, nxt.torsion
        else:
            r, tors = 0, []
        groups.append(AbelianGroup.from_cyclic(dim - r - s, tors))
    return HomologyResult(groups, snfs)


def homology_from_boundaries(boundaries, dims) -> list:
    """Homology of an arbitrary complex given ∂_1..∂_m and dims C_0..C_m."""
    snfs = [smith_normal_form(np.asarray(b.toarray() if sp.issparse(b) else b)) for b in boundaries]
    m = len(boundaries)
    out = []
    for p in range(m + 1):
        s = snfs[p - 1].rank if p >= 1 else 0
        r, tors = (snfs[p].rank, snfs[p].torsion) if p < m else (0, [])
        out.append(AbelianGroup.from_cyclic(dims[p] - r - s, tors))
    return out


def element_order_in_cokernel(a, vec, snf: SNFResult | None = None):
    """Order of the class of ``vec`` in coker(a); ``INFINITE`` if not torsion."""
    a = np.asarray(a.toarray() if sp.issparse(a) else a)
    vec = np.asarray(vec, dtype=np.int64).reshape(-1, 1)
    if vec.shape[0] != a.shape[0]:
        raise ValueError(f"vector has length {vec.shape[0]}, matrix has {a.shape[0]} rows")
    if snf is None or snf.U is None:
        snf = smith_normal_form(a, transforms=True)
    y = exact_matmul(snf.U, vec).ravel()
    order = 1
    for j in range(a.shape[0]):
        yj = int(y[j])
        d = snf.diagonal[j] if j < len(snf.diagonal) else 0
        if d == 0:
            if yj:
                return INFINITE
            continue
        order = math.lcm(order, d // math.gcd(d, yj))
    return order
