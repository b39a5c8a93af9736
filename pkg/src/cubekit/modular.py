"""Smith normal form diagonals by modular elimination, for matrices where
exact integer elimination suffers entry growth.

The rank over Q is the largest rank found modulo a few primes near
``MOD_LIMIT``. Torsion is found one prime at a time: the p-part of the
invariant factors comes from unit-pivot elimination over Z/p^e, then
dividing the residual by p and repeating. Only primes up to ``prime_bound``
are examined, so the result is exact for the p-primary parts it reports and
says nothing about larger primes; ``SNFResult.prime_bound`` records the
bound.

Working values live in float64 so that the block products go through BLAS.
Every product is a sum of at most ``_chunk(mod)`` terms below ``mod**2``,
which keeps it under 2**53 and therefore exact.
"""

from __future__ import annotations

from math import prod

import numpy as np
import scipy.sparse as sp

from .groups import invariant_factors
from .snf import SNFResult, unit_pivot_reduce

MOD_LIMIT = 2 ** 21
_EXACT = 2 ** 53


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(bound: int) -> list:
    return [q for q in range(2, bound + 1) if _is_prime(q)]


def large_primes(count: int = 2, below: int = MOD_LIMIT) -> list:
    out, c = [], below - 1
    while len(out) < count:
        if _is_prime(c):
            out.append(c)
        c -= 1
    return out


def _chunk(mod: int) -> int:
    return max(1, (_EXACT - 1) // ((mod - 1) ** 2 + mod))


def _mod(x, mod: int):
    """x mod ``mod`` for float arrays of integers with |x| < 2**53.

    floor(x / mod) can be off by one from rounding; the correction fixes it.
    """
    r = x - np.floor(x * (1.0 / mod)) * mod
    r[r < 0] += mod
    r[r >= mod] -= mod
    return r


def _matmul_mod(x, y, mod: int):
    """(x @ y) mod ``mod`` for float arrays with entries in [0, mod)."""
    step = _chunk(mod)
    k = x.shape[1]
    if k <= step:
        return _mod(x @ y, mod)
    out = np.zeros((x.shape[0], y.shape[1]))
    for s in range(0, k, step):
        out = _mod(out + x[:, s:s + step] @ y[s:s + step], mod)
    return out


def residues(a, mod: int):
    """Entries of an integer array reduced into [0, mod), as float64."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.mod(a, mod).astype(np.float64)
    if a.dtype.kind == "f":
        return np.mod(a, mod)
    return np.mod(a.astype(np.int64), mod).astype(np.float64)


def _units(x, mod: int):
    """Mask of entries that are units modulo ``mod``."""
    r = x.astype(np.int64)
    return (r != 0) & (np.gcd(r, mod) == 1)


_LEAF = 32


def _reduce_leaf(x, mod: int):
    """Row-by-row unit-pivot reduction of a few rows, in place."""
    pivots = []
    for i in range(x.shape[0]):
        u = np.flatnonzero(_units(x[i], mod))
        if not u.size:
            continue
        j = int(u[0])
        inv = pow(int(x[i, j]), -1, mod)
        x[i] = _mod(x[i] * inv, mod)
        f = x[:, j].copy()
        f[i] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            x[hit] = _mod(x[hit] - np.outer(f[hit], x[i]), mod)
        pivots.append((i, j))
    used = {i for i, _ in pivots}
    rest = [i for i in range(x.shape[0]) if i not in used and x[i].any()]
    return x[[i for i, _ in pivots]], [j for _, j in pivots], x[rest]


def _echelon(x, mod: int):
    """Split the rows in half, reduce the top, eliminate its pivots from the
    bottom with one product, reduce the bottom, then clear the bottom's pivot
    columns from the top. Returns (pivot rows, pivot columns, leftovers);
    pivot rows are 1 on their own column and 0 on every other pivot column.
    """
    if x.shape[0] <= _LEAF:
        return _reduce_leaf(x.copy(), mod)
    h = x.shape[0] // 2
    r1, c1, rest1 = _echelon(x[:h], mod)
    b = x[h:]
    if c1:
        b = _mod(b - _matmul_mod(b[:, c1], r1, mod), mod)
    r2, c2, rest2 = _echelon(b, mod)
    if c2 and r1.shape[0]:
        r1 = _mod(r1 - _matmul_mod(r1[:, c2], r2, mod), mod)
    return np.vstack([r1, r2]), c1 + c2, np.vstack([rest1, rest2])


def unit_echelon(a, mod: int):
    """Reduced echelon form over Z/mod using only unit pivots.

    Returns ``(rank, residual)``: the number of unit pivots, and the
    remaining non-zero rows (zero in every pivot column, no units left).
    """
    if mod > MOD_LIMIT:
        raise ValueError(f"modulus {mod} exceeds {MOD_LIMIT}")
    a = residues(a, mod)
    R, C, rest = _echelon(a, mod)
    while rest.shape[0]:
        if C:
            rest = _mod(rest - _matmul_mod(rest[:, C], R, mod), mod)
        rest = rest[rest.any(axis=1)]
        if not _units(rest, mod).any():
            break
        # composite mod only: a leftover row can pick up a unit entry once
        # it is reduced against pivots found after it was set aside
        r2, c2, rest = _echelon(rest, mod)
        if R.shape[0]:
            R = _mod(R - _matmul_mod(R[:, c2], r2, mod), mod)
        R, C = np.vstack([R, r2]), C + c2
    return len(C), rest


def rank_mod(a, mod: int) -> int:
    return unit_echelon(a, mod)[0]


def rational_rank(a, primes=None) -> int:
    """Largest rank over the given primes (a lower bound that equals the
    rank over Q unless every prime divides the largest determinantal divisor)."""
    primes = primes or large_primes(2)
    return max(rank_mod(a, q) for q in primes)


def local_valuations(a, p: int, rank: int) -> dict:
    """Multiplicity of each p-adic valuation v among the invariant factors.

    Raises ``ArithmeticError`` when p^e below ``MOD_LIMIT`` is not enough
    precision to see all ``rank`` non-zero factors.
    """
    e = 1
    while p ** (e + 1) <= MOD_LIMIT:
        e += 1
    mod = p ** e
    x = residues(a, mod)
    out: dict = {}
    v = 0
    seen = 0
    while x.shape[0] and mod > 1:
        r, x = unit_echelon(x, mod)
        if r:
            out[v] = r
            seen += r
        if seen == rank or not x.shape[0]:
            break
        x = x / p  # every residual entry is divisible by p
        mod //= p
        v += 1
    if seen != rank:
        raise ArithmeticError(f"p = {p}: found {seen} of {rank} factors with precision p^{e}")
    return out


def _screen_groups(primes) -> list:
    groups, cur = [], []
    for q in primes:
        if cur and prod(cur) * q > MOD_LIMIT:
            groups.append(cur)
            cur = []
        cur.append(q)
    if cur:
        groups.append(cur)
    return groups


def smith_normal_form_modular(a, prime_bound: int = 100) -> SNFResult:
    """SNF diagonal with torsion examined at primes <= ``prime_bound``.

    Unit pivots are first eliminated exactly on the sparse matrix; the core
    is then handled modularly. Groups of small primes are screened with one
    composite modulus: if the unit rank modulo their product already equals
    the rational rank, none of them divides an invariant factor.
    """
    shape = tuple(a.shape)
    count, core = unit_pivot_reduce(sp.csr_matrix(a))
    orders = []
    r = 0
    if core.size:
        r = rational_rank(core)
    if r:
        for group in _screen_groups(primes_up_to(prime_bound)):
            m = prod(group)
            if rank_mod(core, m) == r:
                continue
            for p in group:
                if len(group) > 1 and rank_mod(core, p) == r:
                    continue
                for v, c in local_valuations(core, p, r).items():
                    if v:
                        orders += [p ** v] * c
    tors = list(invariant_factors(orders)) if orders else []
    diag = [1] * (count + r - len(tors)) + tors
    diag += [0] * (min(shape) - len(diag))
    return SNFResult(shape, diag, prime_bound=prime_bound)


__all__ = [
    "MOD_LIMIT",
    "large_primes",
    "local_valuations",
    "primes_up_to",
    "rank_mod",
    "residues",
    "rational_rank",
    "smith_normal_form_modular",
    "unit_echelon",
]
