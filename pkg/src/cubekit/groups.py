"""Finitely generated abelian groups in invariant-factor form.

Text grammar (used for output and for command-line fixtures)::

    group   := "0" | term ("+" term)*
    term    := "Z" ["^" n] | "(Z/" d ")" ["^" n] | "Z/" d ["^" n]

e.g. ``Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod


def _factorize(n: int) -> dict:
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(orders) -> tuple:
    """Canonical invariant factors of a direct sum of cyclic groups Z/n."""
    primary: dict = {}
    for n in orders:
        n = abs(int(n))
        if n == 0:
            raise ValueError("use free_rank for infinite cyclic summands")
        for p, e in _factorize(n).items():
            primary.setdefault(p, []).append(p ** e)
    if not primary:
        return ()
    length = max(len(v) for v in primary.values())
    cols = []
    for p, powers in primary.items():
        powers = sorted(powers)
        cols.append([1] * (length - len(powers)) + powers)
    return tuple(prod(c[t] for c in cols) for t in range(length))


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int = 0
    torsion: tuple = ()  # invariant factors d_1 | d_2 | ..., each >= 2

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative rank")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"not an invariant-factor chain: {t}; use AbelianGroup.from_cyclic")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_cyclic(cls, free_rank: int = 0, orders=()) -> "AbelianGroup":
        return cls(free_rank, invariant_factors(d for d in orders if abs(d) != 1))

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank, ())

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_cyclic(self.free_rank + other.free_rank,
                                        self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def torsion_part(self) -> "AbelianGroup":
        return AbelianGroup(0, self.torsion)

    def primary_decomposition(self) -> dict:
        """``{p: [p^e, ...]}`` over the torsion subgroup."""
        out: dict = {}
        for d in self.torsion:
            for p, e in _factorize(d).items():
                out.setdefault(p, []).append(p ** e)
        return {p: sorted(v) for p, v in sorted(out.items())}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        groups: dict = {}
        for d in self.torsion:
            groups[d] = groups.get(d, 0) + 1
        for d, mult in groups.items():
            parts.append(f"Z/{d}" if mult == 1 else f"(Z/{d})^{mult}")
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


_TERM = re.compile(r"^(?:Z(?:\^(\d+))?|\(Z/(\d+)\)(?:\^(\d+))?|Z/(\d+)(?:\^(\d+))?)$")


def parse_group(text: str) -> AbelianGroup:
    s = text.replace(" ", "").replace("⊕", "+")
    if s in ("0", ""):
        return AbelianGroup()
    rank, orders = 0, []
    for term in s.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse group term {term!r}")
        if m.group(2) or m.group(4):
            d = int(m.group(2) or m.group(4))
            mult = int(m.group(3) or m.group(5) or 1)
            orders += [d] * mult
        else:
            rank += int(m.group(1) or 1)
    if any(d == 0 for d in orders):
        raise ValueError("Z/0 is not allowed; write Z")
    return AbelianGroup.from_cyclic(rank, orders)
