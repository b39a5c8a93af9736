"""K-theory reports assembled from H_0..H_k of D_k.

The unknown subgroups G_i are never guessed. Each carries the group that
contains it, and a G_i is only resolved when rank arithmetic forces its
rank and its container is free abelian (subgroups of free abelian groups
are free, so the rank determines the group).

Ranks are handled by interval propagation over linear equations with
coefficients +-1: the torsion-free rank of the middle term of a short exact
sequence is the sum of the outer ranks, and K_0 and K_1 share one
torsion-free rank r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .groups import AbelianGroup


@dataclass
class Term:
    text: str
    group: AbelianGroup | None = None  # set when the term is a known group

    def __str__(self) -> str:
        return str(self.group) if self.group is not None else self.text


@dataclass
class ShortExactSequence:
    label: str
    left: Term
    middle: Term
    right: Term
    splits: bool = False

    def __str__(self) -> str:
        s = f"0 -> {self.left} -> {self.middle} -> {self.right} -> 0"
        return s + " (splits)" if self.splits else s


@dataclass
class KTheoryReport:
    k: int
    homologies: list
    sequences: list = field(default_factory=list)
    isomorphisms: list = field(default_factory=list)  # strings
    unknowns: dict = field(default_factory=dict)  # name -> containing group text
    rank_bounds: dict = field(default_factory=dict)  # name -> (lo, hi)
    resolved: dict = field(default_factory=dict)  # name -> AbelianGroup
    rank_interval: tuple | None = None
    k0_description: str = ""
    k1_description: str = ""
    notes: list = field(default_factory=list)
    sanity: list = field(default_factory=list)
    consistent: bool = True

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "homology": {f"H_{p}": str(g) for p, g in enumerate(self.homologies)},
            "sequences": [{"label": s.label, "text": str(s)} for s in self.sequences],
            "isomorphisms": list(self.isomorphisms),
            "unknowns": dict(self.unknowns),
            "rank_bounds": {k: list(v) for k, v in self.rank_bounds.items()},
            "resolved": {k: str(v) for k, v in self.resolved.items()},
            "rank_interval": list(self.rank_interval) if self.rank_interval else None,
            "K0": self.k0_description,
            "K1": self.k1_description,
            "notes": list(self.notes),
            "consistent": self.consistent,
        }

    def text(self) -> str:
        lines = [f"K-theory report (k = {self.k})"]
        for p, g in enumerate(self.homologies):
            lines.append(f"  H_{p} = {g}")
        for s in self.sequences:
            lines.append(f"  ({s.label}) {s}")
        for iso in self.isomorphisms:
            lines.append(f"  {iso}")
        for name, cont in self.unknowns.items():
            lo, hi = self.rank_bounds.get(name, (None, None))
            lines.append(f"  {name} ⊆ {cont}  (rank in [{lo}, {hi}])")
        for name, g in self.resolved.items():
            lines.append(f"  resolved: {name} ≅ {g}")
        lines.append(f"  K_0: {self.k0_description}")
        lines.append(f"  K_1: {self.k1_description}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


# --- rank interval propagation


class _Ranks:
    """Integer interval bounds with linear constraints sum(c*x) + const ==/<= 0."""

    def __init__(self):
        self.b: dict = {}
        self.cons: list = []

    def var(self, name, lo, hi):
        self.b[name] = [lo, hi]

    def eq(self, coeffs: dict, const: int = 0):
        self.cons.append((coeffs, const, "eq"))

    def le(self, coeffs: dict, const: int = 0):
        self.cons.append((coeffs, const, "le"))

    def solve(self) -> bool:
        """Tighten bounds to a fixpoint; False if some interval empties."""
        for _ in range(1000):
            changed = False
            for coeffs, const, kind in self.cons:
                for x, c in coeffs.items():
                    lo_rest = const + sum(min(d * self.b[y][0], d * self.b[y][1])
                                          for y, d in coeffs.items() if y != x)
                    hi_rest = const + sum(max(d * self.b[y][0], d * self.b[y][1])
                                          for y, d in coeffs.items() if y != x)
                    # c*x + rest (==|<=) 0
                    if c > 0:
                        new_hi = (-lo_rest) // c
                        new_lo = -((hi_rest) // c) if kind == "eq" else self.b[x][0]
                    else:
                        new_lo = -((-lo_rest) // -c)
                        new_hi = hi_rest // -c if kind == "eq" else self.b[x][1]
                    lo = max(self.b[x][0], new_lo)
                    hi = min(self.b[x][1], new_hi)
                    if (lo, hi) != tuple(self.b[x]):
                        self.b[x] = [lo, hi]
                        changed = True
                    if lo > hi:
                        return False
            if not changed:
                return True
        return True


BIG = 10 ** 9


def _fmt_k1(r_lo, r_hi, torsion: AbelianGroup) -> str:
    tors = "" if torsion.is_trivial else f" + {torsion}"
    if r_lo == r_hi:
        return str(AbelianGroup(r_lo, torsion.torsion))
    return f"Z^r{tors}, {r_lo} <= r <= {r_hi}"


def ktheory_report(k: int, h: list, kunneth_k0: AbelianGroup | None = None,
                   kunneth_k1: AbelianGroup | None = None) -> KTheoryReport:
    """Exact sequences for k = 3, 4, 5 with everything computable filled in.

    ``h`` is H_0..H_k. Surjectivity of ∂_1 is H_0 = 0, and the intersection
    of the kernels of I - M_i^T is ker ∂_k = H_k.
    """
    if len(h) != k + 1:
        raise ValueError(f"need H_0..H_{k}")
    rep = KTheoryReport(k, list(h))
    if k not in (3, 4, 5):
        rep.notes.append(f"no exact-sequence description is available for k = {k}; homology only")
        return rep
    R = _Ranks()
    R.var("r", 0, BIG)
    rk = [g.free_rank for g in h]
    H = [Term(f"H_{p}", g) for p, g in enumerate(h)]
    surj = h[0].is_trivial
    top_zero = h[k].is_trivial

    def unknown(name, container: AbelianGroup | str, hi: int):
        rep.unknowns[name] = str(container)
        R.var(name, 0, hi)

    if k == 3:
        unknown("G_0", h[0], rk[0])
        unknown("G_1", h[3], rk[3])
        rep.sequences.append(ShortExactSequence(
            "K_0", Term(f"({h[0]})/G_0"), Term("K_0"), H[2]))
        rep.isomorphisms.append(f"K_1 ≅ {h[1]} + G_1")
        # rank K_0 = (h0 - g0) + h2, rank K_1 = h1 + g1
        R.eq({"r": -1, "G_0": -1}, rk[0] + rk[2])
        R.eq({"r": -1, "G_1": 1}, rk[1])
        if surj:
            rep.notes.append("∂_1 is surjective (H_0 = 0): K_0 ≅ H_2 and K_1 ≅ H_1 + H_3")
            R.b["G_1"] = [rk[3], rk[3]]
        if top_zero:
            rep.notes.append("the kernels of I - M_i^T meet in 0 (H_3 = 0): "
                             "0 -> H_0 -> K_0 -> H_2 -> 0 and K_1 ≅ H_1")
            R.b["G_0"] = [0, 0]
        free_k1 = ["G_1"]
    elif k == 4:
        unknown("G_0", h[0], rk[0])
        unknown("G_1", h[4], rk[4])
        unknown("G_2", h[1], rk[1])
        unknown("G_3", h[3], rk[3])
        R.var("F_2", 0, BIG)
        left0 = Term(f"({h[0]})/G_0")
        rep.sequences += [
            ShortExactSequence("i", left0, Term("K_0"), Term("K_0/(H_0/G_0)")),
            ShortExactSequence("ii", left0, Term("F_2"), H[2]),
            ShortExactSequence("iii", Term("F_2"), Term("K_0"), Term("G_1"), splits=True),
            ShortExactSequence("iv", Term(f"({h[1]})/G_2"), Term("K_1"), Term("G_3")),
        ]
        rep.isomorphisms.append("K_0 ≅ F_2 + G_1")
        R.eq({"F_2": -1, "G_0": -1}, rk[0] + rk[2])
        R.eq({"r": -1, "F_2": 1, "G_1": 1})
        R.eq({"r": -1, "G_2": -1, "G_3": 1}, rk[1])
        if surj:
            rep.notes.append("∂_1 is surjective (H_0 = 0): F_2 ≅ H_2, K_0 ≅ H_2 + G_1 and "
                             "0 -> H_1/G_2 -> K_1 -> H_3 -> 0")
            R.b["G_3"] = [rk[3], rk[3]]
        if top_zero:
            rep.notes.append("the kernels of I - M_i^T meet in 0 (H_4 = 0): K_0 ≅ F_2, "
                             "0 -> H_0/G_0 -> K_0 -> H_2 -> 0 and 0 -> H_1 -> K_1 -> G_3 -> 0")
            R.b["G_2"] = [0, 0]
        free_k1 = []
    else:
        unknown("G_0", h[0], rk[0])
        unknown("G_1", "H_0/G_0", rk[0])
        unknown("G_2", h[2], rk[2])
        unknown("G_3", h[4], rk[4])
        unknown("G_4", h[5], rk[5])
        unknown("G_5", h[1], rk[1])
        unknown("G_6", h[3], rk[3])
        R.var("F_2", 0, BIG)
        R.var("F_3", 0, BIG)
        R.le({"G_0": 1, "G_1": 1}, -rk[0])
        A = Term(f"(({h[0]})/G_0)/G_1")
        rep.sequences += [
            ShortExactSequence("i", A, Term("K_0"), Term("K_0/A")),
            ShortExactSequence("ii", A, Term("F_2"), Term(f"({h[2]})/G_2")),
            ShortExactSequence("iii", Term("F_2"), Term("K_0"), Term("G_3")),
            ShortExactSequence("F_3", Term(f"({h[1]})/G_5"), Term("F_3"), Term("G_6")),
        ]
        rep.isomorphisms.append("K_1 ≅ F_3 + G_4")
        R.eq({"F_2": -1, "G_0": -1, "G_1": -1, "G_2": -1}, rk[0] + rk[2])
        R.eq({"r": -1, "F_2": 1, "G_3": 1})
        R.eq({"F_3": -1, "G_5": -1, "G_6": 1}, rk[1])
        R.eq({"r": -1, "F_3": 1, "G_4": 1})
        rep.notes.append("the d^5 differential domains are not specified; G_0..G_6 stay symbolic "
                         "unless rank arithmetic forces them")
        free_k1 = []

    if kunneth_k0 is not None:
        R.eq({"r": -1}, kunneth_k0.free_rank)
    if kunneth_k1 is not None:
        R.eq({"r": -1}, kunneth_k1.free_rank)
    if kunneth_k0 is not None and kunneth_k1 is not None and \
            kunneth_k0.free_rank != kunneth_k1.free_rank:
        rep.consistent = False
        rep.notes.append("supplied K_0 and K_1 have different torsion-free ranks")

    ok = R.solve()
    if not ok:
        rep.consistent = False
        rep.notes.append("rank constraints are infeasible with the supplied fixtures")
    r_lo, r_hi = R.b["r"]
    rep.rank_interval = (r_lo, r_hi)
    for name in rep.unknowns:
        lo, hi = R.b[name]
        rep.rank_bounds[name] = (lo, hi)
    for name in ("F_2", "F_3"):
        if name in R.b:
            rep.rank_bounds[name] = tuple(R.b[name])

    # resolve unknowns whose container is free and whose rank is forced
    containers = {"G_0": h[0]}
    if k == 3:
        containers.update({"G_1": h[3]})
    elif k == 4:
        containers.update({"G_1": h[4], "G_2": h[1], "G_3": h[3]})
    else:
        containers.update({"G_2": h[2], "G_3": h[4], "G_4": h[5], "G_5": h[1], "G_6": h[3]})
    for name, cont in containers.items():
        lo, hi = R.b[name]
        if ok and lo == hi and cont.is_free:
            rep.resolved[name] = AbelianGroup.free(lo)
        elif ok and lo == hi == 0 and cont.free_rank == 0 and cont.is_trivial:
            rep.resolved[name] = AbelianGroup()

    # descriptions
    if k == 3:
        tors1 = h[1].torsion_part()
        rep.k1_description = _fmt_k1(r_lo, r_hi, tors1)
        if surj:
            rep.k0_description = str(h[2])
        else:
            rep.k0_description = (f"torsion-free rank r ({r_lo} <= r <= {r_hi}); extension of "
                                  f"{h[2]} by ({h[0]})/G_0")
        if kunneth_k1 is not None and kunneth_k1.torsion != tors1.torsion:
            rep.consistent = False
            rep.notes.append("supplied K_1 torsion differs from the torsion of H_1 (G_1 is free)")
    elif k == 4:
        rep.k0_description = f"F_2 + G_1, torsion-free rank r ({r_lo} <= r <= {r_hi})"
        rep.k1_description = f"extension of G_3 by ({h[1]})/G_2, torsion-free rank r"
    else:
        rep.k0_description = f"extension of G_3 by F_2, torsion-free rank r ({r_lo} <= r <= {r_hi})"
        rep.k1_description = "F_3 + G_4, torsion-free rank r"
    if all(g.is_free for g in h) and r_lo == r_hi:
        if k == 4:
            rep.k0_description = str(AbelianGroup.free(r_lo))
            rep.k1_description = str(AbelianGroup.free(r_lo))
        elif k == 3:
            rep.k0_description = str(AbelianGroup.free(r_lo))

    if k == 4 and ok and "G_0" in rep.resolved and "G_1" in rep.resolved:
        s = rep.resolved["G_0"] + rep.resolved["G_1"]
        rep.notes.append(f"G_0 + G_1 ≅ {s}")

    if k == 3 and r_lo != r_hi:
        rep.notes.append(f"if the HK conjecture holds then K_1 ≅ H_1 + H_3, so r would be "
                         f"maximal (r = {rk[1] + rk[3]})")
    rep.notes.append("the algebra is determined by (K_0, K_1, [1]) by the classification theorem "
                     "for Kirchberg algebras in the UCT class")

    # sanity: resolved middle ranks add up
    for s in rep.sequences:
        gs = [t.group for t in (s.left, s.middle, s.right)]
        if all(g is not None for g in gs):
            good = gs[1].free_rank == gs[0].free_rank + gs[2].free_rank
            rep.sanity.append((s.label, good))
            rep.consistent &= good
    return rep


# --- order of the identity class


@dataclass
class IdentityOrderBounds:
    rho: int
    q: int
    r_odd: int
    upper_bound: int
    case: str
    lower_divisor: int
    computed_order: int | float | None = None
    consistent: bool | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def identity_order_bounds(sizes, computed_order=None) -> IdentityOrderBounds:
    """ρ = gcd(size_i/2 - 1) = 2^q r and the case split on q."""
    k = len(sizes)
    rho = 0
    for s in sizes:
        rho = gcd(rho, s // 2 - 1)
    q, r = 0, rho
    while r and r % 2 == 0:
        r //= 2
        q += 1
    if q == 0:
        case, lower = "i", rho
    elif q < k - 1:
        case, lower = "ii", rho // 2 ** q
    else:
        case, lower = "iii", rho // 2 ** (k - 1)
    res = IdentityOrderBounds(rho, q, r, rho, case, lower, computed_order)
    if computed_order is not None:
        if isinstance(computed_order, float):  # infinite
            res.consistent = False
        else:
            ok = rho % computed_order == 0 and computed_order % lower == 0
            if case == "i":
                ok = ok and computed_order == rho
            res.consistent = ok
    return res
