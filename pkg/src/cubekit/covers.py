"""Two-vertex k-rank graphs from double covers.

Direction i carries either ``D(m) = [[2m, 0], [0, 2m]]`` or
``T(n) = [[0, 2n], [2n, 0]]``. These matrices commute, so the chain complex
D_k is built from them directly; they are not {0,1} matrices and the
k-graph validation of ``rank_graph`` does not apply.

Spec grammar for ``parse_spec``: comma separated entries ``T:<n>`` or
``D:<m>`` in direction order, e.g. ``"T:3,D:2,D:4"``.

The closed form uses ``g = gcd(|a_i|)`` with ``a_i = 1 - 2m_i`` or
``1 - 4n_i^2``. The second invariant factor of ∂_1 is in fact
``exact_g``, the gcd of the 2x2 minors of ∂_1. It equals g when at most one
distinct T parameter occurs, and can be a proper divisor of g otherwise
(T:2,T:3,D:3 has g = 5 but exact_g = 1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .groups import AbelianGroup
from .homology import build_chain_complex, homology_groups
from .ktheory import ShortExactSequence, Term, ktheory_report
from .rank_graph import AdjacencyMatrices


class CoverSpecError(ValueError):
    pass


@dataclass(frozen=True)
class CoverSpec:
    tags: tuple  # (("T", n) | ("D", m), ...) in direction order
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.tags) < 1:
            raise CoverSpecError("a cover spec needs at least one direction")
        for tag, val in self.tags:
            if tag not in ("T", "D"):
                raise CoverSpecError(f"unknown tag {tag!r}; use T or D")
            if not isinstance(val, int) or val < 1:
                raise CoverSpecError(f"parameter of {tag} must be a positive integer, got {val!r}")
        if all(tag == "D" for tag, _ in self.tags):
            raise CoverSpecError("at least one direction must be tagged T")
        low = [f"{tag}:{v}" for tag, v in self.tags if v == 1]
        if low and not self.warnings:
            object.__setattr__(self, "warnings", (
                f"parameters equal to 1 ({', '.join(low)}) are outside the hypothesis n, m >= 2",))

    @property
    def k(self) -> int:
        return len(self.tags)

    @property
    def a(self) -> tuple:
        return tuple(1 - 2 * v if tag == "D" else 1 - 4 * v * v for tag, v in self.tags)

    @property
    def g(self) -> int:
        return math.gcd(*(abs(x) for x in self.a))

    def __str__(self) -> str:
        return ",".join(f"{tag}:{v}" for tag, v in self.tags)


def parse_spec(text: str) -> CoverSpec:
    tags = []
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        tag, sep, val = item.partition(":")
        if not sep or not val.lstrip("-").isdigit():
            raise CoverSpecError(f"bad spec entry {item!r}; expected T:<n> or D:<m>")
        tags.append((tag.upper(), int(val)))
    spec = CoverSpec(tuple(tags))
    for w in spec.warnings:
        warnings.warn(w, stacklevel=2)
    return spec


def double_cover_matrices(s: CoverSpec) -> AdjacencyMatrices:
    mats = []
    for tag, v in s.tags:
        if tag == "D":
            mats.append([[2 * v, 0], [0, 2 * v]])
        else:
            mats.append([[0, 2 * v], [2 * v, 0]])
    return AdjacencyMatrices.from_dense(mats)


def exact_g(s: CoverSpec) -> int:
    """gcd of the 2x2 minors of ∂_1 (its entries include a 1, so this is d_2)."""
    cols = []
    for tag, v in s.tags:
        if tag == "D":
            cols += [(1 - 2 * v, 0), (0, 1 - 2 * v)]
        else:
            cols += [(1, -2 * v), (-2 * v, 1)]
    g = 0
    for (a, b), (c, d) in combinations(cols, 2):
        g = math.gcd(g, a * d - b * c)
    return g


@dataclass
class CoverPrediction:
    k: int
    g: int
    ranks: list  # rank of ∂_1 .. ∂_k
    divisors: list  # nonzero divisor multiset of ∂_i as {d: multiplicity}
    homologies: list  # H_0 .. H_k

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "g": self.g,
            "ranks": list(self.ranks),
            "divisors": [{str(d): m for d, m in sorted(x.items())} for x in self.divisors],
            "homology": [str(h) for h in self.homologies],
        }


def _divisor_counts(R: int, g: int) -> dict:
    out: dict = {}
    out[1] = out.get(1, 0) + R
    out[g] = out.get(g, 0) + R
    return out


def predicted_snf(s: CoverSpec, g: int | None = None) -> CoverPrediction:
    """Closed forms: S(∂_i) = diag(I_R, g I_R, 0) with R = C(k-1, i-1).

    ``g`` defaults to the closed-form ``s.g``; pass ``exact_g(s)`` for the
    corrected prediction.
    """
    k = s.k
    g = s.g if g is None else g
    ranks, divs = [], []
    for i in range(1, k + 1):
        R = math.comb(k - 1, i - 1)
        ranks.append(2 * R)
        divs.append(_divisor_counts(R, g))
    homs = [AbelianGroup.from_cyclic(0, [g] * math.comb(k - 1, p)) for p in range(k)]
    homs.append(AbelianGroup())
    return CoverPrediction(k, g, ranks, divs, homs)


@dataclass
class CoverComparison:
    spec: str
    predicted: CoverPrediction
    computed_ranks: list
    computed_divisors: list
    computed_homologies: list
    ranks_match: bool
    divisors_match: bool
    homology_match: bool

    @property
    def ok(self) -> bool:
        return self.ranks_match and self.divisors_match and self.homology_match

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "predicted": self.predicted.to_dict(),
            "computed_ranks": self.computed_ranks,
            "computed_divisors": [{str(d): m for d, m in sorted(x.items())}
                                  for x in self.computed_divisors],
            "computed_homology": [str(h) for h in self.computed_homologies],
            "ranks_match": self.ranks_match,
            "divisors_match": self.divisors_match,
            "homology_match": self.homology_match,
        }


def generic_homology(s: CoverSpec):
    m = double_cover_matrices(s)
    return homology_groups(build_chain_complex(s.k, m.mats, check_commuting=True))


def compare_with_generic(s: CoverSpec, g: int | None = None) -> CoverComparison:
    pred = predicted_snf(s, g)
    res = generic_homology(s)
    ranks = [x.rank for x in res.snf]
    divs = [{d: c for d, c in x.multiplicities().items() if d != 0} for x in res.snf]
    pred_divs = [{d: c for d, c in x.items()} for x in pred.divisors]
    return CoverComparison(
        str(s), pred, ranks, divs, list(res.groups),
        ranks == pred.ranks, divs == pred_divs, res.groups == pred.homologies,
    )


@dataclass
class CoverKTheory:
    spec: str
    g: int
    exact_g: int
    homologies: list
    sequences: list
    isomorphisms: list
    k0: str
    k1: str
    k0_order: int | None
    trivial: bool
    consistent: bool
    warnings: list
    generic: object  # KTheoryReport from the generic homology

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "g": self.g,
            "exact_g": self.exact_g,
            "homology": [str(h) for h in self.homologies],
            "sequences": [str(x) for x in self.sequences],
            "isomorphisms": list(self.isomorphisms),
            "K0": self.k0,
            "K1": self.k1,
            "K0_order": self.k0_order,
            "trivial": self.trivial,
            "consistent": self.consistent,
            "warnings": list(self.warnings),
        }

    def text(self) -> str:
        lines = [f"cover {self.spec}: g = {self.g} (exact second divisor of ∂_1: {self.exact_g})"]
        lines += [f"  H_{p} = {h}" for p, h in enumerate(self.homologies)]
        lines += [f"  {x}" for x in self.sequences]
        lines += [f"  {x}" for x in self.isomorphisms]
        lines.append(f"  K_0: {self.k0}")
        lines.append(f"  K_1: {self.k1}")
        lines += [f"  warning: {w}" for w in self.warnings]
        if not self.consistent:
            lines.append("  closed form and generic homology disagree")
        return "\n".join(lines)


def cover_ktheory(s: CoverSpec) -> CoverKTheory:
    """Closed-form K-theory, always cross-checked against the generic complex.

    The closed forms are stated with ``g``; ``consistent`` records whether
    the generic homology agrees with them.
    """
    k, g = s.k, s.g
    cmp_ = compare_with_generic(s)
    h = cmp_.computed_homologies
    generic = ktheory_report(k, h)
    Zg = AbelianGroup.from_cyclic(0, [g])
    seqs, isos, k0_order = [], [], None
    warn = list(s.warnings)
    if g == 1:
        k0 = k1 = "0"
        trivial = True
    elif k == 3:
        seqs.append(ShortExactSequence("K_0", Term("", Zg), Term("K_0"), Term("", Zg)))
        k1 = str(AbelianGroup.from_cyclic(0, [g, g]))
        isos.append(f"K_1 ≅ {k1}")
        k0 = f"group of order {g * g}"
        k0_order = g * g
        trivial = False
    elif k == 4:
        Zg3 = AbelianGroup.from_cyclic(0, [g] * 3)
        seqs.append(ShortExactSequence("a", Term(f"({Zg})/G_0"), Term("K_0"), Term("", Zg3)))
        seqs.append(ShortExactSequence("b", Term(f"({Zg3})/G_2"), Term("K_1"), Term(f"G_3 ⊆ {Zg}")))
        k0 = f"extension of {Zg3} by ({Zg})/G_0"
        k1 = f"extension of G_3 ⊆ {Zg} by ({Zg3})/G_2"
        trivial = False
    else:
        k0 = generic.k0_description
        k1 = generic.k1_description
        trivial = False
        warn.append(f"no closed-form K-theory for k = {k}; generic sequences only")
    if g == 1 and not all(x.is_trivial for x in h):
        trivial = False
    consistent = cmp_.ok
    if not consistent:
        warn.append(f"generic homology differs from the closed form; exact g = {exact_g(s)}")
    return CoverKTheory(str(s), g, exact_g(s), h, seqs, isos, k0, k1, k0_order,
                        trivial, consistent, warn, generic)


def random_spec(k: int, rng: np.random.Generator, lo: int = 2, hi: int = 6) -> CoverSpec:
    """Uniform tags with at least one T and parameters in [lo, hi]."""
    while True:
        tags = tuple(("T" if rng.integers(2) else "D", int(rng.integers(lo, hi + 1)))
                     for _ in range(k))
        if any(t == "T" for t, _ in tags):
            return CoverSpec(tags)


__all__ = [
    "CoverComparison",
    "CoverKTheory",
    "CoverPrediction",
    "CoverSpec",
    "CoverSpecError",
    "compare_with_generic",
    "cover_ktheory",
    "double_cover_matrices",
    "exact_g",
    "generic_homology",
    "parse_spec",
    "predicted_snf",
    "random_spec",
]
