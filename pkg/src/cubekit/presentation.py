"""Cube-group presentations: parsing, axioms C1/C2/C1', and the pointed-square set.

A presentation has ``k`` colors. Each color is a list of generator names; the
literals of a color are the generators together with their formal inverses,
so a color with ``m`` generators has ``size = 2 * m`` literals.

Relators are 4-letter words ``(a, b, a', b')`` standing for ``a b a' b' = 1``
with ``a, a'`` in one color and ``b, b'`` in another. Throughout the package
colors are indexed from 0.

Note on notation: ``size`` always means the number of literals of a color
(generators *and* inverses). Formulas written in terms of half-sizes are
translated where they are used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence


class PresentationError(ValueError):
    """Raised for malformed presentation files or inconsistent data."""


class Literal(NamedTuple):
    """A generator or its formal inverse: ``(color, index, sign)``."""

    color: int
    index: int
    sign: int  # +1 generator, -1 formal inverse

    @property
    def inverse(self) -> "Literal":
        return Literal(self.color, self.index, -self.sign)


Square = tuple  # (Literal, Literal, Literal, Literal)


def inv(x: Literal) -> Literal:
    return Literal(x.color, x.index, -x.sign)


# --- the three symmetries of a pointed square and the flip F(p,q) -> F(q,p)

def square_h(s: Square) -> Square:
    a, b, a2, b2 = s
    return (inv(a), inv(b2), inv(a2), inv(b))


def square_r(s: Square) -> Square:
    a, b, a2, b2 = s
    return (a2, b2, a, b)


def square_v(s: Square) -> Square:
    a, b, a2, b2 = s
    return (inv(a2), inv(b), inv(a), inv(b2))


def square_flip(s: Square) -> Square:
    """Identify F(p,q) with F(q,p): ``[a,b,a',b'] -> [b'^-1, a'^-1, b^-1, a^-1]``."""
    a, b, a2, b2 = s
    return (inv(b2), inv(a2), inv(b), inv(a))


def square_orbit(s: Square) -> tuple[Square, Square, Square, Square]:
    """The pointed squares ``(S, S_H, S_R, S_V)``."""
    return (s, square_h(s), square_r(s), square_v(s))


def square_colors(s: Square) -> tuple[int, int]:
    return s[0].color, s[1].color


def normalize_square(s: Square) -> Square:
    """Return the representative of ``s`` whose first color is the smaller one."""
    p, q = square_colors(s)
    return s if p < q else square_flip(s)


@dataclass(frozen=True)
class Presentation:
    name: str
    colors: tuple[tuple[str, ...], ...]
    relators: tuple[Square, ...]

    def __post_init__(self):
        names = [g for color in self.colors for g in color]
        if len(set(names)) != len(names):
            dup = sorted({g for g in names if names.count(g) > 1})
            raise PresentationError(f"generator names are not unique: {dup}")
        if not self.colors:
            raise PresentationError("a presentation needs at least one color")
        for i, color in enumerate(self.colors):
            if not color:
                raise PresentationError(f"color {i} is empty")
        for r in self.relators:
            self._check_relator(r)

    def _check_relator(self, r: Square) -> None:
        if len(r) != 4:
            raise PresentationError(f"relator {self.format_word(r)} does not have 4 letters")
        for x in r:
            if not (0 <= x.color < self.k and 0 <= x.index < len(self.colors[x.color])):
                raise PresentationError(f"relator letter {x} outside the generator set")
            if x.sign not in (1, -1):
                raise PresentationError(f"bad sign in {x}")
        c0, c1, c2, c3 = (x.color for x in r)
        if not (c0 == c2 and c1 == c3 and c0 != c1):
            raise PresentationError(
                f"relator {self.format_word(r)} does not alternate between two colors"
            )

    @property
    def k(self) -> int:
        return len(self.colors)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Number of literals per color (generators and inverses)."""
        return tuple(2 * len(c) for c in self.colors)

    def literals(self, color: int) -> list[Literal]:
        n = len(self.colors[color])
        return [Literal(color, i, s) for i in range(n) for s in (1, -1)]

    def literal(self, token: str) -> Literal:
        neg = token.startswith("-")
        name = token[1:] if neg else token
        for c, color in enumerate(self.colors):
            if name in color:
                return Literal(c, color.index(name), -1 if neg else 1)
        raise PresentationError(f"unknown generator {name!r}")

    def format_literal(self, x: Literal) -> str:
        name = self.colors[x.color][x.index]
        return name if x.sign > 0 else "-" + name

    def format_word(self, word: Iterable[Literal]) -> str:
        return " ".join(self.format_literal(x) for x in word)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "colors": [list(c) for c in self.colors],
            "relators": [[self.format_literal(x) for x in r] for r in self.relators],
        }

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def presentation_from_dict(obj: dict) -> Presentation:
    if not isinstance(obj, dict):
        raise PresentationError("top-level JSON value must be an object")
    unknown = set(obj) - {"name", "colors", "relators"}
    if unknown:
        raise PresentationError(f"unexpected keys: {sorted(unknown)}")
    colors = obj.get("colors")
    if not isinstance(colors, list) or not all(isinstance(c, list) for c in colors):
        raise PresentationError('"colors" must be a list of lists of generator names')
    for c in colors:
        for g in c:
            if not isinstance(g, str) or not g:
                raise PresentationError(f"bad generator name {g!r}")
            if g.startswith("-"):
                raise PresentationError(f"generator name {g!r} may not start with '-'")
    relators = obj.get("relators", [])
    if not isinstance(relators, list):
        raise PresentationError('"relators" must be a list')
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise PresentationError('"name" must be a string')

    shell = Presentation(name, tuple(tuple(c) for c in colors), ())
    words = []
    for pos, r in enumerate(relators):
        if not isinstance(r, list) or len(r) != 4 or not all(isinstance(t, str) for t in r):
            raise PresentationError(f"relator #{pos} must be a list of 4 strings")
        words.append(tuple(shell.literal(t) for t in r))
    return Presentation(name, shell.colors, tuple(words))


def parse_presentation(text: str) -> Presentation:
    """Parse a JSON presentation file.

    Grammar: a single JSON object ``{"name": str, "colors": [[str, ...], ...],
    "relators": [[str, str, str, str], ...]}``. A leading ``-`` on a relator
    letter denotes the formal inverse. Anything after the object is rejected.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return presentation_from_dict(obj)


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# --- constructions

_FREE_PREFIXES = "abcdefghijklmnopqrstuvwxyz"


def make_free_product(ranks: Sequence[int]) -> Presentation:
    """Presentation of F_{r1} x ... x F_{rk} (a commutator per cross-color pair)."""
    ranks = list(ranks)
    if len(ranks) < 2:
        raise PresentationError("need at least two factors")
    if any(r < 2 for r in ranks):
        raise PresentationError(f"every rank must be at least 2, got {ranks}")
    if len(ranks) > len(_FREE_PREFIXES):
        raise PresentationError("too many factors")
    colors = tuple(
        tuple(f"{_FREE_PREFIXES[c]}{i + 1}" for i in range(r)) for c, r in enumerate(ranks)
    )
    relators = []
    for p, q in combinations(range(len(ranks)), 2):
        for i in range(ranks[p]):
            for j in range(ranks[q]):
                x, y = Literal(p, i, 1), Literal(q, j, 1)
                relators.append((x, y, inv(x), inv(y)))
    name = "F_" + "x".join(str(r) for r in ranks)
    return Presentation(name, colors, tuple(relators))


def extract_subpresentation(p: Presentation, removed: Iterable[int]) -> Presentation:
    """Drop the colors in ``removed`` and every relator touching them."""
    removed = set(removed)
    if not removed <= set(range(p.k)):
        raise PresentationError(f"unknown color indices {sorted(removed - set(range(p.k)))}")
    keep = [c for c in range(p.k) if c not in removed]
    if not keep:
        raise PresentationError("cannot remove every color")
    new_index = {c: i for i, c in enumerate(keep)}
    relators = tuple(
        tuple(Literal(new_index[x.color], x.index, x.sign) for x in r)
        for r in p.relators
        if r[0].color in new_index and r[1].color in new_index
    )
    colors = tuple(p.colors[c] for c in keep)
    return Presentation(f"{p.name} minus colors {sorted(removed)}", colors, relators)


def amalgam_relator_sets(p: Presentation) -> list[set[tuple[str, ...]]]:
    """Relator sets of the subgroups obtained by removing one color each.

    Relators are returned as name tuples so the sets are comparable with the
    parent's relators; their union is the full relator set when ``k >= 3``.
    """
    out = []
    for c in range(p.k):
        sub = extract_subpresentation(p, {c})
        out.append({tuple(sub.format_literal(x) for x in r) for r in sub.relators})
    return out


# --- square sets and axioms


@dataclass(frozen=True)
class SquareSet:
    """Orbit closure of the relators, normalized to components F(p, q), p < q."""

    squares: frozenset
    components: dict = field(hash=False, compare=False)
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.squares)

    def __contains__(self, s) -> bool:
        return normalize_square(tuple(s)) in self.squares

    def component(self, p: int, q: int) -> frozenset:
        if p > q:
            return frozenset(square_flip(s) for s in self.components.get((q, p), ()))
        return self.components.get((p, q), frozenset())

    def oriented(self) -> frozenset:
        """Every square in both orientations F(p,q) and F(q,p)."""
        return self.squares | frozenset(square_flip(s) for s in self.squares)


def close_square_set(p: Presentation) -> SquareSet:
    squares: set = set()
    warnings = []
    for r in p.relators:
        orbit = square_orbit(normalize_square(r))
        if orbit[0] in squares:
            warnings.append(f"relator {p.format_word(r)} lies in an orbit that is already listed")
        squares.update(orbit)
    components: dict = {}
    for s in squares:
        components.setdefault(square_colors(s), set()).add(s)
    return SquareSet(
        frozenset(squares),
        {key: frozenset(v) for key, v in sorted(components.items())},
        tuple(warnings),
    )


@dataclass
class AxiomReport:
    c1_pass: bool
    c2_pass: bool
    c1prime_pass: bool
    sizes_pass: bool
    witnesses: list = field(default_factory=list)
    component_sizes: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.c1_pass and self.c2_pass and self.sizes_pass

    def to_dict(self) -> dict:
        return {
            "c1": self.c1_pass,
            "c2": self.c2_pass,
            "c1prime": self.c1prime_pass,
            "sizes_at_least_4": self.sizes_pass,
            "component_sizes": {f"{p},{q}": n for (p, q), n in self.component_sizes.items()},
            "witnesses": [list(w) for w in self.witnesses],
            "warnings": list(self.warnings),
        }


def _check_c1(p: Presentation) -> list:
    bad = []
    for r in p.relators:
        orbit = square_orbit(normalize_square(r))
        if len(set(orbit)) != 4:
            bad.append(("C1", "degenerate orbit", p.format_word(r)))
    return bad


_PROJECTIONS = ((0, 1), (1, 2), (2, 3), (3, 0))


def _check_c2(p: Presentation, sq: SquareSet) -> tuple[list, dict]:
    bad = []
    sizes = {}
    for a, b in combinations(range(p.k), 2):
        comp = sq.component(a, b)
        sizes[(a, b)] = len(comp)
        for i, j in _PROJECTIONS:
            ci, cj = (a, b) if i % 2 == 0 else (b, a)
            images: dict = {}
            for s in comp:
                images.setdefault((s[i], s[j]), []).append(s)
            for key, hits in images.items():
                if len(hits) > 1:
                    bad.append(("C2", f"pair {p.format_word(key)} hit {len(hits)} times",
                                p.format_word(hits[0])))
            for x in p.literals(ci):
                for y in p.literals(cj):
                    if (x, y) not in images:
                        bad.append(("C2", f"pair {p.format_word((x, y))} not covered "
                                          f"in F({a},{b}) positions {i},{j}", ""))
    return bad, sizes


def _check_c1prime(p: Presentation) -> list:
    """Product-set form: E_iE_j = E_jE_i with full size and no 2-torsion.

    Works from the raw relator words: every cut ``xy | zw`` of a cyclic
    rotation of a relator gives ``xy = w^-1 z^-1``. The identities must pair
    E_i x E_j with E_j x E_i perfectly.
    """
    bad = []
    links: dict = {}
    for r in p.relators:
        if r[0] == r[2] and r[1] == r[3]:
            bad.append(("C1'", "2-torsion", p.format_word(r)))
        for t in range(4):
            w = r[t:] + r[:t]
            left, right = (w[0], w[1]), (inv(w[3]), inv(w[2]))
            links.setdefault(left, set()).add(right)
            links.setdefault(right, set()).add(left)
    for a, b in combinations(range(p.k), 2):
        for ci, cj in ((a, b), (b, a)):
            for x in p.literals(ci):
                for y in p.literals(cj):
                    partners = links.get((x, y), set())
                    if len(partners) != 1:
                        bad.append(("C1'", f"product {p.format_word((x, y))} equals "
                                           f"{len(partners)} elements of the swapped product set", ""))
    return bad


def verify_vh_axioms(p: Presentation) -> AxiomReport:
    sq = close_square_set(p)
    c1 = _check_c1(p)
    c2, sizes = _check_c2(p, sq)
    c1p = _check_c1prime(p)
    size_bad = [("sizes", f"color {i} has {s} literals (< 4)", "")
                for i, s in enumerate(p.sizes) if s < 4]
    return AxiomReport(
        c1_pass=not c1,
        c2_pass=not c2,
        c1prime_pass=not c1p,
        sizes_pass=not size_bad,
        witnesses=c1 + c2 + c1p + size_bad,
        component_sizes=sizes,
        warnings=list(sq.warnings),
    )
