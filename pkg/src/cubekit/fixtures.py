"""Built-in presentations.

Names: ``gamma357``, ``gamma234``, ``gamma1234`` (shipped JSON files),
``torus`` (one generator per color, for relaxed cellular runs) and
``F<m>^<k>`` for the product of k free groups of rank m (``F2^3``).
"""

from __future__ import annotations

import re
from importlib import resources

from .presentation import Presentation, PresentationError, make_free_product, parse_presentation

SHIPPED = ("gamma357", "gamma234", "gamma1234")
_FREE = re.compile(r"^F_?(\d+)\^(\d+)$")


def builtin_text(name: str) -> str:
    """Canonical text of a builtin, used for hashing and ``--out`` copies."""
    key = name.lower()
    if key in SHIPPED:
        return resources.files("cubekit").joinpath("data", f"{key}.json").read_text(encoding="utf-8")
    return load_builtin(name).to_json()


def load_builtin(name: str) -> Presentation:
    key = name.lower()
    if key in SHIPPED:
        return parse_presentation(builtin_text(key))
    if key == "torus":
        from .cellular import torus_presentation

        return torus_presentation()
    m = _FREE.match(name)
    if m:
        rank, k = int(m.group(1)), int(m.group(2))
        return make_free_product([rank] * k)
    raise PresentationError(f"unknown builtin {name!r}; try {', '.join(SHIPPED)}, torus or F2^3")


def builtin_names() -> list:
    return list(SHIPPED) + ["torus", "F<m>^<k>"]
