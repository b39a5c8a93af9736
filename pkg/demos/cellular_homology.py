"""Cellular homology of the one-vertex cube complex via barycentric subdivision.

    python3 demos/cellular_homology.py    # about 20 s for Gamma_{3,5,7}

The torus (relaxed, since it is not a cube group) is a quick sanity check.
H_1 is compared with the abelianization of the presentation.
"""

from cubekit.cellular import (
    abelianization,
    barycentric_subdivision,
    build_cube_complex,
    cellular_homology,
)
from cubekit.fixtures import load_builtin

for name, relaxed in (("torus", True), ("gamma357", False)):
    p = load_builtin(name)
    cx = build_cube_complex(p, relaxed=relaxed)
    s = barycentric_subdivision(cx)
    h = cellular_homology(s)
    print(f"{name}: cells {cx.counts()}, chi = {cx.euler_characteristic()}")
    print(f"  subdivision {s.counts()}, loop-free = {not s.has_loops()}")
    for i, g in enumerate(h):
        print(f"  H_{i} = {g}")
    print(f"  abelianization = {abelianization(p)}")
