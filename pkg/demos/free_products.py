"""Products of free groups: F_2^3 and F_3^3, with a Kunneth fixture for F_2^3.

    python3 demos/free_products.py
"""

from cubekit import (
    AbelianGroup,
    adjacency_matrices,
    build_chain_complex,
    enumerate_cubes,
    homology_groups,
    ktheory_report,
    load_builtin,
)


def homology(name):
    p = load_builtin(name)
    cubes = enumerate_cubes(p, p.k)
    mats = adjacency_matrices(cubes, p)
    return p, len(cubes), homology_groups(build_chain_complex(p.k, mats.mats)).groups


for name in ("F2^3", "F3^3"):
    p, n, h = homology(name)
    print(f"{name}: {n} pointed cubes")
    for i, g in enumerate(h):
        print(f"  H_{i} = {g}")

# K_0 of a product of free-group algebras is known independently; feeding it
# in pins down the unknown subgroups G_i
p, _, h = homology("F2^3")
rep = ktheory_report(3, h, kunneth_k0=AbelianGroup.free(32))
for name, g in rep.resolved.items():
    print(f"F2^3 with K_0 = Z^32: {name} = {g}")
