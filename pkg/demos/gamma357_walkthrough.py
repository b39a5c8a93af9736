"""Walk Gamma_{3,5,7} from presentation to K-theory bounds.

    python3 demos/gamma357_walkthrough.py
"""

import numpy as np

from cubekit import (
    adjacency_matrices,
    build_chain_complex,
    check_c3,
    enumerate_cubes,
    homology_groups,
    identity_order_bounds,
    ktheory_report,
    load_builtin,
    validate_k_graph,
    verify_vh_axioms,
)
from cubekit.homology import element_order_in_cokernel

p = load_builtin("gamma357")
print(f"{p.name}: k = {p.k}, |E_i| = {list(p.sizes)}")

# the axioms and C3 have to hold before the cube count means anything
print("axioms ok:", verify_vh_axioms(p).passed, "| C3 ok:", check_c3(p).passed)

cubes = enumerate_cubes(p, p.k)
print("pointed 3-cubes:", len(cubes))

mats = adjacency_matrices(cubes, p)
kg = validate_k_graph(mats, 1000, 0, p)
print("3-graph:", kg.is_k_graph, "| column sums |E_i| - 1:", kg.column_sums_pass)

cx = build_chain_complex(p.k, mats.mats)
hom = homology_groups(cx, transforms_for=(1,))
for i, g in enumerate(hom.groups):
    print(f"H_{i} = {g}")

rep = ktheory_report(p.k, hom.groups)
print("K_0:", rep.k0_description)
print("K_1:", rep.k1_description)
print("torsion-free rank r in", rep.rank_interval)

# class of the identity: the all-ones vector in coker(d_1)
ones = np.ones(cx.dim(0), dtype=np.int64)
order = element_order_in_cokernel(cx.boundary(1), ones, hom.snf[0])
b = identity_order_bounds(p.sizes, order)
print(f"order of [1] = {order}, rho = {b.rho}, case {b.case}, consistent = {b.consistent}")
