"""Acceptance criteria, one PASS/FAIL line per criterion.

Tolerance is exact equality for every group, count and divisor; runtime
bounds are wall-clock seconds for the stage named in the line. Criterion 9
is reported but never fails the run. Run directly with
``python3 tests/test_acceptance.py`` or through pytest; the lines are also
repeated in the pytest terminal summary.

Every SNF call made while this module runs is audited (U A V = S with
U, V certified unimodular by their inverses); criterion 8 reports the count.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from cubekit.cellular import barycentric_subdivision, build_cube_complex, cellular_homology
from cubekit.covers import compare_with_generic, cover_ktheory, parse_spec, random_spec
from cubekit.cubes import brute_force_cubes, check_c3, enumerate_cubes, enumerate_cubes_for
from cubekit.fixtures import load_builtin
from cubekit.groups import AbelianGroup, parse_group
from cubekit.homology import (
    build_chain_complex,
    check_chain,
    element_order_in_cokernel,
    homology_groups,
    printed_boundaries,
)
from cubekit.ktheory import identity_order_bounds, ktheory_report
from cubekit.presentation import close_square_set, verify_vh_axioms
from cubekit.rank_graph import adjacency_matrices, validate_k_graph
from cubekit.snf import audit_counts, set_audit

RESULTS: list = []

G = parse_group


def record(num, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {title} | {detail}"
    print(line)
    RESULTS.append(line)
    return passed


def run_pipeline(name, uce=1000):
    """verify -> cubes -> k-graph -> homology from scratch, with timing."""
    t0 = time.perf_counter()
    p = load_builtin(name)
    ax = verify_vh_axioms(p)
    c3 = check_c3(p) if p.k >= 3 else None
    sq = close_square_set(p)
    cubes = enumerate_cubes(p, p.k, sq)
    mats = adjacency_matrices(cubes, p)
    kg = validate_k_graph(mats, uce, 0, p)
    cx = build_chain_complex(p.k, mats.mats)
    hom = homology_groups(cx, threads=2, transforms_for=(1,))
    return {
        "p": p, "verified": ax.passed and (c3 is None or c3.passed), "cubes": cubes,
        "mats": mats, "kgraph": kg, "complex": cx, "homology": hom,
        "seconds": time.perf_counter() - t0,
    }


def compare_groups(got, want) -> list:
    return [f"H_{i}: got {g}, want {w}" for i, (g, w) in enumerate(zip(got, want)) if g != w]


# --- criteria


def criterion_1():
    r = run_pipeline("gamma357")
    want = [G("Z^7 + (Z/4)^2 + Z/12"), G("Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2"),
            G("Z^21 + (Z/4)^2 + Z/12"), G("Z^7")]
    kt = ktheory_report(3, r["homology"].groups)
    bad = compare_groups(r["homology"].groups, want)
    k1_tors = G("(Z/2)^6 + (Z/4)^2 + (Z/12)^2")
    ok = (r["verified"] and len(r["cubes"]) == 192 and r["kgraph"].is_k_graph and not bad
          and kt.rank_interval == (21, 28) and r["homology"].groups[1].torsion_part() == k1_tors
          and r["seconds"] < 60)
    detail = (f"verified={r['verified']} cubes={len(r['cubes'])} 3-graph={r['kgraph'].is_k_graph} "
              f"H={[str(g) for g in r['homology'].groups]} K_1={kt.k1_description} "
              f"time={r['seconds']:.1f}s<60s" + (f" mismatches={bad}" if bad else ""))
    return ok, detail


def criterion_2():
    r = run_pipeline("gamma234")
    want = [G("Z^9 + Z/2 + Z/20 + Z/80"), G("Z^27 + (Z/2)^4 + (Z/4)^2 + (Z/8)^2"),
            G("Z^27 + Z/2 + Z/20 + Z/80"), G("Z^9")]
    kt = ktheory_report(3, r["homology"].groups)
    bad = compare_groups(r["homology"].groups, want)
    ok = (r["verified"] and len(r["cubes"]) == 216 and r["kgraph"].is_k_graph and not bad
          and kt.rank_interval == (27, 36) and r["seconds"] < 60)
    detail = (f"cubes={len(r['cubes'])} H={[str(g) for g in r['homology'].groups]} "
              f"r in {list(kt.rank_interval)} time={r['seconds']:.1f}s<60s")
    return ok, detail


def criterion_3():
    t0 = time.perf_counter()
    r = run_pipeline("F2^3")
    kt = ktheory_report(3, r["homology"].groups, kunneth_k0=AbelianGroup.free(32))
    secs = time.perf_counter() - t0
    h = r["homology"].groups
    ok = (len(r["cubes"]) == 64 and h[:3] == [G("Z^8"), G("Z^24"), G("Z^24")]
          and kt.resolved.get("G_1") == G("Z^8") and kt.resolved.get("G_0") == G("0") and secs < 10)
    detail = (f"cubes={len(r['cubes'])} H={[str(g) for g in h]} "
              f"G_0={kt.resolved.get('G_0')} G_1={kt.resolved.get('G_1')} time={secs:.1f}s<10s")
    return ok, detail


def criterion_4():
    r = run_pipeline("F3^3")
    h = r["homology"].groups
    want = [G("Z^27 + (Z/2)^37"), G("Z^81 + (Z/2)^74"), G("Z^81 + (Z/2)^37"), G("Z^27")]
    kt = ktheory_report(3, h)
    ok = (not compare_groups(h, want) and kt.rank_interval == (81, 108)
          and h[1].torsion_part() == G("(Z/2)^74") and r["seconds"] < 300)
    detail = f"H={[str(g) for g in h]} K_1={kt.k1_description} time={r['seconds']:.1f}s<300s"
    return ok, detail


def criterion_5():
    t0 = time.perf_counter()
    r = run_pipeline("F2^4", uce=300)
    h = r["homology"].groups
    kt = ktheory_report(4, h, kunneth_k0=AbelianGroup.free(128))
    secs = time.perf_counter() - t0
    res = kt.resolved
    g01 = res["G_0"] + res["G_1"] if "G_0" in res and "G_1" in res else None
    ok = (len(r["cubes"]) == 256 and h[:4] == [G("Z^16"), G("Z^64"), G("Z^96"), G("Z^64")]
          and res.get("G_2") == G("0") and res.get("G_3") == G("Z^64") and g01 == G("Z^16")
          and secs < 600)
    detail = (f"cubes={len(r['cubes'])} H={[str(g) for g in h]} G_2={res.get('G_2')} "
              f"G_3={res.get('G_3')} G_0+G_1={g01} time={secs:.1f}s<600s")
    return ok, detail


def criterion_6():
    t0 = time.perf_counter()
    cx = build_cube_complex(load_builtin("gamma357"))
    s = barycentric_subdivision(cx)
    h = cellular_homology(s)
    secs = time.perf_counter() - t0
    want = [G("Z"), G("(Z/2)^2 + (Z/4)^2"), G("(Z/2)^2 + Z/12")] + [G("0")] * (len(h) - 3)
    bad = compare_groups(h, want)
    ok = not bad and secs < 120
    detail = (f"cells={cx.counts()} chi={cx.euler_characteristic()} H={[str(g) for g in h]} "
              f"time={secs:.1f}s<120s" + (f" mismatches={bad}" if bad else ""))
    return ok, detail


def criterion_7():
    t0 = time.perf_counter()
    mismatched = []
    total = 0
    for k in (3, 4, 5):
        rng = np.random.default_rng(1000 + k)
        for _ in range(50):
            s = random_spec(k, rng)
            total += 1
            if not compare_with_generic(s).ok:
                mismatched.append(str(s))
    trivial = all(cover_ktheory(parse_spec(t)).trivial
                  for t in ("T:2,D:2,D:4", "T:2,D:2,D:4,D:2", "T:3,T:3,D:2,D:4,D:3"))
    five = cover_ktheory(parse_spec("T:2,D:3,D:3"))
    five_ok = five.k1 == "(Z/5)^2" and five.k0_order == 25
    secs = time.perf_counter() - t0
    ok = not mismatched and trivial and five_ok and secs < 60
    detail = (f"closed form = generic on {total - len(mismatched)}/{total} seeded specs; "
              f"g=1 trivial={trivial}; g=5 K_1={five.k1}, |K_0|={five.k0_order}; time={secs:.1f}s<60s"
              + (f"; mismatching specs {mismatched}" if mismatched else ""))
    return ok, detail


FIXTURES = ("gamma357", "gamma234", "F2^3", "F3^3", "F2^4")


def criterion_8():
    parts = {}
    pipes = {name: run_pipeline(name, uce=100) for name in FIXTURES}

    parts["dd=0"] = all(check_chain(r["complex"]) == [] for r in pipes.values())

    perm_ok = True
    for name, r in pipes.items():
        for seed in range(3):
            perm = np.random.default_rng(seed).permutation(r["mats"].n)
            c = build_chain_complex(r["p"].k, r["mats"].permuted(perm).mats)
            perm_ok &= homology_groups(c, threads=2).groups == r["homology"].groups
    parts["permutation"] = perm_ok

    blocks_ok = True
    for name in ("gamma357", "F2^4"):
        r = pipes[name]
        for p, b in enumerate(printed_boundaries(r["mats"].mats), start=1):
            blocks_ok &= (b != r["complex"].boundary(p)).nnz == 0
    parts["printed_blocks"] = blocks_ok

    p = load_builtin("F2^3")
    sq = close_square_set(p)
    parts["brute_force"] = set(enumerate_cubes_for(p, (0, 1, 2), sq)) == brute_force_cubes(p, (0, 1, 2), sq)

    orders = {}
    ident_ok = True
    for name, r in pipes.items():
        ones = np.ones(r["complex"].dim(0), dtype=np.int64)
        o = element_order_in_cokernel(r["complex"].boundary(1), ones, r["homology"].snf[0])
        rho = identity_order_bounds(r["p"].sizes).rho
        orders[name] = o
        ident_ok &= o != math.inf and rho % o == 0
    ident_ok &= orders["gamma357"] == 1
    parts["identity_order"] = ident_ok

    audit = audit_counts()
    parts["snf_audit"] = audit["enabled"] and audit["calls"] > 0 and audit["failures"] == 0
    ok = all(parts.values())
    detail = " ".join(f"{k}={v}" for k, v in parts.items())
    detail += f" audited_snf_calls={audit['calls']} identity_orders={orders}"
    return ok, detail


def criterion_9():
    """Stretch: enumeration and 4-graph validity, then homology.

    Exact elimination on the 5184 x 7776 boundaries suffers entry growth, so
    homology goes through the modular route with torsion examined at primes
    up to 100; the line says so.
    """
    t0 = time.perf_counter()
    p = load_builtin("gamma1234")
    cubes = enumerate_cubes(p, 4)
    mats = adjacency_matrices(cubes, p)
    kg = validate_k_graph(mats, 300, 0, p)
    cx = build_chain_complex(4, mats.mats)
    hom = homology_groups(cx, method="modular", prime_bound=100)
    secs = time.perf_counter() - t0
    ok = len(cubes) == 1296 and kg.is_k_graph and check_chain(cx) == []
    hs = [str(g) for g in hom.groups]
    return ok, (f"cubes={len(cubes)} 4-graph={kg.is_k_graph} H={hs} "
                f"(torsion at primes <= {hom.prime_bound}) time={secs:.1f}s (non-gating)")


CRITERIA = [
    (1, "Gamma_{3,5,7} pipeline", criterion_1),
    (2, "Gamma_{2,3,4} pipeline", criterion_2),
    (3, "F_2^3 with Kunneth fixture", criterion_3),
    (4, "F_3^3 homology and K_1", criterion_4),
    (5, "F_2^4 (k=4) with Kunneth fixture", criterion_5),
    (6, "cellular homology of Gamma_{3,5,7}", criterion_6),
    (7, "double covers closed forms", criterion_7),
    (8, "property suites", criterion_8),
    (9, "Gamma_{1,2,3,4} stretch", criterion_9),
]


@pytest.fixture(scope="module", autouse=True)
def snf_audit():
    set_audit(True)
    yield
    set_audit(False)


@pytest.mark.parametrize("num,title,fn", CRITERIA[:8], ids=[f"criterion_{c[0]}" for c in CRITERIA[:8]])
def test_criterion(num, title, fn):
    ok, detail = fn()
    assert record(num, title, ok, detail), detail


def test_criterion_9_stretch():
    num, title, fn = CRITERIA[8]
    ok, detail = fn()
    record(num, title, ok, detail)


if __name__ == "__main__":
    set_audit(True)
    for num, title, fn in CRITERIA:
        record(num, title, *fn())
