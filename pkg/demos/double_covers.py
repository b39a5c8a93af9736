"""Two-vertex 3- and 4-graphs from double covers.

    python3 demos/double_covers.py

The closed form predicts everything from g = gcd(a_i). The generic pipeline
is run alongside; when two different T parameters occur the true second
divisor of d_1 (exact_g) can be smaller than g.
"""

import warnings

from cubekit.covers import compare_with_generic, cover_ktheory, exact_g, parse_spec

for text in ("T:2,D:3,D:3", "T:3,D:2,D:4", "T:2,D:3,D:3,D:8", "T:2,T:3,D:3"):
    s = parse_spec(text)
    kt = cover_ktheory(s)
    print(kt.text())
    print(f"  closed form matches generic: {compare_with_generic(s).ok}, exact g = {exact_g(s)}")
    print()

# parameters equal to 1 are outside the usual hypothesis, so they warn
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    s = parse_spec("T:1,D:2,D:2")
print("T:1,D:2,D:2 warns:", [str(w.message) for w in caught])
print("  homology:", [str(g) for g in cover_ktheory(s).homologies])
