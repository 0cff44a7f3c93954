"""
Projective orders, c-values and densities
=========================================

For a finite subgroup of GL_2 the quantity c(g) = tr(g)^2 / det(g) depends
only on the image of g in PGL_2, and it already tells the projective order.
Counting elements by projective order gives the Frobenius densities that a
weight-one form of each exotic type must show.
"""

from exotic_hecke.exotic_groups import build_group, verify_bl
from exotic_hecke.rep_engine import build_twist, densities

for kind in ("2A4", "2O", "GL23", "2A5"):
    G = build_group(kind)
    rep = verify_bl(G)
    print(f"{kind:5s} {len(G):4d} elements  passed={rep.passed}")
    for n, vals in sorted(rep.c_values.items()):
        print(f"      projective order {n}: c = {', '.join(vals)}")

print()
for kind in ("2A4", "2O", "2A5"):
    d = densities(build_twist(kind, 1))
    shares = ", ".join(f"R{n} = {v}" for n, v in d.r_counts.items())
    print(f"{build_group(kind).proj_type}: {shares}")
    if d.r2_split:
        print(f"    order-2 elements by sign: + {d.r2_split['+']}, - {d.r2_split['-']}")
