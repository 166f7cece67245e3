"""Counting flat bundles: finite gauge theory partition functions.

The partition function of a finite gauge theory on a closed manifold is the
groupoid cardinality #Hom(pi_1, G) / #G. On the torus with G = S3 the orbits of
commuting pairs under conjugation are the 8 physical states.
"""

from kwgauge.flat import flat_labelings, gauge_orbits
from kwgauge.groups import build_group
from kwgauge.surface import torus
from kwgauge.tqft import (count_bundles, count_homs, lens_presentation, surface_presentation,
                          torus_presentation)

for name in ("Z2", "Z3", "S3", "Q8"):
    G = build_group(name)
    row = [str(count_bundles(torus_presentation(k), G)) for k in (1, 2, 3)]
    print(f"{name:3s}  Z(T^1), Z(T^2), Z(T^3) = {', '.join(row)}")

S3 = build_group("S3")
orbits = gauge_orbits(S3, flat_labelings(torus(2, 2), S3, tree_gauge=True))
print(f"\nS3 flat orbits on a 2x2 torus lattice: {len(orbits)}")

for g in (1, 2):
    Z2 = build_group("Z2")
    print(f"#Hom(pi_1 Sigma_{g}, Z2) = {count_homs(surface_presentation(g), Z2)}")
for p in (2, 3, 6):
    print(f"Z(L({p},1); S3) = {count_bundles(lens_presentation(p), S3)}")
