"""Ising states inside the Turaev-Viro state space.

The gauged Ising model defines a vector in the Turaev-Viro state space of
Vect_G, and its dual lives in the state space of Rep(G). The vertex projectors
cut out the physical subspace, whose dimension counts flat bundles. For
nonabelian G the pairing of the two vectors divided by the direct partition
sum is a constant independent of the weight.
"""

import numpy as np

from kwgauge.flat import flat_labelings, gauge_orbits
from kwgauge.groups import build_group
from kwgauge.surface import torus
from kwgauge.turaev_viro import (build_backend, duality_harness, projector_check,
                                 random_admissible, state_space)

lat = torus(2, 2)
for name in ("Z2", "S3"):
    G = build_group(name)
    orbits = len(gauge_orbits(G, flat_labelings(lat, G, tree_gauge=True)))
    for kind in ("vect", "rep"):
        S = state_space(build_backend(kind, G), lat)
        rep = projector_check(S)
        print(f"{kind}{name}: dim = {S.dim:5d}  physical rank = {rep.rank}  flat orbits = {orbits}"
              f"  idempotence err = {rep.idempotence:.1e}")

G = build_group("S3")
rng = np.random.default_rng(7)
thetas = [random_admissible(G, rng) for _ in range(3)]
rep = duality_harness(G, lat, thetas)
print(f"\nS3 duality ratios: {[round(float(np.real(r)), 6) for r in rep.ratios]}")
print(f"spread = {rep.spread:.1e}")
