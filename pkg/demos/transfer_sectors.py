"""Transfer matrices of the Ising chain and their sectors.

At zero temperature (theta = delta_e) the untwisted transfer matrix has a
twofold degenerate top eigenvalue, one state per ordered vacuum, and the
twisted sector vanishes. At infinite temperature (theta = 1) both sectors are
rank one. Subgroup indicators give matrices proportional to projectors.
"""

import numpy as np

from kwgauge.groups import build_group
from kwgauge.harmonic import subgroup_indicator
from kwgauge.ising import projector_constant, transfer_matrix

G = build_group("Z2")
print(" n  top-degeneracy  twisted=0  rank(theta=1) untwisted/twisted")
for n in range(2, 7):
    T = transfer_matrix(n, G, [1.0, 0.0])
    lam = np.linalg.eigvalsh(T)
    top = int(np.sum(np.isclose(lam, lam.max())))
    twisted_zero = not np.any(transfer_matrix(n, G, [1.0, 0.0], twist=1))
    ru = np.linalg.matrix_rank(transfer_matrix(n, G, [1.0, 1.0]))
    rt = np.linalg.matrix_rank(transfer_matrix(n, G, [1.0, 1.0], twist=1))
    print(f"{n:2d}  {top:14d}  {str(twisted_zero):9s}  {ru}/{rt}")

print("\nT^2 = c T for subgroup indicators on a ring of 4 sites:")
for H in ([0], [0, 1]):
    T = transfer_matrix(4, G, subgroup_indicator(H, 2))
    c, res = projector_constant(T)
    print(f"  H = {H}: c = {c:g}, residual = {res:.1e}")
