"""Admissible weights for Z/2 and Z/5.

A weight is admissible when it and its Fourier transform are both
nonnegative. For Z/2 the transform acts on a = theta(1)/theta(0) as the
involution a -> (1 - a)/(1 + a). For Z/5 with even weights (1, b, c, c, b)
the admissible region is a quadrilateral in the (b, c) plane.
"""

import numpy as np

from kwgauge.groups import AbelianGroup, build_group
from kwgauge.harmonic import (fourier_abelian, is_admissible, mu2_dual_parameter,
                              mu5_extreme_points, mu5_outward_normals, mu5_weight)

A = AbelianGroup([2])
for a in (0.0, 0.25, np.sqrt(2) - 1, 0.75, 1.0):
    td = fourier_abelian([1.0, a], A).real
    print(f"a = {a:.4f} -> {td[1] / td[0]:.4f} (formula {mu2_dual_parameter(a):.4f})")

G = build_group("Z5")
print("\nZ5 extreme points and a step just outside:")
for (b, c), nrm in zip(mu5_extreme_points(), mu5_outward_normals()):
    out = np.array([b, c]) + 1e-3 * np.asarray(nrm)
    print(f"  ({b:+.4f}, {c:+.4f}) admissible={bool(is_admissible(mu5_weight(b, c), G))}"
          f"  outside admissible={bool(is_admissible(mu5_weight(*out), G))}")

grid = np.linspace(-0.7, 1.7, 49)
print("\nadmissible region (# inside):")
for c in grid[::-4]:
    print("  " + "".join("#" if is_admissible(mu5_weight(b, c), G) else "." for b in grid))
