"""
A-stability of Clenshaw-Curtis collocation
==========================================

The stability function of s-node Clenshaw-Curtis collocation is N(z)/D(z)
with D(z) = N(-z). The method is A-stable exactly when every root of D has
positive real part, so the scan tracks the smallest real part.
"""

import numpy as np

from ccolloc import cc_tableau
from ccolloc.stability import a0_sample, a_stability_scan, cc_stability_polys, stability_region_grid

# Roots are computed in 256-bit arithmetic and recomputed at 512 bits; a
# disagreement would raise instead of returning a number.
for rep in a_stability_scan(2, 20):
    print(f"s={rep.s:2d}  min Re(root of D) = {rep.min_re:8.4f}  A-stable: {rep.a_stable}")

# Along the negative real axis |r| stays below one but tends back to one as
# x -> -inf, because N and D have the same degree.
xs = -np.logspace(0, 6, 7)
print("\n|r(x)| for s=7 at x =", xs)
print(a0_sample(cc_stability_polys(7), xs))

# A coarse picture of the stability region: '#' where |r(z)| < 1.
re, im, vals = stability_region_grid(cc_tableau(6), (-12, 12), (-8, 8), (49, 17))
for row in vals[::-1]:
    print("".join("#" if v < 1 else "." for v in row))
