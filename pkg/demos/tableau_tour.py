"""
Building collocation tableaus
=============================

A collocation method is fixed by its nodes. Integrating the Lagrange
polynomials of those nodes gives the Butcher tableau, and the moments of
the node polynomial give the order.
"""

import numpy as np

from ccolloc.tableau import cc_tableau, collocation_tableau, gl_tableau, nc_tableau
from ccolloc.tableau import CollocationKernel, cc_nodes, order_of

# Three Chebyshev-Lobatto nodes on [0, 1] reproduce Simpson's rule in the
# last row, which is also the weight vector b.
print(cc_tableau(3))

# The closed form used by cc_tableau agrees with generic Lagrange
# integration on the same nodes.
for s in (4, 8, 12):
    diff = np.max(np.abs(cc_tableau(s).A - collocation_tableau(cc_nodes(s)).A))
    print(f"s={s:2d}  closed form vs Lagrange integrals: {diff:.1e}")

# Orders: Gauss-Legendre reaches 2s, Clenshaw-Curtis s+1 for odd s and s
# for even s, Newton-Cotes behaves the same way as Clenshaw-Curtis.
print("\n s   GL  CC  NC")
for s in range(2, 10):
    orders = [order_of(CollocationKernel.for_family(f, s)).order for f in ("gl", "cc", "nc")]
    print(f"{s:2d}  " + "  ".join(f"{p:2d}" for p in orders))

# Equispaced nodes produce huge, sign-changing weights at large s, which is
# why Newton-Cotes collocation stops improving.
for s in (10, 20, 30):
    print(f"s={s}: max |A| for NC {np.abs(nc_tableau(s).A).max():.1e}, "
          f"CC {np.abs(cc_tableau(s).A).max():.2f}, GL {np.abs(gl_tableau(s).A).max():.2f}")
