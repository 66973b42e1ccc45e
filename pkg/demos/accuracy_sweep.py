"""
Accuracy against the number of nodes
====================================

One step over the whole interval for two test problems:

* example1: y' = y on [0, 1], y(0) = 1
* example2: y' = 2y/t^3 on [1, 3], y(1) = 1

The rows printed here are the data behind an error-versus-s plot.
"""

import numpy as np

from ccolloc.experiments import accuracy_sweep, example1, example2
from ccolloc.experiments.sweeps import accuracy_csv

rows = accuracy_sweep(example1, ["gl", "cc", "nc"], range(2, 13))
print(accuracy_csv(rows))

# On the smooth problem all three families reach the rounding floor, with
# Gauss-Legendre getting there in about half as many nodes.
floor = 100 * np.finfo(float).eps * (1 + np.e)
for fam in ("gl", "cc", "nc"):
    first = next((r.s for r in rows if r.family.short == fam and r.error < floor), None)
    print(f"{fam}: first s at the floor = {first}")

# The second problem separates Clenshaw-Curtis from Newton-Cotes. Past
# s of about 20 the equispaced method stops converging.
rows = accuracy_sweep(example2, ["cc", "nc"], range(5, 41, 5))
print()
print(" s   CC error    NC error   NC converged")
by_s = {}
for r in rows:
    by_s.setdefault(r.s, {})[r.family.short] = r
for s, cell in sorted(by_s.items()):
    print(f"{s:2d}  {cell['cc'].error:9.2e}  {cell['nc'].error:9.2e}  {cell['nc'].converged}")
