"""
Probing the coderivative at the origin
======================================

At z = 0 the quasi-HS operator has no derivative, so membership of a
candidate x in D*T(0)(y) is decided by the limsup quotient. Approaching
along the e1 axis with y = -e1 gives a quotient of exactly 1/2, which rules
the candidate out. The six linear conditions that survive the limit
analysis leave room only when y2 = 0 and y1 >= 0.
"""

import numpy as np

from hilbertops import gendiff
from hilbertops.l2core import basis_vector, zero_vector

dim = 3
op = gendiff.quasi_handle(dim)
z = x = zero_vector(dim)
e1, e3 = basis_vector(1, dim), basis_vector(3, dim)

res = gendiff.probe_membership(op, z, x, -e1, [gendiff.PathFamily("axis")])
print("y = -e1:", res.verdict, "sup", res.sup_estimate, "witness step", res.witness["step"])
print("replayed witness quotient:", res.replay(op, z, x, -e1))

res = gendiff.probe_membership(op, z, x, e3, gendiff.default_families(dim))
print("y = e3:", res.verdict, "largest quotient", max(res.values))

for y in [(1.0, 0.0), (0.0, 0.0), (-1.0, 0.0), (0.0, 1.0)]:
    print(f"y = {y}: feasible region {gendiff.feasible_box(*y)}")
