"""
Operator growth through squared commutators
===========================================

C(i,j;t) = <|[S^z_i, S^z_j(t)]|^2> at infinite temperature in the
half-filling sector.  At short times C ~ t**(2r) where r is the graph
distance between the two sites, so each extra hop costs two powers of t.
"""

import numpy as np

from dyadicspin import CouplingModel, graph_distances_from
from dyadicspin.quantum_ed import otoc, short_time_exponent

# twelve sites with open ends keep the graph distances distinct
model = CouplingModel(n_sites=12, s=0.0, boundary="open")
gd = graph_distances_from(model, 0)
times = np.geomspace(0.04, 0.25, 10)

print(" pair   r_ij   fitted exponent   expected")
for j in (1, 3, 11):
    r = int(gd[j])
    res = otoc(model, 0, j, times)
    expo, err = short_time_exponent(res.times, res.values)
    print(f"(0,{j:2d})  {r:4d}   {expo:8.3f} +- {err:.3f}   {2 * r:8d}")

# the curves themselves, coarsely
ts = np.array([0.05, 0.1, 0.2, 0.4])
print("\n      t:" + "".join(f"{t:10.2f}" for t in ts))
for j in (1, 3, 11):
    vals = otoc(model, 0, j, ts).values
    print(f"C(0,{j:2d}):" + "".join(f"{v:10.2e}" for v in vals))
