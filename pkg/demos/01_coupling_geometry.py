"""
Coupling geometry: one chain, two notions of distance
=====================================================

The model couples site pairs whose separation is a power of two, with bond
strength d**s.  Negative s makes it look like a linear chain, positive s
like a binary tree read through the Monna (bit-reversal) map.
"""

import numpy as np

from dyadicspin import (
    CouplingModel,
    coupling_table,
    graph_distances_from,
    interaction_matrix,
    monna_permutation,
    tree_distance,
    two_adic_norm,
)

# the N=8 ring: every bond, by separation
model = CouplingModel(n_sites=8, s=0.0)
print("coupled separations and bare bond strengths at s=0:")
print("  ", coupling_table(model))

for s in (-2.0, 2.0):
    m = CouplingModel(n_sites=8, s=s)
    print(f"at s={s:+g}:", coupling_table(m))

# the interaction matrix sums periodic images; the antipodal pair d=N/2
# is reachable both ways around the ring, so its entry doubles
w = interaction_matrix(model)
print("\nW[0] (note the doubled antipodal entry):")
print("  ", w[0])

# Monna map: bit reversal turns the tree's leaf order into ring order
n = 16
perm = monna_permutation(n)
print(f"\nMonna permutation of {n} sites:")
print("  ", perm)

# three distances between site 0 and everything else
print("\n j  |j-0|_2  d_tree  d_graph")
gd = graph_distances_from(CouplingModel(n_sites=n, s=0.0), 0)
for j in range(1, n):
    norm = two_adic_norm(n, 0, j)
    print(f"{j:3d}  {str(norm):>6}  {tree_distance(n, 0, j):6d}  {gd[j]:7d}")

# the graph diameter stays logarithmic: any site is a few hops away
print("\ngraph eccentricity of site 0 vs system size:")
for n in (16, 64, 256, 1024):
    gd = graph_distances_from(CouplingModel(n_sites=n, s=0.0), 0)
    print(f"  N={n:5d}: {gd.max()} hops")
