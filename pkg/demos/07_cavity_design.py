"""
Cavity design numbers
=====================

Driving a cavity with sidebands at frequencies 2**l * omega generates the
power-of-two coupling pattern.  These are the closed-form numbers an
experiment needs: how the interaction-to-decay ratio rho depends on atom
number and modulation index beta, and the drive waveform itself.
"""

import numpy as np

from dyadicspin import CouplingModel, coupling_table
from dyadicspin.expdesign import (
    CavityParams,
    interaction_to_decay,
    modulation_waveform,
    optimal_beta,
    required_cooperativity,
    sideband_count,
)

# rho = 1 marks coherent interactions; 300 atoms per site gets there at N=1024
params = CavityParams(n_sites=1024, eta=1.0, n_atoms_per_site=300, beta=0.2)
print(f"sidebands M = {sideband_count(1024)}, optimal beta = {optimal_beta(1024):.4f}")
print(f"rho at beta=0.2:      {interaction_to_decay(params):.4f}")
print(f"rho at optimal beta:  {interaction_to_decay(params, use_optimal_beta=True):.4f}")

print("\nrequired cooperativity n*eta for rho = 1:")
for n in (16, 64, 256, 1024):
    print(f"  N={n:5d}: {required_cooperativity(n):8.2f}")

# the exact waveform's squared harmonics reproduce the coupling table
model = CouplingModel(n_sites=16, s=0.7)
wf = modulation_waveform(model)
spec = np.abs(np.fft.rfft(wf.exact**2)) / len(wf.phase)
print("\nharmonic content of |Omega|^2 vs target couplings (N=16, s=0.7):")
for d, j in sorted(coupling_table(model).items()):
    print(f"  d={d:2d}: line={spec[d]:.6f}  J(d)={j:.6f}")
stray = max(spec[d] for d in range(1, 9) if d not in coupling_table(model))
print(f"  largest stray line: {stray:.2e}")
