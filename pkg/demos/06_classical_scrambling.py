"""
Classical sensitivity growth and the scrambling time
====================================================

Pairs of spin configurations differing by a tiny rotation of one site are
integrated side by side; their squared separation C_cl(r, t), grouped by
graph distance r from the perturbed site, measures chaos.  C_cl grows
exponentially at rate lambda until it saturates near 2/(3 phi**2), and the
time to reach C_cl = 1 grows only logarithmically with system size.
"""

import numpy as np

from dyadicspin import CouplingModel
from dyadicspin.semiclassical import (
    fit_lyapunov,
    fit_scrambling,
    run_sensitivity,
    saturation_value,
)

curves = []
for n in (64, 128, 256):
    model = CouplingModel(n_sites=n, s=0.0)
    curve = run_sensitivity(model, n_traj=32, seed=0)
    fit = fit_lyapunov(curve)
    curves.append(curve)
    print(
        f"N={n:4d}: lambda={fit.lyapunov:.3f}+-{fit.lyapunov_stderr:.3f} "
        f"t*={fit.t_star:.3f} (fit r^2={fit.r_squared:.4f})"
    )

summary = fit_scrambling(curves)
print(f"\nlambda*t_star = alpha*ln N + beta with alpha = {summary.alpha:.3f}")

# distance-resolved profile while the front is still early
curve = curves[-1]
ti = int(np.searchsorted(curve.times, 1.0)) - 1
print(f"\nC_cl(r) at t={curve.times[ti]:.2f} (saturation {saturation_value(curve.phi):.1e}):")
for ri, r in enumerate(curve.distances):
    print(f"  r={int(r)}: {curve.values[ri, ti]:.3e}")
print("each extra hop suppresses the early-time response by a constant factor")
