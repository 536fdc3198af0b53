"""Power-law light-cone bounds on threshold-time profiles.

Threshold times t_eps(d) from the magnon module get sandwiched between

    a * d**b  <=  t_eps(d)  <=  a_u * d**b_u * (ln d)**c_u ,

fitting the lower curve to the fastest sites (which sit at power-of-two
distances, one coupling hop away) and the upper curve to the slowest site in
each octave bin [2**m, 2**(m+1)).  The exponent b quantifies how the cone
closes: b grows with |s| and collapses at s = 0, where only the logarithmic
factor survives.  For s > 0 the same machinery runs against the Monna
(bit-reversed) distance, where treelike transport again looks like a cone.

Logs are natural throughout; that rescales a_u relative to a base-2
convention but leaves b, b_u, c_u unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dyadicspin.geometry import CouplingModel, is_power_of_two, monna_map
from dyadicspin.magnon import default_times, evolve_magnon, threshold_times

PHYSICAL = "physical"
MONNA = "monna"


@dataclass(frozen=True)
class BoundFit:
    """Fitted cone coefficients for one exponent s and one distance notion.

    Lower bound a * d**b, upper bound a_u * d**b_u * (ln d)**c_u with
    a_u >= a, b_u >= b and every coefficient nonnegative.  residual is the
    sum of squared log-differences of the upper curve over the binned
    slowest points; feasible records whether the domination constraints
    were met.
    """

    s: float
    distance_kind: str
    a: float
    b: float
    a_u: float
    b_u: float
    c_u: float
    residual: float
    feasible: bool


def threshold_profile(
    model: CouplingModel,
    t_eps: np.ndarray,
    source_site: int,
    distance_kind: str = PHYSICAL,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-distance crossing times (d, t(d)) for d = 1 .. N/2.

    The two sites at +d and -d are reflection partners with equal crossing
    times; the earlier one is kept.  distance_kind selects the label: the
    archimedean d itself, or the Monna distance M(d).
    """
    n = model.n_sites
    if distance_kind not in (PHYSICAL, MONNA):
        raise ValueError(f"unknown distance kind {distance_kind!r}")
    ds = np.arange(1, n // 2 + 1)
    pairs = np.array(
        [
            [t_eps[(source_site + d) % n], t_eps[(source_site - d) % n]]
            for d in ds
        ]
    )
    vals = np.where(np.isnan(pairs), np.inf, pairs).min(axis=1)
    vals[np.isinf(vals)] = np.nan
    if distance_kind == MONNA:
        ds = np.array([monna_map(n, int(d)) for d in ds])
    return ds, vals


def fastest_points(
    distances: np.ndarray, times: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Subset of the profile at power-of-two distance labels.

    Those are the directly coupled separations, where occupations grow
    first; unreached (NaN) entries are dropped.
    """
    keep = np.array(
        [is_power_of_two(int(d)) and np.isfinite(t) for d, t in zip(distances, times)]
    )
    order = np.argsort(distances[keep])
    return distances[keep][order], times[keep][order]


def binned_slowest(
    distances: np.ndarray, times: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Slowest reached point per octave bin [2**m, 2**(m+1))."""
    finite = np.isfinite(times)
    distances, times = distances[finite], times[finite]
    if distances.size == 0:
        raise ValueError("no reached points to bin")
    out_d, out_t = [], []
    m = 0
    while 2 ** m <= distances.max():
        sel = (distances >= 2 ** m) & (distances < 2 ** (m + 1))
        if np.any(sel):
            k = np.argmax(times[sel])
            out_d.append(distances[sel][k])
            out_t.append(times[sel][k])
        m += 1
    return np.array(out_d), np.array(out_t)


def fit_lower(distances: np.ndarray, times: np.ndarray) -> tuple[float, float]:
    """Least-squares power law a * d**b below the fastest points.

    Log-log least squares for b (clamped at 0), then a is lowered until the
    curve touches the lowest point, so a * d**b <= t(d) holds pointwise.
    """
    if distances.size < 3:
        raise ValueError("need at least 3 points for the lower fit")
    if np.any(distances < 1) or np.any(times <= 0):
        raise ValueError("lower fit needs d >= 1 and t > 0")
    x = np.log(distances.astype(float))
    z = np.log(times)
    b = float(np.polyfit(x, z, 1)[0])
    b = max(b, 0.0)
    a = float(np.min(times / distances.astype(float) ** b))
    return a, b


def _penalty(theta, x, y, z, log_a, b, mu):
    alpha, bu, cu = theta
    curve = alpha + bu * x + cu * y
    obj = np.sum((curve - z) ** 2)
    viol = np.sum(np.maximum(z - curve, 0.0) ** 2)
    viol += max(log_a - alpha, 0.0) ** 2
    viol += max(b - bu, 0.0) ** 2 + max(-bu, 0.0) ** 2 + max(-cu, 0.0) ** 2
    return obj + mu * viol


def _coordinate_descent(theta0, x, y, z, log_a, b, mu, tol=1e-6):
    # each coordinate slice of the penalty is convex piecewise quadratic;
    # golden-section over an expanding bracket is robust and dependency-free
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    theta = np.array(theta0, dtype=float)
    f = _penalty(theta, x, y, z, log_a, b, mu)
    for _ in range(500):
        moved = 0.0
        for i in range(3):
            def fi(v, i=i):
                t = theta.copy()
                t[i] = v
                return _penalty(t, x, y, z, log_a, b, mu)

            lo, hi = theta[i] - 1.0, theta[i] + 1.0
            for _ in range(80):
                if fi(lo) >= fi(lo + 1e-9):
                    break
                lo -= (hi - lo)
            for _ in range(80):
                if fi(hi) >= fi(hi - 1e-9):
                    break
                hi += (hi - lo)
            for _ in range(200):
                if hi - lo < 1e-10:
                    break
                m1 = hi - gr * (hi - lo)
                m2 = lo + gr * (hi - lo)
                if fi(m1) <= fi(m2):
                    hi = m2
                else:
                    lo = m1
            v = 0.5 * (lo + hi)
            moved = max(moved, abs(v - theta[i]))
            theta[i] = v
        f_new = _penalty(theta, x, y, z, log_a, b, mu)
        if moved < tol and f - f_new < tol * (1.0 + abs(f)):
            break
        f = f_new
    return theta


def fit_upper(
    distances: np.ndarray,
    times: np.ndarray,
    lower: tuple[float, float],
) -> tuple[float, float, float, float, bool]:
    """Constrained fit of a_u * d**b_u * (ln d)**c_u over the slowest points.

    Minimizes the summed squared log-difference subject to the curve lying
    at or above every point, a_u >= a, b_u >= b and nonnegative
    coefficients.  Multi-start coordinate descent with an exterior penalty
    (tolerance 1e-6), then an exact projection: a_u is raised until every
    pointwise constraint holds with floats, so the domination invariant is
    not merely approximate.

    The d = 1 point is excluded: (ln 1)**c_u = 0 for any c_u > 0, so no
    curve of this family can dominate it.  Returns
    (a_u, b_u, c_u, residual, feasible).
    """
    a, b = lower
    keep = (distances >= 2) & np.isfinite(times)
    if not np.any(keep):
        raise ValueError("no usable points (d >= 2) for the upper fit")
    d = distances[keep].astype(float)
    t = times[keep]
    if np.any(t <= 0):
        raise ValueError("upper fit needs t > 0")
    x = np.log(d)
    y = np.log(np.log(d))
    z = np.log(t)
    log_a = np.log(a) if a > 0 else -np.inf

    # unconstrained log-linear least squares as one start
    design = np.column_stack([np.ones_like(x), x, y])
    lsq, *_ = np.linalg.lstsq(design, z, rcond=None)
    starts = [
        lsq,
        np.array([log_a if np.isfinite(log_a) else z.max(), max(b, 0.0), 1.0]),
        np.array([z.max(), max(b, 0.0), 0.0]),
    ]

    best = None
    for theta0 in starts:
        for mu in (1e3, 1e6, 1e9):
            theta0 = _coordinate_descent(theta0, x, y, z, log_a, b, mu)
        score = _penalty(theta0, x, y, z, log_a, b, 1e9)
        if best is None or score < best[0]:
            best = (score, theta0)
    alpha, bu, cu = best[1]

    bu = max(bu, b, 0.0)
    cu = max(cu, 0.0)
    # exact feasibility: raise the prefactor until the curve clears every
    # point (and the a_u >= a constraint) in float arithmetic
    alpha = max(alpha, np.max(z - bu * x - cu * y))
    if np.isfinite(log_a):
        alpha = max(alpha, log_a)
    a_u = float(np.exp(alpha))
    while np.any(a_u * d ** bu * np.log(d) ** cu < t) or a_u < a:
        a_u = float(np.nextafter(a_u, np.inf))
    residual = float(np.sum((np.log(a_u) + bu * x + cu * y - z) ** 2))
    feasible = bool(
        np.all(a_u * d ** bu * np.log(d) ** cu >= t) and a_u >= a and bu >= b
    )
    return a_u, float(bu), float(cu), residual, feasible


def fit_cone(
    model: CouplingModel,
    t_eps: np.ndarray,
    source_site: int,
    distance_kind: str = PHYSICAL,
) -> BoundFit:
    """Both bounds for one threshold-time profile."""
    ds, ts = threshold_profile(model, t_eps, source_site, distance_kind)
    fd, ft = fastest_points(ds, ts)
    a, b = fit_lower(fd, ft)
    sd, st = binned_slowest(ds, ts)
    a_u, b_u, c_u, residual, feasible = fit_upper(sd, st, (a, b))
    return BoundFit(
        s=model.s,
        distance_kind=distance_kind,
        a=a,
        b=b,
        a_u=a_u,
        b_u=b_u,
        c_u=c_u,
        residual=residual,
        feasible=feasible,
    )


def auto_distance_kind(s: float) -> str:
    """Monna distances for tree-dominated couplings (s > 0), else physical."""
    return MONNA if s > 0 else PHYSICAL


def cone_exponent_sweep(
    n_sites: int,
    s_values,
    epsilon: float | None = None,
    distance_kind: str = "auto",
    j0: float = 1.0,
    tmax: float | None = None,
    dt: float | None = None,
) -> list[BoundFit]:
    """Simulate, threshold and fit for each s; epsilon defaults to 1/N**2."""
    if epsilon is None:
        epsilon = 1.0 / n_sites ** 2
    fits = []
    for s in s_values:
        model = CouplingModel(n_sites=n_sites, s=float(s), j0=j0)
        times = default_times(model, tmax=tmax, dt=dt)
        occ = evolve_magnon(model, 0, times)
        te = threshold_times(occ, times, epsilon)
        kind = auto_distance_kind(float(s)) if distance_kind == "auto" else distance_kind
        fits.append(fit_cone(model, te, 0, kind))
    return fits
