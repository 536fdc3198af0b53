"""Classical spin dynamics, sensitivity growth, and fast-scrambling fits.

In the large-S limit the spins become unit vectors x_i precessing in the
field of their neighbors,

    dx_i/dt = h_i x x_i,    h_i = sum_j W_ij (x_j^x, x_j^y, 0),

which follows from the bracket {S^a, S^b} = eps^{abc} S^c applied to the
XX coupling.  Sensitivity to a small rotation of one spin is measured by
comparing a trajectory against a twin whose source spin was rotated by
phi about z at t = 0; the squared z-difference, scaled by phi**2 and
grouped by graph distance from the source, is the classical analogue of
an out-of-time-order correlator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .geometry import CouplingModel

DEFAULT_PHI = 1e-4
DEFAULT_STEP = 0.005  # in units of 1/j0
UNIT_NORM_TOL = 1e-8
CONSERVATION_TOL = 1e-6


def _weights(model: CouplingModel | None, weights: np.ndarray | None) -> np.ndarray:
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weights must be a square matrix")
        if not np.allclose(w, w.T):
            raise ValueError("weights must be symmetric")
        return w
    if model is None:
        raise ValueError("need a coupling model or an explicit weight matrix")
    return geometry.interaction_matrix(model)


def _make_field(model: CouplingModel | None, w: np.ndarray):
    """Return field(state) -> (hx, hy) for states laid out as (..., 3, N)."""
    n = w.shape[0]
    if model is not None and model.boundary == geometry.PERIODIC:
        # circulant row, symmetric, so its transform is real and the
        # correlation h_i = sum_j c[j-i] v_j reduces to a product
        kernel = np.fft.rfft(w[0])

        def field(state: np.ndarray):
            fx = np.fft.rfft(state[..., 0, :], axis=-1)
            fy = np.fft.rfft(state[..., 1, :], axis=-1)
            hx = np.fft.irfft(fx * kernel, n=n, axis=-1)
            hy = np.fft.irfft(fy * kernel, n=n, axis=-1)
            return hx, hy

    else:

        def field(state: np.ndarray):
            hx = state[..., 0, :] @ w
            hy = state[..., 1, :] @ w
            return hx, hy

    return field


def classical_rhs(
    model: CouplingModel | None,
    spins: np.ndarray,
    weights: np.ndarray | None = None,
) -> np.ndarray:
    """Time derivative of unit spins laid out as (..., N, 3)."""
    w = _weights(model, weights)
    state = np.moveaxis(np.asarray(spins, dtype=float), -1, -2)
    out = np.moveaxis(_rhs_of(_make_field(model, w))(state), -2, -1)
    return out


def _rhs_of(field):
    def rhs(state: np.ndarray) -> np.ndarray:
        hx, hy = field(state)
        out = np.empty_like(state)
        out[..., 0, :] = hy * state[..., 2, :]
        out[..., 1, :] = -hx * state[..., 2, :]
        out[..., 2, :] = hx * state[..., 1, :] - hy * state[..., 0, :]
        return out

    return rhs


def classical_energy(
    model: CouplingModel | None,
    spins: np.ndarray,
    weights: np.ndarray | None = None,
) -> np.ndarray:
    """E = sum_{i<j} W_ij (x_i x_j + y_i y_j), conserved by the flow."""
    w = _weights(model, weights)
    state = np.moveaxis(np.asarray(spins, dtype=float), -1, -2)
    hx, hy = _make_field(model, w)(state)
    e = 0.5 * (hx * state[..., 0, :] + hy * state[..., 1, :]).sum(axis=-1)
    return e


def z_magnetization(spins: np.ndarray) -> np.ndarray:
    return np.asarray(spins, dtype=float)[..., 2].sum(axis=-1)


@dataclass(frozen=True)
class ClassicalEnsemble:
    """Paired initial conditions: base trajectories and phi-rotated twins."""

    model: CouplingModel
    n_traj: int
    phi: float
    seed: int
    source: int
    base: np.ndarray  # (T, N, 3)
    twin: np.ndarray  # (T, N, 3), source spin rotated by phi about z


def initial_ensemble(
    model: CouplingModel,
    n_traj: int,
    phi: float = DEFAULT_PHI,
    seed: int = 0,
    source: int = 0,
    z_jitter: float = 0.0,
) -> ClassicalEnsemble:
    """Random in-plane spins, in antithetic pairs (theta, -theta).

    z_jitter > 0 tilts each spin out of plane by a Gaussian z-component of
    that scale.  The default is exactly in-plane, which changes the
    early-time sensitivity powers: in-plane differences, the only ones the
    field transmits, lag the z-difference by one order in t at every hop,
    so C at graph distance r grows as t**(4r - 2) rather than the t**(2r)
    of an out-of-plane-seeded ensemble.  Antithetic partners flip theta
    and z together, the symmetry (x, y, z) -> (x, -y, -z) of the flow.
    """
    if n_traj < 2 or n_traj % 2:
        raise ValueError("n_traj must be even and at least 2")
    model.check_index(source)
    rng = np.random.default_rng(seed)
    half = n_traj // 2
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(half, model.n_sites))
    theta = np.concatenate([theta, -theta], axis=0)
    if z_jitter > 0.0:
        z = np.clip(z_jitter * rng.standard_normal((half, model.n_sites)), -1, 1)
        z = np.concatenate([z, -z], axis=0)
    else:
        z = np.zeros_like(theta)
    rho = np.sqrt(1.0 - z * z)
    base = np.stack([rho * np.cos(theta), rho * np.sin(theta), z], axis=-1)
    twin = base.copy()
    c, s = np.cos(phi), np.sin(phi)
    x, y = base[:, source, 0].copy(), base[:, source, 1].copy()
    twin[:, source, 0] = c * x - s * y
    twin[:, source, 1] = s * x + c * y
    return ClassicalEnsemble(model, n_traj, phi, seed, source, base, twin)


def saturation_value(phi: float) -> float:
    # decorrelated unit vectors: <(z - z')**2> = 2<z**2> = 2/3
    return 2.0 / (3.0 * phi * phi)


@dataclass(frozen=True)
class SensitivityCurve:
    """((dz_j)/phi)**2 averaged over trajectories, grouped by graph distance."""

    model: CouplingModel
    times: np.ndarray  # (nt,)
    distances: np.ndarray  # (nr,) sorted graph distances from the source
    values: np.ndarray  # (nr, nt)
    stderr: np.ndarray  # (nr, nt), over independent antithetic pairs
    n_traj: int
    phi: float
    conservation: dict[str, float]

    @property
    def saturation(self) -> float:
        return saturation_value(self.phi)

    def at_distance(self, r: int) -> np.ndarray:
        idx = int(np.searchsorted(self.distances, r))
        if idx == len(self.distances) or self.distances[idx] != r:
            raise ValueError(f"no sites at graph distance {r}")
        return self.values[idx]


def run_sensitivity(
    model: CouplingModel,
    n_traj: int = 256,
    phi: float = DEFAULT_PHI,
    tmax: float | None = None,
    dt: float | None = None,
    seed: int = 0,
    source: int = 0,
    sample_every: int = 8,
    stop_fraction: float | None = 0.2,
    z_jitter: float = 0.0,
) -> SensitivityCurve:
    """Integrate base and twin ensembles, accumulating the z-sensitivity.

    Classic fixed-step RK4 at j0*dt = 0.005 with renormalization of every
    spin after each step.  Unit-norm drift is checked before each
    renormalization at sample times; energy and z-magnetization drifts are
    tracked relative to N*j0 and N.  Integration stops early once the
    farthest-distance curve passes stop_fraction of saturation, since the
    Lyapunov window closes below that.
    """
    if dt is None:
        dt = DEFAULT_STEP / model.j0
    if tmax is None:
        tmax = _auto_tmax(model, phi)
    ens = initial_ensemble(model, n_traj, phi, seed, source, z_jitter)
    # twins stacked after bases: one integrator pass drives both
    state = np.moveaxis(
        np.concatenate([ens.base, ens.twin], axis=0), -1, -2
    ).copy()  # (2T, 3, N)

    w = geometry.interaction_matrix(model)
    rhs = _rhs_of(_make_field(model, w))
    r_from_source = geometry.graph_distances_from(model, source)
    distances = np.unique(r_from_source)
    groups = [np.flatnonzero(r_from_source == r) for r in distances]

    e0 = _energy_of(state, model, w)
    m0 = state[:, 2, :].sum(axis=-1)
    drift = {"unit_norm": 0.0, "energy": 0.0, "magnetization": 0.0}

    n_steps = max(1, int(round(tmax / dt)))
    times = [0.0]
    samples = [_group_sensitivity(state, n_traj, phi, groups)]
    c_stop = None if stop_fraction is None else stop_fraction * saturation_value(phi)

    for step in range(1, n_steps + 1):
        k1 = rhs(state)
        k2 = rhs(state + (0.5 * dt) * k1)
        k3 = rhs(state + (0.5 * dt) * k2)
        k4 = rhs(state + dt * k3)
        state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norms = np.sqrt((state * state).sum(axis=-2, keepdims=True))
        drift["unit_norm"] = max(
            drift["unit_norm"], float(np.abs(norms - 1.0).max())
        )
        state /= norms

        if step % sample_every == 0 or step == n_steps:
            times.append(step * dt)
            samples.append(_group_sensitivity(state, n_traj, phi, groups))
            drift["energy"] = max(
                drift["energy"],
                float(np.abs(_energy_of(state, model, w) - e0).max())
                / (model.n_sites * model.j0),
            )
            drift["magnetization"] = max(
                drift["magnetization"],
                float(np.abs(state[:, 2, :].sum(axis=-1) - m0).max())
                / model.n_sites,
            )
            if drift["unit_norm"] > UNIT_NORM_TOL:
                raise RuntimeError(
                    f"spin norm drifted by {drift['unit_norm']:.2e} in one step"
                )
            if max(drift["energy"], drift["magnetization"]) > CONSERVATION_TOL:
                raise RuntimeError(
                    "conservation drift exceeded 1e-6: " + repr(drift)
                )
            if c_stop is not None and samples[-1][0][-1] >= c_stop:
                break

    values = np.stack([v for v, _ in samples], axis=-1)
    stderr = np.stack([e for _, e in samples], axis=-1)
    return SensitivityCurve(
        model=model,
        times=np.asarray(times),
        distances=distances,
        values=values,
        stderr=stderr,
        n_traj=n_traj,
        phi=phi,
        conservation=drift,
    )


def _energy_of(state: np.ndarray, model: CouplingModel, w: np.ndarray) -> np.ndarray:
    hx, hy = _make_field(model, w)(state)
    return 0.5 * (hx * state[..., 0, :] + hy * state[..., 1, :]).sum(axis=-1)


def _group_sensitivity(state, n_traj, phi, groups):
    dz = (state[n_traj:, 2, :] - state[:n_traj, 2, :]) / phi  # (T, N)
    sq = dz * dz
    values = np.empty(len(groups))
    stderr = np.empty(len(groups))
    half = n_traj // 2
    for gi, g in enumerate(groups):
        per_traj = sq[:, g].mean(axis=1)
        # antithetic partner sits half the ensemble away; pair means are
        # the independent sampling units
        pairs = 0.5 * (per_traj[:half] + per_traj[half:])
        values[gi] = pairs.mean()
        stderr[gi] = pairs.std(ddof=1) / np.sqrt(half) if half > 1 else 0.0
    return values, stderr


# conservative floor for the Lyapunov rate when budgeting integration time;
# measured rates at s=0 sit well above this for N in the tested range
LAMBDA_FLOOR = 1.2


def _auto_tmax(model: CouplingModel, phi: float) -> float:
    c_top = 0.25 * saturation_value(phi)
    return (np.log(c_top) + 1.3 * np.log(model.n_sites)) / (
        LAMBDA_FLOOR * model.j0
    ) + 2.0 / model.j0


@dataclass(frozen=True)
class ScramblingFit:
    """Exponential-window fit of one sensitivity curve."""

    n_sites: int
    distance: int
    lyapunov: float
    lyapunov_stderr: float
    t_star: float
    window: tuple[float, float]  # time span of the fitted points
    n_window: int
    r_squared: float
    window_found: bool


def fit_lyapunov(
    curve: SensitivityCurve,
    distance: int | None = None,
    window_lo: float = 1e-4,
    window_hi: float = 1e-1,
    t_min: float | None = None,
) -> ScramblingFit:
    """Fit C ~ exp(lambda t) where C lies in [lo, hi] x saturation, t >= t_min.

    t_star is the first crossing C = 1, interpolated linearly in log C.
    A curve with fewer than five window points is flagged rather than fit.
    """
    r = int(curve.distances[-1]) if distance is None else distance
    c = curve.at_distance(r)
    t = curve.times
    if t_min is None:
        t_min = 1.0 / curve.model.j0
    sat = curve.saturation
    mask = (c >= window_lo * sat) & (c <= window_hi * sat) & (t >= t_min)
    n_window = int(mask.sum())
    t_star = _first_crossing(t, c, 1.0)
    if n_window < 5 or not np.isfinite(t_star):
        return ScramblingFit(
            curve.model.n_sites, r, np.nan, np.nan, t_star, (np.nan, np.nan),
            n_window, np.nan, False,
        )
    tw, logc = t[mask], np.log(c[mask])
    (slope, intercept), cov = np.polyfit(tw, logc, 1, cov=True)
    pred = slope * tw + intercept
    ss_res = float(((logc - pred) ** 2).sum())
    ss_tot = float(((logc - logc.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScramblingFit(
        n_sites=curve.model.n_sites,
        distance=r,
        lyapunov=float(slope),
        lyapunov_stderr=float(np.sqrt(cov[0, 0])),
        t_star=t_star,
        window=(float(tw[0]), float(tw[-1])),
        n_window=n_window,
        r_squared=r_squared,
        window_found=True,
    )


def _first_crossing(t: np.ndarray, c: np.ndarray, level: float) -> float:
    above = np.flatnonzero(c >= level)
    if len(above) == 0:
        return np.nan
    k = above[0]
    if k == 0 or c[k - 1] <= 0.0:
        return float(t[k])
    lo, hi = np.log(c[k - 1]), np.log(c[k])
    frac = (np.log(level) - lo) / (hi - lo)
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))


@dataclass(frozen=True)
class ScramblingSummary:
    """lambda*t_star = alpha log N + beta across a system-size grid."""

    alpha: float
    beta: float
    alpha_stderr: float
    beta_stderr: float
    fits: tuple[ScramblingFit, ...]


def fit_scrambling(curves: list[SensitivityCurve], **fit_kwargs) -> ScramblingSummary:
    """Per-size Lyapunov fits plus the global scrambling-time regression.

    Sizes whose curves show no exponential window are flagged in the fits
    tuple and excluded from the regression.
    """
    fits = tuple(fit_lyapunov(c, **fit_kwargs) for c in curves)
    used = [f for f in fits if f.window_found and np.isfinite(f.t_star)]
    if len(used) < 2:
        raise ValueError("need at least two usable sizes for the global fit")
    x = np.log([f.n_sites for f in used])
    y = np.array([f.lyapunov * f.t_star for f in used])
    # weight by the propagated uncertainty of lambda * t_star
    sigma = np.array(
        [max(abs(f.t_star) * f.lyapunov_stderr, 1e-12) for f in used]
    )
    wt = 1.0 / sigma**2
    design = np.stack([x, np.ones_like(x)], axis=1)
    cov = np.linalg.inv(design.T @ (wt[:, None] * design))
    alpha, beta = cov @ design.T @ (wt * y)
    return ScramblingSummary(
        alpha=float(alpha),
        beta=float(beta),
        alpha_stderr=float(np.sqrt(cov[0, 0])),
        beta_stderr=float(np.sqrt(cov[1, 1])),
        fits=fits,
    )
