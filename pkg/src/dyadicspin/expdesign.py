"""Cavity implementation budget: coupling-to-decay ratios and waveforms.

Driving a cavity-coupled atomic array with a control field modulated at the
frequencies 2**l * omega produces spin exchange at distances 2**l.  The
figures of merit here weigh those couplings against cavity loss and free
space scattering.  With M = log2(N/2) sidebands of index beta each, the
carrier-relative scattering burden is B = 1 + 2 M beta**2 and the
interaction-to-decay ratio at detuning delta is

    rho(delta) = beta / (M beta kappa / delta + B delta / (n eta kappa)),

maximized over delta at delta/kappa = sqrt(n eta M beta / B), and over beta
when the sideband power matches the carrier, 2 M beta**2 = 1.  Absolute
rates carry order-unity prefactors that are set to 1 throughout; only the
dimensionless ratios are quantitative.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import magnon
from .geometry import CouplingModel, coupling_table, is_power_of_two


def sideband_count(n_sites: int) -> int:
    """M = log2(N/2), the number of modulation frequencies."""
    if n_sites < 4 or not is_power_of_two(n_sites):
        raise ValueError("need a power-of-two site count of at least 4")
    return int(n_sites // 2).bit_length() - 1


def power_broadening(n_sites: int, beta: float) -> float:
    """B = 1 + 2 M beta**2, total scattering relative to the carrier."""
    return 1.0 + 2.0 * sideband_count(n_sites) * beta * beta


def optimal_beta(n_sites: int) -> float:
    """Sideband power equal to carrier power: 2 M beta**2 = 1."""
    return 1.0 / np.sqrt(2.0 * sideband_count(n_sites))


@dataclass(frozen=True)
class CavityParams:
    """Dimensionless design point; kappa and delta share arbitrary units."""

    n_sites: int
    eta: float  # single-atom cooperativity
    n_atoms_per_site: int
    beta: float
    kappa: float = 1.0
    delta: float | None = None
    gamma_atom: float = 1.0

    def __post_init__(self):
        sideband_count(self.n_sites)
        for name in ("eta", "n_atoms_per_site", "beta", "kappa", "gamma_atom"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.delta is not None and self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.beta > 0.5:
            warnings.warn(
                "modulation index above 0.5 strains the weak-modulation"
                " expansion",
                stacklevel=2,
            )

    @property
    def n_eta(self) -> float:
        return self.n_atoms_per_site * self.eta

    @property
    def sidebands(self) -> int:
        return sideband_count(self.n_sites)


def rho_at_detuning(params: CavityParams, delta: float | None = None) -> float:
    """Interaction-to-decay ratio at an explicit Raman detuning."""
    if delta is None:
        delta = params.delta
    if delta is None or delta <= 0:
        raise ValueError("need a positive detuning")
    m = params.sidebands
    b = power_broadening(params.n_sites, params.beta)
    cavity = m * params.beta * params.kappa / delta
    scatter = b * delta / (params.n_eta * params.kappa)
    return params.beta / (cavity + scatter)


def optimal_detuning(params: CavityParams) -> float:
    m = params.sidebands
    b = power_broadening(params.n_sites, params.beta)
    return params.kappa * np.sqrt(params.n_eta * m * params.beta / b)


def interaction_to_decay(params: CavityParams, use_optimal_beta: bool = False) -> float:
    """rho at the optimal detuning, rho = (1/2) sqrt(n eta beta / (M B))."""
    beta = optimal_beta(params.n_sites) if use_optimal_beta else params.beta
    m = params.sidebands
    b = 1.0 + 2.0 * m * beta * beta
    return 0.5 * np.sqrt(params.n_eta * beta / (m * b))


def required_cooperativity(n_sites: int, beta: float | None = None) -> float:
    """n eta giving rho = 1 at optimal detuning; 4 (2M)**(3/2) at optimal beta."""
    m = sideband_count(n_sites)
    if beta is None:
        beta = optimal_beta(n_sites)
    if beta <= 0:
        raise ValueError("beta must be positive")
    return 4.0 * m * (1.0 + 2.0 * m * beta * beta) / beta


def cooperativity_table(
    site_counts: list[int], betas: np.ndarray
) -> np.ndarray:
    """Rows (beta, N, required n eta), the axes of the design chart."""
    rows = [
        (float(b), float(n), required_cooperativity(n, float(b)))
        for n in site_counts
        for b in np.asarray(betas, dtype=float)
    ]
    return np.array(rows)


def decay_rate_table(
    model: CouplingModel, kappa: float, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Collective decay rates gamma_k = (kappa/delta) |E_k|, a diagnostic.

    Rates follow the magnon dispersion because the same cavity response
    that mediates the couplings also carries the loss; the magnitude keeps
    the table usable where E_k dips negative.
    """
    if kappa <= 0 or delta <= 0:
        raise ValueError("kappa and delta must be positive")
    table = magnon.dispersion(model)
    return table.wavenumbers, (kappa / delta) * np.abs(table.energies)


@dataclass(frozen=True)
class Waveform:
    """One modulation period, sampled uniformly in phase omega*t."""

    phase: np.ndarray
    exact: np.ndarray  # sqrt(E(omega t) + offset), exact at any depth
    naive: np.ndarray  # 1 + 2 sum_l beta_l cos(2**l omega t)
    offset: float
    beta: float


def modulation_waveform(
    model: CouplingModel | None,
    n_samples: int | None = None,
    beta: float = 0.1,
    margin: float = 0.0,
    energies: np.ndarray | None = None,
) -> Waveform:
    """Sample the exact and the small-depth control waveforms.

    The amplitude profile obeys |Omega(t)|**2 proportional to E(omega t) up
    to a constant, so the exact waveform is the square root of the shifted
    dispersion; the offset is -min E plus the caller's margin.  The naive
    multi-tone comparison uses beta_l = beta * J_l / j0.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if energies is None:
        if model is None:
            raise ValueError("need a coupling model or explicit energies")
        if n_samples is None:
            n_samples = 4 * model.n_sites
        phase = 2.0 * np.pi * np.arange(n_samples) / n_samples
        energies = magnon.dispersion_at(model, phase)
    else:
        energies = np.asarray(energies, dtype=float)
        n_samples = len(energies)
        phase = 2.0 * np.pi * np.arange(n_samples) / n_samples

    offset = float(margin - energies.min())
    radicand = energies + offset
    if radicand.min() < -1e-12:
        raise ValueError("negative radicand; raise the margin")
    exact = np.sqrt(np.clip(radicand, 0.0, None))

    naive = np.ones(n_samples)
    if model is not None:
        for d, j in sorted(coupling_table(model).items()):
            naive += 2.0 * beta * (j / model.j0) * np.cos(d * phase)
    return Waveform(phase=phase, exact=exact, naive=naive, offset=offset, beta=beta)
