"""Cavity design-point formulas and modulation waveforms."""

import numpy as np
import pytest

from dyadicspin import expdesign as xd, magnon
from dyadicspin.geometry import CouplingModel, coupling_table


def params_for(n_sites, n_eta=300.0, beta=0.2):
    return xd.CavityParams(
        n_sites=n_sites, eta=1.0, n_atoms_per_site=int(n_eta), beta=beta
    )


def test_sideband_count():
    assert xd.sideband_count(4) == 1
    assert xd.sideband_count(16) == 3
    assert xd.sideband_count(1024) == 9
    with pytest.raises(ValueError):
        xd.sideband_count(12)
    with pytest.raises(ValueError):
        xd.sideband_count(2)


def test_optimal_beta_balances_sideband_power():
    for n in (4, 16, 64, 1024):
        beta = xd.optimal_beta(n)
        m = xd.sideband_count(n)
        assert abs(2.0 * m * beta * beta - 1.0) < 1e-14


def test_params_validation():
    with pytest.raises(ValueError):
        xd.CavityParams(n_sites=16, eta=-1.0, n_atoms_per_site=10, beta=0.2)
    with pytest.raises(ValueError):
        xd.CavityParams(n_sites=16, eta=1.0, n_atoms_per_site=10, beta=0.2, delta=-2.0)
    with pytest.warns(UserWarning):
        xd.CavityParams(n_sites=16, eta=1.0, n_atoms_per_site=10, beta=0.7)
    p = params_for(1024)
    assert p.n_eta == 300.0
    assert p.sidebands == 9


def test_headline_design_point():
    # N = 2**10 with 300 atoms per site at unit single-atom cooperativity
    # sits right at the coherent-interaction threshold
    rho = xd.interaction_to_decay(params_for(1024), use_optimal_beta=True)
    assert abs(rho - 0.9910059291689343) < 1e-12
    assert 0.9 < rho < 1.1


def test_rho_closed_form_identity():
    for n in (16, 64, 256, 1024):
        m = xd.sideband_count(n)
        for n_eta in (50.0, 300.0, 1200.0):
            rho = xd.interaction_to_decay(params_for(n, n_eta), use_optimal_beta=True)
            closed = 0.5 * np.sqrt(n_eta) / (2.0 * m) ** 0.75
            assert abs(rho - closed) < 1e-12


def test_doubling_cooperativity_scales_sqrt2():
    lo = xd.interaction_to_decay(params_for(256, 150.0))
    hi = xd.interaction_to_decay(params_for(256, 300.0))
    assert abs(hi / lo - np.sqrt(2.0)) < 1e-12


def test_detuning_optimum_on_grid():
    p = params_for(256, beta=0.3)
    d_opt = xd.optimal_detuning(p)
    best = xd.rho_at_detuning(p, d_opt)
    assert abs(best - xd.interaction_to_decay(p)) < 1e-12
    for f in np.geomspace(0.2, 5.0, 41):
        assert xd.rho_at_detuning(p, f * d_opt) <= best + 1e-15


def test_rho_detuning_argument_handling():
    p = xd.CavityParams(
        n_sites=64, eta=2.0, n_atoms_per_site=100, beta=0.25, delta=30.0
    )
    assert xd.rho_at_detuning(p) == xd.rho_at_detuning(p, 30.0)
    with pytest.raises(ValueError):
        xd.rho_at_detuning(params_for(64))


def test_required_cooperativity_closed_form():
    for n in (16, 32, 64, 128, 256, 512, 1024):
        m = xd.sideband_count(n)
        closed = 4.0 * (2.0 * m) ** 1.5
        assert abs(xd.required_cooperativity(n) - closed) < 1e-9
    assert abs(xd.required_cooperativity(1024) - 305.47012947258855) < 1e-9


def test_required_cooperativity_inverts_rho():
    # feeding the requirement back in gives rho = 1 exactly
    for n in (16, 256):
        need = xd.required_cooperativity(n)
        rho = 0.5 * np.sqrt(need) / (2.0 * xd.sideband_count(n)) ** 0.75
        assert abs(rho - 1.0) < 1e-12


def test_required_monotone_in_system_size():
    vals = [xd.required_cooperativity(n, 0.2) for n in (16, 32, 64, 128, 256, 512, 1024)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_required_minimum_over_beta():
    betas = np.linspace(0.05, 0.5, 91)
    small = min(xd.required_cooperativity(16, float(b)) for b in betas)
    large = min(xd.required_cooperativity(1024, float(b)) for b in betas)
    assert small < large
    # the grid minimum cannot beat the stationary point
    assert small >= xd.required_cooperativity(16) - 1e-9
    assert large >= xd.required_cooperativity(1024) - 1e-9


def test_required_diverges_at_beta_limits():
    assert xd.required_cooperativity(64, 1e-9) > 1e10
    mid = xd.required_cooperativity(64)
    assert xd.required_cooperativity(64, 100.0) > 100 * mid
    with pytest.raises(ValueError):
        xd.required_cooperativity(64, -0.1)


def test_cooperativity_table():
    betas = np.array([0.1, 0.2, 0.4])
    table = xd.cooperativity_table([16, 64], betas)
    assert table.shape == (6, 3)
    row = table[4]  # n=64, beta=0.2
    assert row[0] == 0.2 and row[1] == 64.0
    assert abs(row[2] - xd.required_cooperativity(64, 0.2)) < 1e-12


def test_decay_rate_table():
    model = CouplingModel(n_sites=32, s=0.0)
    k, gamma = xd.decay_rate_table(model, kappa=1.0, delta=20.0)
    assert k.shape == gamma.shape == (32,)
    assert (gamma >= 0.0).all()
    expect = np.abs(magnon.dispersion(model).energies) / 20.0
    assert np.abs(gamma - expect).max() < 1e-14
    _, gamma2 = xd.decay_rate_table(model, kappa=2.0, delta=20.0)
    assert np.abs(gamma2 - 2.0 * gamma).max() < 1e-14
    with pytest.raises(ValueError):
        xd.decay_rate_table(model, kappa=0.0, delta=1.0)


def test_exact_waveform_square_is_shifted_dispersion():
    model = CouplingModel(n_sites=16, s=0.7)
    wf = xd.modulation_waveform(model)
    energies = magnon.dispersion_at(model, wf.phase)
    assert np.abs(wf.exact**2 - (energies + wf.offset)).max() < 1e-12
    assert (wf.exact >= 0.0).all()


def test_exact_waveform_harmonics_match_couplings():
    # lines of |Omega|**2 sit exactly on the coupled distances
    model = CouplingModel(n_sites=16, s=0.7)
    wf = xd.modulation_waveform(model)
    n = len(wf.phase)
    spec = np.fft.rfft(wf.exact**2) / n
    table = coupling_table(model)
    for d in range(1, n // 2 + 1):
        if d in table:
            assert abs(abs(spec[d]) - table[d]) < 1e-6
        else:
            assert abs(spec[d]) < 1e-6


def test_naive_waveform_small_depth_lines():
    beta = 1e-3
    model = CouplingModel(n_sites=16, s=0.0)
    wf = xd.modulation_waveform(model, beta=beta)
    n = len(wf.phase)
    spec = np.abs(np.fft.rfft(wf.naive**2) / n)
    lines = {1, 2, 4, 8}
    for d in lines:
        assert abs(spec[d] - 2.0 * beta) / (2.0 * beta) < 0.05
    stray = max(spec[d] for d in range(1, n // 2 + 1) if d not in lines)
    assert stray < 5.0 * beta * beta


def test_constant_dispersion_gives_constant_waveform():
    wf = xd.modulation_waveform(None, energies=np.ones(64), margin=1.0)
    assert np.abs(wf.exact - 1.0).max() < 1e-14


def test_waveform_argument_errors():
    with pytest.raises(ValueError):
        xd.modulation_waveform(None)
    with pytest.raises(ValueError):
        xd.modulation_waveform(CouplingModel(n_sites=16, s=0.0), margin=-1.0)
