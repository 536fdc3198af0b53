"""Command-line drivers.

Every module gets a subcommand; `reproduce` bundles desk-scale recipes that
regenerate the headline tables.  All outputs are plain CSV with a single
'#'-prefixed provenance header of key=value pairs; identical configuration
and seed give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from dyadicspin import expdesign, lightcone, magnon, quantum_ed, semiclassical
from dyadicspin.geometry import (
    CouplingModel,
    archimedean_distance,
    coupling,
    graph_distances_from,
    is_power_of_two,
    monna_map,
    monna_permutation,
    two_adic_norm,
)

# keeps a threadpoolctl limiter alive for the lifetime of the process
_THREAD_LIMIT = None


# ---------------------------------------------------------------------------
# formatting, provenance, config


def fmt(value) -> str:
    """Deterministic text form: 12 significant digits for floats."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # +0.0 folds negative zero
        return "%.12g" % (value + 0.0)
    return str(value)


def parse_kv(text: str) -> dict[str, str]:
    """Whitespace-separated key=value tokens -> dict (values stay strings)."""
    out = {}
    for token in text.split():
        key, eq, value = token.partition("=")
        if not eq or not key:
            raise ValueError(f"malformed key=value token {token!r}")
        out[key] = value
    return out


def provenance_line(cfg: dict) -> str:
    return "# " + " ".join(f"{k}={fmt(v)}" for k, v in sorted(cfg.items()))


def read_config(path: str) -> dict[str, str]:
    """key=value per line; '#' lines that parse as provenance headers are
    folded in, anything else after '#' is a comment."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                try:
                    out.update(parse_kv(line.lstrip("#")))
                except ValueError:
                    pass
                continue
            out.update(parse_kv(line))
    return out


def write_csv(cfg: dict, filename: str, columns, rows) -> str:
    outdir = cfg["out"]
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, filename)
    with open(path, "w", newline="") as fh:
        fh.write(provenance_line(cfg) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    print(f"wrote {path}")
    return path


# ---------------------------------------------------------------------------
# option schema: (name, type, default, help); single source for argparse,
# config-file resolution, and provenance

COMMON = [
    ("n", int, 8, "number of sites"),
    ("s", float, 0.0, "coupling exponent"),
    ("j0", float, 1.0, "largest coupling (energy unit)"),
    ("boundary", str, "periodic", "periodic or open"),
    ("out", str, ".", "output directory"),
    ("seed", int, 0, "random seed (echoed even where unused)"),
    ("threads", int, 0, "cap BLAS/worker threads; 0 = all cores"),
]

SCHEMA: dict[str, list] = {
    "graph": COMMON,
    "magnon": COMMON
    + [
        ("source", int, None, "initial site (default N//2)"),
        ("tmax", float, None, "final time (default 50/j0)"),
        ("dt", float, None, "time step (default 0.02/j0)"),
        ("epsilon", float, None, "occupation threshold (default 1/N^2)"),
        ("order", str, "physical", "site ordering: physical or monna"),
    ],
    "lightcone": [("n", int, 128, "number of sites")]
    + COMMON[1:]
    + [
        ("s_grid", str, "-2,-1,-0.5,0,0.5,1,2", "comma list of s values"),
        ("epsilon", float, None, "occupation threshold (default 1/N^2)"),
        ("tmax", float, None, "simulation horizon (default 50/j0)"),
        ("dt", float, None, "time step (default 0.02/j0)"),
        ("distance", str, "auto", "distance label: auto, physical, monna"),
        ("input", str, "", "arrival-time CSV from the magnon subcommand"),
    ],
    "quench-ee": [("n", int, 12, "number of sites")]
    + COMMON[1:]
    + [
        ("tmax", float, 2.0, "final time"),
        ("dt", float, 0.25, "time step"),
        ("blocks", str, "1,2,4,6", "comma list of partition sizes"),
        ("min_scan", int, None, "also scan all partitions for the minimum"),
        ("dense_cutoff", int, 4096, "largest sector diagonalized densely"),
    ],
    "otoc-ed": [("n", int, 12, "number of sites")]
    + COMMON[1:]
    + [
        ("source", int, 0, "perturbed site i"),
        ("targets", str, "1,3,7", "comma list of probe sites j"),
        ("tmax", float, 0.5, "final time"),
        ("dt", float, 0.01, "time step"),
    ],
    "levels": [("n", int, 14, "number of sites")]
    + COMMON[1:]
    + [
        ("magnons", int, None, "magnon number (default N//2)"),
        ("bins", int, 40, "histogram bins"),
        ("spacing_max", float, 4.0, "histogram upper edge"),
    ],
    "semiclassical": [("n", str, "128", "comma list of system sizes")]
    + COMMON[1:]
    + [
        ("traj", int, 64, "trajectory count (antithetic pairs)"),
        ("phi", float, 1e-4, "perturbation angle"),
        ("tmax", float, 0.0, "final time; 0 = automatic"),
        ("dt", float, 0.0, "integrator step; 0 = 0.005/j0"),
        ("sample_every", int, 8, "record every k-th step"),
        ("stop_fraction", float, 0.2, "stop at this fraction of saturation; 0 = run to tmax"),
        ("z_jitter", float, 0.0, "out-of-plane initial spread"),
    ],
    "expdesign": [("n", int, 1024, "number of sites")]
    + COMMON[1:]
    + [
        ("eta", float, 1.0, "single-atom cooperativity"),
        ("atoms", int, 300, "atoms per site"),
        ("beta", float, 0.0, "modulation index; 0 = optimal"),
        ("beta_min", float, 0.05, "table lower edge"),
        ("beta_max", float, 0.5, "table upper edge"),
        ("beta_steps", int, 46, "table grid points"),
        ("margin", float, 0.0, "waveform offset above -min E(k)"),
        ("samples", int, 0, "waveform samples; 0 = 4N"),
    ],
    "reproduce": [
        ("out", str, ".", "output directory"),
        ("seed", int, 0, "random seed"),
        ("threads", int, 0, "cap BLAS/worker threads; 0 = all cores"),
    ],
}


def schema_defaults(cmd: str) -> dict:
    return {name: default for name, _, default, _ in SCHEMA[cmd]}


def resolve(cmd: str, args: argparse.Namespace) -> dict:
    """Merge flag > config file > built-in default."""
    file_vals = read_config(args.config) if args.config else {}
    cfg = {"subcommand": cmd}
    for name, type_fn, default, _ in SCHEMA[cmd]:
        flag_val = getattr(args, name)
        if flag_val is not None:
            cfg[name] = flag_val
        elif name in file_vals:
            cfg[name] = type_fn(file_vals[name])
        else:
            cfg[name] = default
    return cfg


def _model(cfg, n=None, s=None) -> CouplingModel:
    return CouplingModel(
        n_sites=int(cfg["n"] if n is None else n),
        s=float(cfg["s"] if s is None else s),
        j0=cfg["j0"],
        boundary=cfg["boundary"],
    )


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in str(text).split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in str(text).split(",") if tok]


# ---------------------------------------------------------------------------
# subcommand runners (cfg dict in, files out)


def run_graph(cfg: dict) -> int:
    model = _model(cfg)
    n = model.n_sites
    dists = np.array([graph_distances_from(model, i) for i in range(n)])
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            c = coupling(model, i, j)
            if c == 0.0:
                continue
            norm = (
                float(two_adic_norm(n, i, j)) if is_power_of_two(n) else float("nan")
            )
            rows.append(
                (i, j, c, archimedean_distance(model, i, j), norm, int(dists[i, j]))
            )
    write_csv(cfg, "graph.csv", ("i", "j", "coupling", "d_arch", "d_2adic", "d_graph"), rows)
    return 0


def run_magnon(cfg: dict) -> int:
    model = _model(cfg)
    n = model.n_sites
    if cfg["source"] is None:
        cfg["source"] = n // 2
    if cfg["tmax"] is None:
        cfg["tmax"] = 50.0 / model.j0
    if cfg["dt"] is None:
        cfg["dt"] = 0.02 / model.j0
    if cfg["epsilon"] is None:
        cfg["epsilon"] = 1.0 / n**2
    if cfg["order"] not in ("physical", "monna"):
        raise ValueError(f"unknown site order {cfg['order']!r}")
    source = cfg["source"]
    model.check_index(source)

    times = magnon.default_times(model, tmax=cfg["tmax"], dt=cfg["dt"])
    occ = magnon.evolve_magnon(model, source, times)
    site_order = (
        monna_permutation(n) if cfg["order"] == "monna" else np.arange(n)
    )

    occ_rows = [
        (t, int(j), occ[ti, j]) for ti, t in enumerate(times) for j in site_order
    ]
    write_csv(cfg, "magnon_occupation.csv", ("t", "j", "occupation"), occ_rows)

    t_eps = magnon.threshold_times(occ, times, cfg["epsilon"])
    gdist = graph_distances_from(model, source)
    arr_rows = []
    for j in site_order:
        d = archimedean_distance(model, source, int(j))
        d_m = monna_map(n, d) if is_power_of_two(n) else float("nan")
        arr_rows.append((int(j), d, int(gdist[j]), d_m, t_eps[j]))
    write_csv(
        cfg,
        "magnon_arrivals.csv",
        ("j", "d_arch", "d_graph", "d_monna", "t_eps"),
        arr_rows,
    )
    return 0


def _arrivals_from_csv(path: str) -> tuple[dict, np.ndarray]:
    with open(path) as fh:
        first = fh.readline().strip()
    if not first.startswith("#"):
        raise ValueError(f"{path!r} lacks a provenance header line")
    header = parse_kv(first.lstrip("#"))
    for key in ("n", "s", "j0", "boundary", "source", "epsilon"):
        if key not in header:
            raise ValueError(f"arrival CSV {path!r} lacks provenance key {key!r}")
    t_eps = np.full(int(header["n"]), np.nan)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("j,"):
                continue
            parts = line.split(",")
            t_eps[int(parts[0])] = float(parts[-1])
    return header, t_eps


def run_lightcone(cfg: dict) -> int:
    if cfg["input"]:
        header, t_eps = _arrivals_from_csv(cfg["input"])
        cfg.update(
            n=int(header["n"]),
            s=float(header["s"]),
            j0=float(header["j0"]),
            boundary=header["boundary"],
            epsilon=float(header["epsilon"]),
            tmax=float(header.get("tmax", 0.0)),
            dt=float(header.get("dt", 0.0)),
        )
        model = _model(cfg)
        kind = (
            lightcone.auto_distance_kind(model.s)
            if cfg["distance"] == "auto"
            else cfg["distance"]
        )
        fits = [lightcone.fit_cone(model, t_eps, int(header["source"]), kind)]
    else:
        if cfg["boundary"] != "periodic":
            raise ValueError("light-cone fits need a periodic ring")
        if cfg["epsilon"] is None:
            cfg["epsilon"] = 1.0 / cfg["n"] ** 2
        fits = lightcone.cone_exponent_sweep(
            cfg["n"],
            _float_list(cfg["s_grid"]),
            epsilon=cfg["epsilon"],
            distance_kind=cfg["distance"],
            j0=cfg["j0"],
            tmax=cfg["tmax"],
            dt=cfg["dt"],
        )
        cfg["tmax"] = cfg["tmax"] if cfg["tmax"] is not None else 50.0 / cfg["j0"]
        cfg["dt"] = cfg["dt"] if cfg["dt"] is not None else 0.02 / cfg["j0"]
    for fit in fits:
        if not fit.feasible:
            print(f"warning: upper bound at s={fit.s:g} hit its constraints", file=sys.stderr)
    rows = [(f.s, f.b, f.b_u, f.c_u, f.residual) for f in fits]
    write_csv(cfg, "lightcone_fits.csv", ("s", "b", "b_u", "c_u", "residuals"), rows)
    return 0


def run_quench_ee(cfg: dict) -> int:
    model = _model(cfg)
    n = model.n_sites
    blocks = _int_list(cfg["blocks"])
    if any(not 1 <= L <= n // 2 for L in blocks):
        raise ValueError("partition sizes must lie in 1..N/2")
    times = magnon.default_times(model, tmax=cfg["tmax"], dt=cfg["dt"])
    states = quantum_ed.quench_xpolarized(
        model, times, dense_cutoff=cfg["dense_cutoff"]
    )
    # subtree cuts exist only on power-of-two rings
    dyadic = n & (n - 1) == 0
    partitions = {}
    for L in blocks:
        partitions[("contiguous", L)] = tuple(range(L))
        if dyadic:
            partitions[("monna", L)] = quantum_ed.subtree_blocks(n, L)[0]
    rows = []
    for ti, t in enumerate(times):
        for (kind, L), subset in partitions.items():
            rows.append(
                (t, L, kind, quantum_ed.entanglement_entropy(states[ti], subset, n))
            )
        if cfg["min_scan"]:
            for L in blocks:
                smin, _ = quantum_ed.min_entanglement_over_partitions(
                    states[ti], L, n
                )
                rows.append((t, L, "min", smin))
    write_csv(cfg, "quench_entanglement.csv", ("t", "L", "kind", "S_A"), rows)
    return 0


def run_otoc_ed(cfg: dict) -> int:
    model = _model(cfg)
    source = cfg["source"]
    model.check_index(source)
    times = magnon.default_times(model, tmax=cfg["tmax"], dt=cfg["dt"])
    gdist = graph_distances_from(model, source)
    rows = []
    for j in _int_list(cfg["targets"]):
        model.check_index(j)
        result = quantum_ed.otoc(model, source, j, times, seed=cfg["seed"])
        rows.extend(
            (t, source, j, int(gdist[j]), c)
            for t, c in zip(result.times, result.values)
        )
    write_csv(cfg, "otoc.csv", ("t", "i", "j", "r_ij", "C"), rows)
    return 0


def run_levels(cfg: dict) -> int:
    model = _model(cfg)
    if cfg["magnons"] is None:
        cfg["magnons"] = model.n_sites // 2
    data = quantum_ed.level_statistics(model, cfg["magnons"])
    edges = np.linspace(0.0, cfg["spacing_max"], cfg["bins"] + 1)
    counts, _ = np.histogram(data.spacings, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    cfg["ks_wigner"] = data.ks_wigner
    cfg["ks_poisson"] = data.ks_poisson
    cfg["n_spacings"] = len(data.spacings)
    rows = [(c, int(k), data.ks_wigner) for c, k in zip(centers, counts)]
    write_csv(cfg, "level_spacings.csv", ("spacing", "count", "ks_distance"), rows)
    return 0


def run_semiclassical(cfg: dict) -> int:
    sizes = _int_list(cfg["n"])
    curves = []
    for n in sizes:
        model = _model(cfg, n=n)
        curve = semiclassical.run_sensitivity(
            model,
            n_traj=cfg["traj"],
            phi=cfg["phi"],
            tmax=cfg["tmax"] or None,
            dt=cfg["dt"] or None,
            seed=cfg["seed"],
            sample_every=cfg["sample_every"],
            stop_fraction=cfg["stop_fraction"] or None,
            z_jitter=cfg["z_jitter"],
        )
        curves.append(curve)
        rows = [
            (t, int(r), curve.values[ri, ti], curve.stderr[ri, ti])
            for ti, t in enumerate(curve.times)
            for ri, r in enumerate(curve.distances)
        ]
        write_csv(
            cfg,
            f"semiclassical_sensitivity_n{n}.csv",
            ("t", "r", "C_cl", "stderr"),
            rows,
        )

    fits = [semiclassical.fit_lyapunov(c) for c in curves]
    write_csv(
        cfg,
        "semiclassical_scrambling.csv",
        ("N", "lambda", "t_star"),
        [(f.n_sites, f.lyapunov, f.t_star) for f in fits],
    )

    summary = {
        "fits": [
            {
                "n_sites": f.n_sites,
                "lambda": f.lyapunov,
                "lambda_stderr": f.lyapunov_stderr,
                "t_star": f.t_star,
                "r_squared": f.r_squared,
                "n_window": f.n_window,
                "window_found": f.window_found,
            }
            for f in fits
        ]
    }
    if len(curves) >= 2:
        try:
            sc = semiclassical.fit_scrambling(curves)
            summary["alpha"] = sc.alpha
            summary["alpha_stderr"] = sc.alpha_stderr
            summary["beta"] = sc.beta
            summary["beta_stderr"] = sc.beta_stderr
        except ValueError as exc:
            summary["scrambling_fit_error"] = str(exc)
    print(json.dumps(summary, sort_keys=True))
    return 0


def run_expdesign(cfg: dict) -> int:
    site_counts = [2**p for p in range(4, 11)]
    betas = np.linspace(cfg["beta_min"], cfg["beta_max"], cfg["beta_steps"])
    table = expdesign.cooperativity_table(site_counts, betas)
    write_csv(
        cfg,
        "cooperativity_table.csv",
        ("beta", "N", "required_n_eta"),
        [tuple(row) for row in table],
    )

    n = cfg["n"]
    beta = cfg["beta"] or expdesign.optimal_beta(n)
    model = _model(cfg)
    wf = expdesign.modulation_waveform(
        model,
        n_samples=cfg["samples"] or None,
        beta=beta,
        margin=cfg["margin"],
    )
    write_csv(
        cfg,
        "waveform.csv",
        ("t", "amplitude"),
        list(zip(wf.phase, wf.exact)),
    )

    params = expdesign.CavityParams(
        n_sites=n, eta=cfg["eta"], n_atoms_per_site=cfg["atoms"], beta=beta
    )
    summary = {
        "n_sites": n,
        "sidebands": expdesign.sideband_count(n),
        "beta": beta,
        "optimal_beta": expdesign.optimal_beta(n),
        "rho": expdesign.interaction_to_decay(params),
        "rho_at_optimal_beta": expdesign.interaction_to_decay(params, use_optimal_beta=True),
        "required_n_eta": expdesign.required_cooperativity(n, beta),
        "required_at_optimal_beta": expdesign.required_cooperativity(n),
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# reproduction recipes (desk scale)


def _recipe_fig2(out: str, seed: int) -> int:
    base = {"subcommand": "reproduce", "target": "fig2", "seed": seed}
    for s, order in ((-2.0, "physical"), (0.0, "physical"), (2.0, "monna")):
        cfg = {**schema_defaults("magnon"), **base, "out": out}
        cfg.update(n=128, s=s, tmax=20.0, dt=0.1, order=order)
        model = _model(cfg)
        times = magnon.default_times(model, tmax=20.0, dt=0.1)
        occ = magnon.evolve_magnon(model, 64, times)
        site_order = monna_permutation(128) if order == "monna" else np.arange(128)
        rows = [
            (t, int(j), occ[ti, j]) for ti, t in enumerate(times) for j in site_order
        ]
        write_csv(cfg, f"magnon_occupation_s{s:+g}.csv", ("t", "j", "occupation"), rows)

    disp_rows = []
    for s in (-2.0, 0.0, 2.0):
        model = CouplingModel(n_sites=128, s=s)
        table = magnon.dispersion(model)
        monna_energy = magnon.monna_reorder(table.energies)
        disp_rows.extend(
            ("physical", s, int(k), table.wavenumbers[k], table.energies[k])
            for k in range(128)
        )
        disp_rows.extend(
            ("monna", s, int(k), table.wavenumbers[k], monna_energy[k])
            for k in range(128)
        )
    write_csv(
        {**base, "out": out, "n": 128},
        "dispersion.csv",
        ("order", "s", "k_index", "wavenumber", "energy"),
        disp_rows,
    )

    cfg = {**schema_defaults("lightcone"), **base, "out": out}
    return run_lightcone(cfg)


def _recipe_fig3(out: str, seed: int) -> int:
    status = 0
    minima = []
    for s in (-2.0, -1.0, 0.0, 1.0, 2.0):
        cfg = {**schema_defaults("quench-ee"), "subcommand": "reproduce",
               "target": "fig3", "seed": seed}
        cfg.update(n=8, s=s, tmax=2.0, dt=0.25, blocks="1,2,4", min_scan=1,
                   out=os.path.join(out, f"s{s:+g}"))
        status |= run_quench_ee(cfg)
        path = os.path.join(cfg["out"], "quench_entanglement.csv")
        with open(path) as fh:
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) == 4 and parts[2] == "min" and parts[1] == "4":
                    minima.append((s, float(parts[0]), float(parts[3])))
    write_csv(
        {"subcommand": "reproduce", "target": "fig3", "seed": seed, "out": out,
         "n": 8, "L": 4},
        "fig3_minimum.csv",
        ("s", "t", "S_min"),
        minima,
    )
    return status


def _recipe_fig4(out: str, seed: int) -> int:
    cfg = {**schema_defaults("semiclassical"), "subcommand": "reproduce",
           "target": "fig4", "seed": seed, "out": out}
    cfg.update(n="64,128,256")
    return run_semiclassical(cfg)


def _recipe_figs2(out: str, seed: int) -> int:
    cfg = {**schema_defaults("expdesign"), "subcommand": "reproduce",
           "target": "figS2", "seed": seed, "out": out}
    return run_expdesign(cfg)


def _recipe_figs3(out: str, seed: int) -> int:
    base = {"subcommand": "reproduce", "target": "figS3", "seed": seed,
            "out": out, "n": 128, "epsilon": 1.0 / 128**2}
    points = []
    fits = []
    for s in (-0.5, 0.0, 0.5):
        model = CouplingModel(n_sites=128, s=s)
        times = magnon.default_times(model)
        occ = magnon.evolve_magnon(model, 0, times)
        t_eps = magnon.threshold_times(occ, times, base["epsilon"])
        kind = lightcone.auto_distance_kind(s)
        ds, ts = lightcone.threshold_profile(model, t_eps, 0, kind)
        points.extend((s, kind, int(d), t) for d, t in zip(ds, ts))
        f = lightcone.fit_cone(model, t_eps, 0, kind)
        fits.append((f.s, f.b, f.b_u, f.c_u, f.residual))
    write_csv(base, "figS3_profiles.csv", ("s", "kind", "d", "t_eps"), points)
    write_csv(base, "figS3_fits.csv", ("s", "b", "b_u", "c_u", "residuals"), fits)
    return 0


RECIPES = {
    "fig2": _recipe_fig2,
    "fig3": _recipe_fig3,
    "fig4": _recipe_fig4,
    "figS2": _recipe_figs2,
    "figS3": _recipe_figs3,
}


def run_reproduce(cfg: dict) -> int:
    target = cfg["target"]
    outdir = os.path.join(cfg["out"], target)
    return RECIPES[target](outdir, cfg["seed"])


RUNNERS = {
    "graph": run_graph,
    "magnon": run_magnon,
    "lightcone": run_lightcone,
    "quench-ee": run_quench_ee,
    "otoc-ed": run_otoc_ed,
    "levels": run_levels,
    "semiclassical": run_semiclassical,
    "expdesign": run_expdesign,
    "reproduce": run_reproduce,
}


# ---------------------------------------------------------------------------
# argparse plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicspin",
        description="Simulators for sparse power-of-two coupled spin chains.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for cmd, schema in SCHEMA.items():
        p = sub.add_parser(cmd, help=f"{cmd} driver")
        for name, type_fn, _, help_text in schema:
            flag = "--" + name.replace("_", "-")
            if name == "min_scan":
                p.add_argument(flag, dest=name, action="store_const", const=1,
                               default=None, help=help_text)
            else:
                p.add_argument(flag, dest=name, type=type_fn, default=None,
                               help=f"{help_text}")
        p.add_argument("--config", default=None,
                       help="key=value config file; flags override it")
        if cmd == "reproduce":
            p.add_argument("target", choices=sorted(RECIPES))
        p.set_defaults(cmd=cmd)
    return parser


def _apply_threads(threads: int) -> None:
    global _THREAD_LIMIT
    if not threads or threads <= 0:
        return
    try:
        import threadpoolctl

        _THREAD_LIMIT = threadpoolctl.threadpool_limits(limits=threads)
    except ImportError:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = resolve(args.cmd, args)
    if args.cmd == "reproduce":
        cfg["target"] = args.target
    _apply_threads(cfg.get("threads", 0))
    try:
        return RUNNERS[args.cmd](cfg)
    except (ValueError, RuntimeError, OSError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
