"""End-to-end checks of the command-line drivers."""

import os

import numpy as np
import pytest

from dyadicspin import cli


def read_rows(path):
    with open(path) as fh:
        header = fh.readline()
        columns = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, columns, rows


def test_graph_edge_list(tmp_path):
    out = str(tmp_path)
    assert cli.main(["graph", "--n", "8", "--s", "0", "--out", out]) == 0
    header, columns, rows = read_rows(os.path.join(out, "graph.csv"))
    assert columns == ["i", "j", "coupling", "d_arch", "d_2adic", "d_graph"]
    # 8 bonds at separation 1, 8 at 2, 4 antipodal
    assert len(rows) == 20
    seps = [int(r[3]) for r in rows]
    assert sorted(set(seps)) == [1, 2, 4]
    assert seps.count(1) == 8 and seps.count(2) == 8 and seps.count(4) == 4
    first = rows[0]
    assert first[:2] == ["0", "1"]
    assert float(first[2]) == 1.0 and float(first[4]) == 1.0 and int(first[5]) == 1


def test_magnon_delta_start(tmp_path):
    out = str(tmp_path)
    code = cli.main(
        ["magnon", "--n", "16", "--s", "0", "--source", "8", "--tmax", "0", "--out", out]
    )
    assert code == 0
    _, columns, rows = read_rows(os.path.join(out, "magnon_occupation.csv"))
    assert columns == ["t", "j", "occupation"]
    assert len(rows) == 16
    occupied = [r for r in rows if float(r[2]) > 1e-12]
    assert len(occupied) == 1 and occupied[0][1] == "8"
    _, acols, arows = read_rows(os.path.join(out, "magnon_arrivals.csv"))
    assert acols == ["j", "d_arch", "d_graph", "d_monna", "t_eps"]
    by_site = {r[0]: r for r in arows}
    assert float(by_site["8"][4]) == 0.0
    assert by_site["12"][1] == "4" and by_site["12"][2] == "1"


def test_malformed_flag_exits_2():
    with pytest.raises(SystemExit) as info:
        cli.build_parser().parse_args(["magnon", "--s", "bogus"])
    assert info.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        cli.build_parser().parse_args(["transmogrify"])
    assert info.value.code == 2


def test_runtime_failure_exits_1(tmp_path, capsys):
    # open boundary has no momentum sectors
    code = cli.main(
        ["levels", "--n", "8", "--boundary", "open", "--out", str(tmp_path)]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_same_seed_byte_identical(tmp_path):
    out = str(tmp_path / "a")
    argv = ["semiclassical", "--n", "16", "--traj", "8", "--tmax", "2",
            "--seed", "5", "--out", out]
    assert cli.main(argv) == 0
    blob1 = open(os.path.join(out, "semiclassical_sensitivity_n16.csv"), "rb").read()
    assert cli.main(argv) == 0
    blob2 = open(os.path.join(out, "semiclassical_sensitivity_n16.csv"), "rb").read()
    assert blob1 == blob2


def test_provenance_roundtrip_through_config(tmp_path):
    out1 = str(tmp_path / "run1")
    assert cli.main(
        ["magnon", "--n", "32", "--s", "-1", "--tmax", "5", "--out", out1]
    ) == 0
    path1 = os.path.join(out1, "magnon_arrivals.csv")
    with open(path1) as fh:
        header = fh.readline()
    pairs = cli.parse_kv(header.lstrip("#"))
    assert pairs["subcommand"] == "magnon"
    assert pairs["n"] == "32" and pairs["tmax"] == "5"

    # feed the header back in as a config file; only out is overridden
    config = tmp_path / "rerun.cfg"
    config.write_text("".join(f"{k}={v}\n" for k, v in pairs.items()))
    out2 = str(tmp_path / "run2")
    assert cli.main(["magnon", "--config", str(config), "--out", out2]) == 0
    body1 = open(path1).read().replace(f"out={out1}", "")
    body2 = (
        open(os.path.join(out2, "magnon_arrivals.csv"))
        .read()
        .replace(f"out={out2}", "")
    )
    assert body1 == body2


def test_flag_overrides_config(tmp_path):
    config = tmp_path / "base.cfg"
    config.write_text("n=8\ns=-2\n")
    out = str(tmp_path)
    assert cli.main(
        ["graph", "--config", str(config), "--s", "0", "--out", out]
    ) == 0
    with open(os.path.join(out, "graph.csv")) as fh:
        header = fh.readline()
    pairs = cli.parse_kv(header.lstrip("#"))
    assert pairs["n"] == "8"  # from config
    assert pairs["s"] == "0"  # flag wins


def test_lightcone_consumes_magnon_csv(tmp_path):
    out = str(tmp_path)
    assert cli.main(
        ["magnon", "--n", "64", "--s", "0", "--tmax", "20", "--out", out]
    ) == 0
    arrivals = os.path.join(out, "magnon_arrivals.csv")
    assert cli.main(["lightcone", "--input", arrivals, "--out", out]) == 0
    _, columns, rows = read_rows(os.path.join(out, "lightcone_fits.csv"))
    assert columns == ["s", "b", "b_u", "c_u", "residuals"]
    assert len(rows) == 1
    # all power-of-2 separations are one hop at s=0, so the lower cone is flat
    assert abs(float(rows[0][1])) < 1e-6


def test_quench_ee_csv(tmp_path):
    out = str(tmp_path)
    code = cli.main(
        ["quench-ee", "--n", "8", "--tmax", "1", "--dt", "0.5",
         "--blocks", "1,2,4", "--min-scan", "--out", out]
    )
    assert code == 0
    _, columns, rows = read_rows(os.path.join(out, "quench_entanglement.csv"))
    assert columns == ["t", "L", "kind", "S_A"]
    kinds = {r[2] for r in rows}
    assert kinds == {"contiguous", "monna", "min"}
    # product state at t=0: every cut is pure
    zero_rows = [r for r in rows if float(r[0]) == 0.0]
    assert all(abs(float(r[3])) < 1e-10 for r in zero_rows)
    # the scan minimum can never exceed the named cuts at the same (t, L)
    named = {
        (r[0], r[1]): min(
            float(q[3]) for q in rows if q[0] == r[0] and q[1] == r[1] and q[2] != "min"
        )
        for r in rows
    }
    for r in rows:
        if r[2] == "min":
            assert float(r[3]) <= named[(r[0], r[1])] + 1e-10


def test_otoc_csv(tmp_path):
    out = str(tmp_path)
    code = cli.main(
        ["otoc-ed", "--n", "8", "--boundary", "open", "--tmax", "0.2",
         "--dt", "0.05", "--targets", "1,3", "--out", out]
    )
    assert code == 0
    _, columns, rows = read_rows(os.path.join(out, "otoc.csv"))
    assert columns == ["t", "i", "j", "r_ij", "C"]
    assert {r[3] for r in rows if r[2] == "1"} == {"1"}
    assert {r[3] for r in rows if r[2] == "3"} == {"2"}
    # commutator vanishes at t=0 and grows
    for j in ("1", "3"):
        series = [float(r[4]) for r in rows if r[2] == j]
        assert series[0] < 1e-20 and series[-1] > series[0]


def test_levels_csv(tmp_path):
    out = str(tmp_path)
    assert cli.main(["levels", "--n", "8", "--magnons", "3", "--out", out]) == 0
    header, columns, rows = read_rows(os.path.join(out, "level_spacings.csv"))
    assert columns == ["spacing", "count", "ks_distance"]
    pairs = cli.parse_kv(header.lstrip("#"))
    assert 0.0 < float(pairs["ks_wigner"]) < 1.0
    assert 0.0 < float(pairs["ks_poisson"]) < 1.0
    assert sum(int(r[1]) for r in rows) <= int(pairs["n_spacings"])


def test_semiclassical_csv_and_summary(tmp_path, capsys):
    out = str(tmp_path)
    code = cli.main(
        ["semiclassical", "--n", "16", "--traj", "8", "--tmax", "2", "--out", out]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert '"fits"' in stdout and '"t_star"' in stdout
    _, columns, rows = read_rows(
        os.path.join(out, "semiclassical_sensitivity_n16.csv")
    )
    assert columns == ["t", "r", "C_cl", "stderr"]
    from dyadicspin.geometry import CouplingModel, graph_distances_from

    expected = set(np.unique(graph_distances_from(CouplingModel(n_sites=16), 0)))
    assert {int(r[1]) for r in rows} == expected
    _, scols, srows = read_rows(os.path.join(out, "semiclassical_scrambling.csv"))
    assert scols == ["N", "lambda", "t_star"]
    assert len(srows) == 1 and srows[0][0] == "16"


def test_expdesign_csvs(tmp_path, capsys):
    out = str(tmp_path)
    assert cli.main(["expdesign", "--n", "256", "--out", out]) == 0
    assert '"required_n_eta"' in capsys.readouterr().out
    _, tcols, trows = read_rows(os.path.join(out, "cooperativity_table.csv"))
    assert tcols == ["beta", "N", "required_n_eta"]
    assert len(trows) == 7 * 46
    sizes = sorted({int(float(r[1])) for r in trows})
    assert sizes == [16, 32, 64, 128, 256, 512, 1024]
    _, wcols, wrows = read_rows(os.path.join(out, "waveform.csv"))
    assert wcols == ["t", "amplitude"]
    assert len(wrows) == 4 * 256
    assert all(float(r[1]) >= 0.0 for r in wrows)


def test_reproduce_figs2(tmp_path):
    out = str(tmp_path)
    assert cli.main(["reproduce", "figS2", "--out", out]) == 0
    path = os.path.join(out, "figS2", "cooperativity_table.csv")
    _, _, rows = read_rows(path)
    by_beta = {}
    for r in rows:
        by_beta.setdefault(float(r[0]), []).append((int(float(r[1])), float(r[2])))
    # monotone in N at every tabulated beta
    for entries in by_beta.values():
        entries.sort()
        needs = [v for _, v in entries]
        assert all(b > a for a, b in zip(needs, needs[1:]))


def test_recipe_registry_complete():
    assert sorted(cli.RECIPES) == ["fig2", "fig3", "fig4", "figS2", "figS3"]
    assert sorted(cli.RUNNERS) == sorted(cli.SCHEMA)


def test_fmt_is_stable():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(np.float64(2.0)) == "2"
    assert cli.fmt(np.int64(7)) == "7"
    assert cli.fmt(float("nan")) == "nan"
    assert cli.fmt("monna") == "monna"


def test_parse_kv_rejects_garbage():
    with pytest.raises(ValueError):
        cli.parse_kv("n=8 shrug")
    assert cli.parse_kv("a=1 b=x,y") == {"a": "1", "b": "x,y"}
