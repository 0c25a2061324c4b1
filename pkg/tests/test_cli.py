"""End-to-end command checks: records, cache behavior, exit codes."""

import json

import pytest

import pairbec.cli as cli


@pytest.fixture
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("PAIRBEC_CACHE_DIR", str(tmp_path))
    return tmp_path


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


SPECTRUM_SMALL = ("spectrum", "--L", "2", "--m", "8", "--k", "2")


def test_spectrum_record_shape(cache, capsys):
    code, out, err = run(capsys, *SPECTRUM_SMALL)
    assert code == 0
    record = json.loads(out)
    assert record["schema_version"] == "1"
    assert record["tool"] == "pairbec"
    assert record["command"] == "spectrum"
    assert len(record["params_digest"]) == 64
    assert record["params"]["sigma"] == "zero"
    outputs = record["outputs"]
    assert len(outputs["eigenvalues"]) == 2
    assert outputs["count_below_safety"] == 1
    assert outputs["gap_e0"] == pytest.approx(
        outputs["threshold"] - outputs["eigenvalues"][0], rel=1e-15
    )
    assert '"threshold": 19.739208802178716' in out


def test_identical_runs_are_byte_identical(cache, capsys):
    _, first, _ = run(capsys, *SPECTRUM_SMALL)
    _, second, _ = run(capsys, *SPECTRUM_SMALL)
    _, fresh, _ = run(capsys, *SPECTRUM_SMALL, "--no-cache")
    assert first == second == fresh


def test_cache_layout(cache, capsys):
    _, out, _ = run(capsys, *SPECTRUM_SMALL)
    entries = [p for p in cache.iterdir() if p.is_dir()]
    assert len(entries) == 1
    entry = entries[0]
    assert len(entry.name) == 64
    assert (entry / "record.json").read_text() == out
    assert (entry / "table.csv").read_text().splitlines()[0] == "index,eigenvalue,residual"
    meta = json.loads((entry / "meta.json").read_text())
    assert meta["command"] == "spectrum"
    assert "created_utc" in meta
    stamp = (entry / "meta.json").read_bytes()
    run(capsys, *SPECTRUM_SMALL)
    assert (entry / "meta.json").read_bytes() == stamp


def test_spectrum_csv_and_physical_block(cache, capsys):
    code, out, _ = run(capsys, *SPECTRUM_SMALL, "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "index,eigenvalue,residual"
    assert len(out.splitlines()) == 3
    code, out, _ = run(capsys, *SPECTRUM_SMALL, "--d-meters", "1e-8")
    physical = json.loads(out)["outputs"]["physical"]
    assert physical["pair_extent_m"] == 1e-8
    assert len(physical["eigenvalues_ev"]) == 2
    assert physical["gap_ev"] > 0.0


def test_sigma_spellings_share_one_record(cache, capsys):
    _, base, _ = run(capsys, *SPECTRUM_SMALL, "--sigma", "zero")
    _, bare, _ = run(capsys, *SPECTRUM_SMALL, "--sigma", "0")
    _, explicit, _ = run(capsys, *SPECTRUM_SMALL, "--sigma", "constant:0")
    assert base == bare == explicit
    _, stepped, _ = run(capsys, *SPECTRUM_SMALL, "--sigma", "step:3,0.5")
    assert json.loads(stepped)["params"]["sigma"] == "step:3,0.5"
    assert json.loads(stepped)["outputs"]["eigenvalues"][0] > json.loads(base)["outputs"]["eigenvalues"][0]


def test_converge_csv_header_and_json_rows(cache, capsys):
    argv = ("converge", "--L-list", "2", "--m-list", "4,8,16", "--k", "2")
    code, out, _ = run(capsys, *argv)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "L,m,E0,E1,count,ratio_to_threshold"
    assert len(lines) == 4

    code, out, _ = run(capsys, *argv, "--format", "json")
    outputs = json.loads(out)["outputs"]
    rows = outputs["rows"]
    assert [r["m"] for r in rows] == [4, 8, 16]
    assert rows[0]["order_ratio"] is None
    assert rows[2]["order_ratio"] == pytest.approx(
        (rows[0]["E0"] - rows[1]["E0"]) / (rows[1]["E0"] - rows[2]["E0"]), rel=1e-12
    )
    assert outputs["extrapolated_e0"] == pytest.approx(
        rows[2]["E0"] + (rows[2]["E0"] - rows[1]["E0"]) / 3.0, rel=1e-12
    )


def test_gamma_record_and_cross_resolution_note(cache, capsys):
    code, out, err = run(capsys, "gamma", "--L", "2", "--m", "5", "--tol", "0.02")
    assert code == 0
    assert err == ""
    first = json.loads(out)["outputs"]

    code, out, err = run(capsys, "gamma", "--L", "2", "--m", "8", "--tol", "0.02")
    assert code == 0
    outputs = json.loads(out)["outputs"]
    assert outputs["sigma_star"] == outputs["bracket_high"]
    assert "note: cached search at m=5" in err
    assert repr(first["sigma_star"]) in err


def test_gamma_has_no_table(cache, capsys):
    code, _, err = run(capsys, "gamma", "--L", "2", "--m", "5", "--tol", "0.02", "--format", "csv")
    assert code == 2
    assert "no table" in err


def test_gamma_cap_exit_code(cache, capsys):
    code, _, err = run(capsys, "gamma", "--L", "4", "--m", "8", "--tol", "0.02", "--sigma-cap", "1.5")
    assert code == 3
    assert "error:" in err


def test_bec_with_given_ground_level(cache, capsys):
    code, out, _ = run(
        capsys, "bec", "--E0", "18.3", "--rho", "0.2", "--L-list", "100"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "L,mu,n0,n0_per_L,rho_ex"
    assert len(lines) == 2

    code, out, _ = run(
        capsys, "bec", "--E0", "18.3", "--rho", "0.2", "--L-list", "100", "--format", "json"
    )
    record = json.loads(out)
    assert record["params"]["e0"] == 18.3
    assert record["outputs"]["rho_crit"] is None
    row = record["outputs"]["rows"][0]
    assert row["n0_per_L"] + row["rho_ex"] == pytest.approx(0.2, rel=1e-8)
    assert row["model"] == "bound(e0=18.3)"


def test_bec_default_density_doubles_critical(cache, capsys):
    code, out, _ = run(
        capsys, "bec", "--E0", "18.344226837", "--L-list", "50", "--format", "json"
    )
    assert code == 0
    record = json.loads(out)
    assert record["params"]["rho_mult"] == 2.0
    assert record["outputs"]["rho_crit"] == pytest.approx(0.12067482258733173, rel=1e-12)
    assert record["outputs"]["rho"] == pytest.approx(2.0 * 0.12067482258733173, rel=1e-12)


def test_bec_reuses_cached_extrapolation(cache, capsys):
    params = cli._converge_params([8.0], [64, 128], "zero", 3, 1e-9, 5000, 1729, "auto")
    digest = cli._digest("converge", params)
    outputs = {"extrapolated_e0": 17.25}
    record = cli._record_bytes("converge", params, outputs, digest)
    cli._cache_write(cache, digest, "converge", record, None)

    code, out, _ = run(
        capsys, "bec", "--rho", "0.2", "--L-list", "100", "--format", "json"
    )
    assert code == 0
    assert json.loads(out)["params"]["e0"] == 17.25


def test_bec_explicit_model(cache, capsys):
    code, out, _ = run(
        capsys,
        "bec", "--model", "explicit", "--m", "8", "--k", "4",
        "--L-list", "2", "--rho", "0.3", "--format", "json",
    )
    assert code == 0
    record = json.loads(out)
    assert record["outputs"]["rows"][0]["model"] == "explicit(n=4)"
    assert record["params"]["e0"] is None


def test_bec_flag_errors(cache, capsys):
    cases = (
        ("bec", "--model", "nobound", "--L-list", "100"),
        ("bec", "--model", "nobound", "--E0", "18.0", "--rho", "0.2", "--L-list", "100"),
        ("bec", "--model", "explicit", "--rho", "0.2", "--L-list", "20"),
        ("bec", "--E0", "18.3", "--rho", "0.1", "--rho-mult", "2", "--L-list", "100"),
        ("bec", "--E0", "18.3", "--rho", "0", "--L-list", "100"),
    )
    for argv in cases:
        code, _, err = run(capsys, *argv)
        assert code == 2, argv
        assert "error:" in err


def test_units_conversions_and_note(cache, capsys):
    code, out, err = run(capsys, "units", "--gap-ev", "1e-3")
    assert code == 0
    outputs = json.loads(out)["outputs"]
    assert outputs["pair_extent_m"] == pytest.approx(2.7423718280201746e-08, rel=1e-12)
    assert "reference order of magnitude 1e-06 m" in err

    code, out, _ = run(capsys, "units", "--d-meters", "2.7423718280201746e-08")
    assert json.loads(out)["outputs"]["gap_ev"] == pytest.approx(1e-3, rel=1e-12)


def test_units_flag_errors(cache, capsys):
    for argv in (
        ("units",),
        ("units", "--gap-ev", "1e-3", "--d-meters", "1e-8"),
        ("units", "--gap-ev", "0"),
        ("units", "--gap-ev", "1e-3", "--gap-ratio", "1.5"),
    ):
        code, _, err = run(capsys, *argv)
        assert code == 2, argv


def test_units_show_constants(cache, capsys):
    code, out, _ = run(capsys, "units", "--show-constants")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("hbar")
    assert not list(cache.iterdir())


def test_configuration_exit_codes(cache, capsys):
    code, _, err = run(capsys, "spectrum", "--L", "2", "--m", "2")
    assert code == 2
    code, _, err = run(capsys, "spectrum", "--L", "2", "--m", "8", "--sigma", "weird:1")
    assert code == 2
    code, _, err = run(capsys, "spectrum", "--L", "2", "--m", "8", "--sigma", "step:1")
    assert code == 2


def test_io_exit_code(tmp_path, capsys, monkeypatch):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory\n")
    monkeypatch.setenv("PAIRBEC_CACHE_DIR", str(blocker / "sub"))
    code, _, err = run(capsys, *SPECTRUM_SMALL)
    assert code == 4
    assert "i/o error:" in err


def test_version_and_bad_usage(cache, capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.strip() == "pairbec 0.1.0"
    code, _, _ = run(capsys)
    assert code == 2
