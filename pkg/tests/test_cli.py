import os

import numpy as np

from dotoc.cli import main
from dotoc.csvio import read_grid_csv


def run_cli(args, tmp_path, sub="out"):
    out = str(tmp_path / sub)
    code = main(args + ["--out-dir", out])
    return code, out


def test_validate_exit_zero(tmp_path, capsys):
    code, out = run_cli(["validate", "--n_sites", "3"], tmp_path)
    assert code == 0
    text = capsys.readouterr().out
    assert "ok   pauli_roundtrip" in text or "ok  pauli_roundtrip" in text
    assert "FAIL" not in text
    assert os.path.exists(os.path.join(out, "validate.csv"))
    assert os.path.exists(os.path.join(out, "manifest.txt"))


def test_heatmap_identity_column_unitary(tmp_path):
    code, out = run_cli(
        ["otoc-heatmap", "--n_sites", "3", "--t_max", "1", "--sample_every", "50"],
        tmp_path,
    )
    assert code == 0
    fid = read_grid_csv(os.path.join(out, "otoc_f_identity.csv"))
    assert np.abs(fid.values - 1.0).max() <= 1e-8


def test_corrected_heatmap_and_svg(tmp_path):
    code, out = run_cli(
        ["corrected-heatmap", "--n_sites", "3", "--channel", "phase", "--gamma", "0.1",
         "--t_max", "1", "--sample_every", "50", "--svg"],
        tmp_path,
    )
    assert code == 0
    assert os.path.exists(os.path.join(out, "otoc_f_corrected.csv"))
    assert os.path.exists(os.path.join(out, "otoc_f_corrected.svg"))


def test_config_error_exit_code(tmp_path, capsys):
    code, _ = run_cli(["otoc-heatmap", "--n_sites", "13"], tmp_path)
    assert code == 2
    err = capsys.readouterr().err
    assert "dotoc-error code=2" in err


def test_unknown_config_key_exit_code(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("bogus=1\n")
    code, _ = run_cli(["validate", "--config", str(cfgfile)], tmp_path)
    assert code == 2


def test_outputs_stay_in_out_dir(tmp_path):
    before = set(os.listdir(tmp_path))
    code, out = run_cli(
        ["weights", "--n_sites", "3", "--channel", "phase", "--gamma", "0.1",
         "--t_max", "0.5", "--sample_every", "25"],
        tmp_path,
    )
    assert code == 0
    after = set(os.listdir(tmp_path))
    assert after - before == {"out"}


def test_manifest_hashes_match(tmp_path):
    import hashlib

    code, out = run_cli(
        ["norm-decay", "--n_sites", "2", "--channel", "amplitude", "--gamma", "0.2",
         "--t_max", "0.5", "--sample_every", "50"],
        tmp_path,
    )
    assert code == 0
    manifest = open(os.path.join(out, "manifest.txt")).read().splitlines()
    hashes = dict(
        line.split("=", 1) for line in manifest if line.startswith("output.")
    )
    assert hashes
    for key, val in hashes.items():
        fname = key[len("output."):]
        digest = hashlib.sha256(open(os.path.join(out, fname), "rb").read()).hexdigest()
        assert val == f"sha256:{digest}"


def test_repeat_runs_byte_identical(tmp_path):
    args = ["otoc-heatmap", "--n_sites", "3", "--channel", "depolarizing",
            "--gamma", "0.1", "--t_max", "0.5", "--sample_every", "25"]
    _, out1 = run_cli(args, tmp_path, "run1")
    _, out2 = run_cli(args, tmp_path, "run2")
    for name in ("otoc_f.csv", "otoc_f_identity.csv"):
        b1 = open(os.path.join(out1, name), "rb").read()
        b2 = open(os.path.join(out2, name), "rb").read()
        assert b1 == b2


def test_lightcone_width_subcommand(tmp_path):
    code, out = run_cli(
        ["lightcone-width", "--n_sites", "6", "--channel", "phase", "--gamma", "0.3",
         "--t_max", "6", "--dt", "0.01", "--sample_every", "20"],
        tmp_path,
    )
    assert code == 0
    lines = open(os.path.join(out, "width.csv")).read().splitlines()
    assert lines[1] == "gamma,width,exceeds_system,v_b,w"


def test_quasilocality_subcommand(tmp_path):
    code, out = run_cli(
        ["quasilocality", "--n_sites", "4", "--channel", "phase", "--gamma", "0.1",
         "--t_max", "0.5", "--dt", "0.01", "--sample_every", "10"],
        tmp_path,
    )
    assert code == 0
    text = open(os.path.join(out, "quasilocality.csv")).read()
    assert text.splitlines()[1] == "radius,eps"


def test_bound_check_subcommand(tmp_path):
    code, out = run_cli(
        ["bound-check", "--n_sites", "3", "--channel", "phase",
         "--t_max", "0.5", "--dt", "0.005", "--sample_every", "25",
         "--gammas", "0.01,0.02"],
        tmp_path,
    )
    assert code == 0
    for f in ("bound_delta.csv", "bound_ratios.csv", "proposition_bound.csv"):
        assert os.path.exists(os.path.join(out, f))


def test_powerlaw_subcommand_synthetic_small(tmp_path):
    # desk-sized smoke test: at N=6 a delta of 0.2 resolves finite widths
    code, out = run_cli(
        ["powerlaw", "--n_sites", "6", "--channel", "phase",
         "--t_max", "6", "--dt", "0.01", "--sample_every", "20",
         "--delta", "0.2", "--gammas", "0.2,0.3,0.45"],
        tmp_path,
    )
    assert code == 0
    fit_lines = open(os.path.join(out, "fit.csv")).read().splitlines()
    assert fit_lines[1] == "kind,c,alpha,r_squared,gamma_lo,gamma_hi,n_points,n_exceeding"
    assert fit_lines[2].startswith("integer,")
    assert fit_lines[3].startswith("interpolated,")
    widths = open(os.path.join(out, "widths.csv")).read().splitlines()[2:]
    ds = [float(line.split(",")[1]) for line in widths]
    assert all(b <= a for a, b in zip(ds, ds[1:]))  # monotone in gamma
