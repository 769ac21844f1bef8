"""End-to-end tests of the command-line interface."""

import json

import numpy as np
import pytest

from swirlaudit.cli import main
from swirlaudit.reporting import read_cloud_csv

SMALL_CFG = "n = 20000\nseed = 7\n"


def write_cfg(tmp_path, text=SMALL_CFG, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_run_certifies_and_writes_bundle(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "counterexample certified       True" in stdout

    for name in ("z.csv", "x.csv", "zprime.csv", "swirl_profile.csv", "report.json"):
        assert (out / name).exists()
    z, header = read_cloud_csv(out / "z.csv")
    assert header == "z1,z2" and len(z) == 20_000
    x, header = read_cloud_csv(out / "x.csv")
    assert header == "x1,x2" and len(x) == 20_000

    report = read_json(out / "report.json")
    assert report["counterexample_certified"] is True
    assert report["parameters"]["n"] == 20_000
    assert report["parameters"]["seed"] == 7
    assert all(entry["pass"] for entry in report["premises"])


def test_run_degenerate_fixture_not_certified(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    out = tmp_path / "out"
    code = main(["run", "--config", cfg, "--out", str(out), "--degenerate-a"])
    captured = capsys.readouterr()
    assert code == 2
    assert "degenerate-coordinate-wise" in captured.err
    report = read_json(out / "report.json")
    assert report["relation"]["verdict"] == "coordinate-wise"
    assert report["counterexample_certified"] is False


def test_run_invalid_config_exit_code(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "c = 1.5\n")
    assert main(["run", "--config", cfg]) == 3
    assert "c:" in capsys.readouterr().err


def test_run_unwritable_output_dir(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    assert main(["run", "--config", cfg, "--out", "/dev/null/out"]) == 4
    assert "I/O failure" in capsys.readouterr().err


def test_seed_flag_overrides_config(tmp_path):
    cfg = write_cfg(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["figures", "--config", cfg, "--out", str(out_a), "--seed", "123"]) == 0
    assert main(["figures", "--config", cfg, "--out", str(out_b)]) == 0
    za, _ = read_cloud_csv(out_a / "z.csv")
    zb, _ = read_cloud_csv(out_b / "z.csv")
    assert not np.array_equal(za, zb)


def test_figures_profile_examples(tmp_path):
    # defaults: the bin holding r=0.5 sits near a*(r-c) = -1.44; bins beyond
    # the cutoff are exactly zero
    out = tmp_path / "fig"
    assert main(["figures", "--out", str(out)]) == 0
    rows = (out / "swirl_profile.csv").read_text(encoding="utf-8").splitlines()[1:]
    table = [row.split(",") for row in rows]
    by_bin = {(float(r[0]), float(r[1])): (float(r[2]), int(r[3]), float(r[4])) for r in table}
    for (lo, hi), (r_mean, count, angle) in by_bin.items():
        if lo <= 0.5 < hi:
            assert count > 0 and abs(angle - (-1.44)) <= 0.02
        if lo <= 0.95 < hi:
            assert count > 0 and abs(angle) <= 1e-6


def test_figures_render_emits_svg(tmp_path):
    cfg = write_cfg(tmp_path, "n = 500\nseed = 3\n")
    out = tmp_path / "fig"
    assert main(["figures", "--config", cfg, "--out", str(out), "--render"]) == 0
    for name in ("z.svg", "x.svg", "zprime.svg"):
        text = (out / name).read_text(encoding="utf-8")
        assert text.startswith("<svg") and text.count("<circle") == 500


def test_audit_external_self_pair_is_coordinate_wise(tmp_path):
    cfg = write_cfg(tmp_path)
    gen = tmp_path / "gen"
    assert main(["figures", "--config", cfg, "--out", str(gen)]) == 0
    out = tmp_path / "ext"
    code = main(["audit-external", str(gen / "z.csv"), str(gen / "z.csv"),
                 "--config", cfg, "--out", str(out)])
    assert code == 0
    report = read_json(out / "report.json")
    assert report["relation"]["verdict"] == "coordinate-wise"
    skipped = {e["name"]: e for e in report["premises"] if e["pass"] is None}
    assert set(skipped) == {"continuity", "sigma-algebra"}
    assert all("not-applicable" in e["note"] for e in skipped.values())


def test_audit_external_pipeline_pair_not_coordinate_wise(tmp_path):
    cfg = write_cfg(tmp_path)
    gen = tmp_path / "gen"
    assert main(["run", "--config", cfg, "--out", str(gen)]) == 0
    out = tmp_path / "ext"
    code = main(["audit-external", str(gen / "z.csv"), str(gen / "zprime.csv"),
                 "--config", cfg, "--out", str(out)])
    assert code == 0
    report = read_json(out / "report.json")
    assert report["relation"]["verdict"] == "not-coordinate-wise"
    assert report["uniformity_pvalue"] > 0.001


def test_audit_external_malformed_rows(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("z1,z2\n0.0,0.0,0.0\n", encoding="utf-8")
    good = tmp_path / "good.csv"
    good.write_text("z1,z2\n0.0,0.0\n", encoding="utf-8")
    assert main(["audit-external", str(bad), str(good), "--out", str(tmp_path)]) == 5
    assert "row 2" in capsys.readouterr().err


def test_audit_external_row_count_mismatch(tmp_path, capsys):
    a = tmp_path / "a.csv"
    a.write_text("z1,z2\n0.0,0.0\n0.1,0.1\n", encoding="utf-8")
    b = tmp_path / "b.csv"
    b.write_text("z1,z2\n0.0,0.0\n", encoding="utf-8")
    assert main(["audit-external", str(a), str(b), "--out", str(tmp_path)]) == 5
    assert "row-count mismatch" in capsys.readouterr().err


def test_reports_are_reproducible_modulo_timestamp(tmp_path):
    cfg = write_cfg(tmp_path, "n = 10000\nseed = 5\noutput_dir = " + str(tmp_path / "o") + "\n")
    assert main(["run", "--config", cfg]) in (0, 2)
    first = (tmp_path / "o" / "report.json").read_text(encoding="utf-8")
    assert main(["run", "--config", cfg]) in (0, 2)
    second = (tmp_path / "o" / "report.json").read_text(encoding="utf-8")
    keep = lambda text: [ln for ln in text.splitlines() if '"timestamp"' not in ln]
    assert keep(first) == keep(second)
