"""End-to-end checks of the command-line binary (path in EVDEMAND_CLI_BIN)."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("EVDEMAND_CLI_BIN")

pytestmark = pytest.mark.skipif(
    not CLI or not os.path.exists(CLI), reason="EVDEMAND_CLI_BIN not set or missing"
)

SMALL_CONFIG = {
    "synth": {"n_ev": 6, "n_icev": 3, "days": 6},
    "models": {"n_trees": 10},
    "sweep": {"knn": {"k": [3, 5]}, "dt": {"depth": [4]}, "rf": {"depth": [6]}},
}


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("EVDEMAND_CONFIG", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [CLI, *args], capture_output=True, text=True, env=env, timeout=300
    )


def write_config(tmp_path, cfg=None):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg if cfg is not None else SMALL_CONFIG))
    return str(path)


def test_help_exits_zero():
    res = run_cli("--help")
    assert res.returncode == 0
    for sub in ("ingest", "trips", "label", "sweep", "demand", "synth", "report"):
        assert sub in res.stdout


def test_missing_subcommand_is_a_config_error():
    res = run_cli()
    assert res.returncode == 2
    assert res.stderr.startswith("E_CONFIG:")
    assert res.stderr.strip().count("\n") == 0


def test_unknown_flag_is_a_config_error():
    res = run_cli("synth", "--frobnicate")
    assert res.returncode == 2
    assert res.stderr.startswith("E_CONFIG:")
    assert res.stderr.strip().count("\n") == 0


def test_bad_zone_spec():
    res = run_cli("synth", "--zones", "3y3", "-o", "unused")
    assert res.returncode == 2
    assert res.stderr.startswith("E_CONFIG:")
    assert "ROWSxCOLS" in res.stderr


def test_missing_input_csv_is_a_config_error(tmp_path):
    cfg = dict(SMALL_CONFIG)
    cfg["paths"] = {
        "dynamic_csv": str(tmp_path / "nope_dynamic.csv"),
        "static_csv": str(tmp_path / "nope_static.csv"),
        "out_dir": str(tmp_path / "out"),
    }
    res = run_cli("ingest", "-c", write_config(tmp_path, cfg))
    assert res.returncode == 2
    assert res.stderr.startswith("E_CONFIG:")
    assert "nope_static" in res.stderr or "nope_dynamic" in res.stderr


def test_synth_writes_its_files(tmp_path):
    out = tmp_path / "out"
    res = run_cli("synth", "-c", write_config(tmp_path), "-o", str(out))
    assert res.returncode == 0, res.stderr
    listed = res.stdout.splitlines()
    assert [os.path.basename(p) for p in listed] == [
        "synth_dynamic.csv",
        "synth_static.csv",
        "synth_truth.csv",
    ]
    for p in listed:
        assert os.path.exists(p)
    # static table: header + one row per vehicle
    lines = (out / "synth_static.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 6 + 3


def test_report_is_reproducible(tmp_path):
    cfg = write_config(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    res_a = run_cli("report", "-c", cfg, "-o", str(out_a))
    assert res_a.returncode == 0, res_a.stderr
    res_b = run_cli("report", "-c", cfg, "-o", str(out_b))
    assert res_b.returncode == 0, res_b.stderr

    manifest_a = (out_a / "manifest.json").read_bytes()
    manifest_b = (out_b / "manifest.json").read_bytes()
    assert manifest_a == manifest_b

    manifest = json.loads(manifest_a)
    assert manifest["version"] == 1
    names = {a["path"] for a in manifest["artifacts"]}
    for expect in ("dataset.csv", "comparison.csv", "demand_case1.csv", "zones.json"):
        assert expect in names
    for a in manifest["artifacts"]:
        assert (out_a / a["path"]).stat().st_size == a["bytes"]


def test_seed_changes_the_artifacts(tmp_path):
    cfg = write_config(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run_cli("report", "-c", cfg, "-o", str(out_a)).returncode == 0
    assert (
        run_cli("report", "-c", cfg, "-o", str(out_b), "--seed", "123").returncode == 0
    )
    assert (out_a / "manifest.json").read_bytes() != (out_b / "manifest.json").read_bytes()


def test_config_env_var_is_honored(tmp_path):
    out = tmp_path / "out"
    res = run_cli(
        "synth",
        "-o",
        str(out),
        env_extra={"EVDEMAND_CONFIG": write_config(tmp_path)},
    )
    assert res.returncode == 0, res.stderr
    lines = (out / "synth_static.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 6 + 3  # the env-var config's fleet, not the default 40+20


def test_invalid_config_file(tmp_path):
    res = run_cli("synth", "-c", write_config(tmp_path, {"zones": {"rows": 0}}))
    assert res.returncode == 2
    assert res.stderr.startswith("E_CONFIG:")
