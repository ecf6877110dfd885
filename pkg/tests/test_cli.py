import json
import subprocess
import sys
from pathlib import Path

import pytest

from hopfkit.cli import ConfigError, dumps, main, parse_config
from hopfkit.report import HopfkitError

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def cfg(name):
    return str(CONFIGS / f"{name}.json")


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    report = json.loads(out.read_text(encoding="utf-8")) if out.exists() else None
    return code, report, out


def write(tmp_path, raw, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(raw), encoding="utf-8")
    return str(p)


def test_empty_config_verifies(tmp_path):
    code, report, _ = run(["verify", "--config", write(tmp_path, {})], tmp_path)
    assert code == 0
    assert report["verdicts"]["all_suites_pass"] is True
    assert report["dims"]["total"] == 1


def test_verify_goxo(tmp_path):
    code, report, _ = run(["verify", "--config", cfg("goxo_inversion_theta")], tmp_path)
    assert code == 0
    assert [s["ok"] for s in report["suites"]] == [True] * 4


@pytest.mark.parametrize("name,ground", [("toric_torus", 4), ("potts3_theta", 3),
                                         ("goxo_inversion_theta", 2),
                                         ("ooxy_identity_torus", 1)])
def test_ground_matches_oracle(name, ground, tmp_path):
    code, report, _ = run(["ground", "--config", cfg(name)], tmp_path)
    assert code == 0
    assert report["dims"]["ground"] == ground
    assert report["verdicts"] and all(report["verdicts"].values())


def test_float_scalar_override(tmp_path):
    code, report, _ = run(["ground", "--config", cfg("potts3_theta"), "--scalar", "float"],
                          tmp_path)
    assert code == 0 and report["dims"]["ground"] == 3


def test_too_large_is_reported(tmp_path):
    code, report, _ = run(["ground", "--config", cfg("mixed_tetra")], tmp_path)
    assert code == 3
    assert report["dims"]["total"] == 11943936
    assert any("TooLarge" in n for n in report["notes"])


@pytest.mark.parametrize("a,b", [("toric_torus", "toric_torus23"),
                                 ("goxo_inversion_theta", "goxo_inversion_tetra")])
def test_compare_equal(a, b, tmp_path):
    code, report, _ = run(["compare", "--config", cfg(a), "--config", cfg(b)], tmp_path)
    assert code == 0 and report["verdicts"]["equal"] is True


def test_compare_different_models_fails(tmp_path):
    toric_theta = write(tmp_path, {"groups": {"g": {"kind": "cyclic", "n": 2}}})
    code, report, _ = run(["compare", "--config", toric_theta, "--config", cfg("potts3_theta")],
                          tmp_path)
    assert code == 1
    assert report["dims"]["a"]["ground"] == 1 and report["dims"]["b"]["ground"] == 3


def test_compare_genus_mismatch(tmp_path):
    code, report, _ = run(["compare", "--config", cfg("toric_torus"),
                           "--config", cfg("goxo_inversion_theta")], tmp_path)
    assert code == 2 and report is None


def test_not_equivariant_is_config_error(tmp_path, capsys):
    code, _, _ = run(["oracle", "--config", cfg("not_equivariant")], tmp_path)
    assert code == 2
    assert "NotEquivariant" in capsys.readouterr().err


@pytest.mark.parametrize("raw", [
    {"groups": {"z": {"kind": "cyclic", "n": 2}}},
    {"schema": 99},
    {"scalar_mode": "complex"},
    {"surface": {"kind": "klein_bottle"}},
    {"groups": {"g": {"kind": "cyclic"}}},
    [],
])
def test_malformed_configs(raw, tmp_path):
    with pytest.raises(HopfkitError):
        parse_config(raw)
    code, _, _ = run(["oracle", "--config", write(tmp_path, raw)], tmp_path)
    assert code == 2


def test_config_error_is_a_hopfkit_error():
    assert issubclass(ConfigError, HopfkitError)


def test_missing_file(tmp_path):
    code, _, _ = run(["oracle", "--config", str(tmp_path / "nope.json")], tmp_path)
    assert code == 2


def test_oracle_only(tmp_path):
    code, report, _ = run(["oracle", "--config", cfg("mixed_tetra")], tmp_path)
    assert code == 0
    assert "oracle_goxo" not in report["dims"] and report["notes"]


def test_report_round_trip_is_byte_identical(tmp_path):
    _, report, out = run(["ground", "--config", cfg("potts3_theta")], tmp_path)
    text = out.read_text(encoding="utf-8")
    assert dumps(json.loads(text)) == text


def test_reports_deterministic_apart_from_timing(tmp_path):
    argv = ["verify", "--config", cfg("toric_torus"), "--samples", "8", "--seed", "3"]
    _, r1, _ = run(argv, tmp_path, "a.json")
    _, r2, _ = run(argv, tmp_path, "b.json")
    r1.pop("timing_ms"), r2.pop("timing_ms")
    assert dumps(r1) == dumps(r2)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hopfkit", "oracle", "--config",
                           cfg("potts3_theta")], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dims"]["oracle_goxo"] == 3
