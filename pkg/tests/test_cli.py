import json

import pytest
from click.testing import CliRunner

from cherednik_dirac.cli import ConfigError, JobConfig, main, run


def invoke(*args):
    result = CliRunner().invoke(main, ["run", *args])
    return result.exit_code, result.output


def test_group_info_reports_the_catalog_entry():
    code, out = invoke("--task", "group-info", "--group", "dihedral:3")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["summary"]["failed"] == []


def test_dirac_standard_module_succeeds():
    code, out = invoke("--task", "dirac", "--group", "cyclic:2", "--c", "1/5", "--module", "standard")
    assert code == 0, out


def test_ltriv_finite_dimensional():
    code, out = invoke("--task", "cohomology", "--group", "cyclic:2", "--c", "3", "--module", "ltriv")
    assert code == 0, out


def test_unknown_class_label_is_a_config_error():
    code, out = invoke("--task", "dirac", "--group", "dihedral:4", "--c", "s7=1")
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "config"


def test_bad_scalar_is_a_config_error():
    code, _ = invoke("--task", "dirac", "--group", "cyclic:2", "--c", "1/0")
    assert code == 2


def test_pbw_cap_exit_code():
    code, out = invoke("--task", "vogan", "--group", "cyclic:2", "--pbw-cap", "0")
    assert code == 3
    assert json.loads(out)["error"]["kind"] == "cap"


def test_config_file_and_text_output(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"schema": 1, "group": "cyclic:3", "t": "1", "c": "1/5", "task": "cohomology",
                               "module": {"kind": "standard", "sigma": "chi1"}, "output": "text"}))
    code, out = invoke("--config", str(cfg))
    assert code == 0
    assert "passed" in out.splitlines()[-1]


def test_missing_config_file():
    code, _ = invoke("--config", "/nonexistent/job.json")
    assert code == 2


def test_output_is_deterministic_across_threads():
    args = ["--task", "verify-all", "--group", "cyclic:2", "--c", "1/5"]
    a = invoke(*args, "--threads", "1")
    b = invoke(*args, "--threads", "3")
    assert a == b
    assert a[0] == 0


def test_timing_only_on_request():
    _, out = invoke("--task", "group-info", "--group", "cyclic:2")
    assert "timing_seconds" not in json.loads(out)
    _, out = invoke("--task", "group-info", "--group", "cyclic:2", "--timing")
    assert "timing_seconds" in json.loads(out)


@pytest.mark.parametrize("bad", [
    {"group": "cyclic:2", "task": "nothing"},
    {"group": "cyclic:2", "threads": 0},
    {"group": "cyclic:2", "caps": {"memory": 1}},
    {"group": "cyclic:2", "r_window": [1]},
    {"group": "cyclic:2", "surprise": True},
    {"group": "cyclic:2", "schema": 9},
    {"task": "dirac"},
])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        JobConfig.from_dict(bad)


def test_verify_all_sign_group_passes():
    report, code = run(JobConfig.from_dict({"group": "cyclic:2", "c": "1/5"}))
    assert code == 0
    assert report["summary"]["failed"] == []
    statuses = {v["status"] for v in report["verdicts"]}
    assert all(s in ("pass", "inapplicable") or s.startswith("observed") for s in statuses)
