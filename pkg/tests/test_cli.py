import io
import json
import os
import subprocess
import sys

import pytest

from ramanujan_lab.cli import PREC_ENV, run
from ramanujan_lab.series_catalog import get_spec

PI50 = "3.14159265358979323846264338327950288419716939937510"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_pi_digits():
    code, text = call("pi", "--digits", "50")
    assert code == 0 and text.strip() == PI50


def test_pi_with_catalog_series():
    code, text = call("pi", "--digits", "60", "--series", "table10-2A-sqrt58")
    assert code == 0 and text.startswith(PI50)
    assert call("pi", "--digits", "5", "--series", "nope")[0] == 2


@pytest.mark.parametrize("form", ["1,0,2", "2,0,1"])
def test_s2_equivalent_forms(form):
    code, text = call("s2", "--tau", form, "--prec", "128")
    assert code == 0
    assert "0.35714285714285714285714285714" in text


def test_s2_undefined_exits_one():
    assert call("s2", "--tau", "1,0,1")[0] == 1


def test_verify_single_row():
    code, text = call("verify-series", "--id", "table10-2A-sqrt58")
    assert code == 0
    assert "table10-2A-sqrt58" in text and "pass" in text and "1/1 pass" in text


def test_verify_named_identity_json():
    code, text = call("--json", "verify-series", "--id", "eq_3B_1", "--id", "table11-2B-i")
    data = json.loads(text)
    assert code == 0 and data["all_pass"]
    assert [r["id"] for r in data["reports"]] == ["eq_3B_1", "table11-2B-i"]


def test_json_flag_after_subcommand():
    a = call("--json", "pi", "--digits", "10")
    b = call("pi", "--digits", "10", "--json")
    assert a == b and json.loads(a[1])["pi"] == "3.1415926535"


def test_verify_custom_catalog(tmp_path):
    good = get_spec("table10-2A-sqrt10").to_json()
    bad = dict(get_spec("table10-2A-sqrt58").to_json(), id="broken", B=1107)
    path = tmp_path / "rows.json"
    path.write_text(json.dumps([good, bad]))
    assert call("verify-series", "--catalog", str(path), "--id", good["id"])[0] == 0
    code, text = call("verify-series", "--catalog", str(path))
    assert code == 1 and "broken" in text and "fail" in text
    assert call("verify-series", "--catalog", str(path), "--id", "nope")[0] == 2
    assert call("verify-series", "--catalog", str(tmp_path / "missing.json"))[0] == 2


def test_certify_pass_and_fail():
    code, text = call("certify", "--tau", "2,0,1", "--candidate", "5/14")
    assert code == 0 and json.loads(text)["verdict"] == "pass"
    code, text = call("certify", "--tau", "2,0,1", "--candidate", "19/14")
    assert code == 1 and json.loads(text)["verdict"] == "fail"


def test_certify_guesses_candidate():
    code, text = call("certify", "--tau", "1,1,2")
    assert code == 0 and json.loads(text)["verdict"] == "pass"


def test_certify_bad_candidate_is_usage_error():
    assert call("certify", "--tau", "2,0,1", "--candidate", "five")[0] == 2


@pytest.mark.parametrize("case", ["1B", "2B", "2C", "3B"])
def test_derive_pf(case):
    code, text = call("--json", "derive-pf", "--case", case)
    data = json.loads(text)
    assert code == 0 and data["verdict"] == "pass" and all(data["checks"].values())
    assert data["pullback"]["residual"] == "0"


def test_check_identities_exit_codes():
    assert call("check-identities", "--suite", "wz")[0] == 0
    code, text = call("--json", "check-identities", "--suite", "clausen", "--suite", "pfaff")
    data = json.loads(text)
    assert code == 0 and {r["suite"] for r in data["results"]} == {"clausen", "pfaff"}


@pytest.mark.parametrize("argv", [["frobnicate"], ["pi"], ["pi", "--digits", "-3"],
                                  ["s2", "--tau", "1,0,-1"], ["pi", "--digits", "5", "--bogus"],
                                  ["derive-pf", "--case", "2A"], []])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_output_is_deterministic():
    argv = ["--json", "verify-series", "--id", "table10-3A-neg-sqrt267", "--id", "eq_2C_1"]
    assert call(*argv) == call(*argv)
    argv = ["--json", "check-identities", "--suite", "e2"]
    assert call(*argv) == call(*argv)


def test_jobs_do_not_change_output():
    ids = ["--id", "table10-2A-sqrt58", "--id", "table11-2B-i", "--id", "eq_2C_2"]
    assert call("--json", "verify-series", *ids) == call("--json", "--jobs", "2", "verify-series", *ids)


def test_console_entry_and_precision_env():
    env = dict(os.environ, **{PREC_ENV: "96"})
    res = subprocess.run([sys.executable, "-m", "ramanujan_lab", "--json", "s2", "--tau", "2,0,1"],
                         capture_output=True, text=True, env=env, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["precision_bits"] == 96
    env[PREC_ENV] = "lots"
    res = subprocess.run([sys.executable, "-m", "ramanujan_lab", "s2", "--tau", "2,0,1"],
                         capture_output=True, text=True, env=env, timeout=120)
    assert res.returncode == 2 and PREC_ENV in res.stderr
