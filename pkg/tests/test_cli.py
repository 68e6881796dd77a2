import io
import json
import subprocess
import sys

import pytest

from cubemob import census as cs
from cubemob import cli


def run(argv):
    out = io.BytesIO()
    code = cli.run(argv, stdout=out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("CUBEMOB_CACHE_DIR", raising=False)


def test_derangements_json():
    code, out = run(["derangements", "--n", "2", "--method", "both", "--format", "json"])
    assert code == 0
    assert json.loads(out) == {"n": 2, "inversion": 3, "direct": 3, "agree": True}


def test_derangements_n1_contains_inversion():
    _, out = run(["derangements", "--n", "1", "--format", "json"])
    assert b'"inversion": 1' in out


def test_subalgebras_table_has_two_rows():
    code, out = run(["subalgebras", "--n", "1", "--format", "table"])
    lines = out.decode().splitlines()
    assert code == 0 and len(lines) == 2 + 2  # header, rule, two rows


@pytest.mark.parametrize(
    "argv",
    [
        ["faces", "--n", "0"],
        ["faces", "--n", "9"],
        ["faces"],
        ["faces", "--n", "2", "--bogus"],
        ["faces", "--n", "2", "--method", "both"],
        ["mobius", "--n", "2", "--method", "guess"],
        ["derangements", "--n", "5", "--method", "inversion"],
        ["mobius", "--n", "6", "--method", "bruteforce"],
        ["census", "--n", "2", "--jobs", "0"],
        ["census", "--n", "2", "--format", "xml"],
        [],
        ["plot", "--n", "2"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out = run(argv)
    assert code == 2 and out == b""
    assert capsys.readouterr().err


def test_faces_json_and_csv():
    _, out = run(["faces", "--n", "2", "--format", "json"])
    data = json.loads(out)
    assert data["count"] == 9 and data["corank_census"] == {"0": 1, "1": 4, "2": 4}
    _, out = run(["faces", "--n", "1", "--format", "csv"])
    assert out == b"face,corank\n-,1\n+,1\n*,0\n"


def test_json_keys_sorted():
    _, out = run(["mobius", "--n", "2"])
    data = json.loads(out)
    assert out == (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()


def test_mobius_methods():
    _, out = run(["mobius", "--n", "3", "--method", "bruteforce"])
    assert json.loads(out)["mu_bruteforce"] == -15
    _, out = run(["mobius", "--n", "9", "--method", "adjudicated"])
    assert json.loads(out)["mu_recurrence_adjudicated"] == -34459425
    _, out = run(["mobius", "--n", "1", "--method", "printed", "--format", "csv"])
    assert out == b"n,mu_bruteforce,mu_recurrence_paper,mu_recurrence_adjudicated\n1,,2,\n"


def test_empty_census_csv_is_header_only():
    report = cli.Report({"n": 0, "rows": []}, list(cs.CENSUS_COLUMNS), [])
    assert cli.emit(report, "csv") == (",".join(cs.CENSUS_COLUMNS) + "\n").encode()


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        cli.emit(cli.Report({}, []), "yaml")


def test_census_csv_header_fixed():
    _, out = run(["census", "--n", "2", "--format", "csv"])
    assert out.decode().splitlines()[0] == ",".join(cs.CENSUS_COLUMNS)


def test_census_n4_includes_sample_check():
    code, out = run(["census", "--n", "4", "--seed", "7"])
    data = json.loads(out)
    assert code == 0
    assert data["sample_check"] == {"seed": 7, "size": 50, "mismatches": []}


def test_audit_reports_discrepancy_with_exit_3():
    code, out = run(["audit", "--n", "1"])
    data = json.loads(out)
    assert code == 3
    assert data["all_checks_passed"] is True
    checks = {d["check"]: d for d in data["discrepancies"]}
    assert checks["mu_one_implication"] == {"check": "mu_one_implication", "printed": 1, "oracle": -1}
    assert "mu_recurrence_paper" in checks


def test_audit_csv_lists_discrepancies():
    code, out = run(["audit", "--n", "2", "--format", "csv"])
    text = out.decode()
    assert code == 3
    assert "discrepancy,mu_recurrence_paper,DISCREPANCY" in text
    assert ",FAIL," not in text


def test_cold_and_warm_cache_identical(tmp_path):
    argv = ["mobius", "--n", "3", "--cache-dir", str(tmp_path)]
    _, cold = run(argv)
    assert (tmp_path / "cubemob.cache").exists()
    _, warm = run(argv)
    _, none = run(["mobius", "--n", "3"])
    assert cold == warm == none


def test_env_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBEMOB_CACHE_DIR", str(tmp_path / "env"))
    run(["derangements", "--n", "2"])
    assert (tmp_path / "env" / "cubemob.cache").exists()
    run(["derangements", "--n", "2", "--cache-dir", str(tmp_path / "flag")])
    assert (tmp_path / "flag" / "cubemob.cache").exists()


def test_corrupt_cache_still_correct(tmp_path):
    argv = ["derangements", "--n", "3", "--cache-dir", str(tmp_path)]
    _, first = run(argv)
    path = tmp_path / "cubemob.cache"
    data = bytearray(path.read_bytes())
    for i in range(20, len(data), 7):
        data[i] ^= 0x5A
    path.write_bytes(bytes(data))
    _, again = run(argv)
    assert again == first


def test_jobs_do_not_change_output():
    a = run(["census", "--n", "3", "--jobs", "1"])
    b = run(["census", "--n", "3", "--jobs", "3"])
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cubemob", "derangements", "--n", "1", "--format", "csv"],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == b"n,inversion,direct,agree\n1,1,1,true\n"
    bad = subprocess.run([sys.executable, "-m", "cubemob", "faces", "--n", "0"], capture_output=True, check=False)
    assert bad.returncode == 2 and b"--n must be" in bad.stderr
