import io
import json

import pytest

from catalan_mixing import cli
from catalan_mixing.matroid import CorrelationVerdict


def run(argv):
    buf = io.StringIO()
    code = cli.main(argv, stdout=buf)
    records = [json.loads(line) for line in buf.getvalue().splitlines()]
    return code, records, buf.getvalue()


@pytest.fixture
def catalan3(lpm_file):
    return lpm_file("UDUDUD", "UUUDDD")


def test_count(catalan3):
    code, recs, _ = run(["count", "--matroid", catalan3])
    assert code == 0
    assert recs[0]["count"] == "5"
    assert recs[-1]["type"] == "manifest"


def test_count_with_constraints(catalan3):
    code, recs, _ = run(["count", "--matroid", catalan3, "--force-up", "2", "--force-down", "5"])
    assert code == 0 and recs[0]["count"] == "2"


def test_count_bad_constraints(catalan3):
    assert run(["count", "--matroid", catalan3, "--force-up", "2", "--force-down", "2"])[0] == 1
    assert run(["count", "--matroid", catalan3, "--force-up", "x"])[0] == 1


def test_missing_file_and_bad_file(tmp_path, lpm_file):
    assert run(["count", "--matroid", str(tmp_path / "nope.lpm")])[0] == 1
    assert run(["count", "--matroid", lpm_file("UUDD", "UDUD")])[0] == 1


def test_bad_subcommand_and_chain():
    assert run(["frobnicate"])[0] == 1
    assert run(["spectral", "--chain", "lazy", "--n", "2"])[0] == 1
    assert run(["spectral", "--chain", "dyck-rt"])[0] == 1


def test_sample_reproducible(catalan3):
    a = run(["sample", "--matroid", catalan3, "--num", "20", "--seed", "11"])
    b = run(["sample", "--matroid", catalan3, "--num", "20", "--seed", "11"])
    assert a[0] == 0
    assert [r for r in a[1] if r["type"] == "sample"] == [r for r in b[1] if r["type"] == "sample"]
    assert a[1][-1]["digest"] == b[1][-1]["digest"]


def test_sample_empty_support(catalan3):
    assert run(["sample", "--matroid", catalan3, "--force-up", "2 4 6"])[0] == 1


def test_check_nc(catalan3):
    code, recs, _ = run(["check-nc", "--matroid", catalan3, "--minors", "50"])
    assert code == 0
    pair = next(r for r in recs if r["type"] == "pair" and (r["e"], r["f"]) == (2, 4))
    assert (pair["both"], pair["neither"], pair["e_only"], pair["f_only"], pair["slack"]) == ("1", "1", "2", "1", "1")
    balance = next(r for r in recs if r["type"] == "balance")
    assert balance["balanced"] and balance["negatively_correlated"]


def test_check_nc_violation_exit_code(catalan3, monkeypatch):
    monkeypatch.setattr(cli, "pair_verdicts", lambda M: [CorrelationVerdict(1, 2, 2, 2, 1, 1)])
    code, recs, _ = run(["check-nc", "--matroid", catalan3, "--minors", "0"])
    assert code == 2


def test_verify_injection_matroid(catalan3):
    code, recs, _ = run(["verify-injection", "--matroid", catalan3])
    assert code == 0 and recs[0]["injective"] is True


def test_verify_injection_sweep():
    code, recs, _ = run(["verify-injection", "--sweep-m", "8"])
    assert code == 0
    summary = next(r for r in recs if r["type"] == "injection-summary")
    assert summary["injective"] is True and summary["violations"] == "0"
    assert summary["domain"] == summary["image"]
    assert sum(r["matroids"] for r in recs if r["type"] == "injection-sweep-m") == summary["matroids"]


def test_verify_injection_requires_target():
    assert run(["verify-injection"])[0] == 1


def test_spectral_example():
    code, recs, _ = run(["spectral", "--chain", "dyck-rt", "--n", "2"])
    assert code == 0
    r = recs[0]
    assert r["gap"].startswith("0.333333")
    assert r["gap_exact"] == "1/3"
    assert (r["jerrum_son_lower"], r["dyck_upper"]) == ("1/4", "2")


def test_spectral_matroid_option(lpm_file):
    code, recs, _ = run(["spectral", "--chain", "basis-exchange", "--matroid", lpm_file("DUDUDU", "UDUDUD")])
    assert code == 0 and recs[0]["states"] == 8


def test_spectral_cap():
    assert run(["spectral", "--chain", "dyck-rt", "--n", "6", "--cap", "10"])[0] == 1


def test_mixing_and_csv(tmp_path):
    csv = tmp_path / "tv.csv"
    code, recs, _ = run(["mixing", "--chain", "dyck-rt", "--n", "2", "--eps", "1/4", "--csv", str(csv)])
    assert code == 0 and recs[0]["t_mix"] == 2 and recs[0]["epsilon"] == "1/4"
    assert not recs[0]["error_budget"].startswith("np.")
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,tv" and len(lines) == 4


def test_mixing_bad_eps():
    assert run(["mixing", "--chain", "dyck-rt", "--n", "2", "--eps", "abc"])[0] == 1


def test_scaling(tmp_path):
    csv = tmp_path / "s.csv"
    code, recs, _ = run(["scaling", "--chain", "dyck-rt", "--n-min", "2", "--n-max", "4", "--csv", str(csv)])
    assert code == 0
    rows = [r for r in recs if r["type"] == "scaling-row"]
    assert [r["states"] for r in rows] == [2, 5, 14]
    assert csv.read_text().startswith("n,states,gap")
    assert run(["scaling", "--chain", "dyck-rt", "--n-min", "4", "--n-max", "2"])[0] == 1


def _strip_timestamp(text):
    out = []
    for line in text.splitlines():
        rec = json.loads(line)
        rec.pop("timestamp", None)
        out.append(json.dumps(rec, sort_keys=True))
    return out


@pytest.mark.parametrize(
    "argv",
    [
        ["spectral", "--chain", "basis-exchange", "--n", "3"],
        ["mixing", "--chain", "dyck-adj", "--n", "3"],
        ["scaling", "--chain", "cube", "--n-min", "2", "--n-max", "3"],
    ],
)
def test_identical_runs_identical_output(argv):
    a, b = run(argv)[2], run(argv)[2]
    assert _strip_timestamp(a) == _strip_timestamp(b)


def test_digest_covers_records(catalan3):
    import hashlib

    _, _, text = run(["count", "--matroid", catalan3])
    lines = text.splitlines()
    digest = hashlib.sha256("".join(line + "\n" for line in lines[:-1]).encode()).hexdigest()
    assert json.loads(lines[-1])["digest"] == digest
