import json
import math

import pytest

from cmolab.cli import main


def run(argv):
    return main(argv)


def test_sieve_writes_primes(tmp_path, capsys):
    out = tmp_path / "primes.csv"
    assert run(["sieve", "--n", "100", "--out", str(out)]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["prime_count"] == 25
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p"
    assert lines[1] == "2" and lines[-1] == "97"


def test_sum_csv(tmp_path):
    out = tmp_path / "sums.csv"
    code = run(["sum", "--spec", "liouville", "--weight", "1/n",
                "--n", "10000", "--checkpoints", "decades",
                "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "x,sum_re,sum_im"
    rows = [l.split(",") for l in lines[1:]]
    assert [r[0] for r in rows] == ["100", "1000", "10000"]
    assert float(rows[2][1]) == pytest.approx(0.0042802774347414346, abs=1e-15)


def test_sum_json_stdout(capsys):
    assert run(["sum", "--spec", "mobius", "--n", "1000",
                "--checkpoints", "10,1000"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rows"][0]["sum"][0] == -1.0


def test_usage_errors():
    assert run(["sum", "--spec", "nonsense", "--n", "100"]) == 1
    assert run(["sum", "--n", "100"]) == 1                   # missing --spec
    assert run(["bogus-command"]) == 1
    assert run(["sum", "--spec", "random:", "--n", "10"]) == 1  # seedless


def test_numeric_error_exit_code():
    assert run(["window-sum", "--model", "mobius", "--x", "9.2",
                "--a", "0.05", "--T", "50", "--tol", "1e-6"]) == 2


def test_criterion_json(tmp_path):
    out = tmp_path / "rep.json"
    code = run(["criterion", "--which", "real-part-sum", "--spec", "liouville",
                "--pmax", "100000", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["criterion"] == "real-part-sum"
    assert data["series"]["sum"][0] == pytest.approx(-1.802817201048871,
                                                     abs=1e-12)


def test_criterion_csv(tmp_path):
    out = tmp_path / "rep.csv"
    assert run(["criterion", "--which", "deviation-density",
                "--spec", "liouville", "--pmax", "10000",
                "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("x,")


def test_zeros_json(tmp_path):
    out = tmp_path / "zeros.json"
    assert run(["zeros", "--q", "4", "--index", "1", "--tmin", "5",
                "--tmax", "7", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 1
    assert data[0]["im"] == pytest.approx(6.0209489, abs=1e-3)


def test_verify_inversion(tmp_path):
    out = tmp_path / "inv.csv"
    assert run(["verify-inversion", "--form", "plain", "--f-spec", "mobius",
                "--n", "10000", "--x-list", "10,100,10000",
                "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "x,lhs_re,lhs_im,rhs_re,rhs_im,residual"
    last = lines[-1].split(",")
    assert float(last[5]) == pytest.approx(abs(-23.0) / 10000, abs=1e-12)


def test_window_sum_cli(capsys):
    assert run(["window-sum", "--model", "liouville",
                "--x", str(math.log(10**4)), "--a", "0.05",
                "--T", "1500", "--tol", "0.03"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["value"] - 0.0042802774347414346) < 0.26


def test_abel_scan_cli(tmp_path):
    out = tmp_path / "abel.csv"
    assert run(["abel-scan", "--spec", "liouville", "--sigmas", "2.0,1.5",
                "--n", "100000", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "sigma,partial_re,partial_im,closed_re,closed_im"
    row = lines[1].split(",")
    assert float(row[1]) == pytest.approx(math.pi**2 / 15, abs=1e-3)
    assert float(row[3]) == pytest.approx(math.pi**2 / 15, abs=1e-9)


def test_euler_product_cli(capsys):
    assert run(["euler-product", "--spec", "liouville", "--s-re", "2",
                "--pmax", "100000"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["re"] == pytest.approx(math.pi**2 / 15, abs=1e-4)


def test_spec_file_input(tmp_path, capsys):
    from cmolab.specs import PrimeValueSpec
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(
        PrimeValueSpec.twisted(PrimeValueSpec.liouville(), 1.0).to_json_dict()))
    assert run(["sum", "--spec", str(spec_path), "--n", "100",
                "--checkpoints", "100"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["spec"]["kind"] == "twisted"


def test_zero_spec_shorthand(capsys):
    assert run(["sum", "--spec", "zero:4:1:first", "--n", "1000",
                "--checkpoints", "1000"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["spec"]["kind"] == "twisted"
    assert data["spec"]["rho"][1] == pytest.approx(6.0209489, abs=1e-3)


def test_cache_hit_is_byte_identical(tmp_path):
    cache = tmp_path / "cache"
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["sum", "--spec", "random:42", "--weight", "1/n", "--n", "20000",
            "--checkpoints", "decades", "--cache-dir", str(cache)]
    assert run(args + ["--out", str(out1)]) == 0
    cached = list(cache.glob("seq-*.cmo"))
    assert len(cached) == 1
    first_bytes = cached[0].read_bytes()
    assert run(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert cached[0].read_bytes() == first_bytes


def test_cache_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CMO_CACHE_DIR", str(tmp_path / "envcache"))
    assert run(["sum", "--spec", "liouville", "--n", "5000",
                "--checkpoints", "5000"]) == 0
    capsys.readouterr()
    assert list((tmp_path / "envcache").glob("*.cmo"))
