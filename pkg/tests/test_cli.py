import json

import pandas as pd
import pytest

from tdsim.cli import build_parser, main


@pytest.fixture
def fixture_files(tmp_path):
    a, b = tmp_path / "rho.json", tmp_path / "sigma.json"
    assert main(["--quiet", "gen", "--family", "low-rank", "--n", "2", "--r", "2",
                 "--seed", "3", "--out-a", str(a), "--out-b", str(b)]) == 0
    return a, b


@pytest.fixture
def pure_files(tmp_path):
    a, b = tmp_path / "psi.json", tmp_path / "phi.json"
    assert main(["--quiet", "gen", "--family", "pure", "--n", "1",
                 "--seed", "5", "--out-a", str(a), "--out-b", str(b)]) == 0
    return a, b


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_threshold_options_are_exclusive():
    with pytest.raises(SystemExit):
        build_parser().parse_args([
            "estimate", "--state-a", "a", "--state-b", "b", "--eps", "0.1",
            "--rank-bound", "2", "--delta-p", "0.01",
        ])


def test_gen_prints_exact_distance(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code = main(["--quiet", "gen", "--family", "depolarized", "--n", "2", "--r", "1",
                 "--lam", "0.2", "--out-a", str(a), "--out-b", str(b)])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert 0.0 <= printed["exact"] <= 1.0
    assert json.loads(a.read_text())["profile"]["provenance"] == "depolarized"


def test_estimate_writes_report_and_csv(fixture_files, tmp_path, fresh_sign_cache):
    a, b = fixture_files
    report_path = tmp_path / "report.json"
    csv_path = tmp_path / "runs.csv"
    ledger_path = tmp_path / "ledger.csv"
    code = main([
        "--quiet", "estimate", "--state-a", str(a), "--state-b", str(b),
        "--eps", "0.2", "--backend", "ideal", "--repetitions", "1",
        "--output", str(report_path), "--csv", str(csv_path), "--ledger-csv", str(ledger_path),
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["mode"] == "purified"
    assert report["parameters"]["delta_p_source"] == "profile"
    assert report["abs_error"] <= 0.2
    assert len(pd.read_csv(csv_path)) == 1
    assert set(pd.read_csv(ledger_path)["oracle"]) >= {"O_rho", "O_sigma"}


def test_estimate_samples_with_rank_bound(fixture_files, tmp_path, fresh_sign_cache):
    a, b = fixture_files
    report_path = tmp_path / "samples.json"
    code = main([
        "--quiet", "estimate", "--mode", "samples", "--state-a", str(a), "--state-b", str(b),
        "--eps", "0.2", "--rank-bound", "2", "--backend", "ideal", "--repetitions", "1",
        "--output", str(report_path),
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["parameters"]["budget_status"] == "ok"
    assert report["samples_total"] > 0


def test_dme_channel_mode_fails_cleanly(fixture_files):
    a, b = fixture_files
    code = main([
        "--quiet", "estimate", "--mode", "samples", "--channel-mode", "dme",
        "--state-a", str(a), "--state-b", str(b), "--eps", "0.2",
    ])
    assert code == 1


def test_swap_pure(pure_files, capsys):
    a, b = pure_files
    code = main(["--quiet", "swap-pure", "--state-a", str(a), "--state-b", str(b),
                 "--eps", "0.2", "--backend", "ideal"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["estimate"] == pytest.approx(payload["exact"], abs=1e-9)
    assert payload["access"] == "purified"


def test_costs_to_csv(tmp_path):
    path = tmp_path / "costs.csv"
    assert main(["--quiet", "costs", "--rank", "3", "--eps", "0.05", "--output", str(path)]) == 0
    assert len(pd.read_csv(path)) == 6


def test_accept_single_criterion(tmp_path, capsys):
    path = tmp_path / "accept.json"
    code = main(["--quiet", "accept", "--only", "1", "--scale", "0.1", "--output", str(path)])
    assert code == 0
    assert "sign identity" in capsys.readouterr().out
    assert json.loads(path.read_text())["passed"] is True


def test_accept_with_fault_returns_failure(fresh_sign_cache):
    assert main(["--quiet", "accept", "--only", "2", "--inject-fault", "sign-poly"]) == 1


def test_sweep_command(tmp_path, fresh_sign_cache):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({
        "axis": "eps", "grid": [0.3], "trials": 1, "n": 1, "rank": 1,
        "backend": "ideal", "repetitions": 1, "max_workers": 1,
    }))
    out = tmp_path / "sweep"
    assert main(["--quiet", "sweep", "--plan", str(plan), "--out", str(out)]) == 0
    assert (out / "sweep.csv").exists()


def test_missing_file_returns_error():
    assert main(["--quiet", "estimate", "--state-a", "missing.json",
                 "--state-b", "missing.json", "--eps", "0.1"]) == 1


def test_gen_writes_pair_document(tmp_path, capsys, fresh_sign_cache):
    pair = tmp_path / "pair.json"
    code = main(["--quiet", "gen", "--family", "low-rank", "--n", "2", "--r", "1",
                 "--seed", "7", "--out", str(pair)])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["pair"] == str(pair)

    document = json.loads(pair.read_text())
    assert document["family"] == "low-rank"
    assert document["rho"]["profile"]["provenance"] == "exact"
    assert document["sigma"]["profile"]["provenance"] == "exact"
    assert document["exact"] == pytest.approx(printed["exact"])

    report_path = tmp_path / "report.json"
    assert main(["--quiet", "estimate", "--pair", str(pair), "--eps", "0.2",
                 "--backend", "ideal", "--repetitions", "1", "--output", str(report_path)]) == 0
    assert json.loads(report_path.read_text())["parameters"]["delta_p_source"] == "profile"


def test_gen_needs_an_output(tmp_path):
    assert main(["--quiet", "gen", "--n", "1", "--r", "1"]) == 1
    assert main(["--quiet", "gen", "--n", "1", "--r", "1",
                 "--out-a", str(tmp_path / "a.json")]) == 1


def test_states_come_from_pair_or_files(fixture_files, tmp_path):
    a, _ = fixture_files
    pair = tmp_path / "pair.json"
    assert main(["--quiet", "gen", "--n", "1", "--r", "1", "--out", str(pair)]) == 0
    assert main(["--quiet", "estimate", "--state-a", str(a), "--eps", "0.2"]) == 1
    assert main(["--quiet", "estimate", "--pair", str(pair), "--state-a", str(a),
                 "--eps", "0.2"]) == 1
