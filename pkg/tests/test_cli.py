import json
import math
from fractions import Fraction

import pytest

from aztec_lshape import cli
from aztec_lshape.errors import ParameterError
from aztec_lshape.experiments import (
    FIGURE3_HEADER,
    SWEEP_HEADER,
    ExperimentConfig,
    figure3_config,
    format_value,
    nearest_int,
    read_csv,
    run_figure3,
    run_sweep,
    settles,
    write_csv,
)


@pytest.mark.parametrize("x,n", [(Fraction(21, 2), 10), (Fraction(23, 2), 12), (Fraction(7, 10) * 15, 10),
                                 (Fraction(7, 10) * 25, 18), (Fraction(1, 4) * 18, 4), (3.2, 3)])
def test_nearest_int_ties_to_even(x, n):
    assert nearest_int(x) == n


def test_format_value():
    assert format_value(Fraction(3, 8)) == "3/8"
    assert format_value(1 / 3) == "0.333333333333333"
    assert format_value(True) == "true"
    assert format_value(None) == ""


def test_csv_round_trip():
    rows = [{"N": 12, "m": 8, "k": 3, "epsilon": 1, "exact_logF": 1 / 7, "predicted_logF": 2.5,
             "residual": -1e-9, "N_residual": -1.2e-8}]
    text = write_csv(rows, FIGURE3_HEADER)
    back = read_csv(text)
    assert list(back[0]) == list(FIGURE3_HEADER)
    assert write_csv(back, FIGURE3_HEADER) == text


def test_figure3_rows_use_rounding_rule():
    cfg = figure3_config("middle", 14, 16)
    rows = run_figure3(cfg)
    assert [r["N"] for r in rows] == [14, 15, 16]
    assert [r["m"] for r in rows] == [10, 10, 11]
    assert all(r["k"] == 3 and r["epsilon"] == 0 for r in rows)
    assert all(abs(r["N_residual"] - r["N"] * r["residual"]) < 1e-12 for r in rows)


def test_figure3_right_panel_small_residual():
    rows = run_figure3(figure3_config("right", 16, 24))
    assert all(abs(r["residual"]) < 0.05 for r in rows)
    assert [r["k"] for r in rows][:3] == [4, 4, 4]


def test_figure3_truncation_warning():
    with pytest.warns(RuntimeWarning):
        rows = run_figure3(figure3_config("left", 12, 14, max_N=13))
    assert [r["N"] for r in rows] == [12, 13]


def test_settles():
    assert settles([5, -3, 4, -2, 1, 0.5, 0.6, 0.55])
    assert not settles([0.1, 0.1, 0.2, 5.0, -5.0, 3.0, 6.0, -6.0])


def test_sweep_full_coverage():
    cfg = ExperimentConfig.from_dict(dict(command="sweep", N_values=(10,), a="1", mu=None,
                                          k=None, epsilons=(1,)))
    rows = run_sweep(cfg)
    assert len(rows) == sum(m + 1 for m in range(1, 10))
    assert all(math.isfinite(r["exact_logF"]) for r in rows)
    labelled = [r for r in rows if r.get("regime")]
    assert len(labelled) + sum(bool(r.get("error")) for r in rows) == len(rows)
    text = write_csv(rows, SWEEP_HEADER)
    assert text.splitlines()[0] == ",".join(SWEEP_HEADER)


def test_kappa_sweep_bridges_theorems():
    N, m = 40, 28
    cfg = ExperimentConfig.from_dict(dict(command="sweep", N_values=(N,), a="0.7845",
                                          m_values=(m,), k=None, mu=None,
                                          k_values=(12, 18, 22, 24, 26, 28), epsilons=(1,)))
    rows = run_sweep(cfg)
    regimes_seen = [r["regime"] for r in rows]
    assert regimes_seen[0] == "large"
    assert "critical" in regimes_seen
    first_crit = regimes_seen.index("critical")
    assert set(regimes_seen[first_crit:]) <= {"critical", "small"}
    assert all(abs(r["residual"]) < 1.5 for r in rows)


@pytest.mark.parametrize("data", [dict(N_values=()), dict(epsilons=()), dict(bogus=1),
                                  dict(m_values=(), mu=None)])
def test_config_validation(data):
    base = dict(command="sweep", N_values=(10,), mu=0.5, k=2)
    base.update(data)
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict(base)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_exact(capsys):
    code, out, _ = run(capsys, "exact", "--N", "2", "--variant", "full", "--a", "1/2")
    payload = json.loads(out)
    assert code == 0
    assert (payload["value_num"], payload["value_den"]) == ("125", "64")
    assert payload["method"] == "determinant" and payload["elapsed_ms"] >= 0


def test_cli_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"N": 6, "m": 3, "k": 1, "a": "1/3"}))
    code, out, _ = run(capsys, "--config", str(cfg), "exact")
    assert code == 0
    assert Fraction(int(json.loads(out)["value_num"]), int(json.loads(out)["value_den"])) == \
        Fraction(10, 9) ** 9
    code, out, _ = run(capsys, "--config", str(cfg), "exact", "--k", "4")
    assert json.loads(out)["value_num"] == str(10**21)


def test_cli_tw(capsys):
    code, out, _ = run(capsys, "tw", "--s", "0")
    payload = json.loads(out)
    assert code == 0 and payload["source"] == "grid"
    assert abs(payload["logFTW"] + 0.0311059853062560) < 1e-12
    code, out, _ = run(capsys, "tw", "--table", "-12", "8", "2")
    rows = read_csv(out)
    assert [r["source"] for r in rows][0] == "left-tail"
    assert rows[-1]["source"] == "right-tail"


def test_cli_saddle_and_asym(capsys):
    code, out, _ = run(capsys, "saddle", "--mu", "0.76", "--kappa", "0.44", "--a", "0.78")
    payload = json.loads(out)
    assert code == 0 and max(abs(r) for r in payload["liquid"]["residuals"]) < 1e-12
    code, out, _ = run(capsys, "asym", "--N", "30", "--m", "21", "--k", "4", "--a", "0.7845",
                       "--exact")
    payload = json.loads(out)
    assert payload["regime"] == "almost-maximal" and "residual" in payload


def test_cli_identities(capsys):
    code, out, _ = run(capsys, "identities", "--mu", "0.7", "--a", "0.7845", "--eps", "0")
    payload = json.loads(out)
    assert code == 0
    assert max(abs(v) for v in payload["residual"].values()) < 1e-6


def test_cli_sample_and_mc(capsys, tmp_path):
    svg = tmp_path / "t.svg"
    code, out, _ = run(capsys, "sample", "--N", "5", "--seed", "1", "--svg", str(svg))
    assert code == 0 and json.loads(out)["dominoes"] == 30 and svg.exists()
    code, out, _ = run(capsys, "mc", "--N", "6", "--m", "4", "--k", "5", "--samples", "100")
    assert json.loads(out) == {"estimate": 1.0, "stderr": 0.0, "samples": 100}


def test_cli_figure3_and_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "figure3", "--which", "left", "--N-min", "12", "--N-max", "13")
    assert code == 0 and out.splitlines()[0] == ",".join(FIGURE3_HEADER)
    dest = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--N", "6", "--a", "1", "--out", str(dest))
    assert code == 0 and dest.read_text().startswith(",".join(SWEEP_HEADER))


@pytest.mark.parametrize("argv,code", [
    (["exact", "--N", "5", "--m", "9", "--k", "1"], 2),
    (["exact", "--N", "3", "--a", "3/2"], 2),
    (["asym", "--N", "40", "--m", "10", "--k", "30", "--regime", "3", "--a", "0.7845"], 3),
    (["saddle", "--mu", "0.3", "--kappa", "0.1", "--a", "0.7845"], 0),
    (["identities", "--mu", "0.3", "--a", "0.7845"], 3),
    (["tw", "--s", "-30", "--table", "1", "0", "1"], 2),
])
def test_cli_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_cli_accuracy_exit_code(capsys, monkeypatch):
    from aztec_lshape import regimes
    from aztec_lshape.errors import AccuracyError

    def boom(*args, **kwargs):
        raise AccuracyError("forced", achieved=1.0)

    monkeypatch.setattr(regimes, "identity_checks", boom)
    assert run(capsys, "identities", "--mu", "0.7", "--a", "0.7845")[0] == 4
