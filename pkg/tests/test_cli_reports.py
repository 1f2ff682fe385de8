import csv
import io
import json
import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from powerbound.cli_reports import (
    ExperimentConfig,
    emit_plot_data,
    exit_status,
    load_experiment_config,
    report_json,
    run,
)
from powerbound.cli_reports.main import main
from powerbound.errors import ConfigSchemaError, UnknownSeriesError


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _cluster_file(tmp_path, a):
    c = a / (1 - a)
    return _write(tmp_path / f"cluster_{a}.txt", f"cluster {c!r} {a!r} {c!r} 1 1\n")


def _plot_rows(report, series):
    return list(csv.DictReader(io.StringIO(emit_plot_data(report, series))))


def _dirichlet(**overrides):
    fields = {"kind": "dirichlet", "parameters": {"dim": 2, "m": 4}, "seed": 5, "trials": 4}
    fields.update(overrides)
    return ExperimentConfig.model_validate(fields)


def test_config_file_is_parsed_with_prefixes(tmp_path):
    _write(tmp_path / "set.txt", "point 1.0\npoint 2.0\n")
    path = _write(tmp_path / "cover.env", "SEED=3\nTRIALS=2\nCOVER_SET_FILE=set.txt\nCOVER_EPSILONS=0.5,0.1\n")
    experiment = load_experiment_config(path, "cover")
    assert experiment.seed == 3
    assert experiment.trials == 2
    assert experiment.parameters.epsilons == [0.5, 0.1]
    assert experiment.parameters.set_file == str(tmp_path / "set.txt")

    overridden = load_experiment_config(path, "cover", {"seed": 9, "trials": None})
    assert overridden.seed == 9
    assert overridden.trials == 2


def test_config_rejects_unknown_and_invalid_keys(tmp_path):
    with pytest.raises(ConfigSchemaError):
        load_experiment_config(_write(tmp_path / "a.env", "ALPHA_SET_FILE=x\n"), "cover")
    with pytest.raises(ValidationError):
        load_experiment_config(_write(tmp_path / "b.env", "DIRICHLET_M=4\nDIRICHLET_COLOR=red\n"), "dirichlet")
    with pytest.raises(ValidationError):
        load_experiment_config(_write(tmp_path / "c.env", "DIRICHLET_M=0\n"), "dirichlet")
    with pytest.raises(ValidationError):
        load_experiment_config(_write(tmp_path / "c1.env", "DIRICHLET_M=1\n"), "dirichlet")
    with pytest.raises(ValidationError):
        load_experiment_config(_write(tmp_path / "d.env", "SEED=-1\nDIRICHLET_M=4\n"), "dirichlet")
    with pytest.raises(ConfigSchemaError):
        load_experiment_config(str(tmp_path / "missing.env"), "dirichlet")


def test_dirichlet_run_certifies_every_trial():
    report = run(_dirichlet())
    assert exit_status(report) == 0
    assert report.aggregate["succeeded"] == 4
    for record in report.trials:
        assert Fraction(record.result["max_residual"]) <= Fraction(1, 4)
    assert len(report.series["dirichlet"]) == 4


def test_reports_do_not_depend_on_threads():
    serial = report_json(run(_dirichlet(), threads=1))
    pooled = report_json(run(_dirichlet(), threads=3))
    assert serial == pooled
    assert "wall_time_s" not in json.loads(serial)
    assert "wall_time_s" in json.loads(report_json(run(_dirichlet()), include_wall_time=True))


def test_trial_streams_do_not_depend_on_trial_count():
    short = run(_dirichlet(trials=2))
    long = run(_dirichlet(trials=3))
    assert [t.result for t in short.trials] == [t.result for t in long.trials[:2]]
    other_seed = run(_dirichlet(seed=6, trials=2))
    assert [t.result for t in short.trials] != [t.result for t in other_seed.trials]


def test_trial_errors_are_embedded():
    experiment = ExperimentConfig(kind="interp", parameters={"nodes": 4, "k_max": 2, "degree": 1}, trials=2)
    report = run(experiment)
    assert exit_status(report) == 1
    assert report.aggregate["failed"] == 2
    assert report.trials[0].error["error"] == "InfeasibleProblemError"
    assert report.trials[0].error["success"] is False


def test_interp_run_series():
    experiment = ExperimentConfig(kind="interp", parameters={"nodes": 3, "k_max": 2, "degree": 4}, seed=1)
    report = run(experiment)
    assert exit_status(report) == 0
    assert [row["k"] for row in report.series["interp"]] == [1, 2]
    assert report.trials[0].result["interp_constant"] >= 1.0 - 1e-6


@pytest.mark.parametrize("suite", ["lemma21", "thm25", "thm212", "thm211", "lemma11"])
def test_bound_check_suites_pass(suite):
    parameters = {"suite": suite, "dim": 2, "kappa": 3.0, "n": 100, "tol_schedule": [0.3, 0.1]}
    report = run(ExperimentConfig(kind="bound-check", parameters=parameters, seed=2, trials=2))
    assert exit_status(report) == 0, report.trials
    assert report.aggregate["satisfied"] == 2
    assert {row["suite"] for row in report.series["bounds"]} == {suite}


def test_bound_check_parameters_are_validated():
    with pytest.raises(ValidationError):
        ExperimentConfig(kind="bound-check", parameters={"suite": "thm35"})
    with pytest.raises(ValidationError):
        ExperimentConfig(kind="bound-check", parameters={"suite": "thm211", "dim": 3, "block_sizes": [1, 1]})
    with pytest.raises(ValidationError):
        ExperimentConfig(kind="bound-check", parameters={"suite": "thm99"})


def test_emit_plot_data():
    report = run(_dirichlet(trials=2))
    lines = emit_plot_data(report, "dirichlet").splitlines()
    assert lines[0] == "trial,q,max_residual,bound"
    assert len(lines) == 3
    assert lines[1].startswith("0,")
    with pytest.raises(UnknownSeriesError):
        emit_plot_data(report, "fourier")


def test_main_runs_and_plots(tmp_path, capsys):
    _write(tmp_path / "mu.txt", "atom 0.0 1.0\natom 3.14159 0.5\n")
    config_path = _write(tmp_path / "fourier.env", "FOURIER_MEASURE_FILE=mu.txt\nFOURIER_N_MAX=8\n")
    report_path = tmp_path / "out" / "report.json"
    csv_path = tmp_path / "trials.csv"

    code = main(["fourier", "--config", config_path, "--out", str(report_path), "--csv", str(csv_path)])
    assert code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["aggregate"]["succeeded"] == 1
    assert len(report["series"]["fourier"]) == 9
    assert csv_path.read_text(encoding="utf-8").startswith("trial,success,satisfied,error")

    plot_path = tmp_path / "fourier.csv"
    code = main(["plot", "--report", str(report_path), "--series", "fourier", "--out", str(plot_path)])
    assert code == 0
    rows = plot_path.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "n,re,im,abs"
    assert float(rows[1].split(",")[3]) == pytest.approx(1.5)

    assert main(["plot", "--report", str(report_path), "--series", "nope"]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "UnknownSeriesError"


def test_main_reports_config_errors(tmp_path, capsys):
    config_path = _write(tmp_path / "bad.env", "DIRICHLET_M=4\nSURPRISE=1\n")
    assert main(["dirichlet", "--config", config_path]) == 2
    payload = json.loads(capsys.readouterr().err)
    assert payload == {
        "success": False,
        "error": "ConfigSchemaError",
        "details": {"key": "SURPRISE", "kind": "dirichlet", "expected_prefix": "DIRICHLET_"},
        "message": "unknown config key",
    }


def test_alpha_on_one_point_set(tmp_path):
    set_file = _write(tmp_path / "point.txt", "point 1.0\n")
    experiment = ExperimentConfig(kind="alpha", parameters={"set_file": set_file, "eps0": 0.5, "rho": 0.5, "steps": 8})
    report = run(experiment)
    assert exit_status(report) == 0
    assert report.trials[0].result["alpha_analytic"] == 0.0

    assert emit_plot_data(report, "covering").splitlines()[0] == "trial,epsilon,n_eps,ratio"
    rows = _plot_rows(report, "covering")
    assert len(rows) == 8
    for row in rows:
        assert int(row["n_eps"]) == 1
        assert float(row["ratio"]) == pytest.approx(1.0 / math.log(1.0 / float(row["epsilon"])))


def test_cover_rows_leave_ratio_empty_for_wide_arcs(tmp_path):
    set_file = _write(tmp_path / "two.txt", "point 1.0\npoint 3.0\n")
    report = run(ExperimentConfig(kind="cover", parameters={"set_file": set_file, "epsilons": [2.5, 0.5]}))
    rows = _plot_rows(report, "covering")
    assert [row["n_eps"] for row in rows] == ["1", "2"]
    assert rows[0]["ratio"] == ""
    assert float(rows[1]["ratio"]) == pytest.approx(2.0 / math.log(2.0))


def test_power_profile_of_unitary_similarity_is_flat():
    parameters = {"suite": "thm25", "dim": 2, "kappa": 1.0, "n": 40, "tol_schedule": [0.3, 0.1], "profile": True}
    report = run(ExperimentConfig(kind="bound-check", parameters=parameters, seed=3))
    assert exit_status(report) == 0
    assert emit_plot_data(report, "power_profile").splitlines()[0] == "trial,n,norm,inverse_norm"
    rows = _plot_rows(report, "power_profile")
    assert [int(row["n"]) for row in rows] == list(range(41))
    for row in rows:
        assert float(row["norm"]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["inverse_norm"]) == pytest.approx(1.0, abs=1e-9)


def _thm35_experiment(tmp_path):
    parameters = {
        "suite": "thm35",
        "dim": 3,
        "kappa": 3.0,
        "n": 200,
        "set_file": _cluster_file(tmp_path, 0.05),
        "k": 8,
    }
    return ExperimentConfig(kind="bound-check", parameters=parameters, seed=11, trials=3)


def test_k_trend_is_nonincreasing(tmp_path):
    report = run(_thm35_experiment(tmp_path))
    assert exit_status(report) == 0, report.trials
    rows = _plot_rows(report, "k_trend")
    assert len(rows) == 9
    for trial in range(3):
        mine = [row for row in rows if int(row["trial"]) == trial]
        assert [int(row["K"]) for row in mine] == [8, 16, 32]
        bounds = [float(row["bound"]) for row in mine]
        assert bounds == sorted(bounds, reverse=True)


def test_bound_reports_do_not_depend_on_threads(tmp_path):
    thm211 = ExperimentConfig(
        kind="bound-check",
        parameters={
            "suite": "thm211",
            "dim": 6,
            "block_sizes": [2, 2, 2],
            "kappa": 4.0,
            "n": 200,
            "tol_schedule": [0.3, 0.1],
        },
        seed=4,
        trials=4,
    )
    for experiment in (thm211, _thm35_experiment(tmp_path)):
        serial = report_json(run(experiment, threads=1))
        pooled = report_json(run(experiment, threads=8))
        assert serial == pooled
        assert json.loads(serial)["aggregate"]["violated"] == 0


def test_recur_run_on_tenth_cluster(tmp_path):
    experiment = ExperimentConfig(kind="recur", parameters={"set_file": _cluster_file(tmp_path, 0.1), "k": 8})
    report = run(experiment)
    assert exit_status(report) == 0
    assert report.trials[0].result["sup_error"] <= 2 * math.sin(math.pi / 7)
    assert _plot_rows(report, "recurrence")[0]["strict"] == "True"


def test_limsup_run_on_antipodal_atoms(tmp_path):
    measure_file = _write(tmp_path / "mu.txt", f"atom 0.0 0.5\natom {math.pi!r} 0.5\n")
    experiment = ExperimentConfig(kind="limsup", parameters={"measure_file": measure_file, "n_min": 1, "n_max": 50})
    report = run(experiment)
    assert exit_status(report) == 0
    result = report.trials[0].result
    assert result["limsup_abs"] == pytest.approx(1.0)
    assert result["peak_index"] % 2 == 0
    assert result["k_condition"] == 1.0
