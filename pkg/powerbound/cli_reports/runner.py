"""
Experiment runner.

Trials run on a thread pool; trial i draws from its own Philox stream
seeded by ``SeedSequence(seed, spawn_key=(i,))`` so results depend only on
(config, seed, i), never on the thread count or scheduling. Per-trial
errors are embedded in the report as error payloads.
"""

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Optional

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel

from .. import config as settings
from ..audit import get_audit_logger
from ..circle_sets import alpha_empirical, covering_number, load_set_file
from ..diophantine import dirichlet_simultaneous, pigeonhole_certificate, recurrence_exponent
from ..errors import ConfigSchemaError, UnknownSeriesError
from ..measures import (
    AtomicMeasure,
    fourier_coefficients,
    k_condition_estimate,
    limsup_abs_fourier,
    load_measure_file,
)
from ..operator_lab import (
    block_model,
    check_lemma21,
    check_theorem25,
    check_theorem35,
    check_theorem211,
    check_theorem212,
    cluster_eigenangles,
    power_norm_profile,
    random_eigenangles,
    random_model,
    verify_lemma11,
)
from ..wiener_interp import interpolation_profile
from .exception_handlers import error_payload
from .schemas import KIND_PREFIXES, ExperimentConfig, RunReport, TrialRecord

audit_logger = get_audit_logger("cli_reports")

_SHARED_KEYS = {"SEED": "seed", "TRIALS": "trials", "OUTPUT_PATH": "output_path"}


# -------------------------------
# Config files
# -------------------------------


def load_experiment_config(path: str, kind: str, overrides: Optional[dict[str, Any]] = None) -> ExperimentConfig:
    """
    Read a flat ``KEY=value`` file into an ExperimentConfig.

    ``*_FILE`` values are resolved relative to the config file. Non-None
    ``overrides`` (seed, trials, output_path) win over the file.

    Raises:
        ConfigSchemaError: If the file is missing or holds a key that is
            neither shared nor prefixed with the kind.
        pydantic.ValidationError: If a value does not fit its schema.
    """
    if not os.path.isfile(path):
        raise ConfigSchemaError("config file not found", details={"path": path})
    prefix = KIND_PREFIXES.get(kind)
    if prefix is None:
        raise ConfigSchemaError("unknown experiment kind", details={"kind": kind})

    base_dir = os.path.dirname(os.path.abspath(path))
    fields: dict[str, Any] = {"kind": kind}
    parameters: dict[str, Any] = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise ConfigSchemaError("config key without a value", details={"key": key})
        if key in _SHARED_KEYS:
            fields[_SHARED_KEYS[key]] = value
        elif key.startswith(prefix):
            name = key[len(prefix):].lower()
            if name.endswith("_file") and not os.path.isabs(value):
                value = os.path.join(base_dir, value)
            parameters[name] = value
        else:
            raise ConfigSchemaError(
                "unknown config key",
                details={"key": key, "kind": kind, "expected_prefix": prefix},
            )

    for name, value in (overrides or {}).items():
        if value is not None:
            fields[name] = value
    fields["parameters"] = parameters
    return ExperimentConfig.model_validate(fields)


# -------------------------------
# Plain JSON values
# -------------------------------


def plain(value: Any) -> Any:
    """Convert numpy, Fraction, complex and model values into JSON-safe data."""
    if isinstance(value, BaseModel):
        return plain(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [plain(value.real), plain(value.imag)]
    if isinstance(value, Fraction):
        return str(value)
    if value is None or isinstance(value, str):
        return value
    return str(value)


# -------------------------------
# Trials per kind
# -------------------------------

TrialOutput = tuple[dict[str, Any], dict[str, list[dict[str, Any]]], Optional[bool]]


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _covering_row(trial: int, epsilon: float, n_eps: int) -> dict[str, Any]:
    ratio = n_eps / math.log(1.0 / epsilon) if epsilon < 1.0 else None
    return {"trial": trial, "epsilon": epsilon, "n_eps": n_eps, "ratio": ratio}


def _alpha_trial(params, inputs, rng, trial) -> TrialOutput:
    profile = alpha_empirical(inputs["set"], params.eps0, params.rho, params.steps)
    rows = [_covering_row(trial, e.epsilon, e.n_eps) for e in profile.entries]
    result = {"alpha_empirical": profile.alpha_empirical, "alpha_analytic": profile.alpha_analytic}
    return result, {"covering": rows}, None


def _cover_trial(params, inputs, rng, trial) -> TrialOutput:
    rows = [_covering_row(trial, eps, covering_number(inputs["set"], eps)) for eps in params.epsilons]
    return {"max_n_eps": max(r["n_eps"] for r in rows)}, {"covering": rows}, None


def _recur_trial(params, inputs, rng, trial) -> TrialOutput:
    result = recurrence_exponent(inputs["set"], params.k, params.q_schedule)
    row = {"trial": trial, "q": result.q, "sup_error": result.sup_error, "strict": result.strict}
    return result.model_dump(exclude={"centers"}), {"recurrence": [row]}, None


def _dirichlet_trial(params, inputs, rng, trial) -> TrialOutput:
    targets = params.targets if params.targets is not None else rng.random(params.dim).tolist()
    search = pigeonhole_certificate if params.pigeonhole else dirichlet_simultaneous
    cert = search(targets, params.m, params.q_start)
    residual = float(cert.max_residual)
    row = {"trial": trial, "q": cert.q, "max_residual": residual, "bound": 1.0 / params.m}
    return {"q": cert.q, "p": cert.p, "max_residual": str(cert.max_residual), "targets": targets}, {"dirichlet": [row]}, None


def _fourier_trial(params, inputs, rng, trial) -> TrialOutput:
    ns = np.arange(params.n_min, params.n_max + 1)
    coefficients = fourier_coefficients(inputs["measure"], ns)
    rows = [
        {"n": int(n), "re": float(c.real), "im": float(c.imag), "abs": float(abs(c))}
        for n, c in zip(ns, coefficients)
    ]
    return {"max_abs": max(r["abs"] for r in rows)}, {"fourier": rows}, None


def _limsup_trial(params, inputs, rng, trial) -> TrialOutput:
    mu = inputs["measure"]
    window = limsup_abs_fourier(mu, params.n_min, params.n_max)
    ratio = k_condition_estimate(mu, params.n_min, params.n_max)
    result = {"limsup_abs": window.value, "peak_index": window.index, "k_condition": ratio}
    row = {"trial": trial, "n_min": params.n_min, "n_max": params.n_max, **result}
    return result, {"limsup": [row]}, None


def _interp_trial(params, inputs, rng, trial) -> TrialOutput:
    thetas = random_eigenangles(params.nodes, rng)
    results = interpolation_profile(np.exp(1j * np.asarray(thetas)), params.k_max, params.degree, params.tol)
    rows = [
        {"trial": trial, "k": k, "norm": r.norm, "gap": r.gap, "residual": r.residual}
        for k, r in enumerate(results, start=1)
    ]
    return {"interp_constant": max(r.norm for r in results), "nodes": thetas}, {"interp": rows}, None


def _bound_trial(params, inputs, rng, trial) -> TrialOutput:
    suite = params.suite
    if suite == "thm211":
        sizes = params.block_sizes or [1] * params.dim
        model = block_model(sizes, params.kappa, rng)
        report = check_theorem211(model, params.n, params.delta, params.tol_schedule)
    elif suite == "thm35":
        E = inputs["set"]
        model = random_model(params.dim, params.kappa, rng, cluster_eigenangles(E, params.dim, rng))
        report = check_theorem35(model, E, params.k, params.n, params.delta)
    else:
        model = random_model(params.dim, params.kappa, rng)
        if suite == "lemma21":
            x = rng.standard_normal(params.dim) + 1j * rng.standard_normal(params.dim)
            report = check_lemma21(model, x, params.n)
        elif suite == "thm25":
            report = check_theorem25(model, params.n, params.delta, params.tol_schedule, rng)
        elif suite == "thm212":
            weights = rng.uniform(0.5, 1.5, params.dim)
            mu = AtomicMeasure.from_arrays(model.U.eigenangles, weights)
            report = check_theorem212(model, mu, params.n, params.delta)
        else:
            report = verify_lemma11(model, params.k_max, params.degree, delta=params.delta)

    row = {
        "trial": trial,
        "suite": suite,
        "N": report.N,
        "M_window": report.M_window,
        "Minv_window": report.Minv_window,
        "bound_value": report.bound_value,
        "slack": report.slack,
        "satisfied": report.satisfied,
    }
    series: dict[str, list[dict[str, Any]]] = {"bounds": [row]}
    if suite == "thm35":
        series["k_trend"] = [
            {"trial": trial, "K": int(K), "bound": value}
            for K, value in sorted(report.details["bound_C_K_by_K"].items(), key=lambda item: int(item[0]))
        ]
    if params.profile:
        forward = power_norm_profile(model, report.N, "forward")
        backward = power_norm_profile(model, report.N, "backward")
        series["power_profile"] = [
            {"trial": trial, "n": n, "norm": float(f), "inverse_norm": float(b)}
            for n, (f, b) in enumerate(zip(forward, backward))
        ]
    result = report.model_dump()
    result["kappa"] = model.kappa
    return result, series, report.satisfied


_TRIALS: dict[str, Callable[..., TrialOutput]] = {
    "alpha": _alpha_trial,
    "cover": _cover_trial,
    "recur": _recur_trial,
    "dirichlet": _dirichlet_trial,
    "fourier": _fourier_trial,
    "limsup": _limsup_trial,
    "interp": _interp_trial,
    "bound-check": _bound_trial,
}


def _load_inputs(experiment: ExperimentConfig) -> dict[str, Any]:
    params = experiment.parameters
    inputs: dict[str, Any] = {}
    if getattr(params, "set_file", None):
        inputs["set"] = load_set_file(params.set_file)
    if getattr(params, "measure_file", None):
        inputs["measure"] = load_measure_file(params.measure_file)
    return inputs


# -------------------------------
# Running and aggregation
# -------------------------------


def _aggregate(records: list[TrialRecord]) -> dict[str, Any]:
    succeeded = [r for r in records if r.success]
    verdicts = [r.satisfied for r in records if r.satisfied is not None]
    summary: dict[str, dict[str, float]] = {}
    keys = sorted({k for r in succeeded for k, v in r.result.items() if isinstance(v, (int, float)) and not isinstance(v, bool)})
    for key in keys:
        values = [r.result[key] for r in succeeded if isinstance(r.result.get(key), (int, float))]
        summary[key] = {"min": min(values), "max": max(values), "mean": math.fsum(values) / len(values)}
    return {
        "trials": len(records),
        "succeeded": len(succeeded),
        "failed": len(records) - len(succeeded),
        "satisfied": sum(1 for v in verdicts if v),
        "violated": sum(1 for v in verdicts if not v),
        "errors": sorted({r.error["error"] for r in records if r.error}),
        "summary": summary,
    }


def run(experiment: ExperimentConfig, threads: Optional[int] = None) -> RunReport:
    """
    Run every trial of an experiment and collect the report.

    Args:
        experiment: Validated configuration.
        threads: Worker threads (default ``DEFAULT_THREADS``); never
            changes the numeric output.

    Returns:
        RunReport: Trials in index order, their aggregate and the merged
        plot series. ``wall_time_s`` is set; it is excluded from
        serialization unless requested.

    Raises:
        ConfigSchemaError: If a set or measure file cannot be read.
    """
    threads = settings.DEFAULT_THREADS if threads is None else threads
    started = time.perf_counter()
    inputs = _load_inputs(experiment)
    trial_fn = _TRIALS[experiment.kind]

    def one(trial: int) -> tuple[TrialRecord, dict[str, list[dict[str, Any]]]]:
        rng = _trial_rng(experiment.seed, trial)
        try:
            result, series, satisfied = trial_fn(experiment.parameters, inputs, rng, trial)
        except Exception as exc:
            return TrialRecord(trial=trial, success=False, error=plain(error_payload(exc))), {}
        return TrialRecord(trial=trial, success=True, satisfied=satisfied, result=plain(result)), plain(series)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(pool.map(one, range(experiment.trials)))

    records = [record for record, _ in outcomes]
    merged: dict[str, list[dict[str, Any]]] = {}
    for _, series in outcomes:
        for name, rows in series.items():
            merged.setdefault(name, []).extend(rows)

    report = RunReport(
        config=experiment,
        trials=records,
        aggregate=_aggregate(records),
        series=merged,
        wall_time_s=time.perf_counter() - started,
    )
    audit_logger.info(
        "RUN experiment kind=%s seed=%s trials=%s threads=%s failed=%s passed=%s wall_time_s=%.3f",
        experiment.kind, experiment.seed, experiment.trials, threads,
        report.aggregate["failed"], report.passed, report.wall_time_s,
    )
    return report


def exit_status(report: RunReport) -> int:
    """0 iff every trial succeeded and every asserted bound held."""
    return 0 if report.passed else 1


# -------------------------------
# Output
# -------------------------------


def report_json(report: RunReport, include_wall_time: bool = False) -> str:
    exclude = None if include_wall_time else {"wall_time_s"}
    return json.dumps(report.model_dump(mode="json", exclude=exclude), indent=2, sort_keys=True)


def write_report(report: RunReport, path: str, include_wall_time: bool = False) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report_json(report, include_wall_time))
        handle.write("\n")


def _csv_text(rows: list[dict[str, Any]]) -> str:
    fieldnames: list[str] = []
    for row in rows:
        fieldnames.extend(k for k in row if k not in fieldnames)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
    return buffer.getvalue()


def trial_rows(report: RunReport) -> list[dict[str, Any]]:
    """One flat row per trial: index, status and the scalar results."""
    rows = []
    for record in report.trials:
        row: dict[str, Any] = {
            "trial": record.trial,
            "success": record.success,
            "satisfied": record.satisfied,
            "error": record.error["error"] if record.error else "",
        }
        row.update({k: v for k, v in record.result.items() if not isinstance(v, (list, dict))})
        rows.append(row)
    return rows


def write_trial_csv(report: RunReport, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(_csv_text(trial_rows(report)))


def emit_plot_data(report: RunReport, series: str) -> str:
    """
    CSV text for one named series (``,`` separator, ``.`` decimal point).

    Raises:
        UnknownSeriesError: If the report has no such series.
    """
    if series not in report.series:
        raise UnknownSeriesError(
            "report has no such series",
            details={"series": series, "available": sorted(report.series)},
        )
    return _csv_text(report.series[series])
