"""Fourier analysis of finite positive circle measures."""

from .diagnostics import (
    absolute_convergence_partial,
    k_condition_estimate,
    lemma28_extract,
    limsup_abs_fourier,
    measure_pseudomeasure,
    minimizing_sequence,
    pseudomeasure_ratio,
    pseudomeasure_window,
    weighted_imaginary_average,
)
from .formats import format_measure_text, load_measure_file, parse_measure_text
from .fourier import cantor_fourier_coefficient, fourier_coefficient, fourier_coefficients
from .schemas import (
    Atom,
    AtomicMeasure,
    CantorApproxMeasure,
    CircleMeasure,
    Lemma28Result,
    MinimizingSequence,
    Pseudomeasure,
    WindowMaximum,
)

__all__ = [
    "Atom",
    "AtomicMeasure",
    "CantorApproxMeasure",
    "CircleMeasure",
    "Lemma28Result",
    "MinimizingSequence",
    "Pseudomeasure",
    "WindowMaximum",
    "absolute_convergence_partial",
    "cantor_fourier_coefficient",
    "format_measure_text",
    "fourier_coefficient",
    "fourier_coefficients",
    "k_condition_estimate",
    "lemma28_extract",
    "limsup_abs_fourier",
    "load_measure_file",
    "measure_pseudomeasure",
    "minimizing_sequence",
    "parse_measure_text",
    "pseudomeasure_ratio",
    "pseudomeasure_window",
    "weighted_imaginary_average",
]
