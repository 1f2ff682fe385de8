"""
Experiment configurations and run reports.

Configs are flat ``KEY=value`` files. ``SEED``, ``TRIALS`` and
``OUTPUT_PATH`` are shared; every other key carries the prefix of its kind
(``ALPHA_EPS0=0.5``, ``BOUND_SUITE=thm25``) and becomes a field of that
kind's parameter model. Unknown keys are rejected.
"""

from typing import Annotated, Any, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

from .. import __version__, config

Kind = Literal["alpha", "cover", "recur", "dirichlet", "fourier", "limsup", "interp", "bound-check"]
Suite = Literal["lemma21", "lemma11", "thm25", "thm211", "thm212", "thm35"]

KIND_PREFIXES: dict[str, str] = {
    "alpha": "ALPHA_",
    "cover": "COVER_",
    "recur": "RECUR_",
    "dirichlet": "DIRICHLET_",
    "fourier": "FOURIER_",
    "limsup": "LIMSUP_",
    "interp": "INTERP_",
    "bound-check": "BOUND_",
}

U64_MAX = 2 ** 64 - 1


def _split_commas(value: Any) -> Any:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


FloatList = Annotated[list[float], BeforeValidator(_split_commas)]
IntList = Annotated[list[int], BeforeValidator(_split_commas)]


class _Parameters(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AlphaParameters(_Parameters):
    set_file: str
    eps0: float = Field(config.RECURRENCE_EPS0, gt=0.0)
    rho: float = Field(config.RECURRENCE_RHO, gt=0.0, lt=1.0)
    steps: int = Field(20, ge=2)


class CoverParameters(_Parameters):
    set_file: str
    epsilons: FloatList = Field(..., min_length=1)


class RecurParameters(_Parameters):
    set_file: str
    k: int = Field(..., ge=3)
    q_schedule: Optional[IntList] = None


class DirichletParameters(_Parameters):
    """Random targets t ∈ [0, 1)^dim per trial unless ``targets`` fixes them."""

    dim: int = Field(2, ge=1)
    m: int = Field(..., ge=2)
    q_start: int = Field(1, ge=1)
    targets: Optional[FloatList] = None
    pigeonhole: bool = False


class FourierParameters(_Parameters):
    measure_file: str
    n_min: int = Field(0, ge=0)
    n_max: int = Field(..., ge=1)


class LimsupParameters(_Parameters):
    measure_file: str
    n_min: int = Field(1, ge=0)
    n_max: int = Field(..., ge=1)


class InterpParameters(_Parameters):
    """Random unimodular nodes per trial."""

    nodes: int = Field(..., ge=1)
    k_max: int = Field(..., ge=1)
    degree: int = Field(..., ge=0)
    tol: Optional[float] = Field(None, gt=0.0)


class BoundCheckParameters(_Parameters):
    """
    Random similarity models checked against one bound per trial.

    ``set_file`` and ``k`` are used by thm35 (eigenangles drawn from the
    set); ``block_sizes`` by thm211; ``k_max`` and ``degree`` by lemma11.
    ``profile`` adds the power-norm series over the final window.
    """

    suite: Suite
    dim: int = Field(3, ge=1)
    kappa: float = Field(4.0, ge=1.0)
    n: int = Field(config.DEFAULT_WINDOW, ge=1)
    delta: float = Field(config.DEFAULT_DELTA, ge=0.0)
    tol_schedule: Optional[FloatList] = None
    block_sizes: Optional[IntList] = None
    set_file: Optional[str] = None
    k: int = Field(8, ge=3)
    k_max: int = Field(3, ge=1)
    degree: int = Field(8, ge=0)
    profile: bool = False

    @model_validator(mode="after")
    def _suite_inputs(self) -> "BoundCheckParameters":
        if self.suite == "thm35" and self.set_file is None:
            raise ValueError("thm35 needs BOUND_SET_FILE")
        if self.block_sizes is not None and sum(self.block_sizes) != self.dim:
            raise ValueError("block sizes must add up to the dimension")
        return self


PARAMETER_SCHEMAS: dict[str, type[_Parameters]] = {
    "alpha": AlphaParameters,
    "cover": CoverParameters,
    "recur": RecurParameters,
    "dirichlet": DirichletParameters,
    "fourier": FourierParameters,
    "limsup": LimsupParameters,
    "interp": InterpParameters,
    "bound-check": BoundCheckParameters,
}


class ExperimentConfig(BaseModel):
    """
    One experiment: a kind, its parameters, a seed and a trial count.

    ``parameters`` may be given as a dict; it is validated against the
    schema of ``kind``.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Kind
    parameters: Any
    seed: int = Field(0, ge=0, le=U64_MAX)
    trials: int = Field(1, ge=1)
    output_path: Optional[str] = None

    @model_validator(mode="after")
    def _typed_parameters(self) -> "ExperimentConfig":
        schema = PARAMETER_SCHEMAS[self.kind]
        if not isinstance(self.parameters, schema):
            data = self.parameters.model_dump() if isinstance(self.parameters, BaseModel) else self.parameters
            object.__setattr__(self, "parameters", schema.model_validate(data))
        return self


class TrialRecord(BaseModel):
    """
    Outcome of one trial.

    Attributes:
        trial: Trial index (also the seed spawn key).
        success: False when the trial raised.
        satisfied: Bound verdict for bound checks, None otherwise.
        result: Kind-specific values.
        error: Error payload when the trial raised.
    """

    trial: int = Field(..., ge=0)
    success: bool
    satisfied: Optional[bool] = None
    result: dict[str, Any] = Field(default_factory=dict)
    error: Optional[dict[str, Any]] = None


class RunReport(BaseModel):
    """
    Everything a run produced.

    ``series`` maps a plot-series name to its rows; ``wall_time_s`` is
    only serialized on request so identical (config, seed) runs give
    byte-identical reports.
    """

    config: ExperimentConfig
    trials: list[TrialRecord]
    aggregate: dict[str, Any]
    series: dict[str, list[dict[str, Any]]] = Field(default_factory=dict)
    wall_time_s: Optional[float] = None
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(t.success and t.satisfied is not False for t in self.trials)
