"""FastAPI service exposing the experiment harness.

POST /experiments/{kind} runs an experiment and returns its records;
the CLI can act as a thin client against this service via --server.
"""

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import errors
from .geometry import MagnetSpec
from .harness import EXPERIMENT_KINDS, ExperimentConfig, run_experiment

app = FastAPI(title="magchain", version="0.1.0")


class MagnetSpecModel(BaseModel):
    a: float = 1e-3
    B: float = 1.0
    rho: float = 7500.0
    mu0: float = 4e-7 * 3.141592653589793


class ExperimentRequest(BaseModel):
    n_values: list[int] = Field(default_factory=list)
    seed: int = 0
    seeds: int = 5
    k_values: list[int] = Field(default_factory=lambda: [2, 3])
    spec: MagnetSpecModel = Field(default_factory=MagnetSpecModel)


class RecordModel(BaseModel):
    experiment: str
    params: dict
    values: dict
    passed: bool


class ExperimentResponse(BaseModel):
    records: list[RecordModel]
    all_passed: bool


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/experiments/{kind}", response_model=ExperimentResponse)
def run(kind: str, request: ExperimentRequest):
    if kind not in EXPERIMENT_KINDS:
        raise HTTPException(status_code=404, detail=f"unknown experiment {kind!r}")
    try:
        cfg = ExperimentConfig(
            kind=kind,
            n_values=tuple(request.n_values),
            seed=request.seed,
            seeds=request.seeds,
            k_values=tuple(request.k_values),
            spec=MagnetSpec(a=request.spec.a, B=request.spec.B,
                            rho=request.spec.rho, mu0=request.spec.mu0),
        )
        records = run_experiment(cfg)
    except errors.InvalidParameterError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except (errors.NumericalFailureError, errors.NonConvergenceError,
            errors.ConstraintFailureError) as exc:
        raise HTTPException(status_code=500, detail=f"numerical failure: {exc}") from exc
    payload = [RecordModel(experiment=r.experiment, params=r.params,
                           values=r.values, passed=r.passed) for r in records]
    return ExperimentResponse(records=payload,
                              all_passed=all(r.passed for r in records))
