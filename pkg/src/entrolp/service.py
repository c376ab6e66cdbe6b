"""HTTP service wrapping the toolbox: submit problem-description text, get
back the rendered output plus structured results.

Run with:  uvicorn entrolp.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .errors import PdSyntaxError, PdValidationError
from .pdfile import apply_modifier, parse_file, parse_modifier, serialize
from .pipeline import MODES, run_pipeline

app = FastAPI(
    title="entrolp",
    description="Entropy-LP bounds, tradeoff hulls, duality proofs and "
                "sensitivity ranges for coding problems.",
)


class RunRequest(BaseModel):
    pd_text: str
    mode: str = "regular"
    modifiers: list[str] = Field(default_factory=list)
    seed: int = 0
    fraction: float = 0.5


class RunResponse(BaseModel):
    exit_code: int
    output: str
    error: str | None = None
    structured: dict = Field(default_factory=dict)


class ParseRequest(BaseModel):
    pd_text: str
    modifiers: list[str] = Field(default_factory=list)


class ParseResponse(BaseModel):
    rv_names: list[str]
    al_names: list[str]
    objective: str | None
    dependencies: int
    independences: int
    symmetry_rows: int
    constant_bounds: int
    bounds_to_prove: int
    queries: int
    sensitivity_targets: int
    options: list[str]


class SerializeResponse(BaseModel):
    pd_text: str


def _parsed(req: ParseRequest):
    try:
        pd = parse_file(req.pd_text).pd
        for src in req.modifiers:
            pd = apply_modifier(pd, parse_modifier(src))
        return pd
    except (PdSyntaxError, PdValidationError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.get("/")
def info():
    return {"service": "entrolp", "modes": list(MODES)}


@app.post("/parse", response_model=ParseResponse)
def parse(req: ParseRequest):
    pd = _parsed(req)
    return ParseResponse(
        rv_names=pd.rv_names,
        al_names=pd.al_names,
        objective=pd.objective.source if pd.objective else None,
        dependencies=len(pd.deps),
        independences=len(pd.indeps),
        symmetry_rows=len(pd.sym.perms),
        constant_bounds=len(pd.bc),
        bounds_to_prove=len(pd.bp),
        queries=len(pd.qu),
        sensitivity_targets=len(pd.se),
        options=sorted(pd.options),
    )


@app.post("/serialize", response_model=SerializeResponse)
def serialize_pd(req: ParseRequest):
    return SerializeResponse(pd_text=serialize(_parsed(req)))


@app.post("/run", response_model=RunResponse)
def run(req: RunRequest):
    if req.mode not in MODES:
        raise HTTPException(status_code=400, detail=f"unknown mode {req.mode!r}")
    result = run_pipeline(
        req.pd_text,
        mode=req.mode,
        modifiers=req.modifiers,
        seed=req.seed,
        fraction=req.fraction,
        allow_file_output=False,
    )
    return RunResponse(
        exit_code=result.exit_code,
        output=result.output,
        error=result.error,
        structured=result.structured,
    )
