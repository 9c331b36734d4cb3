"""HTTP service exposing the analysis pipelines.

Every endpoint is a thin wrapper over a handler function; the CLI calls the
same handlers in-process, so both surfaces stay in lockstep.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .documents import document_from_payload
from .errors import CoverkitError
from .pipeline import (
    analyze,
    catalog_document,
    genuine_report,
    hilbert_eval,
    obstruction_report,
    tame_eval,
)


class AnalyzeRequest(BaseModel):
    document: dict
    seed: int = 0


class ObstructionRequest(BaseModel):
    document: dict
    chi: Optional[list[int]] = None
    window: int = 8


class GenuineRequest(BaseModel):
    document: dict


class HilbertRequest(BaseModel):
    field: str
    a: str
    b: str


class TameRequest(BaseModel):
    field: str
    m: int
    a: str
    b: str


class CatalogRequest(BaseModel):
    name: str
    size: Optional[int] = None
    rank: Optional[int] = None
    galois_generators: Optional[list[list[list[int]]]] = None
    components: Optional[list[dict]] = None


def run_analyze(req: AnalyzeRequest) -> dict:
    doc = document_from_payload(req.document)
    return analyze(doc, seed=req.seed)


def run_obstruction(req: ObstructionRequest) -> dict:
    doc = document_from_payload(req.document)
    return obstruction_report(doc, req.chi, window=req.window)


def run_genuine(req: GenuineRequest) -> dict:
    doc = document_from_payload(req.document)
    return genuine_report(doc)


def run_hilbert(req: HilbertRequest) -> dict:
    return hilbert_eval(req.field, req.a, req.b)


def run_tame(req: TameRequest) -> dict:
    return tame_eval(req.field, req.m, req.a, req.b)


def run_catalog(req: CatalogRequest) -> dict:
    params = req.model_dump(exclude_none=True)
    name = params.pop("name")
    return catalog_document(name, **params)


app = FastAPI(title="coverkit", version=__version__)


def _wrap(fn, req):
    try:
        return fn(req)
    except CoverkitError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/analyze")
def analyze_endpoint(req: AnalyzeRequest) -> dict:
    return _wrap(run_analyze, req)


@app.post("/obstruction")
def obstruction_endpoint(req: ObstructionRequest) -> dict:
    return _wrap(run_obstruction, req)


@app.post("/genuine")
def genuine_endpoint(req: GenuineRequest) -> dict:
    return _wrap(run_genuine, req)


@app.post("/hilbert")
def hilbert_endpoint(req: HilbertRequest) -> dict:
    return _wrap(run_hilbert, req)


@app.post("/tame")
def tame_endpoint(req: TameRequest) -> dict:
    return _wrap(run_tame, req)


@app.post("/catalog")
def catalog_endpoint(req: CatalogRequest) -> dict:
    return _wrap(run_catalog, req)
