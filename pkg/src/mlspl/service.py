"""HTTP/JSON facade over the toolkit: sessions, queries, jobs, simulations.

All responses are canonical JSON (sorted keys, compact separators), so any
GET repeated against an unchanged workspace yields identical bytes. Sessions
and optimize jobs live in memory; workspace data is immutable after load.
"""
from __future__ import annotations

import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse

from . import canonical
from .configuration import load_config, validate_product_configuration
from .derivation import (
    DETERMINISTIC_TIMESTAMP, ProductManifest, derive_product, run_validation_suite,
)
from .errors import DerivationError, MlsplError, MonitorError, ParseError
from .feature_model import (
    DecisionState, FeatureModel, Selection, model_to_dict, propagate_decisions,
)
from .fm_dsl import parse_feature_model
from .model_cards import (
    CardRegistry, FeatureRequirement, IntegrationComplexity, ResourceAllocation,
    card_to_dict, load_registry,
)
from .monitoring import load_reference, load_trace, monitor_spec_from_dict
from .optimizer import OptimizerParams, nsga2_optimize
from .replacement import load_strategy, select_replacement

WORKSPACE_ENV = "MLSPL_WORKSPACE"
MODEL_FILENAME = "model.fm"
CARDS_DIRNAME = "cards"


@dataclass(frozen=True)
class Workspace:
    root: Path
    model: FeatureModel
    registry: CardRegistry

    @staticmethod
    def load(root: Path) -> "Workspace":
        root = Path(root).resolve()
        model_path = root / MODEL_FILENAME
        if not model_path.is_file():
            raise MlsplError(f"workspace has no {MODEL_FILENAME}: {root}")
        model = parse_feature_model(model_path.read_text(encoding="utf-8"))
        registry = load_registry(root / CARDS_DIRNAME)
        return Workspace(root=root, model=model, registry=registry)

    def resolve(self, ref: str) -> Path:
        """A workspace-relative file reference; refusing path escapes."""
        path = (self.root / ref).resolve()
        if self.root not in path.parents and path != self.root:
            raise HTTPException(400, f"reference escapes the workspace: {ref}")
        if not path.is_file():
            raise HTTPException(404, f"no such workspace file: {ref}")
        return path


@dataclass
class Session:
    session_id: str
    decisions: dict[str, bool]
    state: DecisionState

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "decisions": dict(sorted(self.decisions.items())),
            "state": decision_state_to_dict(self.state),
        }


@dataclass
class Job:
    job_id: str
    status: str = "pending"  # pending | running | done | failed
    result: Optional[list] = None
    error: str = ""

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"job_id": self.job_id, "status": self.status}
        if self.status == "done":
            doc["result"] = self.result
        if self.status == "failed":
            doc["error"] = self.error
        return doc


def decision_state_to_dict(state: DecisionState) -> dict:
    return {
        "decided_true": sorted(state.decided_true),
        "decided_false": sorted(state.decided_false),
        "forced_true": sorted(state.forced_true),
        "forced_false": sorted(state.forced_false),
        "open": sorted(state.open),
        "consistent": state.consistent,
    }


class CanonicalJSONResponse(JSONResponse):
    def render(self, content: Any) -> bytes:
        return (canonical.dumps(content) + "\n").encode("utf-8")


async def _body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise HTTPException(400, f"malformed JSON body: {exc}")
    if not isinstance(doc, dict):
        raise HTTPException(400, "body must be a JSON object")
    return doc


def _require(doc: Mapping, key: str, types) -> Any:
    if key not in doc:
        raise HTTPException(400, f"missing field: {key}")
    value = doc[key]
    if not isinstance(value, types):
        raise HTTPException(400, f"field {key} has the wrong type")
    return value


def create_app(workspace: Optional[str] = None) -> FastAPI:
    if workspace is None:
        workspace = os.environ.get(WORKSPACE_ENV)
    if workspace is None:
        raise MlsplError(f"no workspace given and {WORKSPACE_ENV} is unset")
    ws = Workspace.load(Path(workspace))

    app = FastAPI(title="mlspl", default_response_class=CanonicalJSONResponse)
    sessions: dict[str, Session] = {}
    jobs: dict[str, Job] = {}
    counter = itertools.count(1)
    lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"no such session: {session_id}")
        return session

    # --- read endpoints -----------------------------------------------------

    @app.get("/api/v1/model")
    def get_model():
        return model_to_dict(ws.model)

    @app.get("/api/v1/cards")
    def get_cards():
        return [card_to_dict(c) for c in ws.registry.cards()]

    @app.get("/api/v1/cards/{rest:path}")
    def get_card(rest: str):
        model_id, _, version = rest.rpartition("/")
        if not model_id or not version.isdigit():
            raise HTTPException(404, f"expected cards/<model_id>/<version>: {rest}")
        card = ws.registry.lookup(model_id, int(version))
        if card is None:
            raise HTTPException(404, f"no card {model_id}@{version}")
        return card_to_dict(card)

    # --- sessions -----------------------------------------------------------

    @app.post("/api/v1/sessions")
    def create_session():
        with lock:
            session_id = f"s{next(counter)}"
            state = propagate_decisions(ws.model, {})
            session = Session(session_id, {}, state)
            sessions[session_id] = session
        return session.to_dict()

    @app.get("/api/v1/sessions/{session_id}/state")
    def session_state(session_id: str):
        with lock:
            return get_session(session_id).to_dict()

    @app.post("/api/v1/sessions/{session_id}/decisions")
    async def post_decision(session_id: str, request: Request):
        doc = await _body(request)
        feature = _require(doc, "feature", str)
        value = _require(doc, "value", bool)
        with lock:
            session = get_session(session_id)
            if feature not in ws.model.feature_ids():
                raise HTTPException(404, f"unknown feature: {feature}")
            decisions = dict(session.decisions)
            decisions[feature] = value
            state = propagate_decisions(ws.model, decisions)
            if not state.consistent:
                # rejected: the prior session state is preserved
                raise HTTPException(
                    409, f"decision {feature}={value} is inconsistent with the model")
            session.decisions = decisions
            session.state = state
            return session.to_dict()

    @app.delete("/api/v1/sessions/{session_id}/decisions/{feature}")
    def retract_decision(session_id: str, feature: str):
        with lock:
            session = get_session(session_id)
            if feature not in session.decisions:
                raise HTTPException(404, f"no decision recorded for {feature}")
            decisions = dict(session.decisions)
            del decisions[feature]
            session.decisions = decisions
            session.state = propagate_decisions(ws.model, decisions)
            return session.to_dict()

    # --- optimize jobs --------------------------------------------------------

    @app.post("/api/v1/optimize")
    async def start_optimize(request: Request):
        doc = await _body(request)
        try:
            params = OptimizerParams(
                population_size=int(doc.get("population_size", 16)),
                generations=int(doc.get("generations", 50)),
                mutation_rate=float(doc.get("mutation_rate", 0.1)),
                crossover_rate=float(doc.get("crossover_rate", 0.9)),
                seed=int(doc.get("seed", 42)))
        except (TypeError, ValueError) as exc:
            raise HTTPException(400, f"bad optimizer params: {exc}")
        except MlsplError as exc:
            raise HTTPException(422, str(exc))
        with lock:
            job = Job(f"j{next(counter)}")
            jobs[job.job_id] = job

        def run():
            with lock:
                job.status = "running"
            try:
                front = nsga2_optimize(ws.model, ws.registry, params)
                result = [ind.to_dict() for ind in front]
                with lock:
                    job.result = result
                    job.status = "done"
            except MlsplError as exc:
                with lock:
                    job.error = str(exc)
                    job.status = "failed"

        threading.Thread(target=run, daemon=True).start()
        return {"job_id": job.job_id}

    @app.get("/api/v1/jobs/{job_id}")
    def get_job(job_id: str):
        with lock:
            job = jobs.get(job_id)
            if job is None:
                raise HTTPException(404, f"no such job: {job_id}")
            return job.to_dict()

    # --- simulations -----------------------------------------------------------

    @app.post("/api/v1/monitor/simulate")
    async def monitor_simulate(request: Request):
        doc = await _body(request)
        spec_ref = _require(doc, "spec", str)
        trace_ref = _require(doc, "trace", str)
        try:
            spec = monitor_spec_from_dict(
                json.loads(ws.resolve(spec_ref).read_text(encoding="utf-8")))
            trace = load_trace(ws.resolve(trace_ref))
            reference = None
            if "reference" in doc:
                reference = load_reference(ws.resolve(_require(doc, "reference", str)))
            from .monitoring import run_monitor
            alerts = run_monitor(spec, trace, reference)
        except (MonitorError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise HTTPException(422, f"monitor simulation failed: {exc}")
        return {"alerts": [a.to_dict() for a in alerts]}

    @app.post("/api/v1/replace/simulate")
    async def replace_simulate(request: Request):
        doc = await _body(request)
        strategy_ref = _require(doc, "strategy", str)
        req_doc = _require(doc, "requirement", dict)
        alloc_doc = _require(doc, "allocation", dict)
        try:
            strategy = load_strategy(ws.resolve(strategy_ref))
            req = FeatureRequirement(
                domain=req_doc["domain"],
                min_accuracy=float(req_doc.get("min_accuracy", 0.0)),
                max_integration_complexity=IntegrationComplexity.parse(
                    req_doc.get("max_integration_complexity", "High")),
                license_allowlist=frozenset(req_doc.get("license_allowlist", [])))
            alloc = ResourceAllocation(
                cpu_cores=int(alloc_doc["cpu_cores"]),
                ram_gb=float(alloc_doc["ram_gb"]),
                gpu=bool(alloc_doc.get("gpu", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(400, f"bad simulation request: {exc}")
        except MlsplError as exc:
            raise HTTPException(422, str(exc))
        decision = select_replacement(strategy, ws.registry, req, alloc)
        return decision.to_dict()

    # --- derivation ---------------------------------------------------------------

    def load_monitor_specs(refs):
        return [monitor_spec_from_dict(
                    json.loads(ws.resolve(ref).read_text(encoding="utf-8")))
                for ref in refs]

    @app.post("/api/v1/derive")
    async def derive(request: Request):
        doc = await _body(request)
        selection = Selection.of(_require(doc, "selection", list))
        cfg = load_config(ws.resolve(_require(doc, "config", str)))
        report = validate_product_configuration(cfg, ws.model, selection, ws.registry)
        if not report.ok:
            raise HTTPException(422, report.to_dict())
        monitor_refs = doc.get("monitors", sorted(cfg.monitoring_configuration.values()))
        strategy_refs = doc.get("strategies", [])
        now = DETERMINISTIC_TIMESTAMP if doc.get("deterministic") else None
        try:
            manifest = derive_product(
                ws.model, selection, cfg, ws.registry,
                monitor_specs=load_monitor_specs(monitor_refs),
                strategies=[load_strategy(ws.resolve(r)) for r in strategy_refs],
                now=now)
        except DerivationError as exc:
            raise HTTPException(422, str(exc))
        return dict(manifest.doc)

    @app.post("/api/v1/validate-product")
    async def validate_product(request: Request):
        doc = await _body(request)
        manifest_field = _require(doc, "manifest", (str, dict))
        if isinstance(manifest_field, str):
            manifest = ProductManifest.from_json(
                ws.resolve(manifest_field).read_text(encoding="utf-8"))
        else:
            manifest = ProductManifest(manifest_field)
        trace = load_trace(ws.resolve(doc["trace"])) if "trace" in doc else None
        reference = (load_reference(ws.resolve(doc["reference"]))
                     if "reference" in doc else None)
        budget = doc.get("budget")
        if isinstance(budget, str):
            budget = json.loads(ws.resolve(budget).read_text(encoding="utf-8"))
        try:
            report = run_validation_suite(manifest, ws.registry, trace=trace,
                                          reference=reference, budget=budget,
                                          run_commands=bool(doc.get("run_commands", True)))
        except (DerivationError, MonitorError) as exc:
            raise HTTPException(422, str(exc))
        return report.to_dict()

    @app.exception_handler(ParseError)
    async def on_parse_error(request: Request, exc: ParseError):
        return CanonicalJSONResponse({"detail": str(exc)}, status_code=422)

    return app
