"""HTTP assessment service.

POST /assess takes ``{"conllu": ...}`` (or ``{"text": ...}`` when a tagger
endpoint is configured), runs feature extraction and the loaded models,
and returns the assessment JSON. Models are read-only after startup;
request handling shares no mutable state, so identical requests yield
identical responses. Status codes: 400 malformed body or CoNLL-U, 422
empty document, 502 upstream tagger/corrector failure, 503 models not
loaded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import httpx
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from cefrkit.assessment import assess_document
from cefrkit.catalog import load_catalog
from cefrkit.corpus import CorpusError, Document, parse_conllu
from cefrkit.errors import (
    CorrectorClient,
    CorrectorTransportError,
    EditValidationError,
    fetch_edits,
)
from cefrkit.features.lexical import FeatureError
from cefrkit.ml.persist import ModelIOError, load_model
from cefrkit.resources import load_resources


@dataclass
class ServiceConfig:
    mixed_model: str
    resources: str
    category_models: dict[str, str] = field(default_factory=dict)
    catalog: str | None = None
    tagger_url: str | None = None
    speller_url: str | None = None
    grammar_url: str | None = None
    upstream_timeout: float = 20.0
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="cefrkit assessment service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    state = app.state
    state.config = config
    state.catalog = load_catalog(config.catalog)
    state.resources = load_resources(config.resources)
    state.models = {}
    state.model_paths = {}
    state.warnings = []

    def _load(name: str, path: str) -> None:
        try:
            state.models[name] = load_model(path, expected_catalog_hash=state.catalog.version_hash())
            state.model_paths[name] = path
        except (OSError, ModelIOError, ValueError) as exc:
            state.warnings.append(f"model {name!r} not loaded: {exc}")

    _load("mixed", config.mixed_model)
    for category, path in sorted(config.category_models.items()):
        _load(category, path)

    def _tag(text: str) -> str:
        try:
            response = httpx.post(
                config.tagger_url, json={"text": text}, timeout=config.upstream_timeout
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise CorrectorTransportError(f"tagger at {config.tagger_url}: {exc}") from exc
        return response.text

    def _collect_edits(doc: Document):
        clients = []
        if config.speller_url:
            clients.append(CorrectorClient(endpoint=config.speller_url, tool="speller", timeout=config.upstream_timeout))
        if config.grammar_url:
            clients.append(CorrectorClient(endpoint=config.grammar_url, tool="grammar", timeout=config.upstream_timeout))
        if not clients:
            return None
        edits = []
        for client in clients:
            edits.extend(fetch_edits(doc, client))
        return edits

    @app.post("/assess")
    async def assess(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error(400, "body is not valid JSON")
        if not isinstance(payload, dict):
            return _error(400, "body must be a JSON object")
        conllu = payload.get("conllu")
        text = payload.get("text")
        if conllu is None and text is None:
            return _error(400, "body needs a 'conllu' or 'text' field")
        if conllu is not None and not isinstance(conllu, str):
            return _error(400, "'conllu' must be a string")
        if text is not None and not isinstance(text, str):
            return _error(400, "'text' must be a string")

        if "mixed" not in state.models:
            return _error(503, "models not loaded")

        if conllu is None:
            if not config.tagger_url:
                return _error(400, "raw text input requires a configured tagger endpoint")
            try:
                conllu = _tag(text)
            except CorrectorTransportError as exc:
                return _error(502, str(exc))

        try:
            sentences = parse_conllu(conllu)
        except CorpusError as exc:
            return _error(400, f"CoNLL-U parse error: {exc}")
        if not sentences:
            return _error(422, "document contains no sentences")
        doc = Document(doc_id="submission", sentences=tuple(sentences))
        if not doc.words():
            return _error(422, "document contains no word tokens")

        try:
            edits = _collect_edits(doc)
        except CorrectorTransportError as exc:
            return _error(502, str(exc))
        except EditValidationError as exc:
            return _error(502, f"corrector returned invalid edits: {exc}")

        category_models = {k: v for k, v in state.models.items() if k != "mixed"}
        try:
            result = assess_document(
                doc,
                state.catalog,
                state.resources,
                state.models["mixed"],
                category_models,
                edits=edits,
                model_ids={name: state.model_paths[name] for name in state.models},
            )
        except FeatureError as exc:
            return _error(422, str(exc))
        return JSONResponse(status_code=200, content=result)

    @app.get("/health")
    async def health():
        return {
            "ok": "mixed" in state.models,
            "loaded_models": sorted(state.models),
            "warnings": state.warnings,
        }

    @app.get("/models")
    async def models():
        out = {}
        for name, model in sorted(state.models.items()):
            path = Path(state.model_paths[name])
            out[name] = {
                "path": str(path),
                "pipeline": model.spec.label(),
                "classifier": model.classifier_name,
                "catalog_hash": model.catalog_hash,
                "selected_features": model.feature_ids,
                "trained_timestamp": path.stat().st_mtime if path.exists() else None,
            }
        return out

    return app
