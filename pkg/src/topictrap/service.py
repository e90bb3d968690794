"""The HTTP face: four read-only JSON endpoints over one loaded build.

All state is immutable after startup; rebuilds happen out of process
and take effect on restart (the build directory swap is atomic, so a
restarting server can never observe a half-written index).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from .api import (
    autocomplete_payload,
    canonical_json,
    error_payload,
    search_payload,
    suggest_payload,
    topic_payload,
)
from .autocomplete import complete
from .errors import EmptyQuery, ParseError, RangeError, TopictrapError, UnknownTerm
from .index import search
from .pipeline import Runtime
from .suggest import relatives, suggest


def _json(payload: dict, status: int = 200) -> Response:
    return Response(canonical_json(payload), status_code=status,
                    media_type="application/json")


def _int_param(raw: str | None, name: str, default: int, minimum: int) -> int:
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"query parameter {name} must be an integer, got {raw!r}")
    if value < minimum:
        raise RangeError(f"query parameter {name} must be >= {minimum}, got {value}")
    return value


def create_app(rt: Runtime) -> FastAPI:
    cfg = rt.cfg
    app = FastAPI(title="topictrap", openapi_url=None, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cfg.ui_origin],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(TopictrapError)
    async def _error(request: Request, exc: TopictrapError) -> Response:
        status = 404 if isinstance(exc, UnknownTerm) else 400
        return _json(error_payload(exc.category, str(exc)), status)

    @app.get("/api/autocomplete")
    async def autocomplete(q: str | None = None, lang: str | None = None,
                           limit: str | None = None) -> Response:
        if q is None or not q.strip():
            raise EmptyQuery("query parameter q is required")
        entries = complete(
            rt.acx, q, lang or cfg.default_lang,
            _int_param(limit, "limit", cfg.autocomplete_limit, 1),
        )
        return _json(autocomplete_payload(entries))

    @app.get("/api/search")
    async def search_endpoint(term: str | None = None, words: str | None = None,
                              lang: str | None = None, offset: str | None = None,
                              limit: str | None = None) -> Response:
        lang_ = lang or cfg.default_lang
        offset_ = _int_param(offset, "offset", 0, 0)
        limit_ = _int_param(limit, "limit", cfg.search_limit, 1)
        results = search(
            rt.ix, rt.ontology, term=term or None, words=words, lang=lang_,
            offset=offset_, limit=limit_,
            descendant_weight=cfg.weights.descendant,
            ingredient_weight=cfg.weights.ingredient,
            word_blend=cfg.weights.word_blend,
        )
        return _json(search_payload(results, rt.ix, lang_, offset_, limit_))

    @app.get("/api/suggest")
    async def suggest_endpoint(term: str | None = None, lang: str | None = None,
                               limit: str | None = None) -> Response:
        if term is None or not term.strip():
            raise EmptyQuery("query parameter term is required")
        items = suggest(
            rt.graph, rt.ix, rt.ontology, term, lang or cfg.default_lang,
            _int_param(limit, "limit", cfg.suggest_limit, 1),
        )
        return _json(suggest_payload(items))

    @app.get("/api/topic/{uri}")
    async def topic(uri: str, lang: str | None = None) -> Response:
        lang_ = lang or cfg.default_lang
        rels = relatives(rt.graph, rt.ix, rt.ontology, uri, lang_)
        return _json(topic_payload(rt.ontology, rt.ix, rels, uri, lang_))

    if cfg.ui_dir is not None:
        app.mount("/", StaticFiles(directory=cfg.ui_dir, html=True), name="ui")

    return app
