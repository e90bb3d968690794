"""Command line entry point.

Build commands write artifacts; `query` answers one-shot questions with
exactly the JSON documents the HTTP API would return; `serve` runs the
API over the current index build. Every failure exits 2 with a single
machine-parsable `CATEGORY: message` line on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .api import (
    autocomplete_payload,
    canonical_json,
    search_payload,
    suggest_payload,
    topic_payload,
)
from .autocomplete import complete
from .config import FETCH_MODES, ServiceConfig, resolve_config
from .errors import TopictrapError
from .index import search
from .pipeline import (
    load_runtime,
    run_build_corpus,
    run_build_index,
    run_build_relatives,
)
from .suggest import relatives, suggest


def _parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="path to the service config (or set TOPICTRAP_CONFIG)")

    p = argparse.ArgumentParser(prog="topictrap")
    sub = p.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("build-corpus", parents=[shared],
                            help="fetch definitions and dump the cleaned corpus")
    corpus.add_argument("--mode", choices=FETCH_MODES, help="override the configured fetch mode")
    corpus.set_defaults(func=cmd_build_corpus)

    rel = sub.add_parser("build-relatives", parents=[shared],
                         help="merge manual, policy and lsa edges into the relatives graph")
    rel.set_defaults(func=cmd_build_relatives)

    ix = sub.add_parser("build-index", parents=[shared],
                        help="assemble the content-addressed index build")
    ix.set_defaults(func=cmd_build_index)

    serve = sub.add_parser("serve", parents=[shared], help="run the HTTP API")
    serve.add_argument("--port", type=int, help="override the configured port")
    serve.set_defaults(func=cmd_serve)

    query = sub.add_parser("query", help="one-shot queries printing API JSON")
    qsub = query.add_subparsers(dest="query_command", required=True)

    ac = qsub.add_parser("autocomplete", parents=[shared])
    ac.add_argument("--q", required=True)
    ac.add_argument("--lang")
    ac.add_argument("--limit", type=int)
    ac.set_defaults(func=cmd_query_autocomplete)

    se = qsub.add_parser("search", parents=[shared])
    se.add_argument("--term")
    se.add_argument("--words")
    se.add_argument("--lang")
    se.add_argument("--offset", type=int, default=0)
    se.add_argument("--limit", type=int)
    se.set_defaults(func=cmd_query_search)

    su = qsub.add_parser("suggest", parents=[shared])
    su.add_argument("--term", required=True)
    su.add_argument("--lang")
    su.add_argument("--limit", type=int)
    su.set_defaults(func=cmd_query_suggest)

    to = qsub.add_parser("topic", parents=[shared])
    to.add_argument("--uri", required=True)
    to.add_argument("--lang")
    to.set_defaults(func=cmd_query_topic)

    return p


def cmd_build_corpus(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config)
    if args.mode:
        cfg = dataclasses.replace(cfg, fetch_mode=args.mode)
    corpus, failures = run_build_corpus(cfg)
    docs = sum(len(corpus.docs(lang)) for lang in corpus.languages())
    print(f"corpus: {docs} definition(s) across {len(corpus.languages())} language(s), "
          f"{len(failures)} failure(s)")
    print(f"wrote {cfg.paths.corpus_path()}")
    return 0


def cmd_build_relatives(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config)
    graph, skips = run_build_relatives(cfg)
    edges = graph.all_edges()
    print(f"relatives: {len(edges)} edge(s) over {len(graph.pairs)} pair(s)")
    for skip in skips:
        print(f"lsa skipped {skip.lang}: {skip.reason}")
    print(f"wrote {cfg.paths.relatives_path()}")
    return 0


def cmd_build_index(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config)
    digest = run_build_index(cfg)
    print(f"index build {digest} is current")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    cfg = resolve_config(args.config)
    if args.port:
        cfg = dataclasses.replace(cfg, port=args.port)
    rt = load_runtime(cfg)
    uvicorn.run(create_app(rt), host=cfg.host, port=cfg.port, log_level="warning")
    return 0


def _runtime(args: argparse.Namespace):
    cfg = resolve_config(args.config)
    return cfg, load_runtime(cfg)


def cmd_query_autocomplete(args: argparse.Namespace) -> int:
    cfg, rt = _runtime(args)
    entries = complete(rt.acx, args.q, args.lang or cfg.default_lang,
                       args.limit or cfg.autocomplete_limit)
    print(canonical_json(autocomplete_payload(entries)))
    return 0


def cmd_query_search(args: argparse.Namespace) -> int:
    cfg, rt = _runtime(args)
    lang = args.lang or cfg.default_lang
    limit = args.limit or cfg.search_limit
    results = search(
        rt.ix, rt.ontology, term=args.term or None, words=args.words, lang=lang,
        offset=args.offset, limit=limit,
        descendant_weight=cfg.weights.descendant,
        ingredient_weight=cfg.weights.ingredient,
        word_blend=cfg.weights.word_blend,
    )
    print(canonical_json(search_payload(results, rt.ix, lang, args.offset, limit)))
    return 0


def cmd_query_suggest(args: argparse.Namespace) -> int:
    cfg, rt = _runtime(args)
    items = suggest(rt.graph, rt.ix, rt.ontology, args.term,
                    args.lang or cfg.default_lang, args.limit or cfg.suggest_limit)
    print(canonical_json(suggest_payload(items)))
    return 0


def cmd_query_topic(args: argparse.Namespace) -> int:
    cfg, rt = _runtime(args)
    lang = args.lang or cfg.default_lang
    rels = relatives(rt.graph, rt.ix, rt.ontology, args.uri, lang)
    print(canonical_json(topic_payload(rt.ontology, rt.ix, rels, args.uri, lang)))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except TopictrapError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
