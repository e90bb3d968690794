"""Build orchestration and the on-disk artifact layout.

Three build stages feed one serving layout:

    cache_dir/                 definition cache + corpus dump + fetch report
    index_dir/relatives.jsonl  merged relatives graph
    index_dir/builds/<digest>/ self-contained index build
    index_dir/current.json     pointer to the live build

A build directory is content-addressed: its name is a digest of the
canonicalized inputs (ontology, resources, relatives graph), so a
rebuild from identical inputs lands in the same directory with
byte-identical files, and switching `current.json` is the only mutation
a running server can ever observe. Loading re-derives the index from
the stored inputs and cross-checks the stored counts, so a corrupted or
hand-edited build refuses to serve rather than emitting wrong numbers.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

from .autocomplete import AcIndex, build_autocomplete
from .config import ServiceConfig
from .corpus import (
    Corpus,
    FetchFailure,
    _atomic_write,
    build_corpus,
    load_corpus,
    save_corpus,
    save_report,
)
from .errors import StaleArtifact
from .index import Resource, ResourceIndex, build_index, load_resources, resource_record
from .ontology import Ontology, load_ontology, node_record
from .relatedness import (
    LsaSkip,
    RelativesGraph,
    load_graph,
    load_manual_edges,
    lsa_edges,
    merge,
    policy_edges,
    save_graph,
)

_META_FORMAT = "index-build"
_META_VERSION = 1


def run_build_corpus(cfg: ServiceConfig) -> tuple[Corpus, list[FetchFailure]]:
    """Fetch (or read from cache) every referenced definition; dump the
    cleaned corpus and the failure report next to the cache."""
    o = load_ontology(cfg.paths.ontology)
    os.makedirs(cfg.paths.cache_dir, exist_ok=True)
    corpus, failures = build_corpus(o, cfg.fetch_mode, cfg.paths.cache_dir)
    save_corpus(corpus, cfg.paths.corpus_path())
    save_report(failures, cfg.paths.fetch_report_path())
    return corpus, failures


def run_build_relatives(cfg: ServiceConfig) -> tuple[RelativesGraph, list[LsaSkip]]:
    o = load_ontology(cfg.paths.ontology)
    manual = []
    if cfg.paths.manual_edges is not None:
        manual = load_manual_edges(cfg.paths.manual_edges, o)
    policy = policy_edges(
        o,
        parent_child_sim=cfg.policy.parent_child,
        ingredient_sim=cfg.policy.ingredient,
        level_adjacent_sim=cfg.policy.level_adjacent,
    )
    corpus_path = cfg.paths.corpus_path()
    if not os.path.exists(corpus_path):
        raise StaleArtifact(f"no corpus dump at {corpus_path}; run build-corpus first")
    lsa, skips = lsa_edges(load_corpus(corpus_path), cfg.lsa.threshold, cfg.lsa.k_max)
    graph = merge(manual, policy, lsa)
    os.makedirs(os.path.dirname(cfg.paths.relatives_path()) or ".", exist_ok=True)
    save_graph(graph, cfg.paths.relatives_path())
    return graph, skips


def _canon_lines(records: list[dict]) -> str:
    lines = [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in records]
    return "\n".join(lines) + ("\n" if lines else "")


def _canon_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"


def _ac_records(acx: AcIndex) -> list[dict]:
    return [
        {"uri": e.uri, "kind": e.kind.value, "label": e.label,
         "label_lang": e.label_lang, "count": e.count}
        for e in acx.entries
    ]


def run_build_index(cfg: ServiceConfig) -> str:
    """Assemble a content-addressed build directory and point current.json
    at it. Returns the build digest."""
    o = load_ontology(cfg.paths.ontology)
    resources = load_resources(cfg.paths.resources)
    relatives_path = cfg.paths.relatives_path()
    if not os.path.exists(relatives_path):
        raise StaleArtifact(f"no relatives graph at {relatives_path}; run build-relatives first")
    graph = load_graph(relatives_path)

    ix = build_index(resources, o)
    acx = build_autocomplete(o, ix)

    ont_text = _canon_lines([node_record(o.nodes[u]) for u in sorted(o.nodes)])
    res_text = _canon_lines([resource_record(r) for r in sorted(resources, key=lambda r: r.id)])
    with open(relatives_path, encoding="utf-8") as fh:
        graph_text = fh.read()
    digest = hashlib.sha256(
        "\0".join([ont_text, res_text, graph_text]).encode("utf-8")
    ).hexdigest()[:16]

    builds_dir = os.path.join(cfg.paths.index_dir, "builds")
    build_dir = os.path.join(builds_dir, digest)
    if not os.path.isdir(build_dir):
        tmp_dir = os.path.join(builds_dir, f".tmp-{digest}")
        os.makedirs(tmp_dir, exist_ok=True)
        _write(os.path.join(tmp_dir, "meta.json"),
               _canon_json({"format": _META_FORMAT, "version": _META_VERSION, "digest": digest}))
        _write(os.path.join(tmp_dir, "ontology.jsonl"), ont_text)
        _write(os.path.join(tmp_dir, "resources.jsonl"), res_text)
        _write(os.path.join(tmp_dir, "relatives.jsonl"), graph_text)
        _write(os.path.join(tmp_dir, "counts.json"), _canon_json(ix.counts))
        _write(os.path.join(tmp_dir, "autocomplete.json"), _canon_json(_ac_records(acx)))
        os.rename(tmp_dir, build_dir)

    _atomic_write(os.path.join(cfg.paths.index_dir, "current.json"),
                  _canon_json({"build": digest}))
    return digest


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


@dataclass(frozen=True)
class Runtime:
    """Everything the query layer needs, loaded from one build."""

    cfg: ServiceConfig
    digest: str
    ontology: Ontology
    resources: list[Resource]
    ix: ResourceIndex
    acx: AcIndex
    graph: RelativesGraph


def load_runtime(cfg: ServiceConfig) -> Runtime:
    """Load the current build, re-deriving and verifying the index."""
    current_path = os.path.join(cfg.paths.index_dir, "current.json")
    if not os.path.exists(current_path):
        raise StaleArtifact(f"no index at {current_path}; run build-index first")
    with open(current_path, encoding="utf-8") as fh:
        digest = json.load(fh).get("build")
    build_dir = os.path.join(cfg.paths.index_dir, "builds", str(digest))
    meta_path = os.path.join(build_dir, "meta.json")
    if not os.path.exists(meta_path):
        raise StaleArtifact(f"current.json points at missing build {digest!r}")
    with open(meta_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("format") != _META_FORMAT or meta.get("version") != _META_VERSION:
        raise StaleArtifact(f"unrecognized build format in {meta_path}")

    o = load_ontology(os.path.join(build_dir, "ontology.jsonl"))
    resources = load_resources(os.path.join(build_dir, "resources.jsonl"))
    graph = load_graph(os.path.join(build_dir, "relatives.jsonl"))
    ix = build_index(resources, o)
    acx = build_autocomplete(o, ix)

    with open(os.path.join(build_dir, "counts.json"), encoding="utf-8") as fh:
        stored_counts = json.load(fh)
    if stored_counts != ix.counts:
        raise StaleArtifact(f"stored counts disagree with the index in {build_dir}")
    with open(os.path.join(build_dir, "autocomplete.json"), encoding="utf-8") as fh:
        stored_ac = json.load(fh)
    if stored_ac != _ac_records(acx):
        raise StaleArtifact(f"stored autocomplete entries disagree with the index in {build_dir}")

    return Runtime(
        cfg=cfg, digest=str(digest), ontology=o, resources=resources,
        ix=ix, acx=acx, graph=graph,
    )
