"""Response payload builders shared by the HTTP service and the CLI.

Both surfaces serialize through canonical_json, so the same logical
query produces byte-identical documents whichever way it is asked.
"""

from __future__ import annotations

import json

from .autocomplete import AcEntry
from .index import ResourceIndex, SearchResults
from .ontology import (
    Ontology,
    TermKind,
    TermUri,
    ancestors,
    display_label,
)
from .suggest import SuggestedQuery


def canonical_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def autocomplete_payload(entries: list[AcEntry]) -> dict:
    return {"items": [
        {"uri": e.uri, "kind": e.kind.value, "label": e.label,
         "label_lang": e.label_lang, "count": e.count}
        for e in entries
    ]}


def _title(ix: ResourceIndex, rid: str, lang: str) -> str:
    titles = ix.resource(rid).titles
    if lang in titles:
        return titles[lang]
    for other in sorted(titles):
        return titles[other]
    return rid


def search_payload(results: SearchResults, ix: ResourceIndex, lang: str,
                   offset: int, limit: int) -> dict:
    return {
        "total": results.total,
        "offset": offset,
        "limit": limit,
        "hits": [
            {
                "resource_id": h.resource_id,
                "title": _title(ix, h.resource_id, lang),
                "score": h.score,
                "match_kinds": sorted(k.value for k in h.match_kinds),
                "matched_terms": list(h.matched_terms),
            }
            for h in results.hits
        ],
    }


def _suggestion_item(s: SuggestedQuery) -> dict:
    return {"uri": s.uri, "label": s.label, "kind": s.kind.wire,
            "similarity": s.similarity, "count": s.count}


def suggest_payload(suggestions: list[SuggestedQuery]) -> dict:
    return {"items": [_suggestion_item(s) for s in suggestions]}


def _term_ref(o: Ontology, ix: ResourceIndex, uri: TermUri, lang: str) -> dict:
    return {"uri": uri, "label": display_label(o, uri, lang),
            "count": ix.counts.get(uri, 0)}


def topic_payload(o: Ontology, ix: ResourceIndex, relatives: list[SuggestedQuery],
                  uri: TermUri, lang: str) -> dict:
    """Everything the topic page renders. Hierarchy rows are empty for
    non-topic kinds; their structure shows up among the relatives."""
    node = o.node(uri)
    if node.kind is TermKind.TOPIC:
        ups = sorted(ancestors(o, uri))
        downs = list(o.children.get(uri, ()))
    else:
        ups, downs = [], []
    return {
        "uri": uri,
        "kind": node.kind.value,
        "count": ix.counts.get(uri, 0),
        "labels": [
            {"lang": l.lang, "text": l.text, "preferred": l.preferred}
            for l in sorted(node.labels, key=lambda l: (l.lang, not l.preferred, l.text))
        ],
        "ancestors": [_term_ref(o, ix, u, lang) for u in ups],
        "children": [_term_ref(o, ix, u, lang) for u in downs],
        "relatives": [_suggestion_item(s) for s in relatives],
    }


def error_payload(category: str, message: str) -> dict:
    return {"error": {"category": category, "message": message}}
