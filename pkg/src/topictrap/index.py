"""Resource indexing and search.

A resource is a contributed document annotated with ontology terms.
Searching by term applies query expansion so that precise queries do not
come back empty: a topic also matches resources annotated with its
descendant topics (at reduced weight), a competency also matches its
ingredient process and topics, a level matches exactly. Free-text words
are a weighted disjunction over per-language tf-idf, blended in as a
small tiebreaker that never reorders the term match classes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .corpus import _atomic_write
from .errors import DanglingAnnotation, EmptyQuery, ParseError
from .lsa import tokenize
from .ontology import Ontology, TermKind, TermUri, descendants

DEFAULT_DESCENDANT_WEIGHT = 0.5
DEFAULT_INGREDIENT_WEIGHT = 0.6
DEFAULT_WORD_BLEND = 0.25


class MatchKind(Enum):
    DIRECT_TERM = "direct_term"
    DESCENDANT_TOPIC = "descendant_topic"
    INGREDIENT_MATCH = "ingredient_match"
    LEVEL_EXACT = "level_exact"
    WORD_MATCH = "word_match"


@dataclass(frozen=True)
class Resource:
    id: str
    titles: dict[str, str]
    body: dict[str, str]
    annotations: tuple[TermUri, ...]

    def text(self, lang: str) -> str:
        parts = [p for p in (self.titles.get(lang), self.body.get(lang)) if p]
        return " ".join(parts)


@dataclass(frozen=True)
class SearchHit:
    resource_id: str
    score: float
    match_kinds: frozenset[MatchKind]
    matched_terms: tuple[TermUri, ...]


@dataclass(frozen=True)
class SearchResults:
    """One page of hits plus the total across all pages."""

    hits: tuple[SearchHit, ...]
    total: int

    def __iter__(self):
        return iter(self.hits)


@dataclass(frozen=True)
class ResourceIndex:
    """Immutable after build; rebuilds swap in a whole new index."""

    resources: dict[str, Resource]
    postings: dict[TermUri, frozenset[str]]
    word_tf: dict[str, dict[str, dict[str, int]]]
    word_idf: dict[str, dict[str, float]]
    counts: dict[TermUri, int]

    def resource(self, rid: str) -> Resource:
        return self.resources[rid]


# --- loading --------------------------------------------------------------

_RESOURCE_FIELDS = {"id", "titles", "body", "annotations"}


def load_resources(path: str) -> list[Resource]:
    """One resource per line: {"id","titles":{lang:text},"body":{lang:text},"annotations":[uri]}."""
    resources = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                r = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", path, lineno) from exc
            if not isinstance(r, dict) or set(r) != _RESOURCE_FIELDS:
                raise ParseError("resource must have exactly fields id, titles, body, annotations", path, lineno)
            rid = r["id"]
            if not isinstance(rid, str) or not rid:
                raise ParseError("id must be non-empty text", path, lineno)
            if rid in seen:
                raise ParseError(f"duplicate resource id {rid!r}", path, lineno)
            seen.add(rid)
            for name in ("titles", "body"):
                m = r[name]
                if not isinstance(m, dict) or not all(
                    isinstance(k, str) and isinstance(v, str) for k, v in m.items()
                ):
                    raise ParseError(f"{name} must map language codes to text", path, lineno)
            if not isinstance(r["annotations"], list) or not all(
                isinstance(a, str) and a for a in r["annotations"]
            ):
                raise ParseError("annotations must be a list of term uris", path, lineno)
            resources.append(Resource(
                id=rid,
                titles=dict(r["titles"]),
                body=dict(r["body"]),
                annotations=tuple(r["annotations"]),
            ))
    return resources


def resource_record(r: Resource) -> dict:
    return {"id": r.id, "titles": r.titles, "body": r.body, "annotations": list(r.annotations)}


def save_resources(resources: list[Resource], path: str) -> None:
    lines = [
        json.dumps(resource_record(r), ensure_ascii=False, sort_keys=True)
        for r in sorted(resources, key=lambda r: r.id)
    ]
    _atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))


# --- building -------------------------------------------------------------

def build_index(resources: list[Resource], o: Ontology) -> ResourceIndex:
    by_id: dict[str, Resource] = {}
    postings: dict[TermUri, set[str]] = {}
    for r in resources:
        if r.id in by_id:
            raise ParseError(f"duplicate resource id {r.id!r}")
        by_id[r.id] = r
        for uri in r.annotations:
            if uri not in o.nodes:
                raise DanglingAnnotation(r.id, uri)
            postings.setdefault(uri, set()).add(r.id)

    word_tf: dict[str, dict[str, dict[str, int]]] = {}
    lang_docs: dict[str, set[str]] = {}
    for rid in sorted(by_id):
        r = by_id[rid]
        for lang in sorted(set(r.titles) | set(r.body)):
            tokens = tokenize(r.text(lang), lang)
            if not tokens:
                continue
            lang_docs.setdefault(lang, set()).add(rid)
            per_lang = word_tf.setdefault(lang, {})
            for t in tokens:
                per_lang.setdefault(t, {})[rid] = per_lang.get(t, {}).get(rid, 0) + 1

    word_idf = {
        lang: {t: math.log(len(lang_docs[lang]) / len(tfs)) for t, tfs in terms.items()}
        for lang, terms in word_tf.items()
    }

    frozen_postings = {u: frozenset(ids) for u, ids in postings.items()}
    ix = ResourceIndex(
        resources=by_id,
        postings=frozen_postings,
        word_tf=word_tf,
        word_idf=word_idf,
        counts={},
    )
    counts = {uri: len(_expanded_ids(ix, o, uri)) for uri in sorted(o.nodes)}
    return ResourceIndex(
        resources=by_id,
        postings=frozen_postings,
        word_tf=word_tf,
        word_idf=word_idf,
        counts=counts,
    )


# --- term expansion -------------------------------------------------------

def expand_term(
    o: Ontology,
    t: TermUri,
    descendant_weight: float = DEFAULT_DESCENDANT_WEIGHT,
    ingredient_weight: float = DEFAULT_INGREDIENT_WEIGHT,
) -> list[tuple[TermUri, float, MatchKind]]:
    """The terms a query for ``t`` actually matches, with rank weights."""
    node = o.node(t)
    if node.kind == TermKind.TOPIC:
        out = [(t, 1.0, MatchKind.DIRECT_TERM)]
        out.extend((d, descendant_weight, MatchKind.DESCENDANT_TOPIC) for d in sorted(descendants(o, t)))
        return out
    if node.kind == TermKind.COMPETENCY:
        out = [(t, 1.0, MatchKind.DIRECT_TERM)]
        out.append((node.process, ingredient_weight, MatchKind.INGREDIENT_MATCH))
        out.extend((i, ingredient_weight, MatchKind.INGREDIENT_MATCH) for i in node.ingredient_topics)
        return out
    if node.kind == TermKind.LEVEL:
        return [(t, 1.0, MatchKind.LEVEL_EXACT)]
    return [(t, 1.0, MatchKind.DIRECT_TERM)]


def _expanded_ids(ix: ResourceIndex, o: Ontology, t: TermUri) -> frozenset[str]:
    ids: set[str] = set()
    for uri, _w, _k in expand_term(o, t):
        ids |= ix.postings.get(uri, frozenset())
    return frozenset(ids)


def count_for_term(ix: ResourceIndex, o: Ontology, t: TermUri) -> int:
    o.node(t)
    return ix.counts.get(t, 0)


# --- search ---------------------------------------------------------------

def _word_scores(ix: ResourceIndex, words: str, lang: str) -> dict[str, float]:
    """Raw weighted-disjunction scores: sum of tf·idf per matched token."""
    scores: dict[str, float] = {}
    for token in set(tokenize(words, lang)):
        idf = ix.word_idf.get(lang, {}).get(token)
        if idf is None:
            continue
        for rid, tf in ix.word_tf[lang][token].items():
            scores[rid] = scores.get(rid, 0.0) + tf * idf
    return {rid: s for rid, s in scores.items() if s > 0.0}


def search(
    ix: ResourceIndex,
    o: Ontology,
    term: TermUri | None = None,
    words: str | None = None,
    lang: str = "en",
    offset: int = 0,
    limit: int | None = None,
    descendant_weight: float = DEFAULT_DESCENDANT_WEIGHT,
    ingredient_weight: float = DEFAULT_INGREDIENT_WEIGHT,
    word_blend: float = DEFAULT_WORD_BLEND,
) -> SearchResults:
    """Term, word, or combined query over the index.

    Term score is the max expansion weight whose posting list holds the
    resource. Word scores are min-max normalized to (0, 1] and blended at
    ``word_blend``, small enough that they break ties inside a match
    class without reordering the classes. Ordering: score desc, id asc.
    """
    has_words = bool(words and words.strip())
    if term is None and not has_words:
        raise EmptyQuery("query needs a term, words, or both")

    term_score: dict[str, float] = {}
    term_matches: dict[str, list[tuple[TermUri, MatchKind]]] = {}
    if term is not None:
        for uri, weight, kind in expand_term(o, term, descendant_weight, ingredient_weight):
            for rid in ix.postings.get(uri, frozenset()):
                term_score[rid] = max(term_score.get(rid, 0.0), weight)
                term_matches.setdefault(rid, []).append((uri, kind))

    word_score = _word_scores(ix, words, lang) if has_words else {}
    if term is None and not word_score and has_words:
        tokens = tokenize(words, lang)
        if not tokens:
            raise EmptyQuery("no searchable words in query")

    w_max = max(word_score.values()) if word_score else 0.0
    combined: dict[str, float] = {}
    for rid, s in term_score.items():
        combined[rid] = s
    for rid, w in word_score.items():
        combined[rid] = combined.get(rid, 0.0) + word_blend * (w / w_max)

    hits = []
    for rid in sorted(combined, key=lambda r: (-combined[r], r)):
        matches = sorted(set(term_matches.get(rid, [])), key=lambda p: (p[0], p[1].value))
        kinds = {k for _u, k in matches}
        if rid in word_score:
            kinds.add(MatchKind.WORD_MATCH)
        hits.append(SearchHit(
            resource_id=rid,
            score=combined[rid],
            match_kinds=frozenset(kinds),
            matched_terms=tuple(u for u, _k in matches),
        ))
    total = len(hits)
    end = None if limit is None else offset + limit
    return SearchResults(hits=tuple(hits[offset:end]), total=total)


def word_search(
    ix: ResourceIndex,
    words: str,
    lang: str,
    limit: int | None = None,
) -> list[SearchHit]:
    """Pure word query, scored by the raw disjunction sum."""
    if not words or not words.strip() or not tokenize(words, lang):
        raise EmptyQuery("no searchable words in query")
    scores = _word_scores(ix, words, lang)
    hits = [
        SearchHit(
            resource_id=rid,
            score=scores[rid],
            match_kinds=frozenset({MatchKind.WORD_MATCH}),
            matched_terms=(),
        )
        for rid in sorted(scores, key=lambda r: (-scores[r], r))
    ]
    return hits if limit is None else hits[:limit]
