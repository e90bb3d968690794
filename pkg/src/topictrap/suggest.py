"""Related-query suggestions for a searched term.

Candidates are the term's neighbors in the merged relatives graph,
filtered to those whose own search is guaranteed nonempty. Each comes
decorated with a display label, the relation that produced it, its
similarity, and the exact match count the user will see after clicking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .index import ResourceIndex, count_for_term
from .ontology import Ontology, TermUri, display_label
from .relatedness import RelatedEdge, RelationKind, RelativesGraph

DEFAULT_SUGGEST_LIMIT = 12


@dataclass(frozen=True)
class SuggestedQuery:
    uri: TermUri
    label: str
    kind: RelationKind
    similarity: float
    count: int


def _choose_edge(edges: tuple[RelatedEdge, ...], t: TermUri, lang: str) -> RelatedEdge:
    """Pick the edge whose similarity ranks this candidate.

    An lsa edge for the request language wins outright: similarity is
    language-specific and the user is searching in that language. Else
    the highest-similarity survivor, preferring the edge oriented from
    t (hierarchy kinds read correctly that way round), then the
    strongest provenance.
    """
    for e in edges:
        if e.kind.name == "lsa" and e.kind.lang == lang:
            return e
    best = max(e.similarity for e in edges)
    pool = [e for e in edges if e.similarity == best]
    pool.sort(key=lambda e: (0 if e.a == t else 1, e.kind.precedence_class, e.kind.wire))
    return pool[0]


def relatives(
    g: RelativesGraph,
    ix: ResourceIndex,
    o: Ontology,
    t: TermUri,
    lang: str,
) -> list[SuggestedQuery]:
    """All graph neighbors of ``t`` with their display decoration,
    ordered by similarity desc, provenance (manual, policy, lsa), uri.
    Zero-count neighbors are kept; topic pages show them unlinked."""
    o.node(t)
    out = []
    for other in g.neighbors(t):
        edge = _choose_edge(g.pair_edges(t, other), t, lang)
        if edge.similarity <= 0.0:
            continue
        out.append(SuggestedQuery(
            uri=other,
            label=display_label(o, other, lang),
            kind=edge.kind,
            similarity=edge.similarity,
            count=count_for_term(ix, o, other),
        ))
    out.sort(key=lambda s: (-s.similarity, s.kind.precedence_class, s.uri))
    return out


def suggest(
    g: RelativesGraph,
    ix: ResourceIndex,
    o: Ontology,
    t: TermUri,
    lang: str,
    limit: int = DEFAULT_SUGGEST_LIMIT,
) -> list[SuggestedQuery]:
    """The suggestion chips: relatives with nonzero counts, truncated.
    Every chip is one click from a nonempty result."""
    return [s for s in relatives(g, ix, o, t, lang) if s.count >= 1][:limit]
