"""The relatives graph: weighted undirected "related" edges between terms.

Edges come from three sources, merged with strict precedence:

* manual   -- expert-authored pairs, the strongest signal; a manual edge
              suppresses every other edge on the same pair
* policy   -- structural edges derived from the ontology (parent/child,
              competency ingredients, adjacent educational levels)
* lsa      -- per-language latent-semantic similarity over definitions

Policy and lsa edges on the same pair both survive the merge (a pair can
be both "parent" and "textually similar"); ranking uses the maximum
similarity across the survivors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .corpus import Corpus, _atomic_write
from .errors import DanglingReference, ParseError, RangeError, SelfLoop
from .lsa import DEFAULT_K_MAX, all_pairs, build_matrix, reduce
from .ontology import Ontology, TermKind, TermUri, nodes_of_kind

MANUAL_CLASS, POLICY_CLASS, LSA_CLASS = 0, 1, 2

DEFAULT_LSA_THRESHOLD = 0.25
DEFAULT_PARENT_CHILD_SIM = 0.9
DEFAULT_INGREDIENT_SIM = 0.85
DEFAULT_LEVEL_ADJACENT_SIM = 0.7


@dataclass(frozen=True, order=True)
class RelationKind:
    """Edge provenance; lsa kinds carry the language that produced them."""

    name: str
    lang: str | None = None

    @property
    def wire(self) -> str:
        return self.name if self.lang is None else f"{self.name}:{self.lang}"

    @property
    def precedence_class(self) -> int:
        if self.name == "manual":
            return MANUAL_CLASS
        if self.name.startswith("policy_"):
            return POLICY_CLASS
        return LSA_CLASS


MANUAL = RelationKind("manual")
POLICY_PARENT = RelationKind("policy_parent")
POLICY_CHILD = RelationKind("policy_child")
POLICY_INGREDIENT_TOPIC = RelationKind("policy_ingredient_topic")
POLICY_INGREDIENT_PROCESS = RelationKind("policy_ingredient_process")
POLICY_LEVEL_ADJACENT = RelationKind("policy_level_adjacent")

_FIXED_KINDS = {
    k.wire: k
    for k in (MANUAL, POLICY_PARENT, POLICY_CHILD, POLICY_INGREDIENT_TOPIC,
              POLICY_INGREDIENT_PROCESS, POLICY_LEVEL_ADJACENT)
}


def lsa_kind(lang: str) -> RelationKind:
    return RelationKind("lsa", lang)


def parse_kind(wire: str) -> RelationKind:
    if wire in _FIXED_KINDS:
        return _FIXED_KINDS[wire]
    if wire.startswith("lsa:"):
        return lsa_kind(wire.split(":", 1)[1])
    raise ParseError(f"unknown relation kind {wire!r}")


@dataclass(frozen=True)
class RelatedEdge:
    """One weighted edge. Hierarchical kinds are oriented: for a
    policy_parent edge ``b`` is the parent of ``a``, for policy_child
    ``b`` is the child; all other kinds are symmetric."""

    a: TermUri
    b: TermUri
    similarity: float
    kind: RelationKind

    def __post_init__(self):
        if self.a == self.b:
            raise SelfLoop(self.a)
        if not (0.0 <= self.similarity <= 1.0):
            raise RangeError(f"similarity {self.similarity} outside [0, 1] for ({self.a}, {self.b})")

    @property
    def pair(self) -> tuple[TermUri, TermUri]:
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)

    def other(self, uri: TermUri) -> TermUri:
        return self.b if uri == self.a else self.a


def _edge_sort_key(e: RelatedEdge):
    return (e.pair, e.kind.wire, e.a)


@dataclass(frozen=True)
class RelativesGraph:
    """Merged, immutable edge set indexed from both endpoints."""

    pairs: dict[tuple[TermUri, TermUri], tuple[RelatedEdge, ...]]
    effective: dict[tuple[TermUri, TermUri], float]
    by_endpoint: dict[TermUri, tuple[tuple[TermUri, TermUri], ...]] = field(default_factory=dict)

    def neighbors(self, t: TermUri) -> list[TermUri]:
        out = []
        for pair in self.by_endpoint.get(t, ()):
            out.append(pair[1] if pair[0] == t else pair[0])
        return sorted(out)

    def pair_edges(self, a: TermUri, b: TermUri) -> tuple[RelatedEdge, ...]:
        key = (a, b) if a <= b else (b, a)
        return self.pairs.get(key, ())

    def effective_similarity(self, a: TermUri, b: TermUri) -> float:
        key = (a, b) if a <= b else (b, a)
        return self.effective.get(key, 0.0)

    def all_edges(self) -> list[RelatedEdge]:
        out = []
        for key in sorted(self.pairs):
            out.extend(self.pairs[key])
        return out

    def edges_of_class(self, cls: int) -> list[RelatedEdge]:
        return [e for e in self.all_edges() if e.kind.precedence_class == cls]


# --- edge sources --------------------------------------------------------

def load_manual_edges(path: str, o: Ontology) -> list[RelatedEdge]:
    """Expert-authored edges: one {"a","b","similarity"} object per line."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", path, lineno) from exc
            if not isinstance(record, dict) or set(record) != {"a", "b", "similarity"}:
                raise ParseError("record must have exactly fields a, b, similarity", path, lineno)
            a, b, sim = record["a"], record["b"], record["similarity"]
            if not isinstance(a, str) or not isinstance(b, str):
                raise ParseError("a and b must be term uris", path, lineno)
            if not isinstance(sim, (int, float)) or isinstance(sim, bool):
                raise ParseError("similarity must be a number", path, lineno)
            if not (0.0 <= sim <= 1.0):
                raise RangeError(f"{path}:{lineno}: similarity {sim} outside [0, 1]")
            for uri in (a, b):
                if uri not in o.nodes:
                    raise DanglingReference(uri, f"{path}:{lineno}")
            edges.append(RelatedEdge(a=a, b=b, similarity=float(sim), kind=MANUAL))
    return edges


def policy_edges(
    o: Ontology,
    parent_child_sim: float = DEFAULT_PARENT_CHILD_SIM,
    ingredient_sim: float = DEFAULT_INGREDIENT_SIM,
    level_adjacent_sim: float = DEFAULT_LEVEL_ADJACENT_SIM,
) -> list[RelatedEdge]:
    """Structural edges every ontology implies, built by fixed policy."""
    edges = []
    for child in nodes_of_kind(o, TermKind.TOPIC):
        for parent in o.nodes[child].parents:
            edges.append(RelatedEdge(child, parent, parent_child_sim, POLICY_PARENT))
            edges.append(RelatedEdge(parent, child, parent_child_sim, POLICY_CHILD))
    for c in nodes_of_kind(o, TermKind.COMPETENCY):
        node = o.nodes[c]
        edges.append(RelatedEdge(c, node.process, ingredient_sim, POLICY_INGREDIENT_PROCESS))
        for t in node.ingredient_topics:
            edges.append(RelatedEdge(c, t, ingredient_sim, POLICY_INGREDIENT_TOPIC))
    levels = nodes_of_kind(o, TermKind.LEVEL)
    for i, la in enumerate(levels):
        for lb in levels[i + 1:]:
            if _levels_adjacent(o, la, lb):
                edges.append(RelatedEdge(la, lb, level_adjacent_sim, POLICY_LEVEL_ADJACENT))
    return edges


def _levels_adjacent(o: Ontology, la: TermUri, lb: TermUri) -> bool:
    """Same region and age ranges that touch or overlap (within one year)."""
    na, nb = o.nodes[la], o.nodes[lb]
    if na.region is None or nb.region is None or na.region != nb.region:
        return False
    ra = _age_range(na.age_min, na.age_max)
    rb = _age_range(nb.age_min, nb.age_max)
    if ra is None or rb is None:
        return False
    return ra[0] <= rb[1] + 1 and rb[0] <= ra[1] + 1


def _age_range(lo: int | None, hi: int | None) -> tuple[int, int] | None:
    if lo is None and hi is None:
        return None
    if lo is None:
        lo = hi
    if hi is None:
        hi = lo
    return (lo, hi)


@dataclass(frozen=True)
class LsaSkip:
    lang: str
    reason: str


def lsa_edges(
    corpus: Corpus,
    threshold: float = DEFAULT_LSA_THRESHOLD,
    k_max: int = DEFAULT_K_MAX,
) -> tuple[list[RelatedEdge], list[LsaSkip]]:
    """Per-language definition-similarity edges above ``threshold``."""
    edges = []
    skips = []
    for lang in corpus.languages():
        docs = corpus.docs(lang)
        if len(docs) < 2:
            skips.append(LsaSkip(lang, f"only {len(docs)} document(s)"))
            continue
        try:
            matrix = build_matrix(docs, lang)
        except Exception as exc:
            skips.append(LsaSkip(lang, f"{type(exc).__name__}: {exc}"))
            continue
        space = reduce(matrix, k_max=k_max)
        kind = lsa_kind(lang)
        for a, b, sim in all_pairs(space, threshold):
            edges.append(RelatedEdge(a, b, sim, kind))
    return edges, skips


# --- merge ---------------------------------------------------------------

def merge(
    manual: list[RelatedEdge],
    policy: list[RelatedEdge],
    lsa: list[RelatedEdge],
) -> RelativesGraph:
    """Combine the three edge sources under manual-wins precedence.

    Within one pair: any manual edge suppresses all policy and lsa edges;
    surviving duplicates of the same kind collapse to their maximum
    similarity. The effective (ranking) similarity of a pair is the max
    across its survivors. Idempotent: re-merging a merged graph's edges
    reproduces it.
    """
    grouped: dict[tuple[TermUri, TermUri], list[RelatedEdge]] = {}
    for e in [*manual, *policy, *lsa]:
        grouped.setdefault(e.pair, []).append(e)

    pairs: dict[tuple[TermUri, TermUri], tuple[RelatedEdge, ...]] = {}
    effective: dict[tuple[TermUri, TermUri], float] = {}
    for key, edges in grouped.items():
        manuals = [e for e in edges if e.kind.precedence_class == MANUAL_CLASS]
        survivors = manuals if manuals else edges
        # one edge per (pair, kind): keep the max similarity, breaking
        # ties toward canonical orientation so input order cannot leak
        by_kind: dict[str, RelatedEdge] = {}
        for e in survivors:
            best = by_kind.get(e.kind.wire)
            if (best is None or e.similarity > best.similarity
                    or (e.similarity == best.similarity and (e.a, e.b) < (best.a, best.b))):
                by_kind[e.kind.wire] = e
        final = tuple(sorted(by_kind.values(), key=_edge_sort_key))
        pairs[key] = final
        effective[key] = max(e.similarity for e in final)

    by_endpoint: dict[TermUri, list[tuple[TermUri, TermUri]]] = {}
    for a, b in pairs:
        by_endpoint.setdefault(a, []).append((a, b))
        by_endpoint.setdefault(b, []).append((a, b))
    return RelativesGraph(
        pairs=pairs,
        effective=effective,
        by_endpoint={u: tuple(sorted(ps)) for u, ps in by_endpoint.items()},
    )


# --- persistence ---------------------------------------------------------

_GRAPH_FORMAT = "relatives-graph"
_GRAPH_VERSION = 1


def save_graph(g: RelativesGraph, path: str) -> None:
    """Canonical on-disk form: header line, then one edge per line in
    (pair, kind) order, so identical graphs save to identical bytes."""
    lines = [json.dumps({"format": _GRAPH_FORMAT, "version": _GRAPH_VERSION}, sort_keys=True)]
    for e in g.all_edges():
        lines.append(json.dumps(
            {"a": e.a, "b": e.b, "kind": e.kind.wire, "similarity": e.similarity},
            ensure_ascii=False, sort_keys=True,
        ))
    _atomic_write(path, "\n".join(lines) + "\n")


def load_graph(path: str) -> RelativesGraph:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ParseError("empty graph file", path)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid header ({exc.msg})", path, 1) from exc
    if header.get("format") != _GRAPH_FORMAT or header.get("version") != _GRAPH_VERSION:
        raise ParseError("not a relatives-graph file", path, 1)
    by_class: dict[int, list[RelatedEdge]] = {MANUAL_CLASS: [], POLICY_CLASS: [], LSA_CLASS: []}
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            r = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", path, lineno) from exc
        if not isinstance(r, dict) or set(r) != {"a", "b", "kind", "similarity"}:
            raise ParseError("edge record must have fields a, b, kind, similarity", path, lineno)
        edge = RelatedEdge(a=r["a"], b=r["b"], similarity=float(r["similarity"]), kind=parse_kind(r["kind"]))
        by_class[edge.kind.precedence_class].append(edge)
    return merge(by_class[MANUAL_CLASS], by_class[POLICY_CLASS], by_class[LSA_CLASS])
