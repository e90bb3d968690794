"""In-memory model of the GeoSkills-style ontology.

Terms come in four kinds: topics (abstract concepts, arranged in an
acyclic multi-parent hierarchy), competencies (a process verb plus
ingredient topics), competency processes, and educational levels
(optionally carrying a region and an age range).

The interchange format is one JSON object per line, UTF-8. Loading is
strict: any malformed record, dangling reference, or hierarchy cycle
rejects the whole file. Lenient loading would silently corrupt the
match counts everything downstream displays.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from urllib.parse import urlsplit

from .errors import (
    DanglingReference,
    HierarchyCycle,
    KindMismatch,
    ParseError,
    UnknownTerm,
)

TermUri = str

_LANG_RE = re.compile(r"^[a-z]{2}$")


class TermKind(Enum):
    TOPIC = "topic"
    COMPETENCY = "competency"
    PROCESS = "process"
    LEVEL = "level"


@dataclass(frozen=True)
class Label:
    lang: str
    text: str
    preferred: bool = False


@dataclass(frozen=True)
class DefinitionRef:
    """Pointer to the web page section defining a term in one language."""

    uri: TermUri
    lang: str
    url: str


@dataclass(frozen=True)
class OntologyNode:
    uri: TermUri
    kind: TermKind
    labels: tuple[Label, ...] = ()
    parents: tuple[TermUri, ...] = ()
    process: TermUri | None = None
    ingredient_topics: tuple[TermUri, ...] = ()
    region: str | None = None
    age_min: int | None = None
    age_max: int | None = None
    definition_refs: tuple[DefinitionRef, ...] = ()


@dataclass(frozen=True)
class Ontology:
    """Validated, immutable term collection. Safe for concurrent readers."""

    nodes: dict[TermUri, OntologyNode]
    children: dict[TermUri, tuple[TermUri, ...]] = field(default_factory=dict)

    def node(self, uri: TermUri) -> OntologyNode:
        try:
            return self.nodes[uri]
        except KeyError:
            raise UnknownTerm(uri) from None

    def __len__(self) -> int:
        return len(self.nodes)


_RECORD_FIELDS = {
    "uri",
    "kind",
    "labels",
    "parents",
    "process",
    "ingredient_topics",
    "region",
    "age_min",
    "age_max",
    "definitions",
}

_KIND_NAMES = {k.value: k for k in TermKind}


def _parse_labels(raw: object, path: str, lineno: int) -> tuple[Label, ...]:
    if not isinstance(raw, list):
        raise ParseError("labels must be an array", path, lineno)
    labels = []
    seen_preferred: set[str] = set()
    for item in raw:
        if not isinstance(item, dict) or set(item) - {"lang", "text", "preferred"}:
            raise ParseError(f"malformed label {item!r}", path, lineno)
        lang, text = item.get("lang"), item.get("text")
        preferred = bool(item.get("preferred", False))
        if not isinstance(lang, str) or not _LANG_RE.match(lang):
            raise ParseError(f"label lang must be a two-letter code, got {lang!r}", path, lineno)
        if not isinstance(text, str) or not text:
            raise ParseError("label text must be non-empty", path, lineno)
        if preferred:
            if lang in seen_preferred:
                raise ParseError(f"more than one preferred label for lang {lang!r}", path, lineno)
            seen_preferred.add(lang)
        labels.append(Label(lang=lang, text=text, preferred=preferred))
    return tuple(labels)


def _parse_definitions(raw: object, uri: str, path: str, lineno: int) -> tuple[DefinitionRef, ...]:
    if not isinstance(raw, list):
        raise ParseError("definitions must be an array", path, lineno)
    refs = []
    for item in raw:
        if not isinstance(item, dict) or set(item) - {"lang", "url"}:
            raise ParseError(f"malformed definition ref {item!r}", path, lineno)
        lang, url = item.get("lang"), item.get("url")
        if not isinstance(lang, str) or not _LANG_RE.match(lang):
            raise ParseError(f"definition lang must be a two-letter code, got {lang!r}", path, lineno)
        if not isinstance(url, str):
            raise ParseError("definition url must be a string", path, lineno)
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ParseError(f"definition url does not parse: {url!r}", path, lineno)
        host = parts.netloc.lower()
        if host.endswith(".wikipedia.org"):
            edition = host.split(".", 1)[0]
            if edition != lang:
                raise ParseError(
                    f"definition lang {lang!r} does not match wiki edition {edition!r}",
                    path,
                    lineno,
                )
        refs.append(DefinitionRef(uri=uri, lang=lang, url=url))
    return tuple(refs)


def _parse_uri_list(raw: object, what: str, path: str, lineno: int) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(u, str) and u for u in raw):
        raise ParseError(f"{what} must be an array of uris", path, lineno)
    return tuple(raw)


def _parse_record(record: dict, path: str, lineno: int) -> OntologyNode:
    unknown = set(record) - _RECORD_FIELDS
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}", path, lineno)

    uri = record.get("uri")
    if not isinstance(uri, str) or not uri or any(c.isspace() for c in uri):
        raise ParseError(f"uri must be non-empty without whitespace, got {uri!r}", path, lineno)

    kind_name = record.get("kind")
    if kind_name not in _KIND_NAMES:
        raise ParseError(f"kind must be one of {sorted(_KIND_NAMES)}, got {kind_name!r}", path, lineno)
    kind = _KIND_NAMES[kind_name]

    labels = _parse_labels(record.get("labels", []), path, lineno)
    parents = _parse_uri_list(record.get("parents", []), "parents", path, lineno)
    ingredients = _parse_uri_list(record.get("ingredient_topics", []), "ingredient_topics", path, lineno)
    process = record.get("process")
    if process is not None and (not isinstance(process, str) or not process):
        raise ParseError("process must be a uri or null", path, lineno)
    region = record.get("region")
    if region is not None and not isinstance(region, str):
        raise ParseError("region must be text or null", path, lineno)
    ages = []
    for key in ("age_min", "age_max"):
        v = record.get(key)
        if v is not None and not isinstance(v, int):
            raise ParseError(f"{key} must be an integer or null", path, lineno)
        ages.append(v)
    age_min, age_max = ages

    # Kind-specific structure: the hierarchy is Topic-to-Topic only,
    # ingredients belong to competencies, region/ages to levels.
    if parents and kind is not TermKind.TOPIC:
        raise ParseError(f"{kind.value} node may not declare parents", path, lineno)
    if kind is TermKind.COMPETENCY:
        if process is None:
            raise ParseError("competency requires a process", path, lineno)
        if not ingredients:
            raise ParseError("competency requires at least one ingredient topic", path, lineno)
    else:
        if process is not None or ingredients:
            raise ParseError(f"{kind.value} node may not declare process/ingredients", path, lineno)
    if kind is not TermKind.LEVEL and (region is not None or age_min is not None or age_max is not None):
        raise ParseError(f"{kind.value} node may not declare region or ages", path, lineno)

    return OntologyNode(
        uri=uri,
        kind=kind,
        labels=labels,
        parents=parents,
        process=process,
        ingredient_topics=ingredients,
        region=region,
        age_min=age_min,
        age_max=age_max,
        definition_refs=_parse_definitions(record.get("definitions", []), uri, path, lineno),
    )


def _find_cycle(nodes: dict[TermUri, OntologyNode]) -> list[TermUri] | None:
    """Return one cycle of the topic parent relation, or None."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {u: WHITE for u, n in nodes.items() if n.kind is TermKind.TOPIC}
    for start in sorted(color):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(nodes[start].parents))]
        color[start] = GRAY
        trail = [start]
        while stack:
            uri, parents = stack[-1]
            advanced = False
            for p in parents:
                if color.get(p) == GRAY:
                    return trail[trail.index(p):] + [p]
                if color.get(p) == WHITE:
                    color[p] = GRAY
                    trail.append(p)
                    stack.append((p, iter(nodes[p].parents)))
                    advanced = True
                    break
            if not advanced:
                color[uri] = BLACK
                trail.pop()
                stack.pop()
    return None


def _validate(nodes: dict[TermUri, OntologyNode]) -> None:
    for uri in sorted(nodes):
        node = nodes[uri]
        for p in node.parents:
            ref = nodes.get(p)
            if ref is None:
                raise DanglingReference(p, uri)
            if ref.kind is not TermKind.TOPIC:
                raise KindMismatch(p, TermKind.TOPIC.value, ref.kind.value)
        if node.process is not None:
            ref = nodes.get(node.process)
            if ref is None:
                raise DanglingReference(node.process, uri)
            if ref.kind is not TermKind.PROCESS:
                raise KindMismatch(node.process, TermKind.PROCESS.value, ref.kind.value)
        for t in node.ingredient_topics:
            ref = nodes.get(t)
            if ref is None:
                raise DanglingReference(t, uri)
            if ref.kind is not TermKind.TOPIC:
                raise KindMismatch(t, TermKind.TOPIC.value, ref.kind.value)

    cycle = _find_cycle(nodes)
    if cycle is not None:
        raise HierarchyCycle(cycle)


def load_ontology(path: str) -> Ontology:
    """Load and validate an ontology from a JSON-lines interchange file."""
    nodes: dict[TermUri, OntologyNode] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", path, lineno) from exc
            if not isinstance(record, dict):
                raise ParseError("record must be a JSON object", path, lineno)
            node = _parse_record(record, path, lineno)
            if node.uri in nodes:
                raise ParseError(f"duplicate uri {node.uri!r}", path, lineno)
            nodes[node.uri] = node

    _validate(nodes)

    children: dict[TermUri, list[TermUri]] = {}
    for uri, node in nodes.items():
        for p in node.parents:
            children.setdefault(p, []).append(uri)
    return Ontology(
        nodes=nodes,
        children={p: tuple(sorted(cs)) for p, cs in children.items()},
    )


def node_record(node: OntologyNode) -> dict:
    """The node as an interchange record; empty optionals are omitted."""
    record: dict = {"uri": node.uri, "kind": node.kind.value}
    if node.labels:
        record["labels"] = [
            {"lang": l.lang, "text": l.text, "preferred": l.preferred} for l in node.labels
        ]
    if node.parents:
        record["parents"] = list(node.parents)
    if node.process is not None:
        record["process"] = node.process
    if node.ingredient_topics:
        record["ingredient_topics"] = list(node.ingredient_topics)
    if node.region is not None:
        record["region"] = node.region
    if node.age_min is not None:
        record["age_min"] = node.age_min
    if node.age_max is not None:
        record["age_max"] = node.age_max
    if node.definition_refs:
        record["definitions"] = [{"lang": d.lang, "url": d.url} for d in node.definition_refs]
    return record


def save_ontology(o: Ontology, path: str) -> None:
    """Canonical dump: one record per line, sorted by uri, stable bytes."""
    lines = [
        json.dumps(node_record(o.nodes[uri]), ensure_ascii=False, sort_keys=True)
        for uri in sorted(o.nodes)
    ]
    # imported here: corpus imports DefinitionRef from this module
    from .corpus import _atomic_write

    _atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))


def _require_topic(o: Ontology, t: TermUri) -> OntologyNode:
    node = o.node(t)
    if node.kind is not TermKind.TOPIC:
        raise KindMismatch(t, TermKind.TOPIC.value, node.kind.value)
    return node


def descendants(o: Ontology, t: TermUri) -> set[TermUri]:
    """All topics below ``t`` in the hierarchy, transitively, excluding ``t``."""
    _require_topic(o, t)
    seen: set[TermUri] = set()
    stack = list(o.children.get(t, ()))
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(o.children.get(u, ()))
    return seen


def ancestors(o: Ontology, t: TermUri) -> set[TermUri]:
    """All topics above ``t`` in the hierarchy, transitively, excluding ``t``."""
    _require_topic(o, t)
    seen: set[TermUri] = set()
    stack = list(o.node(t).parents)
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(o.node(u).parents)
    return seen


def ingredients_of(o: Ontology, c: TermUri) -> tuple[TermUri, tuple[TermUri, ...]]:
    """Process and ingredient topics of a competency, in stored order."""
    node = o.node(c)
    if node.kind is not TermKind.COMPETENCY:
        raise KindMismatch(c, TermKind.COMPETENCY.value, node.kind.value)
    assert node.process is not None
    return node.process, node.ingredient_topics


def labels_of(o: Ontology, t: TermUri, lang: str) -> list[Label]:
    """Labels of ``t`` in ``lang``, preferred first.

    Falls back to all labels (any language) when the term has none in the
    requested language, so the UI can still render cross-language matches.
    """
    node = o.node(t)
    in_lang = [l for l in node.labels if l.lang == lang]
    if in_lang:
        return sorted(in_lang, key=lambda l: (not l.preferred, l.text))
    return sorted(node.labels, key=lambda l: (l.lang, not l.preferred, l.text))


def display_label(o: Ontology, t: TermUri, lang: str) -> str:
    """Best single display text for ``t`` in ``lang``; the uri if unlabeled."""
    labels = labels_of(o, t, lang)
    return labels[0].text if labels else t


def nodes_of_kind(o: Ontology, k: TermKind) -> list[TermUri]:
    return sorted(u for u, n in o.nodes.items() if n.kind is k)
