"""Typeahead over term labels in every language.

Entries carry the expanded match count, and zero-count terms are left
out of the index entirely: whatever the user picks from the dropdown is
guaranteed to return results. Matching is case-insensitive token-prefix
with diacritic folding, so "umkr" finds "Umkreis" and "Ümkr..." alike.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .index import ResourceIndex
from .ontology import Ontology, TermKind, TermUri

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# fixed folding table, fr/de coverage plus common neighbors
_FOLD = str.maketrans({
    "à": "a", "â": "a", "ä": "a", "á": "a", "ã": "a", "å": "a",
    "é": "e", "è": "e", "ê": "e", "ë": "e",
    "î": "i", "ï": "i", "í": "i", "ì": "i",
    "ô": "o", "ö": "o", "ó": "o", "ò": "o", "õ": "o",
    "û": "u", "ü": "u", "ú": "u", "ù": "u",
    "ç": "c", "ñ": "n", "ý": "y", "ÿ": "y",
})
_MULTI = {"ß": "ss", "æ": "ae", "œ": "oe"}

DEFAULT_AC_LIMIT = 10


def fold(text: str) -> str:
    out = text.lower().translate(_FOLD)
    for ch, rep in _MULTI.items():
        out = out.replace(ch, rep)
    return out


def _tokens(text: str) -> tuple[str, ...]:
    return tuple(_TOKEN_RE.findall(fold(text)))


@dataclass(frozen=True)
class AcEntry:
    uri: TermUri
    kind: TermKind
    label: str
    label_lang: str
    count: int


@dataclass(frozen=True)
class AcIndex:
    entries: tuple[AcEntry, ...]
    tokens: tuple[tuple[str, ...], ...]  # folded label tokens, parallel to entries


def build_autocomplete(o: Ontology, ix: ResourceIndex, include_zero: bool = False) -> AcIndex:
    """Index every stored label of every term that has matches."""
    entries = []
    seen = set()
    for uri in sorted(o.nodes):
        count = ix.counts.get(uri, 0)
        if count == 0 and not include_zero:
            continue
        node = o.nodes[uri]
        for label in node.labels:
            key = (uri, label.lang, label.text)
            if key in seen:
                continue
            seen.add(key)
            entries.append(AcEntry(uri, node.kind, label.text, label.lang, count))
    entries.sort(key=lambda e: (e.uri, e.label_lang, e.label))
    return AcIndex(entries=tuple(entries), tokens=tuple(_tokens(e.label) for e in entries))


def complete(acx: AcIndex, q: str, lang: str, limit: int = DEFAULT_AC_LIMIT) -> list[AcEntry]:
    """Prefix lookup: every query token must prefix some label token.

    Request-language labels come first, then other languages; within a
    class count desc, then label asc.
    """
    q_tokens = _tokens(q)
    if not q_tokens:
        return []
    matched = []
    for entry, label_tokens in zip(acx.entries, acx.tokens):
        if all(any(t.startswith(qt) for t in label_tokens) for qt in q_tokens):
            matched.append(entry)
    matched.sort(key=lambda e: (
        0 if e.label_lang == lang else 1,
        -e.count,
        e.label,
        e.uri,
        e.label_lang,
    ))
    return matched[:limit]
