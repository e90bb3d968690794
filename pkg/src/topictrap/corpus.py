"""Per-language definition texts for ontology terms.

Definitions live at web URLs (typically a section of a Wikipedia page)
recorded on the ontology nodes. This module fetches them, extracts the
referenced section, strips the markup down to plain text, and caches the
result so that every later pipeline stage can run fully offline.

Cache layout: one UTF-8 ``.txt`` file per (term, language) plus a
``manifest.json`` listing {uri, lang, url, file, fetched_at}. The files
are deliberately plain so fixtures stay inspectable and diffable.
"""

from __future__ import annotations

import html
import json
import os
import re
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable
from urllib.parse import unquote, urlsplit

from .errors import CacheMiss, NetworkError, ParseError, SectionNotFound
from .ontology import DefinitionRef, Ontology

DEFAULT_TIMEOUT = 10.0
DEFAULT_USER_AGENT = "topictrap/0.1 (definition fetcher; contact: see repository)"

HttpGet = Callable[[str], str]


# --- markup cleaning -----------------------------------------------------

_REF_BLOCK_RE = re.compile(r"<ref[^>/]*>.*?</ref>|<ref[^>]*/>", re.DOTALL | re.IGNORECASE)
_SCRIPT_STYLE_RE = re.compile(r"<(script|style)[^>]*>.*?</\1>", re.DOTALL | re.IGNORECASE)
_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_TAG_RE = re.compile(r"<[^>]*>")
_CITATION_RE = re.compile(r"\[(?:\d+|citation needed|note \d+|edit)\]", re.IGNORECASE)


def _strip_templates(text: str) -> str:
    """Remove balanced ``{{...}}`` regions; unbalanced braces are left alone."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text.startswith("{{", i):
            depth = 1
            j = i + 2
            while j < n and depth:
                if text.startswith("{{", j):
                    depth += 1
                    j += 2
                elif text.startswith("}}", j):
                    depth -= 1
                    j += 2
                else:
                    j += 1
            if depth == 0:
                i = j
                continue
        out.append(text[i])
        i += 1
    return "".join(out)


def _clean_pass(text: str) -> str:
    text = _COMMENT_RE.sub(" ", text)
    text = _SCRIPT_STYLE_RE.sub(" ", text)
    text = _REF_BLOCK_RE.sub(" ", text)
    text = _TAG_RE.sub(" ", text)
    text = _strip_templates(text)
    text = _CITATION_RE.sub("", text)
    text = html.unescape(text)
    return " ".join(text.split())


def clean_markup(raw: str) -> str:
    """Best-effort plain text: tags, templates, and citation markers gone.

    Runs the cleaning pass to a fixpoint so the function is idempotent
    even when one removal uncovers another (nested markup, doubly escaped
    entities). Math notation is not interpreted and passes through.
    """
    text = raw
    for _ in range(8):
        cleaned = _clean_pass(text)
        if cleaned == text:
            return cleaned
        text = cleaned
    return text


# --- section extraction --------------------------------------------------

_HEADING_RE = re.compile(r"<h([1-6])\b[^>]*>(.*?)</h\1\s*>", re.DOTALL | re.IGNORECASE)
_ID_ATTR_RE = re.compile(r"""\bid\s*=\s*["']([^"']+)["']""", re.IGNORECASE)


def _heading_ids(match: re.Match) -> set[str]:
    """ids attached to a heading: on the tag itself or a nested anchor span."""
    ids = set()
    whole = match.group(0)
    for m in _ID_ATTR_RE.finditer(whole):
        ids.add(m.group(1))
    return ids


def extract_section(page: str, fragment: str | None, url: str = "") -> str:
    """Raw markup of one section of ``page``.

    With a fragment, returns the content between the matching heading and
    the next heading of the same or a higher level (subsections stay in).
    Without one, returns the lead: everything before the first heading.
    """
    headings = list(_HEADING_RE.finditer(page))
    if not fragment:
        return page[: headings[0].start()] if headings else page
    wanted = unquote(fragment)
    for i, h in enumerate(headings):
        if wanted not in _heading_ids(h):
            continue
        level = int(h.group(1))
        end = len(page)
        for nxt in headings[i + 1:]:
            if int(nxt.group(1)) <= level:
                end = nxt.start()
                break
        return page[h.end(): end]
    raise SectionNotFound(url, wanted)


# --- cache ---------------------------------------------------------------

_SAFE_RE = re.compile(r"[^A-Za-z0-9_.-]")


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class DefinitionCache:
    """Thread-safe (uri, lang) -> text store backed by a directory."""

    def __init__(self, cache_dir: str):
        self.dir = cache_dir
        self._lock = threading.RLock()
        self._manifest: dict[tuple[str, str], dict] = {}
        path = self._manifest_path()
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                try:
                    entries = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid manifest ({exc.msg})", path) from exc
            for e in entries:
                self._manifest[(e["uri"], e["lang"])] = e

    def _manifest_path(self) -> str:
        return os.path.join(self.dir, "manifest.json")

    def get(self, uri: str, lang: str) -> str | None:
        with self._lock:
            entry = self._manifest.get((uri, lang))
        if entry is None:
            return None
        with open(os.path.join(self.dir, entry["file"]), encoding="utf-8") as fh:
            return fh.read()

    def _filename(self, uri: str, lang: str) -> str:
        base = f"{_SAFE_RE.sub('_', uri)}__{lang}.txt"
        taken = {e["file"] for key, e in self._manifest.items() if key != (uri, lang)}
        if base not in taken:
            return base
        i = 2
        while f"{base}.{i}" in taken:  # sanitization collision, rare
            i += 1
        return f"{base}.{i}"

    def put(self, uri: str, lang: str, url: str, text: str, fetched_at: str | None = None) -> None:
        if fetched_at is None:
            fetched_at = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        with self._lock:
            os.makedirs(self.dir, exist_ok=True)
            name = self._filename(uri, lang)
            _atomic_write(os.path.join(self.dir, name), text)
            self._manifest[(uri, lang)] = {
                "uri": uri, "lang": lang, "url": url, "file": name, "fetched_at": fetched_at,
            }
            entries = [self._manifest[k] for k in sorted(self._manifest)]
            _atomic_write(
                self._manifest_path(),
                json.dumps(entries, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            )


class _HostThrottle:
    """Serializes requests per host with a politeness delay."""

    def __init__(self, delay: float):
        self.delay = delay
        self._locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}
        self._guard = threading.Lock()

    def wait(self, host: str) -> None:
        with self._guard:
            lock = self._locks.setdefault(host, threading.Lock())
        with lock:
            last = self._last.get(host)
            if last is not None and self.delay > 0:
                pause = last + self.delay - time.monotonic()
                if pause > 0:
                    time.sleep(pause)
            self._last[host] = time.monotonic()


def _default_http_get(url: str, timeout: float, user_agent: str) -> str:
    import requests

    try:
        resp = requests.get(
            url, timeout=timeout, allow_redirects=True, headers={"User-Agent": user_agent}
        )
    except requests.RequestException as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc
    if resp.status_code != 200:
        raise NetworkError(f"GET {url} returned {resp.status_code}")
    return resp.text


def fetch_definition(
    ref: DefinitionRef,
    mode: str,
    cache_dir: str,
    *,
    cache: DefinitionCache | None = None,
    http_get: HttpGet | None = None,
    timeout: float = DEFAULT_TIMEOUT,
    user_agent: str = DEFAULT_USER_AGENT,
) -> str:
    """Cleaned plain text of the section ``ref`` points at.

    Offline mode only reads the cache and raises CacheMiss on absence.
    Online mode fetches the page, extracts the fragment's section (the
    lead when there is no fragment), cleans it, and writes the cache.
    """
    if mode not in ("online", "offline"):
        raise ValueError(f"mode must be 'online' or 'offline', got {mode!r}")
    if cache is None:
        cache = DefinitionCache(cache_dir)
    cached = cache.get(ref.uri, ref.lang)
    if cached is not None:
        return cached
    if mode == "offline":
        raise CacheMiss(ref.uri, ref.lang)

    if http_get is None:
        page = _default_http_get(ref.url, timeout, user_agent)
    else:
        page = http_get(ref.url)
    fragment = urlsplit(ref.url).fragment or None
    base_url = ref.url.split("#", 1)[0]
    text = clean_markup(extract_section(page, fragment, base_url))
    cache.put(ref.uri, ref.lang, ref.url, text)
    return text


# --- corpus --------------------------------------------------------------

@dataclass(frozen=True)
class Corpus:
    """lang -> (uri -> cleaned definition text); immutable after build."""

    by_lang: dict[str, dict[str, str]] = field(default_factory=dict)

    def languages(self) -> list[str]:
        return sorted(self.by_lang)

    def docs(self, lang: str) -> dict[str, str]:
        return self.by_lang.get(lang, {})


@dataclass(frozen=True)
class FetchFailure:
    uri: str
    lang: str
    url: str
    error: str


def build_corpus(
    o: Ontology,
    mode: str,
    cache_dir: str,
    *,
    parallelism: int = 4,
    politeness_delay: float = 0.0,
    http_get: HttpGet | None = None,
    timeout: float = DEFAULT_TIMEOUT,
    user_agent: str = DEFAULT_USER_AGENT,
) -> tuple[Corpus, list[FetchFailure]]:
    """Fetch every definition the ontology references.

    Failures are collected, never fatal; the report lists one entry per
    failed ref. When a term has several refs for one language, the first
    stored ref that succeeds wins and the rest are skipped.
    """
    cache = DefinitionCache(cache_dir)
    refs: list[DefinitionRef] = []
    for uri in sorted(o.nodes):
        refs.extend(o.nodes[uri].definition_refs)

    results: dict[DefinitionRef, str | FetchFailure] = {}

    def _fetch(ref: DefinitionRef) -> str:
        return fetch_definition(
            ref, mode, cache_dir, cache=cache, http_get=http_get,
            timeout=timeout, user_agent=user_agent,
        )

    if mode == "online" and parallelism > 1 and len(refs) > 1:
        throttle = _HostThrottle(politeness_delay)

        def _task(ref: DefinitionRef):
            throttle.wait(urlsplit(ref.url).netloc)
            return _fetch(ref)

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {ref: pool.submit(_task, ref) for ref in refs}
        for ref, fut in futures.items():
            exc = fut.exception()
            if exc is not None:
                results[ref] = FetchFailure(ref.uri, ref.lang, ref.url, f"{type(exc).__name__}: {exc}")
            else:
                results[ref] = fut.result()
    else:
        for ref in refs:
            try:
                results[ref] = _fetch(ref)
            except Exception as exc:
                results[ref] = FetchFailure(ref.uri, ref.lang, ref.url, f"{type(exc).__name__}: {exc}")

    by_lang: dict[str, dict[str, str]] = {}
    report: list[FetchFailure] = []
    for ref in refs:
        got = results[ref]
        if isinstance(got, FetchFailure):
            report.append(got)
            continue
        if ref.uri in by_lang.get(ref.lang, {}):
            continue
        if not got.strip():
            report.append(FetchFailure(ref.uri, ref.lang, ref.url, "EmptyDefinition: cleaned text is empty"))
            continue
        by_lang.setdefault(ref.lang, {})[ref.uri] = got
    return Corpus(by_lang=by_lang), report


# --- persistence ---------------------------------------------------------

_CORPUS_FORMAT = "corpus"
_CORPUS_VERSION = 1


def save_corpus(corpus: Corpus, path: str) -> None:
    doc = {
        "format": _CORPUS_FORMAT,
        "version": _CORPUS_VERSION,
        "languages": {lang: dict(sorted(docs.items())) for lang, docs in sorted(corpus.by_lang.items())},
    }
    _atomic_write(path, json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")


def load_corpus(path: str) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != _CORPUS_FORMAT or doc.get("version") != _CORPUS_VERSION:
        raise ParseError("not a corpus dump", path)
    return Corpus(by_lang={lang: dict(docs) for lang, docs in doc["languages"].items()})


def save_report(report: list[FetchFailure], path: str) -> None:
    rows = [
        {"uri": f.uri, "lang": f.lang, "url": f.url, "error": f.error}
        for f in sorted(report, key=lambda f: (f.uri, f.lang, f.url))
    ]
    _atomic_write(path, json.dumps(rows, ensure_ascii=False, sort_keys=True, indent=2) + "\n")
