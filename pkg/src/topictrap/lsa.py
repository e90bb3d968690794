"""Latent-semantic similarity over one language's definition corpus.

The pipeline is classical: tokenize, build a tf-idf weighted
term-document matrix, reduce it with a deterministic truncated SVD, and
compare documents by cosine in the reduced space. Weighting is raw term
frequency times ln(N/df); raw tf keeps projection linear in the text, so
duplicating a document's text scales its vector without rotating it.

Everything here is a pure function over immutable inputs. Determinism
matters: the reduced space feeds the relatives graph, which must rebuild
byte-identically, so the SVD applies a fixed sign convention instead of
whatever LAPACK happens to return.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import CorpusTooSmall, LengthMismatch, NumericalFailure, ParseError
from .stopwords import stopwords_for

# Unicode-aware "alphanumeric run": \w minus the underscore.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_K_MAX = 100


def tokenize(text: str, lang: str) -> list[str]:
    """Lowercased alphanumeric tokens, minus stopwords and 1-char tokens."""
    stop = stopwords_for(lang)
    return [
        t for t in _TOKEN_RE.findall(text.lower())
        if len(t) >= 2 and t not in stop
    ]


@dataclass(frozen=True, eq=False)
class TermDocMatrix:
    terms: tuple[str, ...]
    docs: tuple[str, ...]
    weights: np.ndarray  # terms x docs, w(t,d) = tf * idf
    idf: np.ndarray
    lang: str
    dropped: tuple[str, ...] = ()  # docs removed for having no weight


def build_matrix(corpus_lang: dict[str, str], lang: str) -> TermDocMatrix:
    """Weighted term-document matrix over one language's definitions.

    Documents that are empty after tokenization, or whose column would be
    all zeros (every token shared by every document), are dropped and
    recorded in ``dropped``; weights are recomputed over the survivors so
    that N and df always describe the matrix actually returned.
    """
    token_lists = {
        uri: toks
        for uri, toks in ((u, tokenize(text, lang)) for u, text in corpus_lang.items())
    }
    dropped = [u for u, toks in token_lists.items() if not toks]
    kept = sorted(u for u in token_lists if token_lists[u])

    while True:
        if len(kept) < 2:
            raise CorpusTooSmall(
                f"need at least 2 nonempty documents for lang {lang!r}, have {len(kept)}"
            )
        counts = {u: Counter(token_lists[u]) for u in kept}
        terms = sorted({t for c in counts.values() for t in c})
        index = {t: i for i, t in enumerate(terms)}
        n = len(kept)
        df = np.zeros(len(terms))
        for c in counts.values():
            for t in c:
                df[index[t]] += 1
        idf = np.log(n / df)
        weights = np.zeros((len(terms), n))
        for j, u in enumerate(kept):
            for t, tf in counts[u].items():
                i = index[t]
                weights[i, j] = tf * idf[i]
        zero_cols = [j for j in range(n) if not weights[:, j].any()]
        if not zero_cols:
            return TermDocMatrix(
                terms=tuple(terms),
                docs=tuple(kept),
                weights=weights,
                idf=idf,
                lang=lang,
                dropped=tuple(sorted(dropped)),
            )
        dead = {kept[j] for j in zero_cols}
        dropped.extend(sorted(dead))
        kept = [u for u in kept if u not in dead]


@dataclass(frozen=True, eq=False)
class ReducedSpace:
    """Rank-k document space plus the weighting metadata needed to fold in.

    ``u`` has orthonormal columns; ``sigma`` is strictly positive and
    non-increasing; ``doc_vectors[d]`` equals ``u.T @ column(d)``.
    """

    k: int
    terms: tuple[str, ...]
    idf: np.ndarray
    u: np.ndarray  # terms x k
    sigma: np.ndarray  # k
    doc_vectors: dict[str, np.ndarray]
    lang: str


def reduce(m: TermDocMatrix, k_max: int = DEFAULT_K_MAX) -> ReducedSpace:
    """Deterministic truncated SVD, k = min(k_max, numerical rank).

    Sign convention: the largest-magnitude entry of each left singular
    vector is made positive, so identical input bytes give identical
    output bytes regardless of LAPACK's arbitrary sign choices.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    try:
        u, s, vt = np.linalg.svd(m.weights, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc

    tol = max(m.weights.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    k = min(k_max, rank)

    u = u[:, :k].copy()
    s = s[:k].copy()
    vt = vt[:k, :].copy()
    for j in range(k):
        i = int(np.argmax(np.abs(u[:, j])))
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
            vt[j, :] = -vt[j, :]

    doc_matrix = s[:, None] * vt  # k x docs; row scaling keeps U^T d identity
    doc_vectors = {uri: doc_matrix[:, j].copy() for j, uri in enumerate(m.docs)}
    return ReducedSpace(
        k=k, terms=m.terms, idf=m.idf.copy(), u=u, sigma=s,
        doc_vectors=doc_vectors, lang=m.lang,
    )


def fold_in(space: ReducedSpace, text: str, lang: str) -> np.ndarray:
    """Project a new document into the reduced space.

    The document is weighted with the stored idf; tokens outside the
    stored vocabulary are ignored. Empty text maps to the zero vector.
    """
    index = {t: i for i, t in enumerate(space.terms)}
    d = np.zeros(len(space.terms))
    for t, tf in Counter(tokenize(text, lang)).items():
        i = index.get(t)
        if i is not None:
            d[i] = tf * space.idf[i]
    return space.u.T @ d


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; 0 when either vector is near zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def all_pairs(space: ReducedSpace, threshold: float) -> list[tuple[str, str, float]]:
    """Every unordered document pair with clamped cosine >= threshold.

    Similarities are clamped to [0, 1]; output is sorted by similarity
    descending, then by uri pair, so the listing is a total order.
    """
    uris = sorted(space.doc_vectors)
    out = []
    for i, a in enumerate(uris):
        va = space.doc_vectors[a]
        for b in uris[i + 1:]:
            sim = max(0.0, cosine(va, space.doc_vectors[b]))
            if sim >= threshold:
                out.append((a, b, sim))
    out.sort(key=lambda e: (-e[2], e[0], e[1]))
    return out


# --- persistence ---------------------------------------------------------

_SPACE_FORMAT = "reduced-space"
_SPACE_VERSION = 1


def save_space(space: ReducedSpace, path: str) -> None:
    doc = {
        "format": _SPACE_FORMAT,
        "version": _SPACE_VERSION,
        "lang": space.lang,
        "k": space.k,
        "terms": list(space.terms),
        "idf": space.idf.tolist(),
        "sigma": space.sigma.tolist(),
        "u": space.u.tolist(),
        "docs": {uri: v.tolist() for uri, v in sorted(space.doc_vectors.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_space(path: str) -> ReducedSpace:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != _SPACE_FORMAT or doc.get("version") != _SPACE_VERSION:
        raise ParseError("not a reduced-space dump", path)
    return ReducedSpace(
        k=doc["k"],
        terms=tuple(doc["terms"]),
        idf=np.array(doc["idf"], dtype=float),
        u=np.array(doc["u"], dtype=float).reshape(len(doc["terms"]), doc["k"]),
        sigma=np.array(doc["sigma"], dtype=float),
        doc_vectors={u: np.array(v, dtype=float) for u, v in doc["docs"].items()},
        lang=doc["lang"],
    )
